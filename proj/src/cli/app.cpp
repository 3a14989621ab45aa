#include "primexp/cli.hpp"

#include "primexp/characters.hpp"
#include "primexp/error.hpp"
#include "primexp/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

namespace primexp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

const std::vector<std::string> kChecks = {"large-sieve",        "window-transform", "initial-chain",
                                          "coprime-count",      "goal-g",           "bv-average",
                                          "grh-decomposition",  "tau-rational",     "hyperbola",
                                          "sup-lower-bound",    "pi-psi-window"};
const std::vector<std::string> kExperiments = {"scaling-lambda", "scaling-tau", "sup-growth", "vinogradov-envelope"};

// Flags shared by the subcommands; unset optionals fall back to per-command defaults.
struct Flags {
  std::string config;
  std::string out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> resync;
  bool no_time = false;

  std::optional<std::string> fn;
  std::optional<std::string> alpha;
  std::optional<std::string> beta;
  std::optional<std::string> fraction;
  std::optional<std::string> delta;
  std::optional<std::string> eps_prime;
  std::optional<std::uint64_t> x, y, Q, q, N, M, order, lo, hi, K, s_min, points;
  std::optional<std::int64_t> a;
  std::optional<double> epsilon, bound;
  std::vector<std::uint64_t> x_grid;
  std::string cache_dir;

  std::string check;
  std::string experiment;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

AlphaSpec alpha_for(const Flags& f, const std::string& fallback, std::uint64_t x) {
  const AlphaSource src = parse_alpha_source(f.alpha.value_or(fallback));
  return realize_alpha(src, BigInt(x) * x);
}

FnKind fn_for(const Flags& f, FnKind fallback) { return f.fn ? parse_fn_kind(*f.fn) : fallback; }

WindowOptions window_options(const Flags& f) {
  WindowOptions w;
  w.threads = f.threads.value_or(1);
  w.resync = f.resync.value_or(kDefaultResync);
  return w;
}

std::ostream& output(const Flags& f, std::ofstream& file) {
  if (f.out.empty()) return std::cout;
  file.open(f.out, std::ios::binary);
  require(static_cast<bool>(file), ErrorCode::InvalidArgument, "cannot write '" + f.out + "'");
  return file;
}

std::vector<CheckReport> run_check(const Flags& f) {
  const std::string& name = f.check;
  const WindowOptions wopts = window_options(f);
  if (name == "large-sieve") {
    // random +-1 coefficients against Farey points
    const std::uint64_t N = f.N.value_or(1024);
    const std::uint64_t M = f.M.value_or(0);
    const std::uint64_t order = f.order.value_or(10);
    std::mt19937_64 rng(f.seed.value_or(1));
    std::vector<double> vals(N);
    for (auto& v : vals) v = (rng() & 1) ? 1.0 : -1.0;
    const ArithTable table(FnKind::Custom, M + 1, std::move(vals));
    const BigRational delta = f.delta ? parse_rational(*f.delta) : BigRational(1, 100);
    return {check_large_sieve(table, M, N, farey_points(order), delta)};
  }
  if (name == "window-transform") {
    const std::uint64_t x = f.x.value_or(10'000), y = f.y.value_or(50);
    BigRational beta;
    if (f.beta) {
      beta = parse_rational(*f.beta);
    } else {
      std::mt19937_64 rng(f.seed.value_or(1));
      beta = BigRational(static_cast<std::int64_t>(rng() % 1'000'003), 1'000'003);
    }
    const ArithTable table = sieve_table(fn_for(f, FnKind::VonMangoldt), 1, x);
    return {check_window_transform(table, PhaseContext(alpha_for(f, "sqrt:2", x)), x, y, beta)};
  }
  if (name == "initial-chain") {
    const std::uint64_t x = f.x.value_or(100'000), y = f.y.value_or(21), Q = f.Q.value_or(300);
    const ArithTable table = sieve_table(fn_for(f, FnKind::VonMangoldt), 1, x);
    return {check_initial_chain(table, PhaseContext(alpha_for(f, "golden", x)), x, y, Q, wopts)};
  }
  if (name == "coprime-count") {
    const std::uint64_t q = f.q.value_or(210), y = f.y.value_or(10);
    return {check_coprime_count(q, y, alpha_for(f, "sqrt:2", std::max<std::uint64_t>(q, 2)),
                                f.bound.value_or(kCoprimeCountCeiling))};
  }
  if (name == "goal-g") return {check_goal_g(f.Q.value_or(1000), f.epsilon.value_or(0.5), f.bound.value_or(0.5))};
  if (name == "bv-average") return {bv_average(f.x.value_or(100'000), f.Q.value_or(40))};
  if (name == "grh-decomposition") {
    const std::uint64_t x = f.x.value_or(100'000);
    const ArithTable table = sieve_table(fn_for(f, FnKind::VonMangoldt), 1, x);
    return {check_grh_decomposition(table, f.q.value_or(105), f.a.value_or(2), x)};
  }
  if (name == "tau-rational") {
    const std::uint64_t x = f.x.value_or(10'000);
    std::vector<std::uint64_t> grid;
    if (f.q) {
      grid.push_back(*f.q);
    } else {
      const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
      for (std::uint64_t q = 1; q <= std::min<std::uint64_t>(100, root) && q * q <= x; ++q) grid.push_back(q);
    }
    return check_tau_rational(x, grid, f.bound.value_or(kTauConstant));
  }
  if (name == "hyperbola") {
    const Fraction fr = f.fraction ? parse_fraction(*f.fraction) : Fraction::make(1, 3);
    return {check_hyperbola(f.x.value_or(10'000), fr)};
  }
  if (name == "sup-lower-bound") {
    const std::uint64_t x = f.x.value_or(100'000), y = f.y.value_or(46);
    const ArithTable table = sieve_table(fn_for(f, FnKind::VonMangoldt), 1, x);
    return {check_sup_lower_bound(table, PhaseContext(alpha_for(f, "golden", x)), x, y, wopts)};
  }
  if (name == "pi-psi-window") {
    const std::uint64_t x = f.x.value_or(1'000'000), y = f.y.value_or(100), pts = f.points.value_or(100);
    const ArithTable lambda = sieve_table(FnKind::VonMangoldt, 1, x);
    const ArithTable primes = sieve_table(FnKind::PrimeIndicator, 1, x);
    const std::uint64_t first = std::max<std::uint64_t>(y * y, 2);
    require(first <= x, ErrorCode::GridViolatesPrecondition, "y^2 exceeds x");
    std::vector<std::uint64_t> grid;
    for (std::uint64_t i = 0; i < pts; ++i) grid.push_back(first + (x - first) * i / std::max<std::uint64_t>(pts - 1, 1));
    return {check_pi_psi_window(lambda, primes, PhaseContext(alpha_for(f, "sqrt:2", x)), x, y, grid,
                                f.bound.value_or(kPiPsiConstant))};
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown check '" + name + "'");
}

int cmd_verify(const Flags& f) {
  const std::vector<CheckReport> reports = run_check(f);
  std::ofstream file;
  write_json_lines(output(f, file), reports);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed;
  if (!ok) std::cerr << "check " << f.check << " failed\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_experiment(const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.config.empty()) {
    if (f.experiment == "scaling-tau") cfg.fn_kind = FnKind::Divisor;
  }
  if (f.alpha) cfg.alpha_source = parse_alpha_source(*f.alpha);
  if (!f.x_grid.empty()) cfg.x_grid = f.x_grid;
  if (!f.out.empty()) cfg.out_path = f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.seed) cfg.seed = *f.seed;
  if (f.resync) cfg.resync = *f.resync;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.no_time) cfg.record_time = false;
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  const ExperimentResult res = run_experiment(f.experiment, cfg);
  for (const auto& why : res.skipped) std::cerr << "skipped " << why << '\n';
  if (cfg.out_path.empty()) {
    write_csv(std::cout, res.rows);
    if (!res.convergent_rows.empty()) {
      std::cout << '\n';
      write_csv(std::cout, res.convergent_rows);
    }
  }
  return kExitOk;
}

int cmd_sieve(const Flags& f) {
  const FnKind kind = fn_for(f, FnKind::VonMangoldt);
  const std::uint64_t lo = f.lo.value_or(1), hi = f.hi.value_or(100);
  SieveOptions opts;
  opts.threads = f.threads.value_or(1);
  const ArithTable table =
      f.cache_dir.empty() ? sieve_table(kind, lo, hi, opts) : sieve_table_cached(kind, lo, hi, f.cache_dir, opts);
  std::ofstream file;
  std::ostream& out = output(f, file);
  out << "n,value\n";
  for (std::uint64_t n = lo; n <= hi; ++n) out << n << ',' << fmt(table(n)) << '\n';
  return kExitOk;
}

int cmd_expsum(const Flags& f) {
  const std::uint64_t x = f.x.value_or(10'000);
  const FnKind kind = fn_for(f, FnKind::VonMangoldt);
  const ArithTable table = sieve_table(kind, 1, x);
  nlohmann::ordered_json j;
  j["fn_kind"] = to_string(kind);
  j["x"] = x;
  std::complex<double> value;
  if (f.fraction) {
    const Fraction fr = parse_fraction(*f.fraction);
    value = expsum_at_rational(table, fr, x);
    j["alpha"] = to_string(fr);
  } else {
    const AlphaSpec alpha = alpha_for(f, "golden", x);
    const PhaseContext ctx(alpha);
    value = expsum_full(table, ctx, x);
    const PrefixSup sup = prefix_sups(table, ctx, x);
    j["alpha"] = alpha.label();
    j["realization"] = to_string(alpha.value());
    j["sup_prefix"] = sup.sup;
    j["argmax"] = sup.argmax;
  }
  j["re"] = value.real();
  j["im"] = value.imag();
  j["abs"] = std::abs(value);
  std::ofstream file;
  output(f, file) << j.dump() << '\n';
  return kExitOk;
}

int cmd_window_avg(const Flags& f) {
  const std::uint64_t x = f.x.value_or(10'000), y = f.y.value_or(10);
  const FnKind kind = fn_for(f, FnKind::VonMangoldt);
  const ArithTable table = sieve_table(kind, 1, x);
  const AlphaSpec alpha = alpha_for(f, "golden", x);
  const WindowAverage wa = window_l2_average(table, PhaseContext(alpha), x, y, window_options(f));
  nlohmann::ordered_json j;
  j["fn_kind"] = to_string(kind);
  j["alpha"] = alpha.label();
  j["x"] = x;
  j["y"] = y;
  j["S"] = wa.S;
  j["n_count"] = wa.n_count;
  j["max_window"] = wa.max_window;
  j["normalized"] = wa.S / (static_cast<double>(y) * std::log(static_cast<double>(x)));
  std::ofstream file;
  output(f, file) << j.dump() << '\n';
  return kExitOk;
}

int cmd_dioph(const Flags& f) {
  const std::uint64_t x = f.x.value_or(10'000);
  const AlphaSpec alpha = alpha_for(f, "golden", x);
  const ConvergentSeq cf = continued_fraction(alpha, f.K.value_or(10));
  const ApproxQuality aq = approx_quality(alpha, x);
  nlohmann::ordered_json j;
  j["alpha"] = alpha.label();
  j["realization"] = {{"P", to_string(alpha.P)}, {"Q", to_string(alpha.Q)}};
  auto& quotients = j["partial_quotients"] = nlohmann::ordered_json::array();
  for (const auto& a : cf.partial_quotients) quotients.push_back(to_string(a));
  auto& convs = j["convergents"] = nlohmann::ordered_json::array();
  for (const auto& c : cf.convergents) convs.push_back(to_string(c.p) + "/" + to_string(c.q));
  j["x"] = x;
  j["R"] = to_double(aq.R);
  j["R_exact"] = to_string(aq.R);
  j["witness"] = to_string(aq.witness);
  if (!alpha.source.is_rational()) {
    const BigRational eps = f.eps_prime ? parse_rational(*f.eps_prime) : BigRational(1, 24);
    try {
      const AdmissibleWindow w = admissible_window(alpha, eps, BigInt(f.s_min.value_or(1)));
      j["window"] = {{"s", to_string(w.s)}, {"u", to_string(w.u)}, {"y_lo", w.y_lo}, {"y_hi", w.y_hi}};
    } catch (const Error& e) {
      j["window"] = nullptr;
      j["window_error"] = e.what();
    }
  }
  std::ofstream file;
  output(f, file) << j.dump() << '\n';
  return kExitOk;
}

int cmd_major_arcs(const Flags& f) {
  const std::uint64_t Q = f.Q.value_or(100), y = f.y.value_or(10);
  const AlphaSpec alpha = alpha_for(f, "golden", std::max<std::uint64_t>(Q * Q, 2));
  std::ofstream file;
  output(f, file) << to_json(major_arcs(alpha, Q, y)) << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "TOML configuration file");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--resync", f.resync, "windows between full recomputations")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"primexp: exponential sums over primes at desk scale"};
  app.require_subcommand(1);
  Flags f;

  auto* sieve = app.add_subcommand("sieve", "print a sieved table as n,value");
  add_common(sieve, f);
  sieve->add_option("--fn", f.fn, "lambda, tau, mu, phi, omega, prime, one");
  sieve->add_option("--lo", f.lo);
  sieve->add_option("--hi", f.hi);
  sieve->add_option("--cache-dir", f.cache_dir, "binary table cache directory");

  auto* expsum = app.add_subcommand("expsum", "F(x; alpha)");
  add_common(expsum, f);
  expsum->add_option("--fn", f.fn);
  expsum->add_option("--alpha", f.alpha, "golden, sqrt:d, e, pi or p/q");
  expsum->add_option("--fraction", f.fraction, "evaluate at a/q by residue classes");
  expsum->add_option("--x", f.x);

  auto* window = app.add_subcommand("window-avg", "short-interval L^2 average");
  add_common(window, f);
  window->add_option("--fn", f.fn);
  window->add_option("--alpha", f.alpha);
  window->add_option("--x", f.x);
  window->add_option("--y", f.y);

  auto* dioph = app.add_subcommand("dioph", "continued fraction, R(x, alpha) and admissible window");
  add_common(dioph, f);
  dioph->add_option("--alpha", f.alpha);
  dioph->add_option("--x", f.x);
  dioph->add_option("--K", f.K, "number of partial quotients");
  dioph->add_option("--eps-prime", f.eps_prime);
  dioph->add_option("--s-min", f.s_min);

  auto* arcs = app.add_subcommand("major-arcs", "the set A(Q, y) as JSON");
  add_common(arcs, f);
  arcs->add_option("--alpha", f.alpha);
  arcs->add_option("--Q", f.Q);
  arcs->add_option("--y", f.y);

  auto* verify = app.add_subcommand("verify", "run one check; JSON lines on output");
  add_common(verify, f);
  verify->add_option("check", f.check, "check name")->required()->check(CLI::IsMember(kChecks));
  verify->add_option("--fn", f.fn);
  verify->add_option("--alpha", f.alpha);
  verify->add_option("--beta", f.beta);
  verify->add_option("--fraction", f.fraction);
  verify->add_option("--delta", f.delta);
  verify->add_option("--x", f.x);
  verify->add_option("--y", f.y);
  verify->add_option("--Q", f.Q);
  verify->add_option("--q", f.q);
  verify->add_option("--a", f.a);
  verify->add_option("--N", f.N);
  verify->add_option("--M", f.M);
  verify->add_option("--order", f.order, "Farey order for large-sieve");
  verify->add_option("--points", f.points, "grid size for pi-psi-window");
  verify->add_option("--epsilon", f.epsilon);
  verify->add_option("--bound", f.bound, "assertion ceiling or floor");

  auto* experiment = app.add_subcommand("experiment", "scaling sweeps; CSV output");
  add_common(experiment, f);
  experiment->add_option("name", f.experiment, "experiment name")->required()->check(CLI::IsMember(kExperiments));
  experiment->add_option("--alpha", f.alpha);
  experiment->add_option("--x", f.x_grid, "override x_grid");
  experiment->add_option("--epsilon", f.epsilon);
  experiment->add_flag("--no-time", f.no_time, "write 0 in wall_time_seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!f.config.empty() && !experiment->parsed()) {
      // other commands only take threads/resync/seed from the config
      const ExperimentConfig cfg = load_config(f.config);
      if (!f.threads) f.threads = cfg.threads;
      if (!f.resync) f.resync = cfg.resync;
      if (!f.seed) f.seed = cfg.seed;
      if (!f.alpha) f.alpha = cfg.alpha_source.label();
    }
    if (sieve->parsed()) return cmd_sieve(f);
    if (expsum->parsed()) return cmd_expsum(f);
    if (window->parsed()) return cmd_window_avg(f);
    if (dioph->parsed()) return cmd_dioph(f);
    if (arcs->parsed()) return cmd_major_arcs(f);
    if (verify->parsed()) return cmd_verify(f);
    if (experiment->parsed()) return cmd_experiment(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace primexp
