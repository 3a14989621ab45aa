#include "primexp/cli.hpp"

#include "primexp/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace primexp {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t x_max(const ExperimentConfig& cfg) { return cfg.x_grid.empty() ? 2 : cfg.x_grid.back(); }

// One fixed convergent per experiment with denominator at least max(x)^2.
AlphaSpec realize_for(const ExperimentConfig& cfg, std::uint64_t xmax) {
  const BigInt sq = BigInt(xmax) * xmax;
  return realize_alpha(cfg.alpha_source, cfg.alpha_floor > sq ? cfg.alpha_floor : sq);
}

void require_kind(const ExperimentConfig& cfg, FnKind kind, std::string_view experiment) {
  if (cfg.fn_kind != kind)
    invalid(std::string(experiment) + " needs fn_kind = " + std::string(to_string(kind)) + ", got " +
            std::string(to_string(cfg.fn_kind)));
}

ArithTable table_for(const ExperimentConfig& cfg, std::uint64_t xmax) {
  SieveOptions opts;
  opts.threads = cfg.threads;
  return sieve_table(cfg.fn_kind, 1, xmax, opts);
}

double r_value(const AlphaSpec& alpha, std::uint64_t x) { return to_double(approx_quality(alpha, x).R); }

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void finish_row(ResultRow& row, const Stopwatch& sw, const ExperimentConfig& cfg) {
  row.ratio = row.S / row.normalizer;
  row.wall_time_seconds = cfg.record_time ? sw.seconds() : 0.0;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.x << ',' << r.y << ',' << r.Q << ',' << format_double(r.S) << ',' << format_double(r.normalizer) << ','
        << format_double(r.ratio) << ',' << format_double(r.sup_prefix) << ',' << format_double(r.R) << ','
        << format_double(r.wall_time_seconds) << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  write_csv(out, rows);
}

ExperimentResult run_scaling_lambda(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_kind(cfg, FnKind::VonMangoldt, "scaling-lambda");
  const YRule rule = effective_y_rule(cfg, YRuleKind::PowerOfX);
  if (rule.kind != YRuleKind::PowerOfX) invalid("scaling-lambda needs a power_of_x y_rule");
  if (rule.theta > 1.0 / 3.0) invalid("scaling-lambda needs theta <= 1/3");
  ExperimentResult res;
  if (cfg.x_grid.empty()) return res;

  const AlphaSpec alpha = realize_for(cfg, x_max(cfg));
  const PhaseContext ctx(alpha);
  const ArithTable table = table_for(cfg, x_max(cfg));
  const WindowOptions wopts{cfg.resync, cfg.threads};
  for (const std::uint64_t x : cfg.x_grid) {
    Stopwatch sw;
    ResultRow row;
    row.x = x;
    row.y = power_floor(x, rule.theta);
    row.Q = q_for(cfg.q_rule, x);
    row.S = window_l2_average(table, ctx, x, row.y, wopts).S;
    row.normalizer = static_cast<double>(row.y) * std::log(static_cast<double>(x));
    row.sup_prefix = prefix_sups(table, ctx, x).sup;
    row.R = r_value(alpha, x);
    finish_row(row, sw, cfg);
    res.rows.push_back(row);
  }
  return res;
}

ExperimentResult run_scaling_tau(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_kind(cfg, FnKind::Divisor, "scaling-tau");
  const YRule rule = effective_y_rule(cfg, YRuleKind::FromConvergent);
  if (rule.kind != YRuleKind::FromConvergent) invalid("scaling-tau needs a from_convergent y_rule");
  if (cfg.alpha_source.is_rational()) invalid("scaling-tau needs an irrational alpha source");
  ExperimentResult res;
  if (cfg.x_grid.empty()) return res;

  const AlphaSpec alpha = realize_for(cfg, x_max(cfg));
  const PhaseContext ctx(alpha);
  const ArithTable table = table_for(cfg, x_max(cfg));
  const WindowOptions wopts{cfg.resync, cfg.threads};
  for (const std::uint64_t x : cfg.x_grid) {
    Stopwatch sw;
    const double xd = static_cast<double>(x);
    const double lx = std::log(xd);
    const double Y = xd * std::pow(std::log(lx) / (cfg.C * lx), 2);

    // Pinned window: the first s >= s_min. Otherwise the largest admissible
    // s whose window top stays below Y.
    std::optional<AdmissibleWindow> chosen;
    try {
      if (rule.s_min) {
        chosen = admissible_window(alpha, rule.eps_prime, BigInt(*rule.s_min));
      } else {
        for (const auto& c : continued_fraction(alpha, 200).convergents) {
          if (to_double(rule.eps_prime * BigRational(c.q * c.q)) >= Y) break;  // window starts above Y
          try {
            const AdmissibleWindow w = admissible_window(alpha, rule.eps_prime, c.q);
            if (static_cast<double>(w.y_hi) >= Y) break;
            chosen = w;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyWindow) throw;
          }
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyWindow && e.code() != ErrorCode::FloorTooLarge) throw;
    }
    if (!chosen) {
      res.skipped.push_back("x = " + std::to_string(x) + ": no-admissible-window below Y = " + std::to_string(Y));
      continue;
    }
    const std::uint64_t y = chosen->y_hi;
    if (static_cast<double>(y) >= Y) {
      res.skipped.push_back("x = " + std::to_string(x) + ": y = " + std::to_string(y) + " >= Y = " + std::to_string(Y));
      continue;
    }
    if (y > x) {
      res.skipped.push_back("x = " + std::to_string(x) + ": y = " + std::to_string(y) + " exceeds x");
      continue;
    }
    ResultRow row;
    row.x = x;
    row.y = y;
    row.Q = q_for(cfg.q_rule, x);
    row.S = window_l2_average(table, ctx, x, y, wopts).S;
    const double yd = static_cast<double>(y);
    row.normalizer = yd * std::pow(std::log(xd / yd), 2) * std::log(Y / yd);
    row.sup_prefix = prefix_sups(table, ctx, x).sup;
    row.R = r_value(alpha, x);
    finish_row(row, sw, cfg);
    res.rows.push_back(row);
  }
  return res;
}

ExperimentResult run_sup_growth(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_kind(cfg, FnKind::VonMangoldt, "sup-growth");
  const YRule rule = effective_y_rule(cfg, YRuleKind::PowerOfX);
  if (rule.kind != YRuleKind::PowerOfX) invalid("sup-growth needs a power_of_x y_rule");
  ExperimentResult res;
  if (cfg.x_grid.empty()) return res;

  const std::uint64_t xmax = x_max(cfg);
  const AlphaSpec alpha = realize_for(cfg, xmax);
  const PhaseContext ctx(alpha);
  const ArithTable table = table_for(cfg, xmax);
  const WindowOptions wopts{cfg.resync, cfg.threads};
  for (const std::uint64_t x : cfg.x_grid) {
    Stopwatch sw;
    ResultRow row;
    row.x = x;
    row.y = power_floor(x, rule.theta);
    row.Q = q_for(cfg.q_rule, x);
    // S is kept so that sup_prefix >= sqrt(S)/2 can be checked from the CSV.
    row.S = window_l2_average(table, ctx, x, row.y, wopts).S;
    row.sup_prefix = prefix_sups(table, ctx, x).sup;
    row.normalizer = std::pow(static_cast<double>(x), 1.0 / 6.0 - cfg.epsilon);
    row.R = r_value(alpha, x);
    row.wall_time_seconds = cfg.record_time ? sw.seconds() : 0.0;
    row.ratio = row.sup_prefix / row.normalizer;
    res.rows.push_back(row);
  }

  // y = s^2/12 and x = y^(9/5 + eps) along convergent denominators s, capped at max(x_grid)
  if (!alpha.source.is_rational()) {
    const ConvergentSeq cf = continued_fraction(alpha, 200);
    std::set<std::uint64_t> seen;
    for (const auto& c : cf.convergents) {
      if (c.q > BigInt(1) << 40) break;
      const auto s = c.q.convert_to<std::uint64_t>();
      const std::uint64_t y = s * s / 12;
      if (y < 1 || !seen.insert(s).second) continue;
      const auto x = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(y), 9.0 / 5.0 + cfg.epsilon)));
      if (x > xmax) break;
      if (x < 2 || y > x) continue;
      Stopwatch sw;
      ResultRow row;
      row.x = x;
      row.y = y;
      row.Q = s;
      row.S = window_l2_average(table, ctx, x, y, wopts).S;
      row.sup_prefix = prefix_sups(table, ctx, x).sup;
      row.normalizer = std::pow(static_cast<double>(x), 5.0 / 18.0 - cfg.epsilon);
      row.R = r_value(alpha, x);
      row.wall_time_seconds = cfg.record_time ? sw.seconds() : 0.0;
      row.ratio = row.sup_prefix / row.normalizer;
      res.convergent_rows.push_back(row);
    }
  }
  return res;
}

ExperimentResult run_vinogradov_envelope(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_kind(cfg, FnKind::VonMangoldt, "vinogradov-envelope");
  ExperimentResult res;
  if (cfg.x_grid.empty()) return res;

  const AlphaSpec alpha = realize_for(cfg, x_max(cfg));
  const PhaseContext ctx(alpha);
  const ArithTable table = table_for(cfg, x_max(cfg));
  for (const std::uint64_t x : cfg.x_grid) {
    Stopwatch sw;
    const double xd = static_cast<double>(x);
    ResultRow row;
    row.x = x;
    row.y = 0;
    row.Q = 0;
    row.S = std::abs(expsum_full(table, ctx, x));  // |psi(x; alpha)|
    row.R = r_value(alpha, x);
    row.normalizer = std::pow(xd, 1 + cfg.epsilon) / std::sqrt(row.R) + std::pow(xd, 0.8 + cfg.epsilon);
    row.sup_prefix = prefix_sups(table, ctx, x).sup;
    finish_row(row, sw, cfg);
    res.rows.push_back(row);
  }
  return res;
}

ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& cfg) {
  ExperimentResult res;
  if (name == "scaling-lambda")
    res = run_scaling_lambda(cfg);
  else if (name == "scaling-tau")
    res = run_scaling_tau(cfg);
  else if (name == "sup-growth")
    res = run_sup_growth(cfg);
  else if (name == "vinogradov-envelope")
    res = run_vinogradov_envelope(cfg);
  else
    invalid("unknown experiment '" + std::string(name) + "'");
  if (!cfg.out_path.empty()) {
    write_csv(cfg.out_path, res.rows);
    if (name == "sup-growth") write_csv(cfg.out_path + ".convergent.csv", res.convergent_rows);
  }
  return res;
}

}  // namespace primexp
