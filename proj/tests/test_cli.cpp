#include "check_error.hpp"
#include "primexp/cli.hpp"
#include "primexp/expsum.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace primexp;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p(PRIMEXP_TEST_TMP);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "primexp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
alpha = "sqrt:2"
fn_kind = "lambda"
x_grid = [10000, 1e5, "1000000"]
resync = 4096
threads = 2
seed = 7
epsilon = 0.02
record_time = false
[y_rule]
kind = "power_of_x"
theta = 0.28
[Q_rule]
kind = "fixed"
Q = 100
)");
  CHECK(cfg.alpha_source.kind == AlphaKind::Sqrt);
  CHECK(cfg.x_grid == std::vector<std::uint64_t>{10000, 100000, 1000000});
  CHECK(cfg.resync == 4096);
  CHECK(cfg.threads == 2);
  CHECK(cfg.seed == 7);
  CHECK_FALSE(cfg.record_time);
  REQUIRE(cfg.y_rule.has_value());
  CHECK(cfg.y_rule->theta == 0.28);
  CHECK(cfg.q_rule.kind == QRuleKind::Fixed);
  CHECK(q_for(cfg.q_rule, 1000000) == 100);

  const auto conv = parse_config("[y_rule]\nkind = \"from_convergent\"\neps_prime = \"1/30\"\ns_min = 13\n");
  CHECK(conv.y_rule->eps_prime == BigRational(1, 30));
  CHECK(conv.y_rule->s_min == 13u);

  const auto defaults = parse_config("");
  CHECK(defaults.q_rule.kind == QRuleKind::PowerOfX);
  CHECK(defaults.q_rule.theta == 0.5);
  CHECK(effective_y_rule(defaults, YRuleKind::PowerOfX).theta == doctest::Approx(1.0 / 3.0 - 0.05));
  CHECK(effective_y_rule(defaults, YRuleKind::FromConvergent).eps_prime == BigRational(1, 24));
}

TEST_CASE("invalid configurations") {
  for (const char* text : {
           "alpha = ",                                  // malformed
           "x_grid = [100, 10]",                        // not increasing
           "x_grid = [1]",                              // too small
           "bogus = 1",                                 // unknown key
           "alpha = \"sqrt:4\"\n",                      // parses, realization fails later; accepted here
           "[y_rule]\nkind = \"power_of_x\"\ntheta = 1.5\n",
           "[y_rule]\nkind = \"from_convergent\"\neps_prime = \"1/5\"\n",
           "[y_rule]\nkind = \"nope\"\n",
           "[Q_rule]\nkind = \"fixed\"\nQ = 1000\n[y_rule]\ntheta=0.2\n\nx_grid = [100]",
           "resync = 0",
           "threads = -1",
           "record_time = 1",
           "epsilon = 2",
           "fn_kind = \"zeta\"",
       }) {
    CAPTURE(text);
    const auto code = thrown_code([&] { parse_config(text); });
    if (std::string_view(text).starts_with("alpha = \"sqrt:4\""))
      CHECK_FALSE(code.has_value());
    else
      CHECK(code == std::optional(ErrorCode::ConfigInvalid));
  }
  CHECK_THROWS_CODE(parse_config("x_grid = [100, 10000]\n[Q_rule]\nkind = \"fixed\"\nQ = 11\n"),
                    ErrorCode::ConfigInvalid);
  CHECK_THROWS_CODE(load_config((tmp_dir() / "missing.toml").string()), ErrorCode::ConfigInvalid);
}

TEST_CASE("power_floor") {
  CHECK(power_floor(1000000, 0.5) == 1000);
  CHECK(power_floor(1000000, 1.0 / 3.0) == 100);
  CHECK(power_floor(10000, 0.25) == 10);
  CHECK(power_floor(100000, 0.28) == 25);
  CHECK(power_floor(2, 0.1) == 1);
}

TEST_CASE("exit codes") {
  const auto bad = write_file("bad.toml", "x_grid = [1e4, \n");
  CHECK(cli({"experiment", "scaling-lambda", "--config", bad.string()}) == 2);
  CHECK(cli({"verify", "hyperbola", "--config", bad.string()}) == 2);
  CHECK(cli({"verify", "no-such-check"}) == 2);
  CHECK(cli({"verify", "large-sieve", "--seed", "7", "--out", (tmp_dir() / "ls.jsonl").string()}) == 0);
  CHECK(slurp(tmp_dir() / "ls.jsonl").find("\"passed\":true") != std::string::npos);
  CHECK(cli({"verify", "goal-g", "--Q", "1000", "--bound", "100", "--out", (tmp_dir() / "gg.jsonl").string()}) == 1);
  CHECK(cli({"verify", "hyperbola", "--x", "16", "--fraction", "1/5", "--out", (tmp_dir() / "h.jsonl").string()}) == 2);
  CHECK(cli({"sieve", "--fn", "tau", "--lo", "1", "--hi", "12", "--out", (tmp_dir() / "tau.csv").string()}) == 0);
  const auto tau = csv_lines(slurp(tmp_dir() / "tau.csv"));
  REQUIRE(tau.size() == 13);
  CHECK(tau[0] == "n,value");
  CHECK(tau[12] == "12,6");
  CHECK(cli({"major-arcs", "--alpha", "1/3", "--Q", "3", "--y", "1", "--out", (tmp_dir() / "arcs.json").string()}) == 0);
  CHECK(slurp(tmp_dir() / "arcs.json").find("{\"a\":1,\"q\":3}") != std::string::npos);
  CHECK(cli({"sieve", "--lo", "0", "--hi", "5", "--out", (tmp_dir() / "x.csv").string()}) == 2);
}

TEST_CASE("scaling-lambda rows") {
  ExperimentConfig cfg;
  cfg.alpha_source = AlphaSource::golden();
  cfg.x_grid = {10000, 100000};
  cfg.y_rule = YRule{YRuleKind::PowerOfX, 0.28, BigRational(1, 24), std::nullopt};
  cfg.record_time = false;
  const auto res = run_scaling_lambda(cfg);
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.y == power_floor(row.x, 0.28));
    CHECK(row.Q == power_floor(row.x, 0.5));
    CHECK(row.normalizer == doctest::Approx(row.y * std::log(double(row.x))));
    CHECK(row.ratio == doctest::Approx(row.S / row.normalizer));
    CHECK(row.wall_time_seconds == 0.0);
    // S agrees with a fresh computation
    const auto lam = sieve_table(FnKind::VonMangoldt, 1, row.x);
    const auto alpha = realize_alpha(AlphaSource::golden(), BigInt(100000) * 100000);
    const auto wa = window_l2_average(lam, PhaseContext(alpha), row.x, row.y);
    CHECK(std::abs(wa.S - row.S) <= 1e-10 * row.S);
  }
}

TEST_CASE("scaling-tau windows from convergents") {
  ExperimentConfig cfg;
  cfg.fn_kind = FnKind::Divisor;
  cfg.x_grid = {100000};
  cfg.record_time = false;
  YRule pinned;
  pinned.kind = YRuleKind::FromConvergent;
  pinned.s_min = 13;
  cfg.y_rule = pinned;
  auto res = run_scaling_tau(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].y == 14);

  cfg.y_rule.reset();
  res = run_scaling_tau(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].y == 36);  // s = 21, the largest convergent with y below sqrt(x)
  CHECK(res.rows[0].y * res.rows[0].y < 100000);
}

TEST_CASE("experiment CSV output and determinism") {
  const auto cfg_path = write_file("sweep.toml", R"(
alpha = "golden"
x_grid = [2000, 20000]
record_time = true
[y_rule]
theta = 0.3
)");
  const auto a = tmp_dir() / "a.csv", b = tmp_dir() / "b.csv", c = tmp_dir() / "c.csv";
  CHECK(cli({"experiment", "scaling-lambda", "--config", cfg_path.string(), "--out", a.string()}) == 0);
  CHECK(cli({"experiment", "scaling-lambda", "--config", cfg_path.string(), "--out", b.string(), "--threads", "3"}) == 0);
  CHECK(cli({"experiment", "scaling-lambda", "--config", cfg_path.string(), "--out", c.string(), "--no-time"}) == 0);
  const auto la = csv_lines(slurp(a)), lb = csv_lines(slurp(b)), lc = csv_lines(slurp(c));
  REQUIRE(la.size() == 3);
  CHECK(la[0] == kCsvHeader);
  for (std::size_t i = 0; i < la.size(); ++i) {
    auto ca = split(la[i]), cb = split(lb[i]), cc = split(lc[i]);
    REQUIRE(ca.size() == 9);
    if (i > 0) CHECK(cc[8] == "0");
    ca.pop_back();
    cb.pop_back();
    cc.pop_back();
    CHECK(ca == cb);
    CHECK(ca == cc);
  }
  const auto d = tmp_dir() / "d.csv";
  CHECK(cli({"experiment", "scaling-lambda", "--config", cfg_path.string(), "--out", d.string(), "--no-time"}) == 0);
  CHECK(slurp(c) == slurp(d));

  // empty grid: header only
  const auto empty = tmp_dir() / "empty.csv";
  CHECK(cli({"experiment", "vinogradov-envelope", "--out", empty.string()}) == 0);
  CHECK(slurp(empty) == std::string(kCsvHeader) + "\n");

  const auto sup = tmp_dir() / "sup.csv";
  CHECK(cli({"experiment", "sup-growth", "--x", "10000", "--x", "100000", "--out", sup.string(), "--no-time"}) == 0);
  CHECK(csv_lines(slurp(sup)).size() == 3);
  const auto conv = csv_lines(slurp(sup.string() + ".convergent.csv"));
  REQUIRE(conv.size() >= 2);
  CHECK(conv[0] == kCsvHeader);
}
