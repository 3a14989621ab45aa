#include "primexp/cli.hpp"

#include "primexp/error.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace primexp {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

void reject_unknown(const toml::table& tbl, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, node] : tbl) {
    (void)node;
    if (!known.count(std::string(key.str()))) invalid("unknown key '" + std::string(key.str()) + "' in " + where);
  }
}

std::uint64_t as_count(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<std::int64_t>()) {
    if (*v < 0) invalid(key + " must be non-negative");
    return static_cast<std::uint64_t>(*v);
  }
  if (auto v = node.value_exact<double>()) {
    // allow 1e6-style literals as long as they are integral
    if (*v < 0 || *v != std::floor(*v) || *v > 9e18) invalid(key + " must be a non-negative integer");
    return static_cast<std::uint64_t>(*v);
  }
  if (auto s = node.value_exact<std::string>()) {
    try {
      const BigRational r = parse_rational(*s);
      if (r < 0 || boost::multiprecision::denominator(r) != 1) invalid(key + " must be a non-negative integer");
      return to_int64(BigInt(boost::multiprecision::numerator(r)));
    } catch (const Error&) {
      invalid(key + " must be a non-negative integer, got '" + *s + "'");
    }
  }
  invalid(key + " must be an integer");
}

double as_real(const toml::node& node, const std::string& key) {
  if (auto v = node.value<double>()) return *v;
  if (auto s = node.value_exact<std::string>()) {
    try {
      return to_double(parse_rational(*s));
    } catch (const Error&) {
    }
  }
  invalid(key + " must be a number");
}

BigRational as_rational(const toml::node& node, const std::string& key) {
  if (auto s = node.value_exact<std::string>()) {
    try {
      return parse_rational(*s);
    } catch (const Error&) {
      invalid(key + " must be a rational like \"1/24\", got '" + *s + "'");
    }
  }
  if (auto v = node.value_exact<std::int64_t>()) return BigRational(*v);
  if (auto v = node.value_exact<double>()) {
    std::ostringstream os;
    os.precision(17);
    os << *v;
    return parse_rational(os.str());
  }
  invalid(key + " must be a rational");
}

std::string as_string(const toml::node& node, const std::string& key) {
  if (auto s = node.value_exact<std::string>()) return *s;
  invalid(key + " must be a string");
}

YRule parse_y_rule(const toml::table& tbl) {
  reject_unknown(tbl, {"kind", "theta", "eps_prime", "s_min"}, "[y_rule]");
  YRule rule;
  const std::string kind = tbl.contains("kind") ? as_string(*tbl.get("kind"), "y_rule.kind") : "power_of_x";
  if (kind == "power_of_x") {
    rule.kind = YRuleKind::PowerOfX;
    if (!tbl.contains("theta")) invalid("y_rule.theta is required for power_of_x");
    rule.theta = as_real(*tbl.get("theta"), "y_rule.theta");
  } else if (kind == "from_convergent") {
    rule.kind = YRuleKind::FromConvergent;
    if (tbl.contains("eps_prime")) rule.eps_prime = as_rational(*tbl.get("eps_prime"), "y_rule.eps_prime");
    if (tbl.contains("s_min")) rule.s_min = as_count(*tbl.get("s_min"), "y_rule.s_min");
  } else {
    invalid("y_rule.kind must be power_of_x or from_convergent, got '" + kind + "'");
  }
  return rule;
}

QRule parse_q_rule(const toml::table& tbl) {
  reject_unknown(tbl, {"kind", "theta", "Q"}, "[Q_rule]");
  QRule rule;
  const std::string kind = tbl.contains("kind") ? as_string(*tbl.get("kind"), "Q_rule.kind") : "power_of_x";
  if (kind == "power_of_x") {
    rule.kind = QRuleKind::PowerOfX;
    if (tbl.contains("theta")) rule.theta = as_real(*tbl.get("theta"), "Q_rule.theta");
  } else if (kind == "fixed") {
    rule.kind = QRuleKind::Fixed;
    if (!tbl.contains("Q")) invalid("Q_rule.Q is required for fixed");
    rule.Q = as_count(*tbl.get("Q"), "Q_rule.Q");
  } else {
    invalid("Q_rule.kind must be power_of_x or fixed, got '" + kind + "'");
  }
  return rule;
}

bool in_unit_interval(double t) { return t > 0.0 && t < 1.0; }

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "malformed TOML: " << e.description() << " at line " << e.source().begin.line;
    invalid(os.str());
  }
  reject_unknown(root,
                 {"alpha", "alpha_floor", "fn_kind", "x_grid", "y_rule", "Q_rule", "resync", "threads", "seed",
                  "out_path", "C", "epsilon", "record_time"},
                 "config");

  ExperimentConfig cfg;
  try {
    if (auto n = root.get("alpha")) cfg.alpha_source = parse_alpha_source(as_string(*n, "alpha"));
    if (auto n = root.get("fn_kind")) cfg.fn_kind = parse_fn_kind(as_string(*n, "fn_kind"));
  } catch (const Error& e) {
    invalid(e.what());
  }
  if (auto n = root.get("alpha_floor")) cfg.alpha_floor = BigInt(as_count(*n, "alpha_floor"));
  if (auto n = root.get("x_grid")) {
    const toml::array* arr = n->as_array();
    if (!arr) invalid("x_grid must be an array");
    for (const auto& el : *arr) cfg.x_grid.push_back(as_count(el, "x_grid entry"));
  }
  if (auto n = root.get("y_rule")) {
    if (!n->is_table()) invalid("y_rule must be a table");
    cfg.y_rule = parse_y_rule(*n->as_table());
  }
  if (auto n = root.get("Q_rule")) {
    if (!n->is_table()) invalid("Q_rule must be a table");
    cfg.q_rule = parse_q_rule(*n->as_table());
  }
  if (auto n = root.get("resync")) cfg.resync = as_count(*n, "resync");
  if (auto n = root.get("threads")) cfg.threads = static_cast<unsigned>(as_count(*n, "threads"));
  if (auto n = root.get("seed")) cfg.seed = as_count(*n, "seed");
  if (auto n = root.get("out_path")) cfg.out_path = as_string(*n, "out_path");
  if (auto n = root.get("C")) cfg.C = as_real(*n, "C");
  if (auto n = root.get("epsilon")) cfg.epsilon = as_real(*n, "epsilon");
  if (auto n = root.get("record_time")) {
    auto b = n->value_exact<bool>();
    if (!b) invalid("record_time must be a boolean");
    cfg.record_time = *b;
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  for (std::size_t i = 0; i < cfg.x_grid.size(); ++i) {
    if (cfg.x_grid[i] < 2) invalid("x_grid entries must be at least 2");
    if (i > 0 && cfg.x_grid[i] <= cfg.x_grid[i - 1]) invalid("x_grid must be strictly increasing");
  }
  if (cfg.y_rule) {
    if (cfg.y_rule->kind == YRuleKind::PowerOfX && !in_unit_interval(cfg.y_rule->theta))
      invalid("y_rule.theta must lie in (0, 1)");
    if (cfg.y_rule->kind == YRuleKind::FromConvergent &&
        (cfg.y_rule->eps_prime <= 0 || cfg.y_rule->eps_prime > BigRational(1, 12)))
      invalid("y_rule.eps_prime must lie in (0, 1/12]");
  }
  if (cfg.q_rule.kind == QRuleKind::PowerOfX && !in_unit_interval(cfg.q_rule.theta))
    invalid("Q_rule.theta must lie in (0, 1)");
  if (cfg.q_rule.kind == QRuleKind::Fixed) {
    if (cfg.q_rule.Q < 1) invalid("Q_rule.Q must be positive");
    for (auto x : cfg.x_grid)
      if (cfg.q_rule.Q * cfg.q_rule.Q > x) invalid("Q_rule.Q exceeds sqrt(x) for x = " + std::to_string(x));
  }
  if (cfg.q_rule.kind == QRuleKind::PowerOfX && cfg.q_rule.theta > 0.5) invalid("Q_rule.theta must be at most 1/2");
  if (cfg.resync < 1) invalid("resync must be positive");
  if (cfg.threads < 1) invalid("threads must be positive");
  if (!(cfg.C > 0) || !std::isfinite(cfg.C)) invalid("C must be positive");
  if (!in_unit_interval(cfg.epsilon)) invalid("epsilon must lie in (0, 1)");
  if (cfg.y_rule && cfg.y_rule->kind == YRuleKind::PowerOfX)
    for (auto x : cfg.x_grid)
      if (power_floor(x, cfg.y_rule->theta) < 1) invalid("y = floor(x^theta) is 0 for x = " + std::to_string(x));
}

YRule effective_y_rule(const ExperimentConfig& cfg, YRuleKind wanted) {
  if (cfg.y_rule) return *cfg.y_rule;
  YRule rule;
  rule.kind = wanted;
  if (wanted == YRuleKind::PowerOfX) rule.theta = 1.0 / 3.0 - cfg.epsilon;
  return rule;
}

std::uint64_t power_floor(std::uint64_t x, double theta) {
  const long double v = std::pow(static_cast<long double>(x), static_cast<long double>(theta));
  const long double r = std::nearbyint(v);
  if (std::fabs(v - r) <= 1e-12L * std::max<long double>(1, v)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::floor(v));
}

std::uint64_t q_for(const QRule& rule, std::uint64_t x) {
  if (rule.kind == QRuleKind::Fixed) return rule.Q;
  return std::max<std::uint64_t>(1, power_floor(x, rule.theta));
}

}  // namespace primexp
