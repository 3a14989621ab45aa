#include "primexp/verify.hpp"

#include <json.hpp>

#include <cmath>

namespace primexp {

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

CheckReport& CheckReport::set(const std::string& key, ParamValue value) {
  for (auto& [k, v] : parameters) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  parameters.emplace_back(key, std::move(value));
  return *this;
}

const ParamValue* CheckReport::find(const std::string& key) const {
  for (const auto& [k, v] : parameters)
    if (k == key) return &v;
  return nullptr;
}

double CheckReport::number(const std::string& key) const {
  const ParamValue* v = find(key);
  if (!v) return std::numeric_limits<double>::quiet_NaN();
  if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(v)) return *d;
  return std::numeric_limits<double>::quiet_NaN();
}

double safe_ratio(double lhs, double rhs) noexcept {
  if (rhs == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return lhs / rhs;
}

std::string to_json_line(const CheckReport& report) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.parameters) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            params[key] = number_or_null(v);
          else
            params[key] = v;
        },
        value);
  }
  nlohmann::ordered_json j;
  j["check_name"] = report.check_name;
  j["parameters"] = std::move(params);
  j["lhs"] = number_or_null(report.lhs);
  j["rhs"] = number_or_null(report.rhs);
  j["ratio"] = number_or_null(report.ratio);
  j["passed"] = report.passed;
  j["tolerance_used"] = number_or_null(report.tolerance_used);
  return j.dump();
}

void write_json_lines(std::ostream& out, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) out << to_json_line(r) << '\n';
}

}  // namespace primexp
