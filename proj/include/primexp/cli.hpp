#pragma once

// Experiment driver: TOML configuration, the scaling sweeps and CSV output,
// plus the argv entry point used by the `primexp` executable.

#include "primexp/arith.hpp"
#include "primexp/dioph.hpp"
#include "primexp/expsum.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace primexp {

enum class YRuleKind { PowerOfX, FromConvergent };

struct YRule {
  YRuleKind kind = YRuleKind::PowerOfX;
  double theta = 0.0;                   // PowerOfX
  BigRational eps_prime{1, 24};         // FromConvergent
  std::optional<std::uint64_t> s_min;   // FromConvergent: pin the window to the first s >= s_min
};

enum class QRuleKind { PowerOfX, Fixed };

struct QRule {
  QRuleKind kind = QRuleKind::PowerOfX;
  double theta = 0.5;
  std::uint64_t Q = 0;
};

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr double kDefaultTheoremC = 10.0;

struct ExperimentConfig {
  AlphaSource alpha_source = AlphaSource::golden();
  BigInt alpha_floor{1};  // raised to max(x_grid)^2 before realizing
  FnKind fn_kind = FnKind::VonMangoldt;
  std::vector<std::uint64_t> x_grid;
  std::optional<YRule> y_rule;  // unset: theta = 1/3 - epsilon, or eps' = 1/24 for convergent windows
  QRule q_rule;
  std::uint64_t resync = kDefaultResync;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out_path;
  double C = kDefaultTheoremC;
  double epsilon = kDefaultEpsilon;
  bool record_time = true;  // false writes 0 in wall_time_seconds
};

/// Parses TOML text; ConfigInvalid on malformed input or violated invariants.
ExperimentConfig parse_config(std::string_view toml_text);
ExperimentConfig load_config(const std::string& path);
/// x_grid strictly increasing and positive, theta values in (0, 1), positive counts.
void validate_config(const ExperimentConfig& cfg);

YRule effective_y_rule(const ExperimentConfig& cfg, YRuleKind wanted);
/// floor(x^theta), robust against x^theta landing just below an integer.
std::uint64_t power_floor(std::uint64_t x, double theta);
std::uint64_t q_for(const QRule& rule, std::uint64_t x);

struct ResultRow {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t Q = 0;
  double S = 0.0;
  double normalizer = 0.0;
  double ratio = 0.0;
  double sup_prefix = 0.0;
  double R = 0.0;
  double wall_time_seconds = 0.0;
};

inline constexpr std::string_view kCsvHeader = "x,y,Q,S,normalizer,ratio,sup_prefix,R,wall_time_seconds";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<ResultRow> convergent_rows;  // sup-growth only, written to <out>.convergent.csv
  std::vector<std::string> skipped;        // one reason per rejected x
};

ExperimentResult run_scaling_lambda(const ExperimentConfig& cfg);
ExperimentResult run_scaling_tau(const ExperimentConfig& cfg);
ExperimentResult run_sup_growth(const ExperimentConfig& cfg);
ExperimentResult run_vinogradov_envelope(const ExperimentConfig& cfg);

/// Runs by name ("scaling-lambda", "scaling-tau", "sup-growth", "vinogradov-envelope")
/// and writes the CSV files when out_path is set.
ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& cfg);

/// Exit codes: 0 success, 1 failed check, 2 configuration error.
int run_cli(int argc, char** argv);

}  // namespace primexp
