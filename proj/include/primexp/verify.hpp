#pragma once

// Executable checks of the inequalities and identities behind the lower bounds.
// Each check returns a CheckReport; measured constants go into `parameters`.

#include "primexp/arith.hpp"
#include "primexp/characters.hpp"
#include "primexp/dioph.hpp"
#include "primexp/expsum.hpp"

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace primexp {

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct CheckReport {
  std::string check_name;
  std::vector<std::pair<std::string, ParamValue>> parameters;  // insertion order is kept
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
  double tolerance_used = 0.0;

  CheckReport& set(const std::string& key, ParamValue value);
  const ParamValue* find(const std::string& key) const;
  double number(const std::string& key) const;  // NaN when absent or a string
};

/// One JSON object per line; non-finite numbers become null.
std::string to_json_line(const CheckReport& report);
void write_json_lines(std::ostream& out, const std::vector<CheckReport>& reports);

/// lhs / rhs, or NaN when rhs == 0.
double safe_ratio(double lhs, double rhs) noexcept;

inline constexpr double kIdentityTolerance = 1e-6;
inline constexpr double kInequalitySlack = 1e-6;

/// Farey fractions a/q in [0, 1) with q <= order; pairwise spacing >= 1/order^2.
std::vector<BigRational> farey_points(std::uint64_t order);

/// sum_{beta in B} |F(M, M+N; beta)|^2 <= (N + 1/delta) sum |f(n)|^2 over n in (M, M+N].
/// Separation of B mod 1 is checked exactly (SeparationViolated).
CheckReport check_large_sieve(const ArithTable& f, std::uint64_t M, std::uint64_t N,
                              const std::vector<BigRational>& points, const BigRational& delta);

/// sum_{-y < n < x} F(n, n+y; alpha) e(beta n) = F(x; alpha + beta) E_y(-beta).
CheckReport check_window_transform(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                   std::uint64_t y, const BigRational& beta);

/// |F(x; a/q)|^2 for every q <= Q and every a mod q coprime to q.
class RationalSpectrum {
 public:
  RationalSpectrum(const ArithTable& table, std::uint64_t x, std::uint64_t Q);
  std::uint64_t x() const noexcept { return x_; }
  std::uint64_t Q() const noexcept { return Q_; }
  /// |F(x; a/q)|^2, with a taken mod q; gcd(a, q) must be 1.
  double norm(std::int64_t a, std::uint64_t q) const;
  /// Calls fn(a, q, |F|^2) over all reduced fractions, q increasing then a increasing.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t q = 1; q <= Q_; ++q)
      for (std::uint64_t a = 0; a < q; ++a)
        if (gcd(a, q) == 1) fn(static_cast<std::int64_t>(a), q, values_[offset(q) + a]);
  }

 private:
  static std::size_t offset(std::uint64_t q) noexcept { return static_cast<std::size_t>(q * (q - 1) / 2); }
  std::uint64_t x_;
  std::uint64_t Q_;
  std::vector<double> values_;
};

/// L >= M >= A for the window L^2 mass L, the weighted rational spectrum M and
/// its major-arc part A. Requires y <= x and Q^2 <= x.
CheckReport check_initial_chain(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                std::uint64_t y, std::uint64_t Q, const WindowOptions& options = {});
/// Same, reusing a precomputed spectrum (its x and Q are used).
CheckReport check_initial_chain(const ArithTable& table, const PhaseContext& ctx, const RationalSpectrum& spectrum,
                                std::uint64_t y, const WindowOptions& options = {});

inline constexpr double kCoprimeCountCeiling = 4.0;

/// #{a : gcd(a, q) = 1, |alpha - a/q| <= 1/(6y)} against phi(q)/(3y), in units of 2^omega(q).
CheckReport check_coprime_count(std::uint64_t q, std::uint64_t y, const AlphaSpec& alpha,
                                double ceiling = kCoprimeCountCeiling);

/// sum_{Q^(1-eps) < q <= Q} mu^2(q)/phi(q) against eps log Q.
CheckReport check_goal_g(std::uint64_t Q, double epsilon, double floor = 0.5);

/// sum_{q <= Q} max_{(a,q)=1} |psi(x; a/q) - (mu(q)/phi(q)) x|; data only.
CheckReport bv_average(std::uint64_t x, std::uint64_t Q);
CheckReport bv_average(const ArithTable& lambda, std::uint64_t x, std::uint64_t Q);

/// F(x; a/q) = (1/phi(q)) sum_chi chi(a) G(conj chi) psi(x, chi) + Corr, where Corr is
/// the part of the sum over n with gcd(n, q) > 1.
CheckReport check_grh_decomposition(const ArithTable& table, std::uint64_t q, std::int64_t a, std::uint64_t x);

inline constexpr double kTauConstant = 10.0;
inline constexpr std::uint64_t kTauFullScanLimit = 100;

/// Worst normalized error of the divisor sum at a/q against (x/q)(log(x/q^2) + 2 gamma - 1),
/// one report per q. All coprime a are scanned for q <= 100, an even sample above.
std::vector<CheckReport> check_tau_rational(std::uint64_t x, const std::vector<std::uint64_t>& q_grid,
                                            double constant = kTauConstant);
std::vector<CheckReport> check_tau_rational(const ArithTable& tau, std::uint64_t x,
                                            const std::vector<std::uint64_t>& q_grid,
                                            double constant = kTauConstant);

/// sum_{n <= x} tau(n) e(an/q) = 2T + E by the hyperbola method.
CheckReport check_hyperbola(std::uint64_t x, const Fraction& frac);

/// Every window modulus <= 2 sup_{n <= x} |F(n)| and sup >= (1/2) sqrt(S).
CheckReport check_sup_lower_bound(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                  std::uint64_t y, const WindowOptions& options = {});

inline constexpr double kPiPsiConstant = 3.0;

/// max over the grid of |Lambda-window(n) - log(n) pi-window(n)| / (log n)^2.
CheckReport check_pi_psi_window(const ArithTable& lambda, const ArithTable& primes, const PhaseContext& ctx,
                                std::uint64_t x, std::uint64_t y, const std::vector<std::uint64_t>& n_grid,
                                double constant = kPiPsiConstant);

}  // namespace primexp
