#include "primexp/phase.hpp"

#include "primexp/error.hpp"

#include <cmath>
#include <numbers>

namespace primexp {

namespace mp = boost::multiprecision;

std::complex<double> unit_root(double t) noexcept {
  t -= std::nearbyint(t);
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

double centered_product(std::int64_t k, double beta) noexcept {
  beta -= std::nearbyint(beta);
  const double kd = static_cast<double>(k);
  const double hi = kd * beta;
  const double lo = std::fma(kd, beta, -hi);  // k*beta = hi + lo exactly
  double t = (hi - std::nearbyint(hi)) + lo;
  t -= std::nearbyint(t);
  return t;
}

PhaseContext::PhaseContext(const BigRational& alpha) : alpha_(alpha) {
  den_ = mp::denominator(alpha_);
  num_ = mp::numerator(alpha_) % den_;
  if (num_ < 0) num_ += den_;
  fast_ = den_ < (BigInt(1) << 63);
  if (fast_) {
    fnum_ = num_.convert_to<std::uint64_t>();
    fden_ = den_.convert_to<std::uint64_t>();
  }
}

double PhaseContext::phase(std::int64_t m) const {
  if (fast_) {
    std::uint64_t mm = m >= 0 ? static_cast<std::uint64_t>(m) % fden_
                              : (fden_ - static_cast<std::uint64_t>(-(m + 1)) % fden_ - 1) % fden_;
    auto r = static_cast<std::uint64_t>((static_cast<u128>(fnum_) * mm) % fden_);
    // center into [-1/2, 1/2) before the single rounding step
    if (2 * static_cast<u128>(r) >= fden_) {
      return static_cast<double>(-static_cast<long double>(fden_ - r) / static_cast<long double>(fden_));
    }
    return static_cast<double>(static_cast<long double>(r) / static_cast<long double>(fden_));
  }
  BigInt r = (num_ * m) % den_;
  if (r < 0) r += den_;
  if (2 * r >= den_) r -= den_;
  return to_double(BigRational(r, den_));
}

UnitTable::UnitTable(std::uint64_t q) : q_(q), table_(q) {
  require(q >= 1, ErrorCode::InvalidArgument, "unit table modulus must be positive");
  const long double qd = static_cast<long double>(q);
  for (std::uint64_t k = 0; k < q; ++k) {
    long double t = 2 * k >= q ? -static_cast<long double>(q - k) / qd : static_cast<long double>(k) / qd;
    table_[k] = unit_root(static_cast<double>(t));
  }
}

}  // namespace primexp
