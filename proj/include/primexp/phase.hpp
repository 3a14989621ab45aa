#pragma once

#include "primexp/dioph.hpp"
#include "primexp/rational.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace primexp {

/// e(t) = exp(2 pi i t) for a real t, after centering t mod 1 into [-1/2, 1/2).
std::complex<double> unit_root(double t) noexcept;

/// frac(k * beta) centered into [-1/2, 1/2), computed from the exact product k * beta.
double centered_product(std::int64_t k, double beta) noexcept;

/// Exact phase bookkeeping for e(alpha m) with a rational alpha = num/den:
/// frac(alpha m) is reduced exactly as (num m mod den)/den, then rounded once.
class PhaseContext {
 public:
  explicit PhaseContext(const BigRational& alpha);
  explicit PhaseContext(const AlphaSpec& alpha) : PhaseContext(alpha.value()) {}

  const BigRational& alpha() const noexcept { return alpha_; }

  /// frac(alpha m) in [-1/2, 1/2).
  double phase(std::int64_t m) const;
  /// e(alpha m).
  std::complex<double> unit(std::int64_t m) const { return unit_root(phase(m)); }

  /// Context for alpha + beta, exactly.
  PhaseContext shifted(const BigRational& beta) const { return PhaseContext(alpha_ + beta); }

  /// True when den < 2^63 and the 128-bit reduction path is used.
  bool fast() const noexcept { return fast_; }

 private:
  BigRational alpha_;
  BigInt num_;  // in [0, den)
  BigInt den_;
  bool fast_ = false;
  std::uint64_t fnum_ = 0;
  std::uint64_t fden_ = 1;
};

/// e(k/q) for k = 0..q-1, each value computed from the centered fraction.
class UnitTable {
 public:
  explicit UnitTable(std::uint64_t q);
  std::uint64_t modulus() const noexcept { return q_; }
  const std::complex<double>& operator[](std::uint64_t k) const noexcept { return table_[k]; }

 private:
  std::uint64_t q_;
  std::vector<std::complex<double>> table_;
};

}  // namespace primexp
