#pragma once

// The exponential-sum engine: F(x; alpha), the geometric kernel E_y(beta),
// short-interval window sums and their L^2 average, and F(x; a/q) by
// residue-class aggregation.

#include "primexp/arith.hpp"
#include "primexp/dioph.hpp"
#include "primexp/phase.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace primexp {

/// Neumaier-compensated complex accumulator.
class ComplexAcc {
 public:
  void add(std::complex<double> z) noexcept {
    add_component(re_, re_comp_, z.real());
    add_component(im_, im_comp_, z.imag());
    ++terms_;
  }
  void sub(std::complex<double> z) noexcept { add(-z); }

  ComplexAcc& operator+=(const ComplexAcc& other) noexcept {
    add_component(re_, re_comp_, other.re_);
    add_component(re_, re_comp_, other.re_comp_);
    add_component(im_, im_comp_, other.im_);
    add_component(im_, im_comp_, other.im_comp_);
    terms_ += other.terms_;
    return *this;
  }

  std::complex<double> value() const noexcept { return {re_ + re_comp_, im_ + im_comp_}; }
  std::uint64_t terms() const noexcept { return terms_; }

 private:
  static void add_component(double& sum, double& comp, double v) noexcept {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }

  double re_ = 0.0, im_ = 0.0;
  double re_comp_ = 0.0, im_comp_ = 0.0;
  std::uint64_t terms_ = 0;
};

/// Neumaier-compensated real accumulator.
class RealAcc {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  RealAcc& operator+=(const RealAcc& other) noexcept {
    add(other.sum_);
    add(other.comp_);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

/// E_y(beta) = sum_{1 <= n <= y} e(beta n), in closed form.
std::complex<double> geometric_kernel(std::uint64_t y, double beta);
/// Same, with beta exact: the phases y*beta are reduced mod 1 before rounding.
std::complex<double> geometric_kernel(std::uint64_t y, const BigRational& beta);

/// F(x; alpha) = sum_{n <= x} f(n) e(alpha n). The table must cover [1, x].
std::complex<double> expsum_full(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x);

struct PrefixSup {
  double sup = 0.0;
  std::uint64_t argmax = 0;  // largest n <= x attaining the sup
};

/// max_{n <= x} |F(n; alpha)| in one streaming pass.
PrefixSup prefix_sups(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x);

/// F(n, n+y; alpha) with the window clipped to [1, x], by direct summation.
std::complex<double> window_sum(const ArithTable& table, const PhaseContext& ctx, std::int64_t n,
                                std::uint64_t y, std::uint64_t x);

inline constexpr std::uint64_t kDefaultResync = std::uint64_t{1} << 16;

struct WindowOptions {
  std::uint64_t resync = kDefaultResync;
  unsigned threads = 1;
};

struct WindowAverage {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  BigRational alpha;
  FnKind kind = FnKind::Custom;
  /// (1/x) sum_{-y < n <= x} |F(n, n+y; alpha)|^2, windows clipped to [1, x].
  double S = 0.0;
  std::uint64_t n_count = 0;
  /// max over the same windows of |F(n, n+y; alpha)|.
  double max_window = 0.0;
};

/// Sliding-window evaluation with a full recomputation every `resync` windows.
/// Chunks of `resync` windows are independent and reduced in index order, so
/// the result does not depend on the thread count.
WindowAverage window_l2_average(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                std::uint64_t y, const WindowOptions& options = {});

/// Calls visit(n, F(n, n+y; alpha)) for n = n_first, ..., n_last in order,
/// sliding with resynchronisation every `resync` windows.
void for_each_window(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x, std::uint64_t y,
                     std::int64_t n_first, std::int64_t n_last, std::uint64_t resync,
                     const std::function<void(std::int64_t, std::complex<double>)>& visit);

/// Residue-class sums S_b = sum_{m <= x, m = b mod q} f(m), b = 0..q-1.
class ResidueSums {
 public:
  ResidueSums(const ArithTable& table, std::uint64_t q, std::uint64_t x);

  std::uint64_t modulus() const noexcept { return q_; }
  std::uint64_t x() const noexcept { return x_; }
  double operator[](std::uint64_t b) const noexcept { return sums_[b]; }

  /// F(x; a/q) = sum_b e(ab/q) S_b.
  std::complex<double> evaluate(std::int64_t a, const UnitTable& units) const;

 private:
  std::uint64_t q_;
  std::uint64_t x_;
  std::vector<double> sums_;
};

/// F(x; a/q) through residue-class aggregation. Requires q <= x.
std::complex<double> expsum_at_rational(const ArithTable& table, const Fraction& frac, std::uint64_t x);

/// F(x; a/q) for every a in [0, q) coprime to q, from one residue pass.
std::map<std::int64_t, std::complex<double>> batch_rational(const ArithTable& table, std::uint64_t q,
                                                            std::uint64_t x);

/// sum of e(alpha p) over primes p in (n, n+y] intersected with [1, x];
/// `primes` must be a prime-indicator table covering that range.
std::complex<double> pi_window(const ArithTable& primes, const PhaseContext& ctx, std::int64_t n,
                               std::uint64_t y, std::uint64_t x);

}  // namespace primexp
