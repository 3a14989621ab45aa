#include "primexp/expsum.hpp"

#include "primexp/error.hpp"
#include "primexp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace primexp {

namespace {

void require_covers(const ArithTable& table, std::uint64_t first, std::uint64_t last) {
  require(table.covers(first, last), ErrorCode::TableGap,
          "table [" + std::to_string(table.lo()) + ", " + std::to_string(table.hi()) +
              "] does not cover [" + std::to_string(first) + ", " + std::to_string(last) + "]");
}

// e((b + t)/2) sin(pi t) / sin(pi b), where b = beta mod 1 and t = y beta mod 1,
// both centered. Equal to E_y(beta) for b != 0.
std::complex<double> kernel_from_reduced(double b, double t, double half_sum) {
  const double ratio = std::sin(std::numbers::pi * t) / std::sin(std::numbers::pi * b);
  return unit_root(half_sum) * ratio;
}

}  // namespace

std::complex<double> geometric_kernel(std::uint64_t y, double beta) {
  require(y >= 1, ErrorCode::InvalidArgument, "kernel length must be positive");
  const double b = beta - std::nearbyint(beta);
  if (b == 0.0) return {static_cast<double>(y), 0.0};
  const double t = centered_product(static_cast<std::int64_t>(y), b);
  return kernel_from_reduced(b, t, 0.5 * (b + t));
}

std::complex<double> geometric_kernel(std::uint64_t y, const BigRational& beta) {
  require(y >= 1, ErrorCode::InvalidArgument, "kernel length must be positive");
  const BigRational b = centered_frac(beta);
  if (b == 0) return {static_cast<double>(y), 0.0};
  const BigRational t = centered_frac(b * y);
  return kernel_from_reduced(to_double(b), to_double(t), to_double((b + t) / 2));
}

std::complex<double> expsum_full(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x) {
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require_covers(table, 1, x);
  ComplexAcc acc;
  table.for_each_nonzero(1, x, [&](std::uint64_t n, double f) {
    acc.add(f * ctx.unit(static_cast<std::int64_t>(n)));
  });
  return acc.value();
}

PrefixSup prefix_sups(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x) {
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require_covers(table, 1, x);
  PrefixSup best{0.0, 0};
  ComplexAcc acc;
  // F is constant between consecutive support points, so each value is
  // attained up to (next support point - 1).
  std::uint64_t pending = 0;  // last support point seen
  double pending_abs = 0.0;
  auto settle = [&](std::uint64_t until) {
    if (until >= 1 && pending_abs >= best.sup) {
      best.sup = pending_abs;
      best.argmax = until;
    }
  };
  table.for_each_nonzero(1, x, [&](std::uint64_t n, double f) {
    settle(n - 1);
    acc.add(f * ctx.unit(static_cast<std::int64_t>(n)));
    pending = n;
    pending_abs = std::abs(acc.value());
  });
  (void)pending;
  settle(x);
  return best;
}

std::complex<double> window_sum(const ArithTable& table, const PhaseContext& ctx, std::int64_t n,
                                std::uint64_t y, std::uint64_t x) {
  const std::int64_t first = std::max<std::int64_t>(n, 0) + 1;
  const std::int64_t last = std::min<std::int64_t>(n + static_cast<std::int64_t>(y), static_cast<std::int64_t>(x));
  ComplexAcc acc;
  if (first > last) return {0.0, 0.0};
  require_covers(table, static_cast<std::uint64_t>(first), static_cast<std::uint64_t>(last));
  table.for_each_nonzero(static_cast<std::uint64_t>(first), static_cast<std::uint64_t>(last),
                         [&](std::uint64_t m, double f) { acc.add(f * ctx.unit(static_cast<std::int64_t>(m))); });
  return acc.value();
}

void for_each_window(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x, std::uint64_t y,
                     std::int64_t n_first, std::int64_t n_last, std::uint64_t resync,
                     const std::function<void(std::int64_t, std::complex<double>)>& visit) {
  require(resync >= 1, ErrorCode::InvalidArgument, "resync must be at least 1");
  require(x >= 1 && y >= 1, ErrorCode::InvalidArgument, "need x, y >= 1");
  require_covers(table, 1, x);
  const auto xi = static_cast<std::int64_t>(x);
  const auto yi = static_cast<std::int64_t>(y);
  auto term = [&](std::int64_t m) -> std::complex<double> {
    if (m < 1 || m > xi) return {0.0, 0.0};
    const double f = table(static_cast<std::uint64_t>(m));
    if (f == 0.0) return {0.0, 0.0};
    return f * ctx.unit(m);
  };
  ComplexAcc window;
  std::uint64_t since_sync = 0;
  for (std::int64_t n = n_first; n <= n_last; ++n) {
    if (n == n_first || since_sync == resync) {
      window = ComplexAcc{};
      window.add(window_sum(table, ctx, n, y, x));
      since_sync = 0;
    } else {
      // slide (n-1, n-1+y] -> (n, n+y]
      window.sub(term(n));
      window.add(term(n + yi));
    }
    ++since_sync;
    visit(n, window.value());
  }
}

WindowAverage window_l2_average(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                std::uint64_t y, const WindowOptions& options) {
  require(x >= 1 && y >= 1, ErrorCode::InvalidArgument, "need x, y >= 1");
  require(y <= x, ErrorCode::YExceedsX, "y = " + std::to_string(y) + " exceeds x = " + std::to_string(x));
  require(options.resync >= 1, ErrorCode::InvalidArgument, "resync must be at least 1");
  require_covers(table, 1, x);

  const std::int64_t n_first = 1 - static_cast<std::int64_t>(y);
  const std::int64_t n_last = static_cast<std::int64_t>(x);
  const std::uint64_t count = x + y;
  const std::uint64_t chunk = options.resync;
  const std::size_t chunks = (count + chunk - 1) / chunk;

  struct Partial {
    RealAcc sum;
    double max = 0.0;
  };
  std::vector<Partial> partials(chunks);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    const std::int64_t lo = n_first + static_cast<std::int64_t>(c * chunk);
    const std::int64_t hi = std::min<std::int64_t>(n_last, lo + static_cast<std::int64_t>(chunk) - 1);
    Partial& p = partials[c];
    for_each_window(table, ctx, x, y, lo, hi, chunk, [&](std::int64_t, std::complex<double> w) {
      const double mod2 = std::norm(w);
      p.sum.add(mod2);
      p.max = std::max(p.max, std::sqrt(mod2));
    });
  });

  RealAcc total;
  double max_window = 0.0;
  for (const auto& p : partials) {
    total += p.sum;
    max_window = std::max(max_window, p.max);
  }
  WindowAverage out;
  out.x = x;
  out.y = y;
  out.alpha = ctx.alpha();
  out.kind = table.kind();
  out.S = total.value() / static_cast<double>(x);
  out.n_count = count;
  out.max_window = max_window;
  return out;
}

ResidueSums::ResidueSums(const ArithTable& table, std::uint64_t q, std::uint64_t x)
    : q_(q), x_(x), sums_(q, 0.0) {
  require(q >= 1, ErrorCode::InvalidArgument, "modulus must be positive");
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require_covers(table, 1, x);
  std::vector<RealAcc> acc(q);
  table.for_each_nonzero(1, x, [&](std::uint64_t m, double f) { acc[m % q].add(f); });
  for (std::uint64_t b = 0; b < q; ++b) sums_[b] = acc[b].value();
}

std::complex<double> ResidueSums::evaluate(std::int64_t a, const UnitTable& units) const {
  const auto q = static_cast<std::int64_t>(q_);
  const auto step = static_cast<std::uint64_t>(((a % q) + q) % q);
  ComplexAcc acc;
  std::uint64_t idx = 0;  // a*b mod q
  for (std::uint64_t b = 0; b < q_; ++b) {
    if (sums_[b] != 0.0) acc.add(sums_[b] * units[idx]);
    idx += step;
    if (idx >= q_) idx -= q_;
  }
  return acc.value();
}

std::complex<double> expsum_at_rational(const ArithTable& table, const Fraction& frac, std::uint64_t x) {
  require(frac.q >= 1, ErrorCode::InvalidArgument, "denominator must be positive");
  const auto q = static_cast<std::uint64_t>(frac.q);
  require(q <= x, ErrorCode::QExceedsX, "q = " + std::to_string(q) + " exceeds x = " + std::to_string(x));
  ResidueSums sums(table, q, x);
  return sums.evaluate(frac.a, UnitTable(q));
}

std::map<std::int64_t, std::complex<double>> batch_rational(const ArithTable& table, std::uint64_t q,
                                                            std::uint64_t x) {
  require(q >= 1, ErrorCode::InvalidArgument, "modulus must be positive");
  require(q <= x, ErrorCode::QExceedsX, "q = " + std::to_string(q) + " exceeds x = " + std::to_string(x));
  ResidueSums sums(table, q, x);
  UnitTable units(q);
  std::map<std::int64_t, std::complex<double>> out;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) out.emplace(static_cast<std::int64_t>(a), sums.evaluate(static_cast<std::int64_t>(a), units));
  return out;
}

std::complex<double> pi_window(const ArithTable& primes, const PhaseContext& ctx, std::int64_t n,
                               std::uint64_t y, std::uint64_t x) {
  require(n >= 0 && static_cast<std::uint64_t>(n) <= x, ErrorCode::InvalidArgument, "need 0 <= n <= x");
  const std::uint64_t first = static_cast<std::uint64_t>(n) + 1;
  const std::uint64_t last = std::min<std::uint64_t>(static_cast<std::uint64_t>(n) + y, x);
  ComplexAcc acc;
  if (first > last) return {0.0, 0.0};
  require_covers(primes, first, last);
  primes.for_each_nonzero(first, last, [&](std::uint64_t p, double) { acc.add(ctx.unit(static_cast<std::int64_t>(p))); });
  return acc.value();
}

}  // namespace primexp
