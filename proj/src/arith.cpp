#include "primexp/arith.hpp"

#include "primexp/error.hpp"
#include "primexp/parallel.hpp"

#include <cmath>
#include <string>

namespace primexp {

std::string_view to_string(FnKind kind) noexcept {
  switch (kind) {
    case FnKind::VonMangoldt: return "von_mangoldt";
    case FnKind::Divisor: return "divisor";
    case FnKind::Moebius: return "moebius";
    case FnKind::EulerPhi: return "euler_phi";
    case FnKind::OmegaDistinct: return "omega";
    case FnKind::PrimeIndicator: return "prime_indicator";
    case FnKind::One: return "one";
    case FnKind::Custom: return "custom";
  }
  return "custom";
}

FnKind parse_fn_kind(std::string_view name) {
  if (name == "von_mangoldt" || name == "lambda" || name == "Lambda") return FnKind::VonMangoldt;
  if (name == "divisor" || name == "tau") return FnKind::Divisor;
  if (name == "moebius" || name == "mu") return FnKind::Moebius;
  if (name == "euler_phi" || name == "phi") return FnKind::EulerPhi;
  if (name == "omega") return FnKind::OmegaDistinct;
  if (name == "prime_indicator" || name == "prime") return FnKind::PrimeIndicator;
  if (name == "one") return FnKind::One;
  throw Error(ErrorCode::InvalidArgument, "unknown function kind '" + std::string(name) + "'");
}

ArithTable::ArithTable(FnKind kind, std::uint64_t lo, std::vector<double> values)
    : kind_(kind), lo_(lo), values_(std::move(values)) {
  require(lo_ >= 1, ErrorCode::InvalidRange, "table must start at n >= 1");
  require(!values_.empty(), ErrorCode::InvalidRange, "empty table");
  std::size_t nonzero = 0;
  for (double v : values_) nonzero += (v != 0.0);
  if (2 * nonzero <= values_.size()) {
    sparse_ = true;
    support_.reserve(nonzero);
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] != 0.0) support_.push_back(lo_ + i);
  }
}

double ArithTable::sum_of_squares(std::uint64_t first, std::uint64_t last) const {
  double sum = 0.0, comp = 0.0;
  for_each_nonzero(first, last, [&](std::uint64_t, double v) {
    double t = sum + v * v;
    comp += std::abs(sum) >= v * v ? (sum - t) + v * v : (v * v - t) + sum;
    sum = t;
  });
  return sum + comp;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

Factorization factorize(std::uint64_t n) {
  require(n >= 1, ErrorCode::InvalidRange, "factorize needs n >= 1");
  require(n <= 1'000'000'000'000ULL, ErrorCode::RangeTooLarge, "factorize is capped at 10^12");
  Factorization out;
  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Sieves one segment [first, last] by smallest-prime-factor propagation: every
// base prime strips its full power from the cofactor of each multiple, and the
// leftover cofactor (if > 1) is the single prime factor above sqrt(last).
void sieve_segment(FnKind kind, std::uint64_t first, std::uint64_t last,
                   const std::vector<std::uint32_t>& base_primes, std::span<double> out) {
  const std::size_t len = last - first + 1;
  std::vector<std::uint64_t> rem(len);
  std::vector<std::int64_t> acc(len, 1);  // tau, mu, phi or omega
  std::vector<double> lambda;
  if (kind == FnKind::OmegaDistinct) std::fill(acc.begin(), acc.end(), 0);
  if (kind == FnKind::VonMangoldt) lambda.assign(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) rem[i] = first + i;

  for (std::uint32_t p32 : base_primes) {
    const std::uint64_t p = p32;
    if (p * p > last) break;
    std::uint64_t start = ((first + p - 1) / p) * p;
    for (std::uint64_t m = start; m <= last; m += p) {
      const std::size_t i = m - first;
      unsigned e = 0;
      std::uint64_t pe = 1;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        pe *= p;
        ++e;
      }
      switch (kind) {
        case FnKind::VonMangoldt:
          if (pe == m) lambda[i] = std::log(static_cast<double>(p));
          break;
        case FnKind::Divisor: acc[i] *= static_cast<std::int64_t>(e + 1); break;
        case FnKind::Moebius: acc[i] = e >= 2 ? 0 : -acc[i]; break;
        case FnKind::EulerPhi: acc[i] *= static_cast<std::int64_t>(pe / p * (p - 1)); break;
        case FnKind::OmegaDistinct: acc[i] += 1; break;
        case FnKind::PrimeIndicator: acc[i] = (pe == m && e == 1) ? 1 : 0; break;
        default: break;
      }
    }
  }

  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t m = first + i;
    const std::uint64_t r = rem[i];
    const bool big_prime = r > 1;
    switch (kind) {
      case FnKind::VonMangoldt:
        out[i] = (big_prime && r == m) ? std::log(static_cast<double>(m)) : lambda[i];
        break;
      case FnKind::Divisor: out[i] = static_cast<double>(big_prime ? 2 * acc[i] : acc[i]); break;
      case FnKind::Moebius: out[i] = static_cast<double>(big_prime ? -acc[i] : acc[i]); break;
      case FnKind::EulerPhi:
        out[i] = static_cast<double>(big_prime ? acc[i] * static_cast<std::int64_t>(r - 1) : acc[i]);
        break;
      case FnKind::OmegaDistinct: out[i] = static_cast<double>(big_prime ? acc[i] + 1 : acc[i]); break;
      case FnKind::PrimeIndicator:
        // acc is zeroed by any proper prime-power divisor, so it stays 1 only for primes and 1.
        out[i] = (m >= 2 && acc[i] == 1) ? 1.0 : 0.0;
        break;
      default: out[i] = 1.0; break;
    }
  }
}

}  // namespace

ArithTable sieve_table(FnKind kind, std::uint64_t lo, std::uint64_t hi, const SieveOptions& options) {
  require(lo >= 1 && lo <= hi, ErrorCode::InvalidRange,
          "need 1 <= lo <= hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  require(hi <= options.max_hi, ErrorCode::RangeTooLarge,
          "hi = " + std::to_string(hi) + " exceeds cap " + std::to_string(options.max_hi));
  require(kind != FnKind::Custom, ErrorCode::InvalidArgument, "custom tables are built directly");
  std::vector<double> values(hi - lo + 1);
  if (kind == FnKind::One) {
    std::fill(values.begin(), values.end(), 1.0);
    return ArithTable(kind, lo, std::move(values));
  }
  const auto base = primes_up_to(static_cast<std::uint32_t>(isqrt(hi)));
  const std::size_t seg = std::max<std::size_t>(options.segment_size, 1);
  const std::size_t segments = (values.size() + seg - 1) / seg;
  parallel_for(segments, options.threads, [&](std::size_t s) {
    const std::uint64_t first = lo + s * seg;
    const std::uint64_t last = std::min<std::uint64_t>(hi, first + seg - 1);
    sieve_segment(kind, first, last, base,
                  std::span<double>(values).subspan(first - lo, last - first + 1));
  });
  return ArithTable(kind, lo, std::move(values));
}

}  // namespace primexp
