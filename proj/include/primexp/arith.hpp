#pragma once

// Segmented sieving of the arithmetic functions the exponential sums run over.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace primexp {

enum class FnKind : std::uint32_t {
  VonMangoldt = 0,
  Divisor = 1,
  Moebius = 2,
  EulerPhi = 3,
  OmegaDistinct = 4,
  PrimeIndicator = 5,
  One = 6,
  /// Caller-supplied coefficients (random signs, zero tables, ...).
  Custom = 7,
};

std::string_view to_string(FnKind kind) noexcept;
/// Accepts the canonical names plus the short aliases used on the command line
/// ("lambda", "tau", "mu", "phi", "omega", "prime", "one").
FnKind parse_fn_kind(std::string_view name);

/// Values of one arithmetic function on [lo, hi]. Immutable once built.
class ArithTable {
 public:
  ArithTable(FnKind kind, std::uint64_t lo, std::vector<double> values);

  FnKind kind() const noexcept { return kind_; }
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return lo_ + values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  /// f(n); n must lie in [lo, hi].
  double operator()(std::uint64_t n) const noexcept { return values_[n - lo_]; }

  bool covers(std::uint64_t first, std::uint64_t last) const noexcept {
    return first > last || (first >= lo_ && last <= hi());
  }

  /// Calls fn(n, f(n)) for every n in [first, last] with f(n) != 0, in increasing n.
  template <class Fn>
  void for_each_nonzero(std::uint64_t first, std::uint64_t last, Fn&& fn) const {
    if (first > last) return;
    if (sparse_) {
      auto begin = std::lower_bound(support_.begin(), support_.end(), first);
      for (auto it = begin; it != support_.end() && *it <= last; ++it) fn(*it, values_[*it - lo_]);
    } else {
      for (std::uint64_t n = first; n <= last; ++n) {
        double v = values_[n - lo_];
        if (v != 0.0) fn(n, v);
      }
    }
  }

  double sum_of_squares(std::uint64_t first, std::uint64_t last) const;

 private:
  FnKind kind_;
  std::uint64_t lo_;
  std::vector<double> values_;
  // Sorted support, kept only when at most half the entries are nonzero.
  std::vector<std::uint64_t> support_;
  bool sparse_ = false;
};

struct SieveOptions {
  std::uint64_t max_hi = 100'000'000;
  std::size_t segment_size = std::size_t{1} << 20;
  unsigned threads = 1;
};

ArithTable sieve_table(FnKind kind, std::uint64_t lo, std::uint64_t hi,
                       const SieveOptions& options = {});

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Trial-division factorization for 1 <= n <= 10^12, primes increasing.
Factorization factorize(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;
/// Primes up to `limit` (inclusive) by a plain sieve.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// Binary cache: 32-byte header {magic[8], kind u32, reserved u32, lo u64, hi u64},
// then (hi - lo + 1) little-endian float64 values.
inline constexpr char kCacheMagic[8] = {'P', 'X', 'A', 'R', 'I', 'T', 'H', '1'};

void write_cache(const ArithTable& table, const std::filesystem::path& path);
ArithTable read_cache(const std::filesystem::path& path);
std::filesystem::path cache_path(const std::filesystem::path& dir, FnKind kind,
                                 std::uint64_t lo, std::uint64_t hi);

/// sieve_table backed by the on-disk cache in `dir`; a missing or unreadable
/// cache file is rebuilt.
ArithTable sieve_table_cached(FnKind kind, std::uint64_t lo, std::uint64_t hi,
                              const std::filesystem::path& dir, const SieveOptions& options = {});

}  // namespace primexp
