#include "check_error.hpp"
#include "oracles.hpp"
#include "primexp/arith.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace primexp;

TEST_CASE("sieved tables match trial division up to 10^4") {
  const std::uint64_t hi = 10000;
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, hi);
  const auto tau = sieve_table(FnKind::Divisor, 1, hi);
  const auto mu = sieve_table(FnKind::Moebius, 1, hi);
  const auto phi = sieve_table(FnKind::EulerPhi, 1, hi);
  const auto om = sieve_table(FnKind::OmegaDistinct, 1, hi);
  const auto pr = sieve_table(FnKind::PrimeIndicator, 1, hi);
  const auto one = sieve_table(FnKind::One, 1, hi);
  for (std::uint64_t n = 1; n <= hi; ++n) {
    CHECK(std::abs(lam(n) - static_cast<double>(oracle::lambda(n))) <= 1e-12);
    CHECK(tau(n) == oracle::tau(n));
    CHECK(mu(n) == oracle::mu(n));
    CHECK(phi(n) == oracle::phi(n));
    CHECK(om(n) == oracle::omega(n));
    CHECK(pr(n) == (oracle::is_prime(n) ? 1.0 : 0.0));
    CHECK(one(n) == 1.0);
  }
}

TEST_CASE("sieved tables agree with factorize") {
  const auto tau = sieve_table(FnKind::Divisor, 1, 10000);
  const auto mu = sieve_table(FnKind::Moebius, 1, 10000);
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    std::uint64_t t = 1;
    int m = 1;
    for (auto [p, k] : factorize(n)) {
      t *= k + 1;
      m = k > 1 ? 0 : -m;
    }
    CHECK(tau(n) == t);
    CHECK(mu(n) == m);
  }
}

TEST_CASE("divisor-sum identities") {
  const std::uint64_t hi = 10000;
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, hi);
  const auto mu = sieve_table(FnKind::Moebius, 1, hi);
  std::vector<double> lam_sum(hi + 1, 0.0);
  std::vector<long> mu_sum(hi + 1, 0);
  for (std::uint64_t d = 1; d <= hi; ++d)
    for (std::uint64_t n = d; n <= hi; n += d) {
      lam_sum[n] += lam(d);
      mu_sum[n] += static_cast<long>(mu(d));
    }
  for (std::uint64_t n = 1; n <= hi; ++n) {
    CHECK(std::abs(lam_sum[n] - std::log(static_cast<double>(n))) <= 1e-9 * std::max(1.0, std::log(double(n))));
    CHECK(mu_sum[n] == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("segments equal the monolithic sieve") {
  const std::uint64_t hi = 1000000;
  for (FnKind kind : {FnKind::VonMangoldt, FnKind::Divisor, FnKind::Moebius, FnKind::EulerPhi, FnKind::OmegaDistinct}) {
    const auto full = sieve_table(kind, 1, hi);
    for (auto [lo, top] : {std::pair<std::uint64_t, std::uint64_t>{1, 17}, {999000, 1000000}, {123457, 654321},
                           {524287, 524289}}) {
      const auto seg = sieve_table(kind, lo, top);
      REQUIRE(seg.lo() == lo);
      REQUIRE(seg.hi() == top);
      bool same = true;
      for (std::uint64_t n = lo; n <= top; ++n) same = same && seg(n) == full(n);
      CHECK(same);
    }
    SieveOptions small;
    small.segment_size = 4096;
    small.threads = 3;
    const auto chunked = sieve_table(kind, 1, 200000, small);
    bool same = true;
    for (std::uint64_t n = 1; n <= 200000; ++n) same = same && chunked(n) == full(n);
    CHECK(same);
  }
}

TEST_CASE("sieve examples") {
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 100);
  double psi = 0;
  for (std::uint64_t n = 1; n <= 100; ++n) psi += lam(n);
  CHECK(psi == doctest::Approx(94.04531122935739).epsilon(1e-13));
  CHECK(lam(8) == doctest::Approx(std::log(2.0)));
  CHECK(lam(1) == 0.0);
  CHECK(lam(12) == 0.0);
  CHECK(sieve_table(FnKind::Divisor, 36, 36)(36) == 9);
  CHECK(sieve_table(FnKind::Moebius, 30, 30)(30) == -1);
  CHECK(sieve_table(FnKind::EulerPhi, 1, 1)(1) == 1);
}

TEST_CASE("sieve errors") {
  CHECK_THROWS_CODE(sieve_table(FnKind::Divisor, 0, 10), ErrorCode::InvalidRange);
  CHECK_THROWS_CODE(sieve_table(FnKind::Divisor, 11, 10), ErrorCode::InvalidRange);
  SieveOptions capped;
  capped.max_hi = 1000;
  CHECK_THROWS_CODE(sieve_table(FnKind::Divisor, 1, 1001, capped), ErrorCode::RangeTooLarge);
  CHECK_THROWS_CODE(parse_fn_kind("zeta"), ErrorCode::InvalidArgument);
  CHECK(parse_fn_kind("lambda") == FnKind::VonMangoldt);
  CHECK(parse_fn_kind("tau") == FnKind::Divisor);
}

TEST_CASE("factorize") {
  CHECK(factorize(1).empty());
  CHECK(factorize(12) == Factorization{{2, 2}, {3, 1}});
  CHECK(factorize(999983) == Factorization{{999983, 1}});
  CHECK(factorize(1000000000000ULL) == Factorization{{2, 12}, {5, 12}});
  CHECK(factorize(999999000001ULL) == Factorization{{999999000001ULL, 1}});
  CHECK_THROWS_CODE(factorize(0), ErrorCode::InvalidRange);
  CHECK_THROWS_CODE(factorize(1000000000001ULL), ErrorCode::RangeTooLarge);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    std::vector<std::pair<std::uint64_t, unsigned>> want = oracle::trial_factor(n);
    CHECK(factorize(n) == Factorization(want.begin(), want.end()));
  }
}

TEST_CASE("primes_up_to") {
  const auto ps = primes_up_to(1000);
  CHECK(ps.size() == 168);
  CHECK(ps.front() == 2);
  CHECK(ps.back() == 997);
  CHECK(primes_up_to(1).empty());
}

TEST_CASE("sparse and dense iteration agree") {
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 5000);
  const auto tau = sieve_table(FnKind::Divisor, 1, 5000);
  for (const ArithTable* t : {&lam, &tau}) {
    std::uint64_t count = 0;
    double sum = 0;
    t->for_each_nonzero(100, 4000, [&](std::uint64_t n, double v) {
      CHECK(v == (*t)(n));
      ++count;
      sum += v;
    });
    std::uint64_t want_count = 0;
    double want = 0;
    for (std::uint64_t n = 100; n <= 4000; ++n)
      if ((*t)(n) != 0) {
        ++want_count;
        want += (*t)(n);
      }
    CHECK(count == want_count);
    CHECK(sum == want);
  }
}

TEST_CASE("binary cache round trip and rebuild") {
  const auto dir = std::filesystem::temp_directory_path() / "primexp_test_cache";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto built = sieve_table_cached(FnKind::VonMangoldt, 10, 5000, dir);
  const auto path = cache_path(dir, FnKind::VonMangoldt, 10, 5000);
  REQUIRE(std::filesystem::exists(path));
  CHECK(std::filesystem::file_size(path) == 32 + 8 * (5000 - 10 + 1));
  const auto read = read_cache(path);
  CHECK(read.kind() == FnKind::VonMangoldt);
  CHECK(read.lo() == 10);
  CHECK(read.hi() == 5000);
  for (std::uint64_t n = 10; n <= 5000; ++n) CHECK(read(n) == built(n));

  // corrupt the file: reading fails, the cached sieve rebuilds it
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "garbage";
  }
  CHECK_THROWS_CODE(read_cache(path), ErrorCode::CacheFormat);
  const auto rebuilt = sieve_table_cached(FnKind::VonMangoldt, 10, 5000, dir);
  for (std::uint64_t n = 10; n <= 5000; ++n) CHECK(rebuilt(n) == built(n));
  CHECK_NOTHROW(read_cache(path));
  std::filesystem::remove_all(dir);
}
