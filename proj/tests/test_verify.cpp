#include "check_error.hpp"
#include "oracles.hpp"
#include "primexp/constants.hpp"
#include "primexp/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <random>
#include <sstream>

using namespace primexp;

namespace {

ArithTable random_signs(std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = (rng() & 1) ? 1.0 : -1.0;
  return ArithTable(FnKind::Custom, 1, std::move(v));
}

}  // namespace

TEST_CASE("Farey points") {
  const auto pts = farey_points(10);
  CHECK(pts.size() == 32);
  CHECK(pts.front() == 0);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] - pts[i - 1] >= BigRational(1, 100));
  CHECK(farey_points(1).size() == 1);
}

TEST_CASE("large sieve against a direct evaluation") {
  const auto f = random_signs(300, 4);
  const auto pts = farey_points(7);
  const auto rep = check_large_sieve(f, 0, 300, pts, BigRational(1, 49));
  long double lhs = 0;
  for (const auto& beta : pts) {
    oracle::cld s = 0;
    for (std::int64_t n = 1; n <= 300; ++n) s += static_cast<long double>(f(n)) * oracle::unit(beta, n);
    lhs += std::norm(s);
  }
  CHECK(rep.lhs == doctest::Approx(static_cast<double>(lhs)).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx((300 + 49) * 300.0));
  CHECK(rep.passed);
  CHECK(rep.number("l2_mass") == 300.0);

  // shifted interval
  const auto g = sieve_table(FnKind::VonMangoldt, 1, 5000);
  CHECK(check_large_sieve(g, 1000, 4000, farey_points(40), BigRational(1, 1600)).passed);

  // separation is checked mod 1, including wrap-around
  const std::vector<BigRational> close{BigRational(1, 10), BigRational(1, 9)};
  CHECK_THROWS_CODE(check_large_sieve(f, 0, 10, close, BigRational(1, 50)), ErrorCode::SeparationViolated);
  const std::vector<BigRational> wrap{BigRational(0), BigRational(99, 100)};
  CHECK_THROWS_CODE(check_large_sieve(f, 0, 10, wrap, BigRational(1, 50)), ErrorCode::SeparationViolated);
  const std::vector<BigRational> shifted{BigRational(5, 4), BigRational(1, 2)};
  CHECK_NOTHROW(check_large_sieve(f, 0, 10, shifted, BigRational(1, 4)));
  CHECK_THROWS_CODE(check_large_sieve(f, 0, 400, pts, BigRational(1, 49)), ErrorCode::TableGap);
}

TEST_CASE("window transform identity") {
  const auto one = sieve_table(FnKind::One, 1, 10000);
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 10000);
  auto trivial = check_window_transform(one, PhaseContext(BigRational(0)), 5, 2, BigRational(1, 3));
  CHECK(trivial.passed);
  // both sides by direct summation
  oracle::cld lhs = 0;
  for (std::int64_t n = -1; n < 5; ++n) {
    oracle::cld w = 0;
    for (std::int64_t m = std::max<std::int64_t>(n + 1, 1); m <= std::min<std::int64_t>(n + 2, 5); ++m) w += 1;
    lhs += w * oracle::unit(BigRational(1, 3), n);
  }
  CHECK(trivial.number("lhs_re") == doctest::Approx(static_cast<double>(lhs.real())));
  CHECK(trivial.number("lhs_im") == doctest::Approx(static_cast<double>(lhs.imag())));

  const auto s2 = realize_alpha(AlphaSource::sqrt(2), BigInt(10000) * 10000);
  for (const BigRational& beta : {BigRational(0), BigRational(1, 3), BigRational(12345, 98765), BigRational(-7, 2)}) {
    auto rep = check_window_transform(lam, PhaseContext(s2), 10000, 50, beta);
    CHECK(rep.passed);
    CHECK(rep.number("rel_error") < 1e-9);
  }
}

TEST_CASE("initial chain") {
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 10000);
  const auto g = realize_alpha(AlphaSource::golden(), BigInt(10000) * 10000);
  const PhaseContext ctx(g);
  const auto rep = check_initial_chain(lam, ctx, 10000, 21, 100);
  CHECK(rep.passed);
  const double L = rep.number("L"), M = rep.number("M"), A = rep.number("A");
  CHECK(L >= M);
  CHECK(M >= A);
  const auto terms = oracle::terms(g.value(), 10000, [&](std::uint64_t m) { return static_cast<long double>(lam(m)); });
  CHECK(L == doctest::Approx(static_cast<double>(oracle::window_average(terms, 21) * 10000)).epsilon(1e-9));
  CHECK(rep.number("major_arcs") == static_cast<double>(major_arcs(g, 100, 21).fractions.size()));

  // the spectrum overload gives the same numbers
  const RationalSpectrum spec(lam, 10000, 100);
  const auto again = check_initial_chain(lam, ctx, spec, 21);
  CHECK(again.number("M") == M);
  // spectrum entries are |F(x; a/q)|^2
  const auto direct = expsum_at_rational(lam, Fraction{3, 7}, 10000);
  CHECK(spec.norm(3, 7) == doctest::Approx(std::norm(direct)).epsilon(1e-12));
  CHECK(spec.norm(10, 7) == spec.norm(3, 7));
  CHECK_THROWS_CODE(spec.norm(2, 4), ErrorCode::NonCoprime);

  CHECK_THROWS_CODE(check_initial_chain(lam, ctx, 10000, 21, 101), ErrorCode::QExceedsSqrtX);
  CHECK_THROWS_CODE(check_initial_chain(lam, ctx, 100, 101, 10), ErrorCode::YExceedsX);
}

TEST_CASE("coprime count and the G(Q) estimate") {
  const auto rep = check_coprime_count(30, 10, realize_alpha(AlphaSource::golden(), 30));
  CHECK(rep.passed);
  // exhaustive count
  const BigRational alpha = realize_alpha(AlphaSource::golden(), 30).value();
  int count = 0;
  for (std::int64_t a = -100; a <= 200; ++a) {
    if (std::gcd(a < 0 ? -a : a, std::int64_t{30}) != 1) continue;
    BigRational d = alpha - BigRational(a, 30);
    if (d < 0) d = -d;
    if (d * 60 <= 1) ++count;
  }
  CHECK(rep.lhs == count);
  CHECK(rep.rhs == doctest::Approx(8.0 / 30.0));

  const auto gg = check_goal_g(100000, 0.5);
  double want = 0;
  const auto q_first = static_cast<std::uint64_t>(gg.number("q_first"));
  for (std::uint64_t q = q_first; q <= 100000; ++q)
    if (oracle::mu(q) != 0) want += 1.0 / oracle::phi(q);
  CHECK(gg.lhs == doctest::Approx(want).epsilon(1e-12));
  CHECK(gg.passed);
  CHECK_THROWS_CODE(check_goal_g(10, 0.5), ErrorCode::InvalidArgument);
}

TEST_CASE("Bombieri-Vinogradov style average") {
  const auto rep = bv_average(100000, 40);
  CHECK(rep.check_name == "bv_average");
  CHECK(std::isfinite(rep.number("normalized_A1")));
  CHECK(std::isfinite(rep.number("normalized_A3")));
  CHECK_THROWS_CODE(bv_average(100000, 47), ErrorCode::InvalidArgument);
  CHECK_THROWS_CODE(bv_average(10000001, 2), ErrorCode::RangeTooLarge);
}

TEST_CASE("character decomposition of F(x; a/q)") {
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 100000);
  for (auto [q, a] : {std::pair<std::uint64_t, std::int64_t>{1, 0}, {4, 1}, {4, 3}, {12, 5}, {105, 52}, {101, 7}}) {
    const auto rep = check_grh_decomposition(lam, q, a, 100000);
    CAPTURE(q);
    CHECK(rep.passed);
    CHECK(rep.number("rel_error") < 1e-10);
  }
  CHECK_THROWS_CODE(check_grh_decomposition(lam, 10001, 1, 100000), ErrorCode::QTooLarge);
  CHECK_THROWS_CODE(check_grh_decomposition(lam, 12, 4, 100000), ErrorCode::NonCoprime);
}

TEST_CASE("divisor sums at rationals") {
  const auto tau = sieve_table(FnKind::Divisor, 1, 100000);
  const auto reps = check_tau_rational(tau, 100000, {1, 2, 7, 30, 100, 316});
  REQUIRE(reps.size() == 6);
  for (const auto& r : reps) {
    CHECK(r.passed);
    CHECK(r.number("normalized_error") <= 10);
  }
  const double main7 = 100000.0 / 7 * (std::log(100000.0 / 49) + 2 * constants::kEulerGamma - 1);
  CHECK(reps[2].number("main_term") == doctest::Approx(main7));
  CHECK(reps[2].number("a_scanned") == 6);
  CHECK_THROWS_CODE(check_tau_rational(tau, 100000, {317}), ErrorCode::QTooLarge);
}

TEST_CASE("hyperbola identity") {
  const auto rep = check_hyperbola(16, Fraction{0, 1});
  CHECK(rep.passed);
  CHECK(rep.lhs == doctest::Approx(50.0));
  std::uint64_t sum = 0;
  for (std::uint64_t n = 1; n <= 16; ++n) sum += oracle::tau(n);
  CHECK(sum == 50);
  for (auto f : {Fraction{1, 3}, Fraction{5, 12}, Fraction{-2, 97}}) {
    const auto r = check_hyperbola(10000, f);
    CHECK(r.passed);
    oracle::cld direct = 0;
    for (std::int64_t n = 1; n <= 10000; ++n)
      direct += static_cast<long double>(oracle::tau(n)) * oracle::unit(f.value(), n);
    CHECK(r.lhs == doctest::Approx(static_cast<double>(std::abs(direct))).epsilon(1e-9));
  }
  CHECK_THROWS_CODE(check_hyperbola(100, Fraction{1, 11}), ErrorCode::QExceedsSqrtX);
}

TEST_CASE("sup lower bound and prime windows") {
  const auto lam = sieve_table(FnKind::VonMangoldt, 1, 100000);
  const auto primes = sieve_table(FnKind::PrimeIndicator, 1, 100000);
  const auto g = realize_alpha(AlphaSource::golden(), BigInt(100000) * 100000);
  const auto rep = check_sup_lower_bound(lam, PhaseContext(g), 100000, 46);
  CHECK(rep.passed);
  CHECK(rep.number("windows_ok") == 1);
  CHECK(rep.lhs >= rep.number("rigorous_rhs"));
  CHECK(rep.number("rigorous_rhs") <= rep.rhs);

  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 2500; n <= 100000; n += 997) grid.push_back(n);
  CHECK(check_pi_psi_window(lam, primes, PhaseContext(g), 100000, 50, grid).passed);
  CHECK_THROWS_CODE(check_pi_psi_window(lam, primes, PhaseContext(g), 100000, 50, {2499}),
                    ErrorCode::GridViolatesPrecondition);
  CHECK_THROWS_CODE(check_pi_psi_window(lam, primes, PhaseContext(g), 100000, 1, {1}),
                    ErrorCode::GridViolatesPrecondition);
}

TEST_CASE("report serialization") {
  CheckReport r;
  r.check_name = "demo";
  r.set("b", std::int64_t{2}).set("a", 0.5).set("s", std::string("x/y"));
  r.lhs = std::numeric_limits<double>::infinity();
  r.rhs = 0;
  r.ratio = safe_ratio(1, 0);
  r.passed = true;
  const auto j = nlohmann::ordered_json::parse(to_json_line(r));
  CHECK(j["check_name"] == "demo");
  CHECK(j["lhs"].is_null());
  CHECK(j["ratio"].is_null());
  CHECK(j["passed"] == true);
  std::vector<std::string> keys;
  for (auto it = j["parameters"].begin(); it != j["parameters"].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"b", "a", "s"});
  CHECK(std::isnan(r.number("s")));
  CHECK(r.number("b") == 2);
  r.set("b", std::int64_t{3});
  CHECK(r.number("b") == 3);
  std::ostringstream os;
  write_json_lines(os, {r, r});
  const std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
