#include "check_error.hpp"
#include "oracles.hpp"
#include "primexp/dioph.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <random>

using namespace primexp;
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

namespace {

Real true_value(const AlphaSource& s) {
  switch (s.kind) {
    case AlphaKind::Sqrt:
      return boost::multiprecision::sqrt(Real(s.d));
    case AlphaKind::GoldenRatio:
      return (1 + boost::multiprecision::sqrt(Real(5))) / 2;
    case AlphaKind::EulerE:
      return boost::multiprecision::exp(Real(1));
    case AlphaKind::Pi:
      return boost::math::constants::pi<Real>();
    default:
      return Real(s.rational);
  }
}

Real to_real(const BigRational& r) { return Real(numerator(r)) / Real(denominator(r)); }

std::vector<AlphaSource> irrational_sources() {
  return {AlphaSource::golden(), AlphaSource::sqrt(2), AlphaSource::sqrt(3), AlphaSource::sqrt(7),
          AlphaSource::sqrt(61), AlphaSource::euler_e(), AlphaSource::pi()};
}

}  // namespace

TEST_CASE("realize_alpha examples") {
  auto g = realize_alpha(AlphaSource::golden(), 10);
  CHECK(g.P == 21);
  CHECK(g.Q == 13);
  auto r = realize_alpha(AlphaSource::exact(BigRational(1, 3)), 1000);
  CHECK(r.P == 1);
  CHECK(r.Q == 3);
  auto s = realize_alpha(AlphaSource::sqrt(2), 100);
  CHECK(s.P == 239);
  CHECK(s.Q == 169);
  CHECK_THROWS_CODE(realize_alpha(AlphaSource::sqrt(49), 10), ErrorCode::DIsSquare);
  CHECK_THROWS_CODE(realize_alpha(AlphaSource::golden(), BigInt(1) << 257), ErrorCode::FloorTooLarge);
  CHECK_NOTHROW(realize_alpha(AlphaSource::golden(), BigInt(1) << 256));
}

TEST_CASE("realizations are reduced convergents above the floor") {
  for (const auto& src : irrational_sources()) {
    const Real truth = true_value(src);
    for (BigInt floor : {BigInt(1), BigInt(10), BigInt(1000), BigInt(1000000), BigInt(10000000000LL) * 10000000000LL,
                         BigInt(1) << 200}) {
      if (src.kind == AlphaKind::Pi && floor > (BigInt(1) << 200)) continue;
      const AlphaSpec a = realize_alpha(src, floor);
      CAPTURE(src.label());
      CHECK(a.Q >= floor);
      CHECK(boost::multiprecision::gcd(a.P, a.Q) == 1);
      const Real err = abs(truth - Real(a.P) / Real(a.Q));
      CHECK(err * Real(a.Q) * Real(a.Q) <= 1);
    }
  }
}

TEST_CASE("parse_alpha_source") {
  CHECK(parse_alpha_source("golden").kind == AlphaKind::GoldenRatio);
  CHECK(parse_alpha_source("sqrt:2").d == 2);
  CHECK(parse_alpha_source("sqrt3").d == 3);
  CHECK(parse_alpha_source("e").kind == AlphaKind::EulerE);
  CHECK(parse_alpha_source("pi").kind == AlphaKind::Pi);
  CHECK(parse_alpha_source("1/3").rational == BigRational(1, 3));
  CHECK(parse_alpha_source("rational:355/113").rational == BigRational(355, 113));
  CHECK(thrown_code([] { parse_alpha_source("banana"); }).has_value());
}

TEST_CASE("continued fraction examples") {
  auto g = continued_fraction(realize_alpha(AlphaSource::golden()), 5);
  REQUIRE(g.partial_quotients.size() == 5);
  for (const auto& a : g.partial_quotients) CHECK(a == 1);
  const std::vector<std::pair<int, int>> want{{1, 1}, {2, 1}, {3, 2}, {5, 3}, {8, 5}};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(g.convergents[i].p == want[i].first);
    CHECK(g.convergents[i].q == want[i].second);
  }

  auto r = continued_fraction(exact_alpha(BigRational(355, 113)), 4);
  bool has_22_7 = false;
  for (const auto& c : r.convergents) has_22_7 = has_22_7 || (c.p == 22 && c.q == 7);
  CHECK(has_22_7);

  auto third = continued_fraction(exact_alpha(BigRational(1, 3)), 10);
  CHECK(third.convergents.back().p == 1);
  CHECK(third.convergents.back().q == 3);
  CHECK(third.partial_quotients.size() < 10);

  auto pi = continued_fraction(realize_alpha(AlphaSource::pi()), 5);
  const std::vector<int> pi_q{3, 7, 15, 1, 292};
  for (std::size_t i = 0; i < 5; ++i) CHECK(pi.partial_quotients[i] == pi_q[i]);

  auto e = continued_fraction(realize_alpha(AlphaSource::euler_e()), 11);
  const std::vector<int> e_q{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1};
  for (std::size_t i = 0; i < 11; ++i) CHECK(e.partial_quotients[i] == e_q[i]);

  auto s61 = continued_fraction(realize_alpha(AlphaSource::sqrt(61)), 12);
  const std::vector<int> s61_q{7, 1, 4, 3, 1, 2, 2, 1, 3, 4, 1, 14};
  for (std::size_t i = 0; i < 12; ++i) CHECK(s61.partial_quotients[i] == s61_q[i]);
}

TEST_CASE("convergent determinant identity and increasing denominators") {
  std::vector<AlphaSpec> specs;
  for (const auto& src : irrational_sources()) specs.push_back(realize_alpha(src));
  specs.push_back(exact_alpha(BigRational(BigInt("123456789012345678901"), BigInt("98765432109876543"))));
  for (const auto& a : specs) {
    const auto cf = continued_fraction(a, 120);
    const Real truth = a.source.is_rational() ? to_real(a.value()) : true_value(a.source);
    for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
      const auto& c = cf.convergents[k];
      const auto& p = cf.convergents[k - 1];
      CHECK(c.p * p.q - p.p * c.q == (k % 2 == 1 ? 1 : -1));
      if (k >= 2) CHECK(c.q > p.q);
      CHECK(abs(truth - Real(c.p) / Real(c.q)) * Real(c.q) * Real(c.q) <= 1);
    }
  }
}

TEST_CASE("approx_quality against brute force") {
  auto third = approx_quality(exact_alpha(BigRational(1, 3)), 100);
  CHECK(third.R == 3);
  CHECK(third.witness == Fraction{1, 3});

  std::vector<AlphaSpec> specs{exact_alpha(BigRational(5, 17)), exact_alpha(BigRational(1, 2) + BigRational(1, 1000000))};
  for (const auto& src : irrational_sources()) specs.push_back(realize_alpha(src, BigInt(1) << 80));
  for (const auto& a : specs) {
    for (std::uint64_t x : {2ULL, 3ULL, 10ULL, 97ULL, 1000ULL, 4096ULL, 100000ULL}) {
      const auto got = approx_quality(a, x);
      BigRational best(-1);
      for (std::uint64_t q = 1; q * q <= 4 * x + 4; ++q) {
        const BigInt base = floor(a.value() * q);
        for (BigInt c = base - 1; c <= base + 2; ++c) {
          if (boost::multiprecision::gcd(c, BigInt(q)) != 1) continue;
          BigRational d = a.value() - BigRational(c, q);
          if (d < 0) d = -d;
          BigRational R = d * q * x;
          if (R < q) R = q;
          if (best < 0 || R < best) best = R;
        }
      }
      CAPTURE(x);
      CHECK(got.R == best);
      CHECK(BigRational(got.R * got.R) <= BigRational(x));
      BigRational d = a.value() - got.witness.value();
      if (d < 0) d = -d;
      CHECK(got.witness.q <= got.R);
      CHECK(d <= got.R / (BigRational(got.witness.q) * x));
    }
  }
  auto exact = approx_quality(exact_alpha(BigRational(7, 31)), 31 * 31);
  CHECK(exact.R == 31);
}

TEST_CASE("major_arcs equals the exhaustive scan") {
  std::vector<AlphaSpec> specs{exact_alpha(BigRational(1, 3)), exact_alpha(BigRational(2, 7) + BigRational(1, 500))};
  for (const auto& src : {AlphaSource::golden(), AlphaSource::sqrt(2), AlphaSource::pi()})
    specs.push_back(realize_alpha(src, BigInt(1000000)));
  for (const auto& a : specs)
    for (std::uint64_t Q : {1ULL, 7ULL, 60ULL, 200ULL})
      for (std::uint64_t y : {1ULL, 3ULL, 10ULL, 100ULL, 10000ULL}) {
        const auto got = major_arcs(a, Q, y);
        const auto want = oracle::major_arcs(a.value(), Q, y);
        REQUIRE(got.fractions.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
          CHECK(got.fractions[i].a == want[i].first);
          CHECK(got.fractions[i].q == want[i].second);
        }
        CHECK(std::is_sorted(got.fractions.begin(), got.fractions.end()));
      }
}

TEST_CASE("major_arcs examples and JSON") {
  auto third = major_arcs(exact_alpha(BigRational(1, 3)), 10, 10);
  CHECK(std::find(third.fractions.begin(), third.fractions.end(), Fraction{1, 3}) != third.fractions.end());
  // alpha = u/s + 1/(2y) with s < y/Q has no major arcs of height Q
  auto empty = major_arcs(exact_alpha(BigRational(1, 2) + BigRational(1, 80)), 10, 40);
  CHECK(empty.fractions.empty());
  CHECK(oracle::major_arcs(BigRational(1, 2) + BigRational(1, 80), 10, 40).empty());

  const auto back = major_arcs_from_json(to_json(third));
  CHECK(back.Q == 10);
  CHECK(back.y == 10);
  CHECK(back.fractions == third.fractions);
  CHECK(to_json(major_arcs(exact_alpha(BigRational(0)), 2, 1)) ==
        R"({"Q":2,"y":1,"fractions":[{"a":0,"q":1}]})");
  CHECK_THROWS_CODE(major_arcs_from_json("{\"Q\":1}"), ErrorCode::InvalidArgument);
}

TEST_CASE("Bezout partner and mediant family") {
  auto bp = bezout_partner(Fraction{1, 2});
  CHECK(bp.t == 3);
  CHECK(bp.v == 2);
  auto fam = mediant_family(Fraction{1, 2}, 20);
  CHECK(std::find(fam.begin(), fam.end(), Fraction{17, 28}) != fam.end());

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t s = 1 + static_cast<std::int64_t>(rng() % 60);
    std::int64_t u = static_cast<std::int64_t>(rng() % (3 * s)) - s;
    while (std::gcd(u < 0 ? -u : u, s) != 1) ++u;
    const Fraction us{u, s};
    const auto [v, t] = bezout_partner(us);
    CHECK(v * s - t * u == 1);
    CHECK(s <= t);
    CHECK(t < 2 * s);
    const std::uint64_t Q = 8 * static_cast<std::uint64_t>(s) + rng() % 400;
    const auto family = mediant_family(us, Q);
    const BigRational lo = std::min(us.value(), BigRational(v, t)), hi = std::max(us.value(), BigRational(v, t));
    for (const auto& f : family) {
      CHECK(std::gcd(f.a < 0 ? -f.a : f.a, f.q) == 1);
      CHECK(static_cast<std::uint64_t>(f.q) > Q);
      CHECK(static_cast<std::uint64_t>(f.q) <= 2 * Q);
      CHECK(f.value() >= lo);
      CHECK(f.value() <= hi);
    }
    CHECK(std::adjacent_find(family.begin(), family.end()) == family.end());
    // density: |family| / (Q/s)^2 stays bounded away from 0
    const double density = family.size() / std::pow(double(Q) / double(s), 2.0);
    CHECK(density > 0.01);
    CHECK(density < 1.0);
  }
  CHECK_THROWS_CODE(mediant_family(Fraction{1, 5}, 39), ErrorCode::QTooSmall);
}

TEST_CASE("squarefree major arcs") {
  const auto third = exact_alpha(BigRational(1, 3));
  const auto got = squarefree_major_arcs(third, 10, 3);
  std::vector<Fraction> want;
  for (std::int64_t q = 11; q <= 20; ++q) {
    if (oracle::mu(q) == 0) continue;
    for (std::int64_t a = -q; a <= 2 * q; ++a) {
      if (std::gcd(a < 0 ? -a : a, q) != 1) continue;
      BigRational d = BigRational(1, 3) - BigRational(a, q);
      if (d < 0) d = -d;
      if (d <= BigRational(2, 9)) want.push_back(Fraction{a, q});
    }
  }
  CHECK(got.fractions == want);
  CHECK(got.count == want.size());

  const auto s2 = realize_alpha(AlphaSource::sqrt(2), BigInt(1) << 64);
  const auto cf = continued_fraction(s2, 6);  // denominator 70
  const std::uint64_t s = cf.convergents.back().q.convert_to<std::uint64_t>();
  const auto sq = squarefree_major_arcs(s2, 1000, s, false);
  REQUIRE(s == 70);
  CHECK(sq.count > 0);
  // subset of the unrestricted scan
  std::uint64_t unrestricted = 0;
  const BigRational alpha = s2.value();
  for (std::int64_t q = 1001; q <= 2000; ++q) {
    const BigInt base = floor(alpha * q);
    for (BigInt a = base - 2 * q; a <= base + 2 * q; ++a) {
      if (boost::multiprecision::gcd(a, BigInt(q)) != 1) continue;
      BigRational d = alpha - BigRational(a, q);
      if (d < 0) d = -d;
      if (d * s * s <= 2) ++unrestricted;
    }
  }
  CHECK(sq.count <= unrestricted);
  CHECK_THROWS_CODE(squarefree_major_arcs(third, 1000001, 3), ErrorCode::RangeTooLarge);
}

TEST_CASE("admissible window") {
  const auto g = realize_alpha(AlphaSource::golden(), BigInt(1) << 64);
  const auto w = admissible_window(g, BigRational(1, 24), 13);
  CHECK(w.s == 13);
  CHECK(w.u == 21);
  CHECK(w.y_lo == 8);
  CHECK(w.y_hi == 14);
  const auto big = admissible_window(g, BigRational(1, 24), 1000);
  CHECK(big.s == 1597);
  CHECK(BigRational(big.y_lo) >= BigRational(1597 * 1597, 24));
  CHECK(big.y_hi == 1597 * 1597 / 12);
  CHECK_THROWS_CODE(admissible_window(g, BigRational(1, 24), 1), ErrorCode::EmptyWindow);
  CHECK_THROWS_CODE(admissible_window(exact_alpha(BigRational(1, 3)), BigRational(1, 24), 1),
                    ErrorCode::InvalidArgument);
  CHECK_THROWS_CODE(admissible_window(g, BigRational(1, 11), 13), ErrorCode::InvalidArgument);
}
