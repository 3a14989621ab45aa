#pragma once

// Exact Diophantine approximation of the phase alpha: continued fractions,
// Vinogradov's R(x, alpha), major-arc sets, and the Bezout/mediant families.

#include "primexp/rational.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace primexp {

/// Reduced fraction a/q with q >= 1.
struct Fraction {
  std::int64_t a = 0;
  std::int64_t q = 1;

  /// Reduces a/q; q must be nonzero (a negative q flips both signs).
  static Fraction make(std::int64_t a, std::int64_t q);

  BigRational value() const { return BigRational(a, q); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  /// Orders by (q, a), the canonical order of every fraction list here.
  friend std::strong_ordering operator<=>(const Fraction& l, const Fraction& r) {
    if (auto c = l.q <=> r.q; c != 0) return c;
    return l.a <=> r.a;
  }
};

std::string to_string(const Fraction& f);
/// Parses "a/q" (or an integer "a" meaning a/1) into a reduced fraction.
Fraction parse_fraction(std::string_view text);

struct BigFraction {
  BigInt p;
  BigInt q;
  BigRational value() const { return BigRational(p, q); }
};

enum class AlphaKind { ExactRational, Sqrt, GoldenRatio, EulerE, Pi };

struct AlphaSource {
  AlphaKind kind = AlphaKind::ExactRational;
  BigRational rational{0};  // ExactRational only
  std::uint64_t d = 0;      // Sqrt only

  static AlphaSource exact(BigRational value);
  static AlphaSource sqrt(std::uint64_t d);
  static AlphaSource golden();
  static AlphaSource euler_e();
  static AlphaSource pi();

  bool is_rational() const noexcept { return kind == AlphaKind::ExactRational; }
  std::string label() const;
};

/// Accepts "golden", "sqrt:d" (or "sqrt2", "sqrt3", ...), "e", "pi",
/// "rational:p/q", or a bare rational literal such as "1/3".
AlphaSource parse_alpha_source(std::string_view text);

/// alpha realized as one exact rational P/Q: alpha itself for rational sources,
/// otherwise the first continued-fraction convergent with Q >= floor, so that
/// |alpha - P/Q| <= 1/Q^2.
struct AlphaSpec {
  AlphaSource source;
  BigInt P;
  BigInt Q{1};
  BigInt floor{1};

  BigRational value() const { return BigRational(P, Q); }
  std::string label() const { return source.label(); }
};

AlphaSpec realize_alpha(const AlphaSource& source, const BigInt& floor = 1);
/// Convenience for a fixed rational phase, e.g. alpha = 1/2 + 1/10^6.
AlphaSpec exact_alpha(const BigRational& value);

struct ConvergentSeq {
  std::vector<BigInt> partial_quotients;
  std::vector<BigFraction> convergents;
};

/// First K partial quotients and convergents. Rational sources stop at the end
/// of their expansion; pi stops where the shipped digits stop certifying.
ConvergentSeq continued_fraction(const AlphaSpec& alpha, std::size_t K);

struct ApproxQuality {
  BigRational R;
  Fraction witness;
};

/// Least R > 0 with some reduced a/q, q <= R, |alpha - a/q| <= R/(qx).
ApproxQuality approx_quality(const AlphaSpec& alpha, std::uint64_t x);

/// The set {a/q : q <= Q, (a, q) = 1, |alpha - a/q| <= 1/(6y)}.
struct MajorArcSet {
  BigRational alpha;
  std::uint64_t Q = 0;
  std::uint64_t y = 0;
  std::vector<Fraction> fractions;  // sorted by (q, a)
};

MajorArcSet major_arcs(const AlphaSpec& alpha, std::uint64_t Q, std::uint64_t y);

std::string to_json(const MajorArcSet& arcs);
/// Reads {"Q":..., "y":..., "fractions":[{"a":..,"q":..}, ...]}; alpha is left 0.
MajorArcSet major_arcs_from_json(std::string_view text);

/// Bezout partner v/t of u/s: v*s - t*u = 1 with s <= t < 2s.
struct BezoutPartner {
  std::int64_t v;
  std::int64_t t;
};
BezoutPartner bezout_partner(const Fraction& us);

inline constexpr std::uint64_t kDefaultMediantConstant = 8;

/// {(a u + b v)/(a s + b t) : Q/(s+t) < a, b <= 2Q/(s+t), (a, b) = 1}, sorted.
/// Every member is reduced, has denominator in (Q, 2Q], and lies between u/s and v/t.
std::vector<Fraction> mediant_family(const Fraction& us, std::uint64_t Q,
                                     std::uint64_t C = kDefaultMediantConstant);

struct SquarefreeArcs {
  std::uint64_t count = 0;
  std::vector<Fraction> fractions;  // empty when collect == false
};

/// Exhaustive scan of reduced a/q with Qlo < q <= 2 Qlo, mu^2(q) = 1 and
/// |alpha - a/q| <= 2/s^2. Qlo is capped at 10^6.
SquarefreeArcs squarefree_major_arcs(const AlphaSpec& alpha, std::uint64_t Qlo, std::uint64_t s,
                                     bool collect = true);

struct AdmissibleWindow {
  BigInt s;
  BigInt u;
  std::uint64_t y_lo = 0;
  std::uint64_t y_hi = 0;
};

/// Smallest convergent denominator s >= s_min of a non-rational alpha, with the
/// integer window [ceil(eps' s^2), floor(s^2 / 12)]. 0 < eps' <= 1/12.
AdmissibleWindow admissible_window(const AlphaSpec& alpha, const BigRational& eps_prime,
                                   const BigInt& s_min);

}  // namespace primexp
