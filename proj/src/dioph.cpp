#include "primexp/dioph.hpp"

#include "primexp/arith.hpp"
#include "primexp/constants.hpp"
#include "primexp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace primexp {

namespace mp = boost::multiprecision;

Fraction Fraction::make(std::int64_t a, std::int64_t q) {
  require(q != 0, ErrorCode::InvalidArgument, "zero denominator");
  if (q < 0) {
    a = -a;
    q = -q;
  }
  const std::int64_t g = std::gcd(a, q);
  return Fraction{a / g, q / g};
}

std::string to_string(const Fraction& f) { return std::to_string(f.a) + "/" + std::to_string(f.q); }

Fraction parse_fraction(std::string_view text) {
  BigRational r = parse_rational(text);
  return Fraction{to_int64(mp::numerator(r)), to_int64(mp::denominator(r))};
}

AlphaSource AlphaSource::exact(BigRational value) {
  AlphaSource s;
  s.kind = AlphaKind::ExactRational;
  s.rational = std::move(value);
  return s;
}

AlphaSource AlphaSource::sqrt(std::uint64_t d) {
  AlphaSource s;
  s.kind = AlphaKind::Sqrt;
  s.d = d;
  return s;
}

AlphaSource AlphaSource::golden() {
  AlphaSource s;
  s.kind = AlphaKind::GoldenRatio;
  return s;
}

AlphaSource AlphaSource::euler_e() {
  AlphaSource s;
  s.kind = AlphaKind::EulerE;
  return s;
}

AlphaSource AlphaSource::pi() {
  AlphaSource s;
  s.kind = AlphaKind::Pi;
  return s;
}

std::string AlphaSource::label() const {
  switch (kind) {
    case AlphaKind::ExactRational: return "rational:" + to_string(rational);
    case AlphaKind::Sqrt: return "sqrt:" + std::to_string(d);
    case AlphaKind::GoldenRatio: return "golden";
    case AlphaKind::EulerE: return "e";
    case AlphaKind::Pi: return "pi";
  }
  return "?";
}

AlphaSource parse_alpha_source(std::string_view text) {
  if (text == "golden" || text == "phi" || text == "golden_ratio") return AlphaSource::golden();
  if (text == "e") return AlphaSource::euler_e();
  if (text == "pi") return AlphaSource::pi();
  if (text.starts_with("sqrt")) {
    std::string_view rest = text.substr(4);
    if (!rest.empty() && (rest[0] == ':' || rest[0] == '(')) rest.remove_prefix(1);
    if (!rest.empty() && rest.back() == ')') rest.remove_suffix(1);
    BigRational d = parse_rational(rest);
    require(mp::denominator(d) == 1 && d > 0, ErrorCode::InvalidArgument,
            "sqrt source needs a positive integer, got '" + std::string(text) + "'");
    return AlphaSource::sqrt(mp::numerator(d).convert_to<std::uint64_t>());
  }
  if (text.starts_with("rational:")) text.remove_prefix(9);
  return AlphaSource::exact(parse_rational(text));
}

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<BigInt> euclid_quotients(BigInt num, BigInt den) {
  std::vector<BigInt> out;
  while (den != 0) {
    BigInt a = floor_div(num, den);
    out.push_back(a);
    BigInt r = num - a * den;
    num = den;
    den = r;
  }
  return out;
}

// Partial quotients of pi certified by the shipped digits: the common prefix of
// the expansions of the two decimal truncations bracketing pi.
const std::vector<BigInt>& certified_pi_quotients() {
  static const std::vector<BigInt> quotients = [] {
    std::string_view digits = constants::kPiDigits;
    std::string all = std::string(digits.substr(0, 1)) + std::string(digits.substr(2));
    BigInt lower(all);
    BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(digits.size() - 2));
    auto lo = euclid_quotients(lower, scale);
    auto hi = euclid_quotients(lower + 1, scale);
    std::vector<BigInt> common;
    for (std::size_t i = 0; i < std::min(lo.size(), hi.size()) && lo[i] == hi[i]; ++i)
      common.push_back(lo[i]);
    // The last common quotient may still be split differently by the true value.
    if (!common.empty()) common.pop_back();
    return common;
  }();
  return quotients;
}

// Generates partial quotients a_0, a_1, ... of the source.
class QuotientStream {
 public:
  explicit QuotientStream(const AlphaSource& source) : source_(source) {
    switch (source.kind) {
      case AlphaKind::ExactRational:
        finite_ = euclid_quotients(mp::numerator(source.rational), mp::denominator(source.rational));
        break;
      case AlphaKind::Sqrt: {
        require(source.d > 0, ErrorCode::InvalidArgument, "sqrt source needs d > 0");
        a0_ = isqrt_u64(source.d);
        require(a0_ * a0_ != source.d, ErrorCode::DIsSquare, std::to_string(source.d) + " is a perfect square");
        a_ = a0_;
        break;
      }
      case AlphaKind::Pi: finite_ = certified_pi_quotients(); break;
      default: break;
    }
  }

  /// False once a finite expansion is exhausted.
  bool has_next() const {
    return !(source_.kind == AlphaKind::ExactRational || source_.kind == AlphaKind::Pi) ||
           index_ < finite_.size();
  }

  BigInt next() {
    const std::size_t i = index_++;
    switch (source_.kind) {
      case AlphaKind::ExactRational:
      case AlphaKind::Pi:
        require(i < finite_.size(), ErrorCode::RangeTooLarge,
                source_.kind == AlphaKind::Pi ? "pi digits exhausted" : "expansion exhausted");
        return finite_[i];
      case AlphaKind::GoldenRatio: return 1;
      case AlphaKind::EulerE:
        if (i == 0) return 2;
        return (i % 3 == 2) ? BigInt(2 * (i + 1) / 3) : BigInt(1);
      case AlphaKind::Sqrt: {
        if (i == 0) return a0_;
        // m_{k+1} = d_k a_k - m_k, d_{k+1} = (D - m_{k+1}^2) / d_k
        m_ = d_ * a_ - m_;
        d_ = (source_.d - m_ * m_) / d_;
        a_ = (a0_ + m_) / d_;
        return a_;
      }
    }
    return 0;
  }

 private:
  AlphaSource source_;
  std::vector<BigInt> finite_;
  std::size_t index_ = 0;
  // periodic expansion state for sqrt(d)
  std::uint64_t a0_ = 0;
  std::uint64_t m_ = 0, d_ = 1, a_ = 0;
};

// Feeds (a_k, p_k, q_k) to visit until it returns false or a finite expansion ends.
template <class Visit>
void walk_convergents(const AlphaSource& source, Visit&& visit) {
  QuotientStream stream(source);
  BigInt p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  while (stream.has_next()) {
    BigInt a = stream.next();
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    if (!visit(a, p, q)) return;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = std::move(p);
    q_prev = std::move(q);
  }
}

const BigInt kFloorCap = BigInt(1) << 256;

}  // namespace

AlphaSpec realize_alpha(const AlphaSource& source, const BigInt& floor) {
  require(floor >= 1, ErrorCode::InvalidArgument, "floor must be positive");
  require(floor <= kFloorCap, ErrorCode::FloorTooLarge, "floor exceeds 2^256");
  AlphaSpec spec;
  spec.source = source;
  spec.floor = floor;
  if (source.is_rational()) {
    spec.P = mp::numerator(source.rational);
    spec.Q = mp::denominator(source.rational);
    return spec;
  }
  bool found = false;
  walk_convergents(source, [&](const BigInt&, const BigInt& p, const BigInt& q) {
    if (q < floor) return true;
    spec.P = p;
    spec.Q = q;
    found = true;
    return false;
  });
  require(found, ErrorCode::FloorTooLarge, "expansion of " + source.label() + " ends before the floor");
  return spec;
}

AlphaSpec exact_alpha(const BigRational& value) { return realize_alpha(AlphaSource::exact(value), 1); }

ConvergentSeq continued_fraction(const AlphaSpec& alpha, std::size_t K) {
  require(K >= 1, ErrorCode::InvalidArgument, "K must be at least 1");
  ConvergentSeq out;
  walk_convergents(alpha.source, [&](const BigInt& a, const BigInt& p, const BigInt& q) {
    out.partial_quotients.push_back(a);
    out.convergents.push_back(BigFraction{p, q});
    return out.partial_quotients.size() < K;
  });
  return out;
}

ApproxQuality approx_quality(const AlphaSpec& alpha, std::uint64_t x) {
  require(x >= 2, ErrorCode::InvalidArgument, "approx_quality needs x >= 2");
  // Any q > sqrt(x) already forces R > sqrt(x), and Dirichlet guarantees R <= sqrt(x).
  const std::uint64_t qmax = isqrt_u64(x);
  const BigInt& P = alpha.P;
  const BigInt& Qa = alpha.Q;
  ApproxQuality best{BigRational(-1), Fraction{}};
  for (std::uint64_t q = 1; q <= qmax; ++q) {
    const BigInt Pq = P * q;
    const BigInt a_floor = floor_div(Pq, Qa);
    for (BigInt a = a_floor; a <= a_floor + 1; ++a) {
      if (mp::gcd(a, BigInt(q)) != 1) continue;
      BigRational R(x * mp::abs(Pq - a * Qa), Qa);
      if (R < BigRational(q)) R = BigRational(q);
      if (best.R < 0 || R < best.R) {
        best.R = R;
        best.witness = Fraction{to_int64(a), static_cast<std::int64_t>(q)};
      }
    }
  }
  return best;
}

MajorArcSet major_arcs(const AlphaSpec& alpha, std::uint64_t Q, std::uint64_t y) {
  require(Q >= 1 && y >= 1, ErrorCode::InvalidArgument, "major_arcs needs Q, y >= 1");
  MajorArcSet out;
  out.alpha = alpha.value();
  out.Q = Q;
  out.y = y;
  // |P/Qa - a/q| <= 1/(6y)  <=>  6y q P - q Qa <= 6y Qa a <= 6y q P + q Qa
  const BigInt den = BigInt(6) * y * alpha.Q;
  for (std::uint64_t q = 1; q <= Q; ++q) {
    const BigInt center = BigInt(6) * y * q * alpha.P;
    const BigInt half = BigInt(q) * alpha.Q;
    const BigInt lo = ceil_div(center - half, den);
    const BigInt hi = floor_div(center + half, den);
    for (BigInt a = lo; a <= hi; ++a) {
      const std::int64_t a64 = to_int64(a);
      if (std::gcd(a64, static_cast<std::int64_t>(q)) == 1)
        out.fractions.push_back(Fraction{a64, static_cast<std::int64_t>(q)});
    }
  }
  return out;
}

std::string to_json(const MajorArcSet& arcs) {
  nlohmann::ordered_json j;
  j["Q"] = arcs.Q;
  j["y"] = arcs.y;
  nlohmann::ordered_json fr = nlohmann::ordered_json::array();
  for (const auto& f : arcs.fractions) fr.push_back({{"a", f.a}, {"q", f.q}});
  j["fractions"] = std::move(fr);
  return j.dump();
}

MajorArcSet major_arcs_from_json(std::string_view text) {
  MajorArcSet out;
  try {
    auto j = nlohmann::json::parse(text);
    out.Q = j.at("Q").get<std::uint64_t>();
    out.y = j.at("y").get<std::uint64_t>();
    for (const auto& f : j.at("fractions"))
      out.fractions.push_back(Fraction::make(f.at("a").get<std::int64_t>(), f.at("q").get<std::int64_t>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad major-arc JSON: ") + e.what());
  }
  return out;
}

BezoutPartner bezout_partner(const Fraction& us) {
  require(us.q >= 1 && std::gcd(us.a, us.q) == 1, ErrorCode::InvalidArgument, "u/s must be reduced");
  const std::int64_t s = us.q;
  const std::int64_t u = us.a;
  // t = -u^{-1} mod s, lifted into [s, 2s)
  std::int64_t t = s;
  if (s > 1) {
    std::int64_t old_r = ((u % s) + s) % s, r = s, old_x = 1, x = 0;
    while (r != 0) {
      std::int64_t quo = old_r / r;
      std::tie(old_r, r) = std::make_pair(r, old_r - quo * r);
      std::tie(old_x, x) = std::make_pair(x, old_x - quo * x);
    }
    const std::int64_t inv = ((old_x % s) + s) % s;
    t = s + (s - inv) % s;
  }
  const std::int64_t v = (1 + t * u) / s;
  return BezoutPartner{v, t};
}

std::vector<Fraction> mediant_family(const Fraction& us, std::uint64_t Q, std::uint64_t C) {
  const auto [v, t] = bezout_partner(us);
  const std::int64_t s = us.q;
  const std::int64_t u = us.a;
  require(Q >= C * static_cast<std::uint64_t>(s), ErrorCode::QTooSmall,
          "Q = " + std::to_string(Q) + " < C*s = " + std::to_string(C * static_cast<std::uint64_t>(s)));
  const auto Qi = static_cast<std::int64_t>(Q);
  const std::int64_t lo = Qi / (s + t) + 1;
  const std::int64_t hi = (2 * Qi) / (s + t);
  std::vector<Fraction> out;
  for (std::int64_t a = lo; a <= hi; ++a)
    for (std::int64_t b = lo; b <= hi; ++b)
      if (std::gcd(a, b) == 1) out.push_back(Fraction{a * u + b * v, a * s + b * t});
  std::sort(out.begin(), out.end());
  return out;
}

SquarefreeArcs squarefree_major_arcs(const AlphaSpec& alpha, std::uint64_t Qlo, std::uint64_t s,
                                     bool collect) {
  require(Qlo >= 1 && s >= 1, ErrorCode::InvalidArgument, "need Qlo, s >= 1");
  require(Qlo <= 1'000'000, ErrorCode::RangeTooLarge, "Qlo is capped at 10^6");
  const ArithTable mu = sieve_table(FnKind::Moebius, Qlo + 1, 2 * Qlo);
  // |P/Qa - a/q| <= 2/s^2  <=>  q P s^2 - 2 q Qa <= a Qa s^2 <= q P s^2 + 2 q Qa
  const BigInt s2 = BigInt(s) * s;
  const BigInt den = alpha.Q * s2;
  const BigInt center_step = alpha.P * s2;
  const BigInt half_step = 2 * alpha.Q;
  SquarefreeArcs out;
  for (std::uint64_t q = Qlo + 1; q <= 2 * Qlo; ++q) {
    if (mu(q) == 0.0) continue;
    const BigInt center = center_step * q;
    const BigInt half = half_step * q;
    const BigInt lo = ceil_div(center - half, den);
    const BigInt hi = floor_div(center + half, den);
    for (BigInt a = lo; a <= hi; ++a) {
      const std::int64_t a64 = to_int64(a);
      if (std::gcd(a64, static_cast<std::int64_t>(q)) != 1) continue;
      ++out.count;
      if (collect) out.fractions.push_back(Fraction{a64, static_cast<std::int64_t>(q)});
    }
  }
  return out;
}

AdmissibleWindow admissible_window(const AlphaSpec& alpha, const BigRational& eps_prime, const BigInt& s_min) {
  require(!alpha.source.is_rational(), ErrorCode::InvalidArgument,
          "admissible_window needs a non-rational alpha source");
  require(eps_prime > 0 && eps_prime <= BigRational(1, 12), ErrorCode::InvalidArgument,
          "eps' must lie in (0, 1/12]");
  require(s_min >= 1, ErrorCode::InvalidArgument, "s_min must be positive");
  std::optional<AdmissibleWindow> window;
  walk_convergents(alpha.source, [&](const BigInt&, const BigInt& p, const BigInt& q) {
    if (q < s_min) return true;
    const BigInt s2 = q * q;
    const BigInt lo = ceil(eps_prime * BigRational(s2));
    const BigInt hi = floor_div(s2, 12);
    require(lo <= hi, ErrorCode::EmptyWindow,
            "window [" + to_string(lo) + ", " + to_string(hi) + "] is empty for s = " + to_string(q));
    require(hi <= std::numeric_limits<std::uint64_t>::max(), ErrorCode::RangeTooLarge,
            "window exceeds 64-bit range");
    window = AdmissibleWindow{q, p, lo.convert_to<std::uint64_t>(), hi.convert_to<std::uint64_t>()};
    return false;
  });
  require(window.has_value(), ErrorCode::RangeTooLarge, "expansion ends before s_min");
  return *window;
}

}  // namespace primexp
