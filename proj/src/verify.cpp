#include "primexp/verify.hpp"

#include "primexp/constants.hpp"
#include "primexp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace primexp {

namespace mp = boost::multiprecision;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// |l - r| / max(|l|, |r|, floor); 0 when everything vanishes.
double relative_error(std::complex<double> l, std::complex<double> r, double floor) {
  const double scale = std::max({std::abs(l), std::abs(r), floor});
  if (scale == 0.0) return 0.0;
  return std::abs(l - r) / scale;
}

void put_complex(CheckReport& rep, const std::string& key, std::complex<double> z) {
  rep.set(key + "_re", z.real());
  rep.set(key + "_im", z.imag());
}

double abs_mass(const ArithTable& table, std::uint64_t first, std::uint64_t last) {
  RealAcc acc;
  table.for_each_nonzero(first, last, [&](std::uint64_t, double v) { acc.add(std::abs(v)); });
  return acc.value();
}

void require_table(const ArithTable& table, std::uint64_t first, std::uint64_t last) {
  require(table.covers(first, last), ErrorCode::TableGap,
          "table does not cover [" + std::to_string(first) + ", " + std::to_string(last) + "]");
}

// Fill an identity report; floor guards the relative error when both sides vanish.
CheckReport identity_report(std::string name, std::complex<double> l, std::complex<double> r, double floor,
                            double tol) {
  CheckReport rep;
  rep.check_name = std::move(name);
  rep.lhs = std::abs(l);
  rep.rhs = std::abs(r);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  const double err = relative_error(l, r, floor);
  rep.passed = err <= tol;
  rep.tolerance_used = tol;
  put_complex(rep, "lhs", l);
  put_complex(rep, "rhs", r);
  rep.set("rel_error", err);
  return rep;
}

std::int64_t omega(std::uint64_t n) { return static_cast<std::int64_t>(factorize(n).size()); }

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n;
  for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

int moebius(std::uint64_t n) {
  int r = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

}  // namespace

std::vector<BigRational> farey_points(std::uint64_t order) {
  require(order >= 1, ErrorCode::InvalidArgument, "Farey order must be positive");
  std::vector<BigRational> out;
  for (std::uint64_t q = 1; q <= order; ++q)
    for (std::uint64_t a = 0; a < q; ++a)
      if (gcd(a, q) == 1) out.emplace_back(static_cast<std::int64_t>(a), static_cast<std::int64_t>(q));
  std::sort(out.begin(), out.end());
  return out;
}

CheckReport check_large_sieve(const ArithTable& f, std::uint64_t M, std::uint64_t N,
                              const std::vector<BigRational>& points, const BigRational& delta) {
  require(N >= 1, ErrorCode::InvalidArgument, "N must be positive");
  require(delta > 0, ErrorCode::InvalidArgument, "delta must be positive");
  require_table(f, M + 1, M + N);

  // exact separation mod 1
  std::vector<BigRational> reduced;
  reduced.reserve(points.size());
  for (const auto& b : points) reduced.push_back(b - BigRational(floor(b)));
  std::sort(reduced.begin(), reduced.end());
  if (reduced.size() >= 2) {
    for (std::size_t i = 0; i + 1 < reduced.size(); ++i)
      require(reduced[i + 1] - reduced[i] >= delta, ErrorCode::SeparationViolated,
              "points " + to_string(reduced[i]) + " and " + to_string(reduced[i + 1]) + " are closer than delta");
    require(reduced.front() + 1 - reduced.back() >= delta, ErrorCode::SeparationViolated,
            "points " + to_string(reduced.back()) + " and " + to_string(reduced.front()) +
                " are closer than delta mod 1");
  }

  RealAcc lhs;
  for (const auto& beta : points) {
    const PhaseContext ctx(beta);
    ComplexAcc acc;
    f.for_each_nonzero(M + 1, M + N, [&](std::uint64_t n, double v) {
      acc.add(v * ctx.unit(static_cast<std::int64_t>(n)));
    });
    lhs.add(std::norm(acc.value()));
  }
  const double mass = f.sum_of_squares(M + 1, M + N);
  const double rhs = (static_cast<double>(N) + to_double(1 / delta)) * mass;

  CheckReport rep;
  rep.check_name = "large_sieve";
  rep.set("M", static_cast<std::int64_t>(M))
      .set("N", static_cast<std::int64_t>(N))
      .set("points", static_cast<std::int64_t>(points.size()))
      .set("delta", to_string(delta))
      .set("l2_mass", mass);
  rep.lhs = lhs.value();
  rep.rhs = rhs;
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.tolerance_used = kInequalitySlack;
  rep.passed = rep.lhs <= rhs * (1 + kInequalitySlack);
  return rep;
}

CheckReport check_window_transform(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                   std::uint64_t y, const BigRational& beta) {
  require(x >= 1 && y >= 1, ErrorCode::InvalidArgument, "need x, y >= 1");
  require_table(table, 1, x);
  const PhaseContext shift(beta);
  ComplexAcc lhs;
  for_each_window(table, ctx, x, y, 1 - static_cast<std::int64_t>(y), static_cast<std::int64_t>(x) - 1,
                  kDefaultResync, [&](std::int64_t n, std::complex<double> w) { lhs.add(w * shift.unit(n)); });
  const std::complex<double> rhs =
      expsum_full(table, ctx.shifted(beta), x) * geometric_kernel(y, BigRational(-beta));
  const double trivial = static_cast<double>(y) * abs_mass(table, 1, x);
  CheckReport rep = identity_report("window_transform", lhs.value(), rhs, 1e-6 * trivial, kIdentityTolerance);
  rep.set("x", static_cast<std::int64_t>(x))
      .set("y", static_cast<std::int64_t>(y))
      .set("alpha", to_string(ctx.alpha()))
      .set("beta", to_string(beta));
  return rep;
}

RationalSpectrum::RationalSpectrum(const ArithTable& table, std::uint64_t x, std::uint64_t Q)
    : x_(x), Q_(Q), values_(offset(Q + 1), 0.0) {
  require(Q >= 1, ErrorCode::InvalidArgument, "Q must be positive");
  require(Q <= x, ErrorCode::QExceedsX, "Q exceeds x");
  for (std::uint64_t q = 1; q <= Q; ++q) {
    const ResidueSums sums(table, q, x);
    const UnitTable units(q);
    for (std::uint64_t a = 0; a < q; ++a)
      if (gcd(a, q) == 1) values_[offset(q) + a] = std::norm(sums.evaluate(static_cast<std::int64_t>(a), units));
  }
}

double RationalSpectrum::norm(std::int64_t a, std::uint64_t q) const {
  require(q >= 1 && q <= Q_, ErrorCode::InvalidArgument, "denominator outside the spectrum");
  const auto qi = static_cast<std::int64_t>(q);
  const auto r = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  require(gcd(r, q) == 1, ErrorCode::NonCoprime, "fraction is not reduced");
  return values_[offset(q) + r];
}

CheckReport check_initial_chain(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                std::uint64_t y, std::uint64_t Q, const WindowOptions& options) {
  require(Q >= 1 && Q * Q <= x, ErrorCode::QExceedsSqrtX,
          "Q = " + std::to_string(Q) + " exceeds sqrt(x) for x = " + std::to_string(x));
  require(y <= x, ErrorCode::YExceedsX, "y exceeds x");
  return check_initial_chain(table, ctx, RationalSpectrum(table, x, Q), y, options);
}

CheckReport check_initial_chain(const ArithTable& table, const PhaseContext& ctx, const RationalSpectrum& spectrum,
                                std::uint64_t y, const WindowOptions& options) {
  const std::uint64_t x = spectrum.x();
  const std::uint64_t Q = spectrum.Q();
  require(Q * Q <= x, ErrorCode::QExceedsSqrtX,
          "Q = " + std::to_string(Q) + " exceeds sqrt(x) for x = " + std::to_string(x));
  require(y >= 1 && y <= x, ErrorCode::YExceedsX, "need 1 <= y <= x");

  const WindowAverage wa = window_l2_average(table, ctx, x, y, options);
  const double L = wa.S * static_cast<double>(x);
  const double denom = static_cast<double>(x) + static_cast<double>(y) + static_cast<double>(Q * Q);

  RealAcc weighted;
  spectrum.for_each([&](std::int64_t a, std::uint64_t q, double f2) {
    if (f2 == 0.0) return;
    const BigRational beta = ctx.alpha() - BigRational(a, static_cast<std::int64_t>(q));
    weighted.add(f2 * std::norm(geometric_kernel(y, beta)));
  });
  const double M = weighted.value() / denom;

  const MajorArcSet arcs = major_arcs(exact_alpha(ctx.alpha()), Q, y);
  RealAcc arc_mass;
  for (const auto& fr : arcs.fractions) arc_mass.add(spectrum.norm(fr.a, static_cast<std::uint64_t>(fr.q)));
  const double half_y = static_cast<double>(y) / 2;
  const double A = half_y * half_y / denom * arc_mass.value();

  CheckReport rep;
  rep.check_name = "initial_chain";
  rep.set("x", static_cast<std::int64_t>(x))
      .set("y", static_cast<std::int64_t>(y))
      .set("Q", static_cast<std::int64_t>(Q))
      .set("alpha", to_string(ctx.alpha()))
      .set("L", L)
      .set("M", M)
      .set("A", A)
      .set("major_arcs", static_cast<std::int64_t>(arcs.fractions.size()))
      .set("major_arc_mass", arc_mass.value())
      .set("implied_constant",
           safe_ratio(L, static_cast<double>(y) * static_cast<double>(y) / static_cast<double>(x) * arc_mass.value()));
  rep.lhs = L;
  rep.rhs = M;
  rep.ratio = safe_ratio(L, M);
  rep.tolerance_used = kInequalitySlack;
  rep.passed = L >= M * (1 - kInequalitySlack) && M >= A * (1 - kInequalitySlack);
  return rep;
}

CheckReport check_coprime_count(std::uint64_t q, std::uint64_t y, const AlphaSpec& alpha, double ceiling) {
  require(q >= 1 && y >= 1, ErrorCode::InvalidArgument, "need q, y >= 1");
  const BigRational a_value = alpha.value();
  const BigRational radius(1, 6 * static_cast<std::int64_t>(y));
  const auto qi = static_cast<std::int64_t>(q);
  const BigInt lo = ceil((a_value - radius) * qi);
  const BigInt hi = floor((a_value + radius) * qi);
  std::int64_t count = 0;
  for (BigInt a = lo; a <= hi; ++a) {
    BigInt r = a % qi;
    if (r < 0) r += qi;
    if (gcd(r.convert_to<std::uint64_t>(), q) == 1) ++count;
  }
  const double expected = static_cast<double>(euler_phi(q)) / (3.0 * static_cast<double>(y));
  const std::int64_t w = omega(q);
  const double C = std::abs(static_cast<double>(count) - expected) / std::ldexp(1.0, static_cast<int>(w));

  CheckReport rep;
  rep.check_name = "coprime_count";
  rep.set("q", static_cast<std::int64_t>(q))
      .set("y", static_cast<std::int64_t>(y))
      .set("alpha", alpha.label())
      .set("omega", w)
      .set("C", C);
  rep.lhs = static_cast<double>(count);
  rep.rhs = expected;
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.tolerance_used = ceiling;
  rep.passed = C <= ceiling;
  return rep;
}

CheckReport check_goal_g(std::uint64_t Q, double epsilon, double floor_value) {
  require(Q >= 16, ErrorCode::InvalidArgument, "need Q >= 16");
  require(epsilon > 0 && epsilon < 1, ErrorCode::InvalidArgument, "need 0 < epsilon < 1");
  const ArithTable mu = sieve_table(FnKind::Moebius, 1, Q);
  const ArithTable phi = sieve_table(FnKind::EulerPhi, 1, Q);
  const double cut = std::pow(static_cast<double>(Q), 1 - epsilon);
  const auto q_first = static_cast<std::uint64_t>(std::floor(cut)) + 1;
  RealAcc sum;
  for (std::uint64_t q = q_first; q <= Q; ++q)
    if (mu(q) != 0.0) sum.add(1.0 / phi(q));
  const double target = epsilon * std::log(static_cast<double>(Q));

  CheckReport rep;
  rep.check_name = "goal_g";
  rep.set("Q", static_cast<std::int64_t>(Q)).set("epsilon", epsilon).set("q_first", static_cast<std::int64_t>(q_first));
  rep.lhs = sum.value();
  rep.rhs = target;
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.tolerance_used = floor_value;
  rep.passed = rep.ratio >= floor_value;
  return rep;
}

CheckReport bv_average(std::uint64_t x, std::uint64_t Q) {
  require(x >= 1 && x <= 10'000'000, ErrorCode::RangeTooLarge, "x must lie in [1, 10^7]");
  return bv_average(sieve_table(FnKind::VonMangoldt, 1, x), x, Q);
}

CheckReport bv_average(const ArithTable& lambda, std::uint64_t x, std::uint64_t Q) {
  require(x >= 1 && x <= 10'000'000, ErrorCode::RangeTooLarge, "x must lie in [1, 10^7]");
  require(Q >= 1 && Q * Q * Q <= x, ErrorCode::InvalidArgument, "need 1 <= Q <= x^(1/3)");
  require_table(lambda, 1, x);
  RealAcc B;
  for (std::uint64_t q = 1; q <= Q; ++q) {
    const double main = static_cast<double>(moebius(q)) / static_cast<double>(euler_phi(q)) * static_cast<double>(x);
    double worst = 0.0;
    for (const auto& [a, value] : batch_rational(lambda, q, x)) worst = std::max(worst, std::abs(value - main));
    B.add(worst);
  }
  const double lx = std::log(static_cast<double>(x));
  const double b = B.value();

  CheckReport rep;
  rep.check_name = "bv_average";
  rep.set("x", static_cast<std::int64_t>(x)).set("Q", static_cast<std::int64_t>(Q));
  for (int A = 1; A <= 3; ++A) rep.set("normalized_A" + std::to_string(A), b * std::pow(lx, A) / static_cast<double>(x));
  rep.lhs = b;
  rep.rhs = static_cast<double>(x);
  rep.ratio = safe_ratio(b, rep.rhs);
  rep.tolerance_used = kNaN;
  rep.passed = true;  // data only
  return rep;
}

CheckReport check_grh_decomposition(const ArithTable& table, std::uint64_t q, std::int64_t a, std::uint64_t x) {
  require(q >= 1 && q <= 10'000, ErrorCode::QTooLarge, "need 1 <= q <= 10^4");
  require(x >= 1, ErrorCode::InvalidArgument, "x must be positive");
  require_table(table, 1, x);
  const auto qi = static_cast<std::int64_t>(q);
  const auto ar = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  require(gcd(ar, q) == 1, ErrorCode::NonCoprime, "need gcd(a, q) = 1");

  const std::complex<double> lhs = expsum_full(table, PhaseContext(BigRational(a, qi)), x);

  const CharacterTable tab = build_characters(q);
  const auto& G = tab.gauss_sums();
  const auto psi = psi_chi_all(table, tab, x);
  ComplexAcc chars;
  for (std::uint64_t chi = 0; chi < tab.size(); ++chi)
    chars.add(tab.value(chi, a) * G[tab.conjugate(chi)] * psi[chi]);
  const std::complex<double> char_side = chars.value() / static_cast<double>(tab.size());

  const UnitTable& units = tab.additive_units();
  ComplexAcc corr;
  table.for_each_nonzero(1, x, [&](std::uint64_t n, double v) {
    if (gcd(n, q) != 1) corr.add(v * units[static_cast<std::uint64_t>(static_cast<u128>(ar) * (n % q) % q)]);
  });
  const std::complex<double> rhs = char_side + corr.value();

  CheckReport rep = identity_report("grh_decomposition", lhs, rhs, 1e-6 * abs_mass(table, 1, x), kIdentityTolerance);
  rep.set("q", static_cast<std::int64_t>(q)).set("a", a).set("x", static_cast<std::int64_t>(x));
  put_complex(rep, "correction", corr.value());
  double worst_psi = 0.0;
  for (std::uint64_t chi = 1; chi < tab.size(); ++chi) worst_psi = std::max(worst_psi, std::abs(psi[chi]));
  rep.set("max_nonprincipal_psi", worst_psi);
  return rep;
}

std::vector<CheckReport> check_tau_rational(std::uint64_t x, const std::vector<std::uint64_t>& q_grid, double constant) {
  return check_tau_rational(sieve_table(FnKind::Divisor, 1, x), x, q_grid, constant);
}

std::vector<CheckReport> check_tau_rational(const ArithTable& tau, std::uint64_t x,
                                            const std::vector<std::uint64_t>& q_grid, double constant) {
  require_table(tau, 1, x);
  for (const std::uint64_t q : q_grid)
    require(q >= 1 && q * q <= x, ErrorCode::QTooLarge,
            "q = " + std::to_string(q) + " exceeds sqrt(x) for x = " + std::to_string(x));
  constexpr std::size_t kSample = 64;
  const double xd = static_cast<double>(x);
  std::vector<CheckReport> out;
  out.reserve(q_grid.size());
  for (const std::uint64_t q : q_grid) {
    const double qd = static_cast<double>(q);
    const double main = xd / qd * (std::log(xd / (qd * qd)) + 2 * constants::kEulerGamma - 1);
    const ResidueSums sums(tau, q, x);
    const UnitTable units(q);
    std::vector<std::uint64_t> as;
    for (std::uint64_t a = 0; a < q; ++a)
      if (gcd(a, q) == 1) as.push_back(a);
    std::size_t scanned = as.size();
    if (q > kTauFullScanLimit && as.size() > kSample) {
      std::vector<std::uint64_t> sample;
      for (std::size_t i = 0; i < kSample; ++i) sample.push_back(as[i * as.size() / kSample]);
      as.swap(sample);
      scanned = as.size();
    }
    double worst = -1.0;
    std::uint64_t worst_a = 0;
    for (const std::uint64_t a : as) {
      const double err = std::abs(sums.evaluate(static_cast<std::int64_t>(a), units) - main);
      if (err > worst) {
        worst = err;
        worst_a = a;
      }
    }
    const double normalizer = std::sqrt(xd) * (1 + std::log(qd));
    CheckReport rep;
    rep.check_name = "tau_rational";
    rep.set("x", static_cast<std::int64_t>(x))
        .set("q", static_cast<std::int64_t>(q))
        .set("worst_a", static_cast<std::int64_t>(worst_a))
        .set("a_scanned", static_cast<std::int64_t>(scanned))
        .set("main_term", main)
        .set("normalized_error", worst / normalizer);
    rep.lhs = worst;
    rep.rhs = normalizer;
    rep.ratio = safe_ratio(worst, normalizer);
    rep.tolerance_used = constant;
    rep.passed = rep.ratio <= constant;
    out.push_back(std::move(rep));
  }
  return out;
}

CheckReport check_hyperbola(std::uint64_t x, const Fraction& frac) {
  require(frac.q >= 1, ErrorCode::InvalidArgument, "denominator must be positive");
  const auto q = static_cast<std::uint64_t>(frac.q);
  require(q * q <= x, ErrorCode::QExceedsSqrtX, "q exceeds sqrt(x)");
  const ArithTable tau = sieve_table(FnKind::Divisor, 1, x);
  const UnitTable units(q);
  const auto a = static_cast<std::uint64_t>(((frac.a % frac.q) + frac.q) % frac.q);
  auto e = [&](std::uint64_t n) { return units[static_cast<std::uint64_t>(static_cast<u128>(a) * (n % q) % q)]; };

  ComplexAcc lhs;
  tau.for_each_nonzero(1, x, [&](std::uint64_t n, double v) { lhs.add(v * e(n)); });

  const std::uint64_t r = static_cast<std::uint64_t>(mp::sqrt(BigInt(x)));
  ComplexAcc T, E;
  for (std::uint64_t m = 1; m <= r; ++m) {
    E.add(e(m * m));
    for (std::uint64_t n = m + 1; n <= x / m; ++n) T.add(e(m * n));
  }
  const std::complex<double> rhs = 2.0 * T.value() + E.value();
  constexpr double kTol = 1e-8;
  CheckReport rep = identity_report("hyperbola", lhs.value(), rhs, 1e-6 * abs_mass(tau, 1, x), kTol);
  rep.set("x", static_cast<std::int64_t>(x)).set("fraction", to_string(frac));
  put_complex(rep, "T", T.value());
  put_complex(rep, "E", E.value());
  return rep;
}

CheckReport check_sup_lower_bound(const ArithTable& table, const PhaseContext& ctx, std::uint64_t x,
                                  std::uint64_t y, const WindowOptions& options) {
  require(y <= x, ErrorCode::YExceedsX, "y exceeds x");
  const PrefixSup sup = prefix_sups(table, ctx, x);
  const WindowAverage wa = window_l2_average(table, ctx, x, y, options);
  const double half_root = 0.5 * std::sqrt(wa.S);
  // every nonempty window is a difference of two prefix sums, and there are x + y - 1 of them
  const double rigorous = 0.5 * std::sqrt(wa.S * static_cast<double>(x) / static_cast<double>(x + y - 1));
  const double slack = 1 + kInequalitySlack;
  const bool windows_ok = wa.max_window <= 2 * sup.sup * slack;
  const bool sup_ok = sup.sup * slack >= half_root;

  CheckReport rep;
  rep.check_name = "sup_lower_bound";
  rep.set("x", static_cast<std::int64_t>(x))
      .set("y", static_cast<std::int64_t>(y))
      .set("alpha", to_string(ctx.alpha()))
      .set("S", wa.S)
      .set("max_window", wa.max_window)
      .set("argmax", static_cast<std::int64_t>(sup.argmax))
      .set("rigorous_rhs", rigorous)
      .set("windows_ok", static_cast<std::int64_t>(windows_ok));
  rep.lhs = sup.sup;
  rep.rhs = half_root;
  rep.ratio = safe_ratio(sup.sup, half_root);
  rep.tolerance_used = kInequalitySlack;
  rep.passed = windows_ok && sup_ok;
  return rep;
}

CheckReport check_pi_psi_window(const ArithTable& lambda, const ArithTable& primes, const PhaseContext& ctx,
                                std::uint64_t x, std::uint64_t y, const std::vector<std::uint64_t>& n_grid,
                                double constant) {
  require(y >= 1, ErrorCode::InvalidArgument, "y must be positive");
  for (const std::uint64_t n : n_grid)
    require(n >= std::max<std::uint64_t>(y * y, 2) && n <= x, ErrorCode::GridViolatesPrecondition,
            "grid point " + std::to_string(n) + " outside [max(y^2, 2), x]");
  double worst = 0.0;
  std::uint64_t worst_n = 0;
  for (const std::uint64_t n : n_grid) {
    const auto ni = static_cast<std::int64_t>(n);
    const double ln = std::log(static_cast<double>(n));
    const double D = std::abs(window_sum(lambda, ctx, ni, y, x) - ln * pi_window(primes, ctx, ni, y, x));
    const double normalized = D / (ln * ln);
    if (normalized > worst || worst_n == 0) {
      worst = std::max(worst, normalized);
      worst_n = n;
    }
  }
  CheckReport rep;
  rep.check_name = "pi_psi_window";
  rep.set("x", static_cast<std::int64_t>(x))
      .set("y", static_cast<std::int64_t>(y))
      .set("alpha", to_string(ctx.alpha()))
      .set("grid_points", static_cast<std::int64_t>(n_grid.size()))
      .set("worst_n", static_cast<std::int64_t>(worst_n));
  rep.lhs = worst;
  rep.rhs = constant;
  rep.ratio = safe_ratio(worst, constant);
  rep.tolerance_used = constant;
  rep.passed = worst <= constant;
  return rep;
}

}  // namespace primexp
