#include "primexp/characters.hpp"
#include "primexp/cli.hpp"
#include "primexp/dioph.hpp"
#include "primexp/error.hpp"
#include "primexp/expsum.hpp"
#include "primexp/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace primexp;

namespace {

py::int_ to_py(const BigInt& v) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(to_string(v).c_str(), nullptr, 10))); }

// Non-rational sources are realized with denominator at least x^2.
AlphaSpec realize(const std::string& alpha, std::uint64_t x) {
  return realize_alpha(parse_alpha_source(alpha), BigInt(std::max<std::uint64_t>(x, 1)) * std::max<std::uint64_t>(x, 1));
}

py::object report_dict(const CheckReport& r) {
  return py::module_::import("json").attr("loads")(to_json_line(r));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exponential sums over primes: sieves, window averages, characters and checks";

  py::register_exception<Error>(m, "PrimexpError", PyExc_ValueError);

  py::class_<ArithTable>(m, "ArithTable")
      .def(py::init([](const std::string& kind, std::uint64_t lo, std::vector<double> values) {
             return ArithTable(parse_fn_kind(kind), lo, std::move(values));
           }),
           py::arg("kind"), py::arg("lo"), py::arg("values"))
      .def_property_readonly("kind", [](const ArithTable& t) { return std::string(to_string(t.kind())); })
      .def_property_readonly("lo", &ArithTable::lo)
      .def_property_readonly("hi", &ArithTable::hi)
      .def("__len__", &ArithTable::size)
      .def("__getitem__",
           [](const ArithTable& t, std::uint64_t n) {
             if (n < t.lo() || n > t.hi()) throw py::index_error("n outside [lo, hi]");
             return t(n);
           })
      .def("values", [](const ArithTable& t) { return std::vector<double>(t.values().begin(), t.values().end()); });

  m.def(
      "sieve_table",
      [](const std::string& kind, std::uint64_t lo, std::uint64_t hi) { return sieve_table(parse_fn_kind(kind), lo, hi); },
      py::arg("kind"), py::arg("lo"), py::arg("hi"));
  m.def("factorize", &factorize, py::arg("n"));

  m.def(
      "realize_alpha",
      [](const std::string& alpha, std::uint64_t floor) {
        const AlphaSpec a = realize_alpha(parse_alpha_source(alpha), BigInt(floor));
        return py::make_tuple(to_py(a.P), to_py(a.Q));
      },
      py::arg("alpha"), py::arg("floor") = 1);
  m.def(
      "continued_fraction",
      [](const std::string& alpha, std::size_t K) {
        const ConvergentSeq cf = continued_fraction(realize_alpha(parse_alpha_source(alpha)), K);
        py::list quotients, convergents;
        for (const auto& a : cf.partial_quotients) quotients.append(to_py(a));
        for (const auto& c : cf.convergents) convergents.append(py::make_tuple(to_py(c.p), to_py(c.q)));
        return py::make_tuple(quotients, convergents);
      },
      py::arg("alpha"), py::arg("K"));
  m.def(
      "approx_quality",
      [](const std::string& alpha, std::uint64_t x) {
        const ApproxQuality q = approx_quality(realize(alpha, x), x);
        return py::make_tuple(to_double(q.R), py::make_tuple(q.witness.a, q.witness.q));
      },
      py::arg("alpha"), py::arg("x"));
  m.def(
      "major_arcs",
      [](const std::string& alpha, std::uint64_t Q, std::uint64_t y) {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const auto& f : major_arcs(realize(alpha, Q * Q), Q, y).fractions) out.emplace_back(f.a, f.q);
        return out;
      },
      py::arg("alpha"), py::arg("Q"), py::arg("y"));

  m.def("geometric_kernel", py::overload_cast<std::uint64_t, double>(&geometric_kernel), py::arg("y"), py::arg("beta"));
  m.def(
      "geometric_kernel_exact",
      [](std::uint64_t y, const std::string& beta) { return geometric_kernel(y, parse_rational(beta)); },
      py::arg("y"), py::arg("beta"));
  m.def(
      "expsum_full",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x) {
        return expsum_full(t, PhaseContext(realize(alpha, x)), x);
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"));
  m.def(
      "expsum_at_rational",
      [](const ArithTable& t, std::int64_t a, std::int64_t q, std::uint64_t x) {
        return expsum_at_rational(t, Fraction::make(a, q), x);
      },
      py::arg("table"), py::arg("a"), py::arg("q"), py::arg("x"));
  m.def(
      "prefix_sup",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x) {
        const PrefixSup s = prefix_sups(t, PhaseContext(realize(alpha, x)), x);
        return py::make_tuple(s.sup, s.argmax);
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"));
  m.def(
      "window_l2_average",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x, std::uint64_t y, std::uint64_t resync,
         unsigned threads) {
        WindowAverage wa;
        {
          py::gil_scoped_release release;
          wa = window_l2_average(t, PhaseContext(realize(alpha, x)), x, y, WindowOptions{resync, threads});
        }
        py::dict d;
        d["x"] = wa.x;
        d["y"] = wa.y;
        d["S"] = wa.S;
        d["n_count"] = wa.n_count;
        d["max_window"] = wa.max_window;
        return d;
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"), py::arg("y"), py::arg("resync") = kDefaultResync,
      py::arg("threads") = 1);

  py::class_<CharacterTable>(m, "CharacterTable")
      .def_property_readonly("q", &CharacterTable::q)
      .def("__len__", &CharacterTable::size)
      .def("value", &CharacterTable::value, py::arg("chi"), py::arg("n"))
      .def("conjugate", &CharacterTable::conjugate, py::arg("chi"))
      .def("exponents", &CharacterTable::exponents, py::arg("chi"))
      .def("gauss_sum", &CharacterTable::gauss_sum, py::arg("chi"))
      .def_property_readonly("generators", [](const CharacterTable& t) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
        for (const auto& g : t.generators()) out.emplace_back(g.g, g.order);
        return out;
      });
  m.def("build_characters", &build_characters, py::arg("q"));
  m.def("psi_chi", &psi_chi, py::arg("table"), py::arg("characters"), py::arg("chi"), py::arg("x"));
  m.def("reconstruct_additive", &reconstruct_additive, py::arg("characters"), py::arg("a"), py::arg("n"));

  m.def(
      "check_hyperbola", [](std::uint64_t x, std::int64_t a, std::int64_t q) { return report_dict(check_hyperbola(x, Fraction::make(a, q))); },
      py::arg("x"), py::arg("a"), py::arg("q"));
  m.def(
      "check_grh_decomposition",
      [](const ArithTable& t, std::uint64_t q, std::int64_t a, std::uint64_t x) {
        return report_dict(check_grh_decomposition(t, q, a, x));
      },
      py::arg("table"), py::arg("q"), py::arg("a"), py::arg("x"));
  m.def(
      "check_window_transform",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x, std::uint64_t y, const std::string& beta) {
        return report_dict(check_window_transform(t, PhaseContext(realize(alpha, x)), x, y, parse_rational(beta)));
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"), py::arg("y"), py::arg("beta"));
  m.def(
      "check_large_sieve",
      [](const ArithTable& t, std::uint64_t M, std::uint64_t N, const std::vector<std::string>& points,
         const std::string& delta) {
        std::vector<BigRational> pts;
        for (const auto& p : points) pts.push_back(parse_rational(p));
        return report_dict(check_large_sieve(t, M, N, pts, parse_rational(delta)));
      },
      py::arg("table"), py::arg("M"), py::arg("N"), py::arg("points"), py::arg("delta"));
  m.def(
      "check_initial_chain",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x, std::uint64_t y, std::uint64_t Q) {
        return report_dict(check_initial_chain(t, PhaseContext(realize(alpha, x)), x, y, Q));
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"), py::arg("y"), py::arg("Q"));
  m.def(
      "check_sup_lower_bound",
      [](const ArithTable& t, const std::string& alpha, std::uint64_t x, std::uint64_t y) {
        return report_dict(check_sup_lower_bound(t, PhaseContext(realize(alpha, x)), x, y));
      },
      py::arg("table"), py::arg("alpha"), py::arg("x"), py::arg("y"));
  m.def(
      "check_coprime_count",
      [](std::uint64_t q, std::uint64_t y, const std::string& alpha) {
        return report_dict(check_coprime_count(q, y, realize(alpha, std::max<std::uint64_t>(q, 2))));
      },
      py::arg("q"), py::arg("y"), py::arg("alpha"));
  m.def(
      "check_goal_g", [](std::uint64_t Q, double eps) { return report_dict(check_goal_g(Q, eps)); }, py::arg("Q"),
      py::arg("epsilon"));
  m.def(
      "check_tau_rational",
      [](std::uint64_t x, const std::vector<std::uint64_t>& qs) {
        py::list out;
        for (const auto& r : check_tau_rational(x, qs)) out.append(report_dict(r));
        return out;
      },
      py::arg("x"), py::arg("q_grid"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "primexp");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}
