#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stein/bounds.hpp"
#include "stein/commands.hpp"
#include "stein/core.hpp"
#include "stein/errors.hpp"
#include "stein/graph.hpp"

namespace py = pybind11;
using namespace stein;

namespace {

CouplingParams make_params(double a, double b, double sigma, double eps, double t_norm) {
    CouplingParams p;
    p.a_norm = a;
    p.b_norm = b;
    p.sigma = sigma;
    p.eps = eps;
    p.t_norm = t_norm;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Moment and concentration bounds from Stein couplings";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<BoundValue>(m, "BoundValue")
        .def_readonly("value", &BoundValue::value)
        .def_readonly("form", &BoundValue::form)
        .def_readonly("reason", &BoundValue::reason)
        .def_property_readonly("applicable", &BoundValue::applicable)
        .def("__repr__", [](const BoundValue& b) {
            std::ostringstream s;
            if (b.applicable()) s << "BoundValue(" << *b.value << ", form='" << b.form << "')";
            else s << "BoundValue(inapplicable: " << b.reason << ")";
            return s.str();
        });

    m.def("normal_abs_norm", &normal_abs_norm, py::arg("two_k"));
    m.def("c1", &c1, py::arg("k"));
    m.def("empirical_norm",
          [](const std::vector<double>& xs, int order) { return empirical_norm(xs, MomentOrder(order)); },
          py::arg("samples"), py::arg("order"));

    m.def("thm1_moment_bound",
          [](double a, double b, int k, double eps, double t_norm) {
              return thm1_moment_bound(make_params(a, b, 0.0, eps, t_norm), k);
          },
          py::arg("A"), py::arg("B"), py::arg("k"), py::arg("eps") = 0.0, py::arg("T") = 0.0);
    m.def("thm2_moment_bound", &thm2_moment_bound, py::arg("norm_g"), py::arg("norm_d"), py::arg("eps") = 0.0,
          py::arg("eps_prime") = 0.0, py::arg("r") = 2);
    m.def("h_k", [](double sigma, double a, double b, int k) { return h_k(make_params(a, b, sigma, 0, 0), k); },
          py::arg("sigma"), py::arg("A"), py::arg("B"), py::arg("k"));
    m.def("thm4_normal_comparison_bound",
          [](double sigma, double a, double b, int k) {
              return thm4_normal_comparison_bound(make_params(a, b, sigma, 0, 0), k);
          },
          py::arg("sigma"), py::arg("A"), py::arg("B"), py::arg("k"));
    m.def("markov_tail",
          [](double norm, int order, double t) { return markov_tail(norm, MomentOrder(order), t); },
          py::arg("norm"), py::arg("order"), py::arg("t"));
    m.def("cor_bounded_tail", &cor_bounded_tail, py::arg("n"), py::arg("x1"), py::arg("x2"), py::arg("t"));
    m.def("cor_normal_tail",
          [](double y, double e, double h) {
              return cor_normal_tail(y, [e](int) { return e; }, [h](int) { return h; });
          },
          py::arg("y"), py::arg("E") = 0.0, py::arg("h") = 0.0);
    m.def("prop_independent_bound", &prop_independent_bound, py::arg("rho"), py::arg("n"), py::arg("k"));
    m.def("local_dep_moment_bound", &local_dep_moment_bound, py::arg("n"), py::arg("d"), py::arg("x"), py::arg("k"));
    m.def("er_constant", &er_constant, py::arg("r"), py::arg("beta") = 0.0);
    m.def("er_moment_bound",
          [](long long n, double lambda, double c, int r, double beta, int q) {
              const ErMomentBound b = er_moment_bound(n, lambda, c, r, beta, q);
              return py::make_tuple(b.theorem, b.intermediate);
          },
          py::arg("n"), py::arg("lam"), py::arg("c"), py::arg("r"), py::arg("beta"), py::arg("q"));
    m.def("binomial_A", &binomial_A, py::arg("x"), py::arg("ell"));
    m.def("neighbourhood_norm_bound", &neighbourhood_norm_bound, py::arg("lam"), py::arg("r"), py::arg("ell"));

    m.def("generate_er_edges",
          [](std::size_t n, double p, std::uint64_t seed) {
              Rng rng = Rng::stream(seed, 0);
              return generate_er(n, p, rng).edges();
          },
          py::arg("n"), py::arg("p"), py::arg("seed") = 1);

    m.def("run",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code;
              {
                  py::gil_scoped_release release;
                  code = run_cli(args, out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the CLI in-process; returns (exit_code, stdout, stderr).");
}
