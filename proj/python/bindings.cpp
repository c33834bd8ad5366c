#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lzc/analytic.hpp"
#include "lzc/config.hpp"
#include "lzc/errors.hpp"
#include "lzc/model.hpp"
#include "lzc/propagator.hpp"
#include "lzc/special_functions.hpp"
#include "lzc/sweep.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

lzc::IntegratorConfig integrator(const lzc::ModelParams& p, double beta_t, double rel_tol, double tau0) {
    lzc::IntegratorConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.tau0 = tau0;
    cfg.tau_max = lzc::tau_for_beta_t(p, beta_t);
    return cfg;
}

lzc::Level level_from(py::object level) {
    if (level.is_none()) return lzc::Level::zero();
    return lzc::Level::band(level.cast<std::size_t>());
}

}  // namespace

PYBIND11_MODULE(_lzc, m) {
    m.doc() = "Transition probabilities for a linear level crossing a Coulomb band";

    auto base = py::register_exception<lzc::Error>(m, "LzcError", PyExc_RuntimeError);
    py::register_exception<lzc::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<lzc::NotConverged>(m, "NotConverged", base.ptr());

    py::class_<lzc::ModelParams>(m, "ModelParams")
        .def(py::init<double, std::vector<double>, std::vector<double>>(), "beta"_a, "k"_a, "g"_a)
        .def_property_readonly("beta", &lzc::ModelParams::beta)
        .def_property_readonly("k", [](const lzc::ModelParams& p) {
            return std::vector<double>(p.k().begin(), p.k().end());
        })
        .def_property_readonly("g", [](const lzc::ModelParams& p) {
            return std::vector<double>(p.g().begin(), p.g().end());
        })
        .def_property_readonly("total_weight", &lzc::ModelParams::total_weight)
        .def("__len__", &lzc::ModelParams::size)
        .def("__repr__", [](const lzc::ModelParams& p) {
            std::ostringstream s;
            s << "ModelParams(beta=" << p.beta() << ", N=" << p.size() << ")";
            return s.str();
        });

    py::class_<lzc::CharacteristicRoots>(m, "CharacteristicRoots")
        .def_readonly("l", &lzc::CharacteristicRoots::l)
        .def_readonly("xi", &lzc::CharacteristicRoots::xi)
        .def_readonly("h", &lzc::CharacteristicRoots::h);

    m.def("find_roots", [](const lzc::ModelParams& p) { return lzc::find_roots(p); }, "params"_a);
    m.def("char_poly", [](const lzc::ModelParams& p) { return lzc::build_char_poly(p).coeffs; }, "params"_a,
          "Coefficients of the characteristic polynomial, lowest power first.");

    m.def("survival_probability", [](const lzc::ModelParams& p) {
        return lzc::survival_probability(p, lzc::find_roots(p));
    }, "params"_a);
    m.def("p00_degenerate", &lzc::p00_degenerate, "params"_a);
    m.def("p00_independent_crossings", [](const lzc::ModelParams& p) {
        return lzc::p00_independent_crossings(p).p00;
    }, "params"_a);
    m.def("n2_probabilities", [](const lzc::ModelParams& p) {
        const auto r = lzc::n2_probabilities(p);
        return py::make_tuple(r.p00, r.p10, r.p20);
    }, "params"_a);
    m.def("pq0_time_average", [](const lzc::ModelParams& p, std::size_t q) {
        return lzc::pq0_time_average(lzc::band_coefficients(p, lzc::find_roots(p), q), p);
    }, "params"_a, "q"_a);
    m.def("p0j_asymptote", [](const lzc::ModelParams& p, std::size_t j, double t) {
        return lzc::p0j_asymptote(p, lzc::find_roots(p), j, t);
    }, "params"_a, "j"_a, "t"_a);
    m.def("analyze", [](const lzc::ModelParams& p) {
        const auto r = lzc::analyze(p);
        return py::dict("p00"_a = r.p00, "p00_formula"_a = r.p00_formula, "pq0_avg"_a = r.pq0_avg,
                        "pq0_formula"_a = r.pq0_formula);
    }, "params"_a);

    m.def("converged_p00", [](const lzc::ModelParams& p, double beta_t, double tolerance, double rel_tol,
                              double tau0) {
        py::gil_scoped_release release;
        const auto v = lzc::converged_p00(p, integrator(p, beta_t, rel_tol, tau0), tolerance);
        return std::make_pair(v.value, v.error);
    }, "params"_a, "beta_t"_a = 100.0, "tolerance"_a = 1e-4, "rel_tol"_a = 1e-10, "tau0"_a = 0.0,
          "Numeric survival probability and its error bar.");
    m.def("time_averaged_population", [](const lzc::ModelParams& p, py::object init, py::object target,
                                         double beta_t, std::size_t samples) {
        const auto from = level_from(init), to = level_from(target);
        py::gil_scoped_release release;
        const auto v = lzc::time_averaged_population(p, from, to, integrator(p, beta_t, 1e-10, 0.0),
                                                     std::nullopt, samples);
        return std::make_pair(v.mean, v.stddev);
    }, "params"_a, "init"_a = py::none(), "target"_a = py::none(), "beta_t"_a = 1000.0, "samples"_a = 200,
          "Mean and standard deviation over the last decade before beta_t. Levels are band "
          "indices (0-based, ascending k) or None for level 0.");

    m.def("log_gamma", &lzc::log_gamma, "z"_a);
    m.def("stirling2", &lzc::stirling2, "m"_a, "j"_a);
    m.def("falling_factorial", &lzc::falling_factorial, "x"_a, "n"_a);

    m.def("run_config", [](const std::string& text, std::size_t threads) {
        const auto config = lzc::parse_config(text);
        lzc::validate_config(config);
        std::vector<lzc::PointResult> points;
        {
            py::gil_scoped_release release;
            points = lzc::run_points(config, threads == 0 ? lzc::thread_count_from_env() : threads);
        }
        std::ostringstream csv;
        lzc::write_csv(csv, config, points);
        return csv.str();
    }, "text"_a, "threads"_a = 0, "Runs a config given as text and returns the CSV.");
}
