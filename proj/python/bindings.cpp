#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eeb/bonus.hpp"
#include "eeb/boundary.hpp"
#include "eeb/error.hpp"
#include "eeb/market.hpp"
#include "eeb/pricing.hpp"
#include "eeb/psor.hpp"
#include "eeb/scenario.hpp"

namespace py = pybind11;
using namespace eeb;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Early-exercise boundary limits at expiry";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidSpec>(m, "InvalidSpec", base.ptr());
    py::register_exception<OutOfRange>(m, "OutOfRange", base.ptr());
    py::register_exception<SingularTime>(m, "SingularTime", base.ptr());
    py::register_exception<AnalysisError>(m, "AnalysisError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<DegenerateDrift>(m, "DegenerateDrift", base.ptr());
    py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
    py::register_exception<Divergence>(m, "Divergence", base.ptr());

    py::class_<MarketParams>(m, "MarketParams")
        .def(py::init([](double r, double q, double sigma) {
                 MarketParams p{r, q, sigma};
                 p.validate();
                 return p;
             }),
             py::arg("r"), py::arg("q"), py::arg("sigma"))
        .def_readwrite("r", &MarketParams::r)
        .def_readwrite("q", &MarketParams::q)
        .def_readwrite("sigma", &MarketParams::sigma)
        .def("__repr__", [](const MarketParams& p) {
            return "MarketParams(r=" + format_double(p.r) + ", q=" + format_double(p.q) +
                   ", sigma=" + format_double(p.sigma) + ")";
        });

    py::enum_<OptionType>(m, "OptionType").value("Call", OptionType::Call).value("Put", OptionType::Put);

    py::class_<AveragingSpec>(m, "AveragingSpec")
        .def(py::init<>())
        .def_readwrite("p", &AveragingSpec::p)
        .def_readwrite("lam", &AveragingSpec::lambda)
        .def_static("arithmetic", &AveragingSpec::arithmetic)
        .def_static("geometric", &AveragingSpec::geometric)
        .def_static("minimum", &AveragingSpec::minimum)
        .def_static("maximum", &AveragingSpec::maximum)
        .def_static("weighted", &AveragingSpec::weighted, py::arg("p"), py::arg("lam"));

    py::class_<DerivativeSpec>(m, "DerivativeSpec")
        .def_property_readonly("kind", [](const DerivativeSpec& s) { return std::string(kind_name(s.kind)); })
        .def_readonly("strike", &DerivativeSpec::strike)
        .def_readonly("expiry", &DerivativeSpec::expiry)
        .def_readonly("mu_c", &DerivativeSpec::mu_c)
        .def("__eq__", [](const DerivativeSpec& a, const DerivativeSpec& b) { return a == b; });

    m.def("vanilla", &make_vanilla, py::arg("type"), py::arg("strike"), py::arg("expiry") = 1.0);
    m.def("condor", &make_condor, py::arg("x1"), py::arg("x2"), py::arg("x3"), py::arg("x4"),
          py::arg("expiry") = 1.0);
    m.def(
        "strategy",
        [](const std::vector<std::pair<double, double>>& legs, double expiry) {
            std::vector<Leg> out;
            for (const auto& [w, x] : legs) out.push_back({w, x});
            return make_strategy(std::move(out), expiry);
        },
        py::arg("legs"), py::arg("expiry") = 1.0, "legs as (weight, strike) pairs");
    m.def("asian", &make_asian, py::arg("type"), py::arg("avg"), py::arg("expiry") = 1.0);
    m.def("lookback", &make_lookback, py::arg("type"), py::arg("expiry") = 1.0);
    m.def("shout", &make_shout, py::arg("type"), py::arg("strike"), py::arg("expiry") = 1.0);
    m.def("british", &make_british, py::arg("type"), py::arg("mu_c"), py::arg("strike"),
          py::arg("expiry") = 1.0);

    m.def(
        "bs_call", [](const MarketParams& p, double t, double s, double x, double T) { return bs_call(p, t, s, x, T).price; },
        py::arg("params"), py::arg("t"), py::arg("spot"), py::arg("strike"), py::arg("expiry"));
    m.def(
        "bs_put", [](const MarketParams& p, double t, double s, double x, double T) { return bs_put(p, t, s, x, T).price; },
        py::arg("params"), py::arg("t"), py::arg("spot"), py::arg("strike"), py::arg("expiry"));

    py::class_<BonusFunction>(m, "BonusFunction")
        .def_readonly("breakpoints", &BonusFunction::breakpoints)
        .def_readonly("kink_values", &BonusFunction::kink_values)
        .def_property_readonly("variable",
                               [](const BonusFunction& f) { return f.variable == StateVariable::Ratio ? "ratio" : "spot"; })
        .def("__call__", &BonusFunction::operator(), py::arg("x"));

    m.def("bonus_symbolic", &bonus_symbolic, py::arg("spec"), py::arg("params"));
    m.def(
        "bonus_numeric_oracle",
        [](const DerivativeSpec& s, const MarketParams& p, double spot) { return bonus_numeric_oracle(s, p, spot); },
        py::arg("spec"), py::arg("params"), py::arg("spot"));

    py::class_<BoundarySet>(m, "BoundarySet")
        .def_readonly("points", &BoundarySet::points)
        .def_readonly("diagnostic", &BoundarySet::diagnostic)
        .def_property_readonly("empty", &BoundarySet::empty)
        .def_property_readonly("kind", [](const BoundarySet& b) {
            switch (b.kind) {
                case BoundaryKind::SpotPoints: return "spot";
                case BoundaryKind::PathRatio: return "ratio";
                case BoundaryKind::Empty: break;
            }
            return "empty";
        });

    m.def("extract_boundary", &extract_boundary, py::arg("fb"));
    m.def("catalogue_boundary", &catalogue_boundary, py::arg("spec"), py::arg("params"));
    m.def("condor_boundary", &condor_boundary, py::arg("params"), py::arg("x1"), py::arg("x2"), py::arg("x3"),
          py::arg("x4"));
    m.def("average_ratio_root", &average_ratio_root, py::arg("params"), py::arg("avg"), py::arg("expiry"));

    py::class_<PsorConfig>(m, "PsorConfig")
        .def(py::init<>())
        .def_readwrite("n_time", &PsorConfig::n_time)
        .def_readwrite("n_space", &PsorConfig::n_space)
        .def_readwrite("lo", &PsorConfig::lo)
        .def_readwrite("hi", &PsorConfig::hi)
        .def_readwrite("omega", &PsorConfig::omega)
        .def_readwrite("tol", &PsorConfig::tol)
        .def_readwrite("expiry", &PsorConfig::expiry)
        .def_readwrite("theta", &PsorConfig::theta)
        .def_readwrite("min_island_nodes", &PsorConfig::min_island_nodes);

    py::class_<BoundaryPair>(m, "BoundaryPair")
        .def_readonly("theoretical", &BoundaryPair::theoretical)
        .def_readonly("calculated", &BoundaryPair::calculated)
        .def_readonly("relative_error", &BoundaryPair::relative_error);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("analytic", &VerificationReport::analytic)
        .def_readonly("numerical", &VerificationReport::numerical)
        .def_readonly("pairs", &VerificationReport::pairs)
        .def_readonly("cardinality_mismatch", &VerificationReport::cardinality_mismatch)
        .def_readonly("message", &VerificationReport::message)
        .def("max_abs_error", &VerificationReport::max_abs_error)
        .def("passes", &VerificationReport::passes, py::arg("tolerance"));

    m.def("verify_against_analytic", &verify_against_analytic, py::arg("spec"), py::arg("params"),
          py::arg("config") = PsorConfig{}, py::call_guard<py::gil_scoped_release>());

    m.def(
        "parse_scenario_ids",
        [](const std::string& text) {
            std::vector<std::string> ids;
            for (const Scenario& s : parse_scenarios(text)) ids.push_back(s.id);
            return ids;
        },
        py::arg("text"));
    m.def(
        "roundtrip_scenarios", [](const std::string& text) { return write_scenarios(parse_scenarios(text)); },
        py::arg("text"), "canonical text of a scenario file");
}
