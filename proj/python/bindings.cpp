#include "ctrlgauge/control.hpp"
#include "ctrlgauge/model.hpp"
#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/region.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ctrlgauge;

namespace {

py::dict shape_dict(const ShapeReport& s)
{
    py::dict planar;
    for (const auto& [axes, f] : s.planarShapeFactors) {
        planar[py::make_tuple(axes.first, axes.second)] = f;
    }
    py::dict d;
    d["volume"] = s.volume;
    d["side_lengths"] = s.sideLengths;
    d["overall_shape_factor"] = s.overallShapeFactor;
    d["planar_shape_factors"] = planar;
    d["rank"] = s.rank;
    return d;
}

Matrix polygon_array(const Polygon& p)
{
    Matrix out(static_cast<Eigen::Index>(p.vertices.size()), 2);
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = p.vertices[i].transpose();
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Controllability regions, minimum-time steering and control-ability comparison";

    py::register_exception<Error>(m, "Error");

    py::enum_<RegionKind>(m, "RegionKind")
        .value("Reach", RegionKind::Reach)
        .value("Recover", RegionKind::Recover);

    py::class_<LdtSystem>(m, "LdtSystem")
        .def(py::init<std::string, Matrix, Matrix>(), py::arg("name"), py::arg("A"), py::arg("B"))
        .def_property_readonly("name", &LdtSystem::name)
        .def_property_readonly("A", &LdtSystem::A)
        .def_property_readonly("B", &LdtSystem::B)
        .def_property_readonly("n", &LdtSystem::n)
        .def_property_readonly("r", &LdtSystem::r)
        .def("__repr__", [](const LdtSystem& s) {
            return "<LdtSystem '" + s.name() + "' n=" + std::to_string(s.n()) + " r=" + std::to_string(s.r()) + ">";
        });

    m.def(
        "normalize",
        [](const LdtSystem& sys, const Vector& inputRated, const Vector& stateRated,
           const std::optional<Vector>& stateTarget, bool useTarget) {
            return normalize_full(sys, NormalizationSpec{inputRated, stateRated, stateTarget}, useTarget);
        },
        py::arg("system"), py::arg("input_rated"), py::arg("state_rated"), py::arg("state_target") = py::none(),
        py::arg("use_target") = false);

    m.def("region_generators",
          [](const LdtSystem& sys, RegionKind kind, int steps) { return region_generators(sys, kind, steps); },
          py::arg("system"), py::arg("kind"), py::arg("steps"));

    m.def("vertices", [](const Matrix& g) { return vertices(Zonotope(g)); }, py::arg("generators"));
    m.def("volume", [](const Matrix& g) { return volume(Zonotope(g)); }, py::arg("generators"));
    m.def("support", [](const Matrix& g, const Vector& d) { return support(Zonotope(g), d); }, py::arg("generators"),
          py::arg("direction"));
    m.def("shape_report", [](const Matrix& g) { return shape_dict(shape_report(Zonotope(g))); },
          py::arg("generators"));
    m.def("project_2d", [](const Matrix& g, int i, int j) { return polygon_array(project_2d(Zonotope(g), i, j)); },
          py::arg("generators"), py::arg("i"), py::arg("j"));

    m.def(
        "min_time",
        [](const LdtSystem& sys, const Vector& x0, RegionKind kind, int maxSteps) {
            const ControlSolution sol = min_time(sys, x0, kind, maxSteps);
            py::dict d;
            d["min_steps"] = sol.minSteps;
            d["inputs"] = sol.inputs;
            d["strategy_dim"] = sol.strategyDim;
            d["boundary"] = sol.boundaryStatus == BoundaryStatus::Boundary;
            d["margin"] = sol.margin;
            return d;
        },
        py::arg("system"), py::arg("x0"), py::arg("kind") = RegionKind::Recover,
        py::arg("max_steps") = kDefaultMaxSteps);

    m.def("strategy_space_dim", &strategy_space_dim, py::arg("system"), py::arg("x0"), py::arg("steps"),
          py::arg("kind"));

    m.def(
        "compare_ability",
        [](const LdtSystem& a, const LdtSystem& b, int steps, RegionKind kind) {
            const AbilityVerdict v = compare_ability(a, b, steps, kind);
            py::dict d;
            d["relation"] = std::string(to_string(v.relation));
            d["stronger"] = std::string(to_string(v.stronger));
            d["exact"] = v.exact;
            d["metrics_first"] = shape_dict(v.metricsFirst);
            d["metrics_second"] = shape_dict(v.metricsSecond);
            return d;
        },
        py::arg("first"), py::arg("second"), py::arg("steps"), py::arg("kind") = RegionKind::Reach);

    m.def(
        "verify_theorem1",
        [](const LdtSystem& a, const LdtSystem& b, int steps, int samples, RegionKind kind, std::uint64_t seed) {
            const TheoremReport r = verify_theorem1(a, b, steps, samples, kind, seed);
            py::dict d;
            d["states"] = r.states;
            d["time_violations"] = r.timeViolations;
            d["time_strictly_faster"] = r.timeStrictlyFaster;
            d["dim_violations"] = r.dimViolations;
            d["dim_less"] = r.dimLess;
            return d;
        },
        py::arg("first"), py::arg("second"), py::arg("steps"), py::arg("samples"),
        py::arg("kind") = RegionKind::Recover, py::arg("seed") = 1);

    m.def(
        "brute_vertices", [](const Matrix& g) { return oracle::brute_vertices(g); }, py::arg("generators"));

    m.def(
        "run_verification",
        [](std::uint64_t seed, const std::string& level) {
            const oracle::VerificationReport rep = oracle::run_verification(seed, oracle::parse_level(level));
            py::list checks;
            for (const auto& c : rep.checks) {
                py::dict d;
                d["name"] = c.name;
                d["passed"] = c.passed;
                d["discrepancy"] = c.discrepancy;
                d["cases"] = c.cases;
                d["detail"] = c.detail;
                checks.append(d);
            }
            py::dict d;
            d["passed"] = rep.passed();
            d["checks"] = checks;
            return d;
        },
        py::arg("seed") = 1, py::arg("level") = "quick");

    m.attr("__version__") = CTRLGAUGE_VERSION;
}
