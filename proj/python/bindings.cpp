/**
 * @file bindings.cpp
 * @brief Python bindings for the core operations: steady solvers, a priori
 * bounds, linearization/Green's function pipeline, transient stepping, and
 * the theorem-check suite.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "slopeflow/bounds.hpp"
#include "slopeflow/greens.hpp"
#include "slopeflow/linearize.hpp"
#include "slopeflow/oracle.hpp"
#include "slopeflow/steady.hpp"
#include "slopeflow/transient.hpp"
#include "slopeflow/verify.hpp"

namespace py = pybind11;
using namespace slopeflow;

namespace {

const char* shoot_status_name(ShootStatus s) {
    switch (s) {
        case ShootStatus::Ok: return "ok";
        case ShootStatus::NoBracket: return "no-bracket";
        case ShootStatus::Infeasible: return "infeasible";
        case ShootStatus::Tolerance: return "tolerance";
    }
    return "unknown";
}

SolutionProfile solve_steady_py(const ProblemSpec& spec, int n_cells) {
    const ShootResult r = solve_steady(spec, Grid::uniform(n_cells));
    if (r.status != ShootStatus::Ok)
        throw std::runtime_error(std::string("steady solve failed: ") +
                                 shoot_status_name(r.status));
    return r.profile;
}

SolutionProfile solve_fd_py(const ProblemSpec& spec, int n_cells) {
    FdConfig cfg;
    cfg.n_cells = n_cells;
    const FdResult r = solve_fd(spec, cfg);
    if (r.status != FdStatus::Ok)
        throw std::runtime_error("grid-method solve failed to converge");
    return r.profile;
}

}  // namespace

PYBIND11_MODULE(_slopeflow, m) {
    m.doc() = "Steady/transient hillslope groundwater solver with built-in "
              "theorem checks";

    py::class_<SourceFunction>(m, "SourceFunction")
        .def(py::init<>())
        .def_static("constant", &SourceFunction::constant, py::arg("c"))
        .def_static("polynomial", &SourceFunction::polynomial, py::arg("coeffs"))
        .def_static("from_json", &SourceFunction::from_json, py::arg("text"))
        .def("to_json", &SourceFunction::to_json)
        .def("__call__", &SourceFunction::eval, py::arg("x"))
        .def("tail", &SourceFunction::tail, py::arg("x"))
        .def("l1_norm", &SourceFunction::l1_norm)
        .def("is_nonnegative", &SourceFunction::is_nonnegative)
        .def("is_zero", &SourceFunction::is_zero);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](double p, double H, double phi, const SourceFunction& source,
                         double conductivity) {
                 ProblemSpec spec;
                 spec.p = p;
                 spec.H = H;
                 spec.phi = phi;
                 spec.source = source;
                 spec.conductivity = conductivity;
                 spec.H_minus = H;
                 spec.H_plus = H;
                 spec.validate();
                 return spec;
             }),
             py::arg("p") = 3.0, py::arg("H") = 1.0, py::arg("phi") = 0.2,
             py::arg("source") = SourceFunction(), py::arg("conductivity") = 1.0)
        .def_readwrite("p", &ProblemSpec::p)
        .def_readwrite("H", &ProblemSpec::H)
        .def_readwrite("phi", &ProblemSpec::phi)
        .def_readwrite("conductivity", &ProblemSpec::conductivity)
        .def_readwrite("source", &ProblemSpec::source)
        .def("lambda_", &ProblemSpec::lambda, "drift coefficient (sin phi)^(p-1)");

    py::class_<SolutionProfile>(m, "SolutionProfile")
        .def_property_readonly("x",
                               [](const SolutionProfile& p) { return p.grid.nodes; })
        .def_readonly("u", &SolutionProfile::u)
        .def_readonly("du", &SolutionProfile::du)
        .def_readonly("s_end", &SolutionProfile::s_end)
        .def_readonly("residual_first_order", &SolutionProfile::residual_first_order)
        .def_readonly("min_head", &SolutionProfile::min_head)
        .def("sup_norm_u", &SolutionProfile::sup_norm_u)
        .def("to_csv", &SolutionProfile::to_csv);

    py::class_<DiffusionProfile>(m, "DiffusionProfile")
        .def_property_readonly("x",
                               [](const DiffusionProfile& p) { return p.grid.nodes; })
        .def_readonly("D", &DiffusionProfile::D)
        .def_readonly("floor_used", &DiffusionProfile::floor_used)
        .def_readonly("floor_name", &DiffusionProfile::floor_name)
        .def("min_D", &DiffusionProfile::min_D);

    py::class_<GreensTable>(m, "GreensTable")
        .def_property_readonly("x", [](const GreensTable& t) { return t.grid.nodes; })
        .def_readonly("E_minus", &GreensTable::E_minus)
        .def_readonly("E_plus", &GreensTable::E_plus)
        .def("n_nodes", &GreensTable::n_nodes)
        .def("g", &GreensTable::g, py::arg("i"), py::arg("j"));

    m.def("solve_steady", &solve_steady_py, py::arg("spec"), py::arg("n_cells") = 512,
          "Shooting solve of the steady problem; raises on solver failure.");
    m.def("solve_oracle", &solve_fd_py, py::arg("spec"), py::arg("n_cells") = 512,
          "Independent finite-difference reference solve of the weak form.");
    m.def(
        "first_order_residual",
        [](const ProblemSpec& spec, const SolutionProfile& profile) {
            return first_order_residual(spec, profile);
        },
        py::arg("spec"), py::arg("profile"));

    m.def("sup_norm_bound", &sup_norm_bound, py::arg("spec"));
    m.def("existence_condition", &existence_condition, py::arg("spec"));
    m.def("diffusion_floor", &diffusion_floor, py::arg("spec"));
    m.def(
        "source_condition_holds",
        [](const ProblemSpec& spec) { return check_hf(spec).holds(); }, py::arg("spec"),
        "True iff the positivity condition on the source holds.");

    m.def("build_diffusion", &build_diffusion, py::arg("spec"), py::arg("profile"));
    m.def(
        "build_greens",
        [](const DiffusionProfile& D, double lambda) { return build_greens(D, lambda); },
        py::arg("diffusion"), py::arg("lambda_"));
    m.def("green_eval", &green_eval, py::arg("table"), py::arg("x"), py::arg("y"));
    m.def("green_solve", &green_solve, py::arg("table"), py::arg("source"));
    m.def("lipschitz_estimate", &lipschitz_estimate, py::arg("table"));
    m.def(
        "positivity_scan",
        [](const GreensTable& t) { return positivity_scan(t); }, py::arg("table"),
        "Returns (interior minimum, (x, y) of the argmin).");
    m.def("fixed_point_check", &fixed_point_check, py::arg("spec"), py::arg("profile"),
          "Sup distance between the profile and the linear solve through its "
          "own linearization.");

    m.def(
        "run_transient",
        [](const ProblemSpec& spec, int n_cells, double t_end, bool compare_steady) {
            TransientState state = TransientState::initial(spec, n_cells);
            SolutionProfile steady;
            const SolutionProfile* target = nullptr;
            if (compare_steady) {
                steady = solve_steady_py(spec, n_cells);
                target = &steady;
            }
            const RunSummary s = run(spec, std::move(state), t_end, 0.0, {}, target);
            py::dict out;
            out["t_end"] = s.t_end;
            out["steps"] = s.steps;
            out["clipped_mass"] = s.clipped_mass;
            out["final_sup_distance"] = s.final_sup_distance;
            return out;
        },
        py::arg("spec"), py::arg("n_cells") = 256, py::arg("t_end") = 15.0,
        py::arg("compare_steady") = false,
        "Explicit conservative time stepping from h0 == H; optionally reports "
        "the final sup distance to the steady solution.");

    m.def(
        "verify",
        [](const ProblemSpec& spec, const SolutionProfile& profile, unsigned seed) {
            const double tol = 1e-4 * (1.0 + profile.sup_norm_u());
            const VerificationReport r = verify_scenario(spec, profile, tol, seed);
            py::dict out;
            out["all_passed"] = r.all_passed();
            out["json"] = r.to_json();
            out["table"] = r.to_table();
            return out;
        },
        py::arg("spec"), py::arg("profile"), py::arg("seed") = 1,
        "Runs the full theorem-check suite on a solved scenario.");
}
