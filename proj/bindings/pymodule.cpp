#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dimwit/behavior.hpp"
#include "dimwit/npa.hpp"
#include "dimwit/sdp.hpp"
#include "dimwit/swap.hpp"
#include "dimwit/witness.hpp"

namespace py = pybind11;
using namespace dimwit;

namespace {

py::list behavior_table(const Behavior& P) {
    py::list lx;
    for (int x = 0; x < P.scen.nX; ++x) {
        py::list ly;
        for (int y = 0; y < P.scen.nY; ++y) {
            py::list la;
            for (int a = 0; a < P.scen.nA; ++a) {
                py::list lb;
                for (int b = 0; b < P.scen.nB; ++b) lb.append(P.at(x, y, a, b));
                la.append(lb);
            }
            ly.append(la);
        }
        lx.append(ly);
    }
    return lx;
}

CglmpNorm norm_from_string(const std::string& s) {
    if (s == "raw") return CglmpNorm::Raw;
    if (s == "brunner") return CglmpNorm::Brunner;
    if (s == "cy") return CglmpNorm::Cy;
    throw std::invalid_argument("normalization must be raw, brunner or cy");
}

} // namespace

PYBIND11_MODULE(_dimwit, m) {
    m.doc() = "dimension-witness workbench core";

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("nX", &Scenario::nX)
        .def_readonly("nY", &Scenario::nY)
        .def_readonly("nA", &Scenario::nA)
        .def_readonly("nB", &Scenario::nB);

    py::class_<Behavior>(m, "Behavior")
        .def_readonly("scenario", &Behavior::scen)
        .def("at", [](const Behavior& P, int x, int y, int a, int b) { return P.at(x, y, a, b); })
        .def("table", &behavior_table)
        .def("to_json", &Behavior::to_json)
        .def_static("from_json", &Behavior::from_json)
        .def("no_signaling_residual", [](const Behavior& P) { return no_signaling_residual(P); });

    m.def("p_mes4", &p_mes4);
    m.def("p_mes8", &p_mes8);
    m.def("p_bsm", &p_bsm, py::arg("visibility"));
    m.def("p_bsm_aligned", &p_bsm_aligned, py::arg("visibility"));
    m.def("p_chsh_ref", &p_chsh_ref, py::arg("variant"));
    m.def("coarse_grain", &coarse_grain);
    m.def("mes8_coarse3", [] {
        std::vector<int> cmap = {2, 0, 1, 2, 0, 1, 2, 0};
        return coarse_grain(p_mes8(), cmap, cmap);
    });

    m.def("cglmp_value", [](const Behavior& P, int d, const std::string& norm) {
        auto v = cglmp_value(P, d, norm_from_string(norm));
        return py::make_tuple(v.normalized, v.raw);
    }, py::arg("behavior"), py::arg("d"), py::arg("norm") = "raw");
    m.def("chsh_value", &chsh_value, py::arg("behavior"), py::arg("variant") = 0);

    py::class_<CgInequality>(m, "CgInequality")
        .def("to_json", &CgInequality::to_json)
        .def_static("from_json", &CgInequality::from_json);
    m.def("certificate_inequality", &certificate_inequality);
    m.def("eval_inequality", &eval_inequality);
    m.def("local_bound", [](const CgInequality& q) {
        auto r = local_bound(q);
        return py::make_tuple(r.value, r.strategies);
    });

    py::class_<QuantumModel>(m, "QuantumModel");
    m.def("ideal_swap_model", &ideal_swap_model);
    m.def("counterexample_model", &counterexample_model);
    m.def("bsm_model", &bsm_model, py::arg("visibility"));
    m.def("aligned_bsm_model", &aligned_bsm_model, py::arg("visibility"));

    py::class_<SwapReport>(m, "SwapReport")
        .def_readonly("F", &SwapReport::F)
        .def("to_json", &SwapReport::to_json);
    m.def("fidelity_F", &fidelity_F);
    m.def("swapping_experiment", &swapping_experiment);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("bound", &SolveResult::bound)
        .def_readonly("objective", &SolveResult::objective)
        .def_readonly("status", &SolveResult::status)
        .def_readonly("iterations", &SolveResult::iterations)
        .def("to_json", &SolveResult::to_json);

    m.def("sdp_min_fidelity",
          [](const Behavior& P, const std::string& ops, int max_iter, double tol, int verbosity) {
              auto prob = assemble_problem_behavior(
                  P, ops == "fallback" ? fallback_operator_set() : default_operator_set());
              SolverOptions o;
              o.max_iterations = max_iter;
              o.tol_primal = o.tol_dual = tol;
              o.verbosity = verbosity;
              return solve(prob, o);
          },
          py::arg("behavior"), py::arg("ops") = "default390", py::arg("max_iter") = 20000,
          py::arg("tol") = 1e-6, py::arg("verbosity") = 0);
}
