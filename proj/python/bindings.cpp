#include <cstdint>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcm/bcp.hpp"
#include "bcm/errors.hpp"
#include "bcm/forward.hpp"
#include "bcm/inverse.hpp"
#include "bcm/io.hpp"
#include "bcm/media.hpp"
#include "bcm/numerics.hpp"
#include "bcm/operators.hpp"

namespace py = pybind11;
using namespace bcm;

namespace {

/// Grid nodes and values of a sampled function as a pair of arrays.
py::tuple as_arrays(const SampledFunction& f) { return py::make_tuple(f.grid.nodes(), f.values); }

py::dict report_dict(const ReconstructionReport& rep) {
    py::dict d;
    d["method"] = rep.method;
    d["n"] = rep.n;
    d["quantity"] = rep.quantity;
    d["x"] = rep.recovered.grid().nodes();
    d["values"] = rep.values();
    d["xi"] = rep.xi;
    d["y"] = rep.y;
    d["masked_fraction"] = rep.masked_fraction;
    d["sup_rel_error"] = rep.sup_rel_error;
    d["l2_rel_error"] = rep.l2_rel_error;
    d["orders"] = rep.orders;
    d["ladder"] = rep.ladder;
    d["admissible"] = rep.admissible;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bcm, mod) {
    mod.doc() = "Boundary-control reconstruction of 1D wave media";

    static py::exception<InadmissibleData> inadmissible(mod, "InadmissibleData", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InadmissibleData& e) {
            py::set_error(inadmissible, e.what());
        } catch (const Error& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    py::class_<MediumProfile>(mod, "Medium")
        .def_readonly("name", &MediumProfile::name)
        .def_readonly("x_end", &MediumProfile::x_end)
        .def_readonly("rho", &MediumProfile::rho)
        .def_readonly("q", &MediumProfile::q)
        .def_readwrite("support_bound", &MediumProfile::support_bound)
        .def_property_readonly("x", [](const MediumProfile& m) { return m.grid().nodes(); })
        .def("rho_at", &MediumProfile::rho_at)
        .def("q_at", &MediumProfile::q_at);

    mod.def("medium", &make_test_medium, py::arg("name"), py::arg("x_end") = 4.0, py::arg("n_cells") = 4000,
            "Catalog medium by name, or a medium CSV path");
    mod.def("medium_from_samples",
            [](const std::string& name, double x_end, const Vec& rho, const Vec& q, std::optional<double> a) {
                return MediumProfile::from_samples(name, x_end, rho, q, a);
            },
            py::arg("name"), py::arg("x_end"), py::arg("rho"), py::arg("q"), py::arg("support_bound") = py::none());

    py::class_<ResponseKernel>(mod, "Kernel")
        .def_property_readonly("system", [](const ResponseKernel& k) { return to_string(k.system); })
        .def_readonly("T", &ResponseKernel::T)
        .def_readonly("alpha", &ResponseKernel::alpha)
        .def_readonly("beta", &ResponseKernel::beta)
        .def_property_readonly("step", &ResponseKernel::step)
        .def_property_readonly("n", &ResponseKernel::n)
        .def_property_readonly("t", [](const ResponseKernel& k) { return k.r.grid.nodes(); })
        .def_property_readonly("r", [](const ResponseKernel& k) { return k.r.values; });

    mod.def("extract_kernel",
            [](const MediumProfile& m, const std::string& system, double T, int n) {
                return extract_response_kernel(system_from_string(system), m, T, n);
            },
            py::arg("medium"), py::arg("system") = "dirichlet", py::arg("T") = 1.0, py::arg("n") = 256);
    mod.def("load_kernel",
            [](const std::string& path, const std::string& system, double alpha, double beta) {
                return load_kernel(path, system_from_string(system), alpha, beta);
            },
            py::arg("path"), py::arg("system") = "dirichlet", py::arg("alpha") = 1.0, py::arg("beta") = 0.0);
    mod.def("shift_kernel", &shift_kernel, py::arg("kernel"), py::arg("shift"));

    mod.def("admissibility",
            [](const ResponseKernel& k) {
                const auto v = check_admissibility(k);
                py::dict d;
                d["admissible"] = v.admissible;
                d["reason"] = v.reason;
                d["failed_pivot"] = v.failed_pivot;
                d["pivot_ratio"] = v.pivot_ratio;
                d["size"] = v.size;
                return d;
            },
            py::arg("kernel"));

    mod.def("forward_state",
            [](const MediumProfile& m, const std::string& system, double T, int n, std::uint64_t seed) {
                auto f = random_smooth_controls(TimeGrid(T, n), 1, seed)[0];
                return as_arrays(apply_control_operator(system_from_string(system), m, f, T));
            },
            py::arg("medium"), py::arg("system") = "dirichlet", py::arg("T") = 1.0, py::arg("n") = 256,
            py::arg("seed") = 42, "Final-time state driven by a seeded smooth control: (x, u)");

    mod.def("invert",
            [](const std::string& method, const ResponseKernel& k, double ridge, double kk) {
                ReconstructionOptions opt;
                opt.ridge = ridge;
                opt.k = kk;
                return report_dict(reconstruct(method, k, opt));
            },
            py::arg("method"), py::arg("kernel"), py::arg("ridge") = 0.0, py::arg("k") = 1.0);
    mod.def("roundtrip",
            [](const MediumProfile& m, const std::string& method, const std::vector<int>& ladder, double T) {
                return report_dict(roundtrip(m, method, ladder, T));
            },
            py::arg("medium"), py::arg("method"), py::arg("ladder") = std::vector<int>{128, 256, 512},
            py::arg("T") = 1.0);

    mod.def("classical",
            [](const std::string& kind, const ResponseKernel& k, double xi) {
                const auto K = solve_classical(classical_from_string(kind), k, xi);
                Vec t(K.values[0].size());
                for (int i = 0; i < t.size(); ++i) t[i] = (K.row_first[0] + i) * K.step;
                return py::make_tuple(t, K.values[0]);
            },
            py::arg("kind"), py::arg("kernel"), py::arg("xi"), "Direct classical kernel row at xi: (t, value)");
    mod.def("eigen_target",
            [](const ResponseKernel& k, double lambda, double T) { return as_arrays(solve_eigen_target(k, lambda, T)); },
            py::arg("kernel"), py::arg("lam"), py::arg("T") = 1.0);
}
