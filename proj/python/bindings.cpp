#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "deltastrip/config.hpp"
#include "deltastrip/functionals.hpp"
#include "deltastrip/greens.hpp"
#include "deltastrip/minimize.hpp"
#include "deltastrip/shrink.hpp"
#include "deltastrip/soliton1d.hpp"
#include "deltastrip/strip.hpp"

namespace py = pybind11;
using namespace deltastrip;

namespace {

py::array_t<double> field_to_numpy(const Field& f) {
    const StripGrid& g = f.grid();
    py::array_t<double> out({g.nx(), g.ny()});
    auto view = out.mutable_unchecked<2>();
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) view(i, j) = f(i, j);
    }
    return out;
}

Field field_from_numpy(const StripGrid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2 || a.shape(0) != g.nx() || a.shape(1) != g.ny()) {
        throw Error(ErrorKind::InvalidGrid, "array shape must be (nx, ny)");
    }
    return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

}  // namespace

PYBIND11_MODULE(_deltastrip, m) {
    m.doc() = "Ground states of the NLS with a delta defect line on a strip";

    static py::exception<Error> error_type(m, "DeltaStripError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            PyErr_SetString(error_type.ptr(), msg.c_str());
        }
    });

    py::class_<StripGrid>(m, "StripGrid")
        .def(py::init(&StripGrid::make), py::arg("X"), py::arg("nx"), py::arg("ny"))
        .def_property_readonly("X", &StripGrid::x_extent)
        .def_property_readonly("nx", &StripGrid::nx)
        .def_property_readonly("ny", &StripGrid::ny)
        .def_property_readonly("hx", &StripGrid::hx)
        .def_property_readonly("hy", &StripGrid::hy)
        .def_property_readonly("center", &StripGrid::center)
        .def("x", &StripGrid::x)
        .def("y", &StripGrid::y)
        .def_static("default_extent", &StripGrid::default_extent);

    py::class_<Field>(m, "Field")
        .def(py::init<const StripGrid&>())
        .def(py::init(&field_from_numpy), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &Field::grid)
        .def("to_numpy", &field_to_numpy)
        .def("max_abs", &Field::max_abs);

    py::class_<ProblemParams>(m, "ProblemParams")
        .def(py::init([](double p, double gamma, double omega, double L, double mass) {
                 return ProblemParams{p, gamma, omega, L, mass};
             }),
             py::arg("p") = 3.0, py::arg("gamma") = 0.0, py::arg("omega") = 1.0, py::arg("L") = 1.0,
             py::arg("mass") = 1.0)
        .def_readwrite("p", &ProblemParams::p)
        .def_readwrite("gamma", &ProblemParams::gamma)
        .def_readwrite("omega", &ProblemParams::omega)
        .def_readwrite("L", &ProblemParams::L)
        .def_readwrite("mass", &ProblemParams::m);

    py::class_<FunctionalReport>(m, "FunctionalReport")
        .def_readonly("action", &FunctionalReport::action)
        .def_readonly("nehari", &FunctionalReport::nehari)
        .def_readonly("energy", &FunctionalReport::energy)
        .def_readonly("mass", &FunctionalReport::mass)
        .def_readonly("trace", &FunctionalReport::trace)
        .def_readonly("kinetic_x", &FunctionalReport::kinetic_x)
        .def_readonly("kinetic_y", &FunctionalReport::kinetic_y)
        .def_readonly("potential", &FunctionalReport::potential);

    py::class_<PohozaevResiduals>(m, "PohozaevResiduals")
        .def_readonly("r1", &PohozaevResiduals::r1)
        .def_readonly("r2", &PohozaevResiduals::r2);

    m.def("eval_all", &eval_all);
    m.def("evaluate", &evaluate);
    m.def("pohozaev_residuals", &pohozaev_residuals);
    m.def("recover_omega", &recover_omega);
    m.def("nehari_project", &nehari_project);
    m.def("enforce_symmetry", &enforce_symmetry);

    m.def("soliton_value", [](double omega, double gamma, double p, double x) {
        return Soliton1D::make(omega, gamma, p).value_at(x);
    });
    m.def("soliton_mass", [](double omega, double gamma, double p) { return mass_of(Soliton1D::make(omega, gamma, p)); });
    m.def("soliton_energy", [](double omega, double gamma, double p) {
        return energy_1d(Soliton1D::make(omega, gamma, p));
    });
    m.def("omega_of_mass", &omega_of_mass, py::arg("m"), py::arg("gamma"), py::arg("p"));
    m.def("extend_soliton", [](double omega, double gamma, double p, const StripGrid& g) {
        return extend_to_strip(Soliton1D::make(omega, gamma, p), g);
    });

    py::class_<MinimizeResult>(m, "MinimizeResult")
        .def_readonly("field", &MinimizeResult::field)
        .def_readonly("report", &MinimizeResult::report)
        .def_readonly("recovered_omega", &MinimizeResult::recovered_omega)
        .def_readonly("pohozaev_omega", &MinimizeResult::pohozaev_omega)
        .def_readonly("iterations", &MinimizeResult::iterations)
        .def_readonly("converged", &MinimizeResult::converged)
        .def_readonly("grad_norm", &MinimizeResult::grad_norm)
        .def_property_readonly("dy_norm", [](const MinimizeResult& r) { return r.diagnostics.dy_norm; })
        .def_property_readonly("sym_defect", [](const MinimizeResult& r) { return r.diagnostics.sym_defect; })
        .def_property_readonly("runaway", [](const MinimizeResult& r) { return r.diagnostics.runaway; });

    auto minimize = [](bool energy, const ProblemParams& params, const StripGrid& grid, bool symmetric_x,
                       double tol_grad, int max_iters, const std::string& start, double perturb_y,
                       std::uint64_t seed) {
        MinimizeConfig cfg;
        cfg.mode = energy ? MinimizeMode::MassEnergy : MinimizeMode::NehariAction;
        cfg.symmetric_x = symmetric_x;
        cfg.tol_grad = tol_grad;
        cfg.max_iters = max_iters;
        cfg.perturb_y = perturb_y;
        cfg.seed = seed;
        if (start == "gaussian_bump") {
            cfg.start = StartKind::GaussianBump;
        } else if (start == "random") {
            cfg.start = StartKind::Random;
        } else if (start != "soliton_extension") {
            throw Error(ErrorKind::ValidationError, "start must be soliton_extension, gaussian_bump or random");
        }
        py::gil_scoped_release release;
        return energy ? minimize_energy(cfg, params, grid) : minimize_action(cfg, params, grid);
    };
    m.def(
        "minimize_action",
        [minimize](const ProblemParams& params, const StripGrid& grid, bool symmetric_x, double tol_grad,
                   int max_iters, const std::string& start, double perturb_y, std::uint64_t seed) {
            return minimize(false, params, grid, symmetric_x, tol_grad, max_iters, start, perturb_y, seed);
        },
        py::arg("params"), py::arg("grid"), py::arg("symmetric_x") = false, py::arg("tol_grad") = 1e-8,
        py::arg("max_iters") = 2000, py::arg("start") = "soliton_extension", py::arg("perturb_y") = 0.0,
        py::arg("seed") = 0);
    m.def(
        "minimize_energy",
        [minimize](const ProblemParams& params, const StripGrid& grid, bool symmetric_x, double tol_grad,
                   int max_iters, const std::string& start, double perturb_y, std::uint64_t seed) {
            return minimize(true, params, grid, symmetric_x, tol_grad, max_iters, start, perturb_y, seed);
        },
        py::arg("params"), py::arg("grid"), py::arg("symmetric_x") = false, py::arg("tol_grad") = 1e-8,
        py::arg("max_iters") = 2000, py::arg("start") = "soliton_extension", py::arg("perturb_y") = 0.0,
        py::arg("seed") = 0);

    py::class_<GreensSpec>(m, "GreensSpec")
        .def(py::init(&GreensSpec::make), py::arg("omega"), py::arg("gamma"), py::arg("L"), py::arg("k_max") = 0,
             py::arg("even_modes_only") = false)
        .def_property_readonly("k_max", &GreensSpec::effective_k_max);
    m.def("mode_coefficient", &mode_coefficient, py::arg("k"), py::arg("x"), py::arg("xi"), py::arg("spec"));
    m.def("greens_eval", [](double x, double y, double xi, double eta, const GreensSpec& s) {
        const GreensValue v = greens_eval(x, y, xi, eta, s);
        return py::make_tuple(v.value, v.tail_bound);
    });
    m.def("verify_solution_via_green", &verify_solution_via_green);

    m.def(
        "l_star_star_bound",
        [](double m_, double gamma, double p, bool optimize) {
            const LStarStarBound b = l_star_star_bound(m_, gamma, p, optimize);
            py::dict d;
            d["quotient_fixed"] = b.quotient_fixed;
            d["quotient_optimized"] = b.quotient_optimized;
            d["bound_sq_fixed"] = b.bound_fixed;
            d["bound_sq_optimized"] = b.bound_optimized;
            d["bound_fixed"] = b.sqrt_bound_fixed;
            d["bound_optimized"] = b.sqrt_bound_optimized;
            d["potential"] = b.potential;
            return d;
        },
        py::arg("m"), py::arg("gamma"), py::arg("p"), py::arg("optimize") = true);

    m.def(
        "gamma_star",
        [](double omega, double L, double p, const StripGrid& grid) {
            MinimizeConfig cfg;
            GammaStarResult g;
            {
                py::gil_scoped_release release;
                g = gamma_star(omega, L, p, grid, cfg);
            }
            py::dict d;
            d["gamma_star"] = g.gamma_star;
            d["sigma_star"] = g.sigma_star;
            d["I_minus"] = g.I_minus;
            d["I_plus"] = g.I_plus;
            d["identity_residual"] = g.identity_residual;
            d["s_omega0"] = g.s_omega0;
            return d;
        },
        py::arg("omega"), py::arg("L"), py::arg("p"), py::arg("grid"));

    m.def(
        "run_config",
        [](const std::string& text) {
            const RunReport rep = run(parse_config(text));
            return py::make_tuple(rep.exit_code, rep.summary.dump());
        },
        py::arg("text"));
}
