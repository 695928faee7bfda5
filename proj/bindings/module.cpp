// Python bindings for the design pipeline, homogeneous norm, safety filters
// and the trajectory simulator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "homsafe/scenario_io.hpp"
#include "homsafe/verify.hpp"

namespace py = pybind11;
using namespace homsafe;

namespace {

Scenario scenario_from_text(const std::string& text) { return parse_scenario(text); }

py::dict trajectory_to_dict(const Trajectory& tr) {
    py::dict out;
    const size_t m = tr.samples.size();
    std::vector<double> t(m), u(m), u_nom(m), homnorm(m), r_t(m);
    std::vector<std::vector<double>> x(m), phi(m);
    std::vector<bool> in_omega(m), in_omega_r(m), in_theta(m), override_active(m), at_origin(m);
    for (size_t i = 0; i < m; ++i) {
        const Sample& s = tr.samples[i];
        t[i] = s.t;
        u[i] = s.u;
        u_nom[i] = s.u_nom;
        homnorm[i] = s.homnorm;
        r_t[i] = s.r_t;
        x[i] = s.x;
        phi[i] = s.phi;
        in_omega[i] = s.in_omega;
        in_omega_r[i] = s.in_omega_r;
        in_theta[i] = s.in_theta;
        override_active[i] = s.override_active;
        at_origin[i] = s.at_origin;
    }
    out["t"] = t;
    out["x"] = x;
    out["u"] = u;
    out["u_nom"] = u_nom;
    out["homnorm"] = homnorm;
    out["r_t"] = r_t;
    out["phi"] = phi;
    out["in_omega"] = in_omega;
    out["in_omega_r"] = in_omega_r;
    out["in_theta"] = in_theta;
    out["override"] = override_active;
    out["at_origin"] = at_origin;
    return out;
}

}  // namespace

PYBIND11_MODULE(homsafe, m) {
    m.doc() = "finite-/fixed-time nonovershooting controllers and safety filters for integrator chains";

    py::register_exception<Error>(m, "HomsafeError");

    py::class_<LinearDesign>(m, "LinearDesign")
        .def_readonly("n", &LinearDesign::n)
        .def_readonly("lam", &LinearDesign::lambda)
        .def_readonly("k", &LinearDesign::k)
        .def("h_row", [](const LinearDesign& d, int i) { return d.h.row(i); })
        .def("in_cone", [](const LinearDesign& d, const Vec& x) { return in_cone_omega(d, x); })
        .def("barrier_coords", [](const LinearDesign& d, const Vec& x) { return barrier_coords(d, x); });

    py::class_<HomDesign>(m, "HomDesign")
        .def_readonly("rho", &HomDesign::rho)
        .def_readonly("settling_time", &HomDesign::settling_time)
        .def_readonly("radius", &HomDesign::radius)
        .def_readonly("s_boost", &HomDesign::s_boost)
        .def_readonly("ptilde", &HomDesign::ptilde)
        .def_readonly("k_boost", &HomDesign::k_boost)
        .def_property_readonly("base", [](const HomDesign& d) { return d.base; })
        .def("hom_norm", [](const HomDesign& d, const Vec& x, double r) { return design_hom_norm(d, x, r); },
             py::arg("x"), py::arg("r"))
        .def("u_hom", [](const HomDesign& d, const Vec& x) { return u_hom(d, x); })
        .def("u_hom", [](const HomDesign& d, const Vec& x, double r) { return u_hom(d, x, r); })
        .def("u_mixed", [](const HomDesign& d, const Vec& x) { return u_mixed(d, x); })
        .def("barrier", [](const HomDesign& d, const Vec& x, double r) { return hom_barrier(d, x, r); })
        .def("in_cone", [](const HomDesign& d, const Vec& x, double r) { return in_cone_omega_r(d, x, r); })
        .def("in_ball", [](const HomDesign& d, const Vec& x, double r) { return in_ball_br(d, x, r); })
        .def("in_theta", [](const HomDesign& d, const Vec& x, double r) { return in_theta(d, x, r); })
        .def("control_bound", [](const HomDesign& d, double r) { return control_bound(d, r); });

    m.def("build_linear_design", &build_linear_design, py::arg("n"), py::arg("lam"));
    m.def("lambda_lower_bound", &lambda_lower_bound, py::arg("x0"));
    m.def("check_lambda_feasible", &check_lambda_feasible, py::arg("x0"), py::arg("lam"));
    m.def("minimal_feasible_lambda", &minimal_feasible_lambda, py::arg("x0"));
    m.def("build_diag_ptilde", &build_diag_ptilde, py::arg("n"), py::arg("lam"));
    m.def(
        "build_hom_design",
        [](const LinearDesign& base, double t_settle, double r, std::optional<double> alpha) {
            return build_hom_design(base, t_settle, r, alpha);
        },
        py::arg("base"), py::arg("settling_time"), py::arg("radius"), py::arg("alpha") = std::nullopt);

    m.def("filter_min", &filter_min, py::arg("u_nom"), py::arg("u_safe"));
    m.def(
        "filter_fntsf",
        [](const HomDesign& d, double u_nom, const Vec& x, double r, const Vec& c) {
            FilterConfig cfg;
            cfg.c = c;
            return filter_fntsf(cfg, d, u_nom, x, r);
        },
        py::arg("design"), py::arg("u_nom"), py::arg("x"), py::arg("r"), py::arg("c") = Vec{});
    m.def(
        "delta_r",
        [](const HomDesign& d, const Vec& x, double r, const Vec& c) {
            FilterConfig cfg;
            cfg.c = c;
            return delta_r(cfg, d, x, r);
        },
        py::arg("design"), py::arg("x"), py::arg("r"), py::arg("c") = Vec{});

    m.def("parse_scenario", &scenario_from_text, py::arg("text"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
    m.def("scenario_to_json", &scenario_to_json, py::arg("scenario"));

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("n", &Scenario::n)
        .def_readonly("x0", &Scenario::x0)
        .def_readonly("t_end", &Scenario::t_end)
        .def_readonly("dt", &Scenario::dt);

    m.def(
        "simulate",
        [](const std::string& scenario_text) {
            const Scenario s = parse_scenario(scenario_text);
            const Trajectory tr = integrate(s);
            py::dict out = trajectory_to_dict(tr);
            out["max_overshoot"] = max_overshoot(tr);
            const auto settled = detect_settling(tr, s.eps_origin);
            out["settling_time"] = settled ? py::object(py::float_(*settled)) : py::object(py::none());
            py::list ivs;
            for (const auto& iv : override_intervals(tr)) {
                py::dict d;
                d["start"] = iv.start;
                d["end"] = iv.end;
                d["boundary_time"] =
                    iv.boundary_time ? py::object(py::float_(*iv.boundary_time)) : py::object(py::none());
                ivs.append(d);
            }
            out["override_intervals"] = ivs;
            out["csv"] = [&] {
                std::ostringstream os;
                write_trajectory_csv(tr, os);
                return os.str();
            }();
            return out;
        },
        py::arg("scenario_text"), "Run a scenario (given as scenario-file text) and return the trajectory.");

    m.def(
        "verify",
        [](double tol_scale, unsigned seed) {
            VerifyOptions opts;
            opts.tol_scale = tol_scale;
            opts.seed = seed;
            py::list out;
            for (const auto& r : run_verification(opts)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("tol_scale") = 1.0, py::arg("seed") = 20240817, "Run the verification suite.");
}
