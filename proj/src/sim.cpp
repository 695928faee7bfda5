#include "homsafe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homsafe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOverrideTol = 1e-9;

bool law_discontinuous_at_origin(const Scenario& s) {
    switch (s.controller) {
        case ControllerKind::Homogeneous:
        case ControllerKind::Mixed:
            return true;
        case ControllerKind::Linear:
            return false;
        case ControllerKind::Filtered:
            switch (s.filter.mode) {
                case FilterMode::MinHom:
                case FilterMode::FnTSf:
                case FilterMode::FxTSf:
                case FilterMode::Mixed:
                    return true;
                default:
                    return false;
            }
    }
    return false;
}

bool uses_nominal(const Scenario& s) { return s.controller == ControllerKind::Filtered; }

}  // namespace

double Nominal::eval(double t, const Vec& x) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return value;
        case Kind::Sinusoid:
            return amp * std::sin(freq * t) + offset;
        case Kind::PaperV:
            // persistent periodic push against the safety boundary for the
            // double integrator
            return -4.0 * (x[0] + std::sin(kPi * t / 2.0) + 0.8) -
                   4.0 * (x[1] + (kPi / 2.0) * std::cos(kPi * t / 2.0));
    }
    return 0.0;
}

Trajectory integrate(const Scenario& s) {
    if (!(s.dt > 0.0) || !(s.t_end > 0.0) || !(s.eps_origin > 0.0))
        throw Error(Err::InvalidInput, "scenario: dt, t_end and eps_origin must be positive");
    if (static_cast<int>(s.x0.size()) != s.n) throw Error(Err::InvalidInput, "scenario: x0 size mismatch");
    if (!(s.filter.r_min > 0.0) || !(s.filter.delta_cap >= 1e6))
        throw Error(Err::InvalidInput, "scenario: filter needs r_min > 0 and delta_cap >= 1e6");
    for (double c : s.filter.c)
        if (!(c > 0.0)) throw Error(Err::InvalidInput, "scenario: filter constants must be positive");
    if (s.nominal.kind == Nominal::Kind::PaperV && s.n != 2)
        throw Error(Err::InvalidInput, "scenario: the paperV nominal is defined for order 2");

    double lambda;
    if (s.lambda) {
        lambda = *s.lambda;
    } else {
        lambda = std::max(1.0, std::ceil(lambda_lower_bound(s.x0)));
    }
    const LinearDesign lin = build_linear_design(s.n, lambda);
    const HomDesign hom = build_hom_design(lin, s.settling_time, s.radius, s.alpha);

    const ChainSystem sys = make_chain(s.n);
    const bool fxtsf = s.controller == ControllerKind::Filtered && s.filter.mode == FilterMode::FxTSf;
    const bool clampable = law_discontinuous_at_origin(s);

    FilterState fstate = make_filter_state(s.filter, hom, s.x0);

    Trajectory tr{{}, lin, hom, s};
    const auto steps = static_cast<size_t>(std::llround(s.t_end / s.dt));
    tr.samples.reserve(steps + 1);

    Vec x = s.x0;
    bool at_origin = clampable && design_weighted_norm(hom, x) <= s.eps_origin;
    if (at_origin) x.assign(s.n, 0.0);

    for (size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * s.dt;
        const double u_nom = s.nominal.eval(t, x);

        bool released = false;
        if (at_origin && uses_nominal(s) && u_nom < 0.0) {
            at_origin = false;
            released = true;  // leave the origin under the nominal control
        }

        double r_eff = fxtsf ? fstate.running_radius : hom.radius;
        double u = 0.0;
        if (at_origin) {
            u = 0.0;
        } else if (released) {
            u = u_nom;
        } else {
            switch (s.controller) {
                case ControllerKind::Linear:
                    u = dot(lin.k, x);
                    break;
                case ControllerKind::Homogeneous:
                    u = u_hom(hom, x);
                    break;
                case ControllerKind::Mixed:
                    u = u_mixed(hom, x);
                    break;
                case ControllerKind::Filtered:
                    switch (s.filter.mode) {
                        case FilterMode::Off:
                            u = u_nom;
                            break;
                        case FilterMode::MinLinear:
                            u = filter_min(u_nom, dot(lin.k, x));
                            break;
                        case FilterMode::MinHom:
                            u = filter_min(u_nom, u_hom(hom, x));
                            break;
                        case FilterMode::FnTSf:
                            u = filter_fntsf(s.filter, hom, u_nom, x, hom.radius);
                            break;
                        case FilterMode::FxTSf:
                            u = filter_fxtsf(s.filter, hom, fstate, u_nom, x, t);
                            r_eff = fstate.running_radius;
                            break;
                        case FilterMode::Mixed:
                            u = filter_mixed(s.filter, hom, u_nom, x, hom.radius);
                            break;
                    }
                    break;
            }
        }

        Sample smp;
        smp.t = t;
        smp.x = x;
        smp.u = u;
        smp.u_nom = u_nom;
        smp.r_t = r_eff;
        smp.homnorm = at_origin ? 0.0 : design_hom_norm(hom, x, r_eff);
        smp.phi = at_origin ? Vec(s.n, 0.0) : hom_barrier(hom, x, r_eff);
        smp.in_omega = in_cone_omega(lin, x);
        smp.in_omega_r = at_origin || in_cone_omega_r(hom, x, r_eff);
        smp.in_theta = at_origin || in_theta(hom, x, r_eff);
        smp.override_active = std::abs(u - u_nom) > kOverrideTol;
        smp.at_origin = at_origin;
        tr.samples.push_back(std::move(smp));

        if (k == steps) break;

        if (!at_origin) {
            auto rhs = [&](const Vec& xx) {
                Vec dx = sys.a * xx;
                dx[s.n - 1] += u;
                return dx;
            };
            const Vec k1 = rhs(x);
            Vec x2(s.n);
            for (int i = 0; i < s.n; ++i) x2[i] = x[i] + 0.5 * s.dt * k1[i];
            const Vec k2 = rhs(x2);
            for (int i = 0; i < s.n; ++i) x2[i] = x[i] + 0.5 * s.dt * k2[i];
            const Vec k3 = rhs(x2);
            for (int i = 0; i < s.n; ++i) x2[i] = x[i] + s.dt * k3[i];
            const Vec k4 = rhs(x2);
            for (int i = 0; i < s.n; ++i)
                x[i] += s.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

            for (double v : x)
                if (!std::isfinite(v) || std::abs(v) > 1e100)
                    throw Error(Err::DivergenceDetected,
                                "integrate: state diverged at t = " + std::to_string(t + s.dt));

            if (clampable && design_weighted_norm(hom, x) <= s.eps_origin) {
                // sliding at the origin: stay only while the nominal does not
                // pull into the interior
                if (!uses_nominal(s) || u_nom >= 0.0) {
                    x.assign(s.n, 0.0);
                    at_origin = true;
                }
            }
        }
    }
    return tr;
}

std::optional<double> detect_settling(const Trajectory& tr, double eps) {
    const auto& smps = tr.samples;
    std::optional<double> first;
    double suffix_max = 0.0;
    std::vector<double> norms(smps.size());
    for (size_t i = 0; i < smps.size(); ++i) norms[i] = design_weighted_norm(tr.hom, smps[i].x);
    for (size_t i = smps.size(); i-- > 0;) {
        suffix_max = std::max(suffix_max, norms[i]);
        if (suffix_max <= eps) first = smps[i].t;
    }
    return first;
}

double max_overshoot(const Trajectory& tr) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : tr.samples) m = std::max(m, s.x[0]);
    return m;
}

std::vector<OverrideInterval> override_intervals(const Trajectory& tr) {
    std::vector<OverrideInterval> out;
    const auto& smps = tr.samples;
    size_t i = 0;
    while (i < smps.size()) {
        if (!smps[i].override_active) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < smps.size() && smps[j].override_active) ++j;
        OverrideInterval iv;
        iv.start = smps[i].t;
        iv.end = smps[j - 1].t;
        for (size_t k = i; k < smps.size(); ++k) {
            if (smps[k].at_origin || smps[k].x[0] >= -1e-6) {
                iv.boundary_time = smps[k].t;
                break;
            }
        }
        out.push_back(iv);
        i = j;
    }
    return out;
}

}  // namespace homsafe
