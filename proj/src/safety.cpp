#include "homsafe/safety.hpp"

#include <algorithm>
#include <cmath>

namespace homsafe {

namespace {

double c_for(const FilterConfig& cfg, int i) {
    // constants are indexed i = 2..n-1; stored from index 0
    const size_t idx = static_cast<size_t>(i - 2);
    if (idx < cfg.c.size()) return cfg.c[idx];
    return 1.0;
}

}  // namespace

GammaPair gammas(const HomDesign& d, const Vec& x, double r) {
    const int n = d.base.n;
    const Vec phi = hom_barrier(d, x, r);

    const ChainSystem sys = make_chain(n);
    const Mat g = dilation_generator(d.dl);
    Mat ni_g(n, n);
    for (int i = 0; i < n; ++i) ni_g(i, i) = n - g(i, i);
    const Mat m = g + d.base.lambda * (ni_g * transpose(sys.a));  // H G H^{-1}

    Mat pt(n, n);
    for (int i = 0; i < n; ++i) pt(i, i) = d.ptilde[i];

    const double den = quad_form(phi, pt * m, phi);
    const double scale = std::max(1.0, dot(phi, phi));
    if (std::abs(den) <= 1e-14 * scale)
        throw Error(Err::DegenerateDenominator, "gammas: degenerate denominator");

    const Mat li_a = d.base.lambda * Mat::identity(n) - sys.a;
    GammaPair out;
    out.gamma_r = quad_form(phi, pt * li_a, phi) / den;
    out.gamma_u = d.ptilde[n - 1] * phi[n - 1] / den;
    return out;
}

double delta_r(const FilterConfig& cfg, const HomDesign& d, const Vec& x, double r) {
    const int n = d.base.n;
    if (n <= 2) return cfg.delta_cap;
    if (!in_cone_omega_r(d, x, r)) return cfg.delta_cap;

    GammaPair gp;
    try {
        gp = gammas(d, x, r);
    } catch (const Error& e) {
        if (e.code() == Err::DegenerateDenominator) return cfg.delta_cap;  // boundary convention
        throw;
    }
    if (gp.gamma_u <= 1e-14) return cfg.delta_cap;

    const Vec phi = hom_barrier(d, x, r);
    double min_term = cfg.delta_cap;
    for (int i = 2; i <= n - 1; ++i) {
        const double lower = phi[i - 2];
        if (lower <= 1e-14) continue;  // vanishing denominator contributes +infinity
        const double term =
            (c_for(cfg, i) * phi[i - 1] + phi[i]) / (d.base.lambda * (i - 1) * gp.gamma_u * lower);
        min_term = std::min(min_term, term);
    }
    return std::min(cfg.delta_cap, gp.gamma_r / gp.gamma_u + min_term);
}

double filter_min(double u_nom, double u_safe) { return std::min(u_nom, u_safe); }

double filter_fntsf(const FilterConfig& cfg, const HomDesign& d, double u_nom, const Vec& x, double r) {
    const double uh = u_hom(d, x, r);
    const double margin = delta_r(cfg, d, x, r);
    return std::max(uh - margin, std::min(u_nom, uh));
}

double filter_fxtsf(const FilterConfig& cfg, const HomDesign& d, FilterState& state, double u_nom,
                    const Vec& x, double t) {
    if (t < state.last_time - 1e-12)
        throw Error(Err::InvalidCallOrder, "filter_fxtsf: time went backwards");
    state.last_time = t;
    // ||d(-s)x|| in the boosted norm reduces to the plain weighted norm
    const double w = d.norm_ctx.weighted_norm(x);
    state.running_radius = std::max({state.running_radius, cfg.r_min, w});
    return filter_fntsf(cfg, d, u_nom, x, state.running_radius);
}

double filter_mixed(const FilterConfig& cfg, const HomDesign& d, double u_nom, const Vec& x, double r) {
    const double um = u_mixed(d, x, r);
    const double margin = in_ball_br(d, x, r) ? delta_r(cfg, d, x, r) : cfg.delta_cap;
    return std::max(um - margin, std::min(u_nom, um));
}

bool in_theta(const HomDesign& d, const Vec& x, double r) {
    return in_cone_omega_r(d, x, r) && in_ball_br(d, x, r);
}

FilterState make_filter_state(const FilterConfig& cfg, const HomDesign& d, const Vec& x0) {
    FilterState s;
    s.running_radius = std::max(cfg.r_min, d.norm_ctx.weighted_norm(x0));
    return s;
}

}  // namespace homsafe
