#include "homsafe/homctl.hpp"

#include <algorithm>
#include <cmath>

namespace homsafe {

namespace {

Mat trailing_block(const Mat& m, int k) {
    const int n = m.rows() - k;
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = m(k + i, k + j);
    return b;
}

bool pd_with_margin(const Mat& m, double margin) { return sym_eig(m).values.front() >= margin; }

// Symmetrized stability form without certificate weights; its pencil against
// the monotonicity certificate yields the decay rate that matches the
// closed-form double-integrator expressions.
Mat decay_stab_matrix(int n, double lambda) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = -2.0 * lambda;
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = 1.0;
    }
    return m;
}

}  // namespace

Mat stab_certificate_matrix(int n, double lambda, const Vec& p) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0 * lambda * p[i];
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -p[i + 1];
    }
    return m;
}

Mat mono_certificate_matrix(int n, double lambda, const Vec& p) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0 * (n - i) * p[i];
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = (i + 1) * lambda * p[i + 1];
    }
    return m;
}

Vec build_diag_ptilde(int n, double lambda) {
    if (n < 1 || n > 16) throw Error(Err::InvalidInput, "ptilde: order out of range");
    if (!(lambda > 0.0)) throw Error(Err::InvalidInput, "ptilde: lambda must be positive");
    Vec p(n, 1.0);
    for (int k = n - 2; k >= 0; --k) {
        bool ok = false;
        for (int iter = 0; iter < 200; ++iter) {
            const Mat s = trailing_block(stab_certificate_matrix(n, lambda, p), k);
            const Mat m = trailing_block(mono_certificate_matrix(n, lambda, p), k);
            if (pd_with_margin(s, 1e-8) && pd_with_margin(m, 1e-8)) {
                ok = true;
                break;
            }
            p[k] *= 2.0;
        }
        if (!ok) throw Error(Err::InternalError, "ptilde: doubling recursion did not converge");
    }
    return p;
}

HomDesign build_hom_design(const LinearDesign& base, double settling_time, double radius,
                           std::optional<double> alpha_override) {
    const int n = base.n;
    if (!(settling_time > 0.0)) throw Error(Err::InvalidInput, "hom design: settling time must be positive");
    if (!(radius > 0.0)) throw Error(Err::InvalidInput, "hom design: radius must be positive");

    Vec p;
    if (alpha_override) {
        if (n != 2) throw Error(Err::InvalidInput, "hom design: alpha override only defined for order 2");
        p = {*alpha_override, 1.0};
        if (!pd_with_margin(stab_certificate_matrix(n, base.lambda, p), 1e-10) ||
            !pd_with_margin(mono_certificate_matrix(n, base.lambda, p), 1e-10))
            throw Error(Err::InvalidInput, "hom design: alpha override violates the certificate inequalities");
    } else {
        p = build_diag_ptilde(n, base.lambda);
    }

    const Dilation dl = make_dilation(n);
    const Mat g = dilation_generator(dl);

    Mat pt(n, n);
    for (int i = 0; i < n; ++i) pt(i, i) = p[i];
    const Mat shape = transpose(base.h) * pt * base.h;
    const Mat q_form = shape * g + g * shape;
    const Mat z_cert = -1.0 * (transpose(base.h) * stab_certificate_matrix(n, base.lambda, p) * base.h);

    const double rho = -gen_eig_max(decay_stab_matrix(n, base.lambda),
                                    mono_certificate_matrix(n, base.lambda, p));
    if (!(rho > 0.0))
        throw Error(Err::InvalidInput, "hom design: nonpositive decay rate (lambda too small for this order)");

    const double s = std::max(0.0, std::log(1.0 / (rho * settling_time)));

    Vec k_boost(n);
    for (int i = 0; i < n; ++i) k_boost[i] = base.k[i] * std::exp(dl.weights[i] * s);
    Mat h_boost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h_boost(i, j) = base.h(i, j) * std::exp(dl.weights[j] * s);

    HomDesign d{base,
                dl,
                p,
                shape,
                z_cert,
                q_form,
                rho,
                settling_time,
                radius,
                s,
                std::move(k_boost),
                std::move(h_boost),
                HomNormContext(dl, shape)};

    // final certificate verification; failure here indicates a numerics bug
    const double zmax = sym_eig(d.z_cert).values.back();
    const double qmin = sym_eig(d.q_form).values.front();
    const double pmin = sym_eig(d.shape).values.front();
    if (!(zmax < -1e-10 && qmin > 1e-10 && pmin > 1e-10))
        throw Error(Err::InternalError, "hom design: certificate verification failed");
    return d;
}

double design_hom_norm(const HomDesign& d, const Vec& x, double r) {
    return std::exp(d.s_boost) * hom_norm_scaled(d.norm_ctx, x, r);
}

double design_weighted_norm(const HomDesign& d, const Vec& z) {
    return d.norm_ctx.weighted_norm(dil(d.dl, d.s_boost, z));
}

double u_hom(const HomDesign& d, const Vec& x, double r) {
    const double v = design_hom_norm(d, x, r);
    if (v == 0.0) throw Error(Err::UndefinedAtOrigin, "u_hom: undefined at the origin");
    double u = 0.0;
    for (int i = 0; i < d.base.n; ++i) u += d.k_boost[i] * std::pow(v, -d.dl.weights[i]) * x[i];
    return u;
}

double u_hom(const HomDesign& d, const Vec& x) { return u_hom(d, x, d.radius); }

Vec hom_barrier(const HomDesign& d, const Vec& x, double r) {
    const double v = design_hom_norm(d, x, r);
    if (v == 0.0) return Vec(d.base.n, 0.0);
    const Vec y = dil(d.dl, -std::log(v), x);
    return d.h_boost * y;
}

bool in_cone_omega_r(const HomDesign& d, const Vec& x, double r) {
    const Vec phi = hom_barrier(d, x, r);
    for (double v : phi)
        if (v < -1e-10) return false;
    return true;
}

bool in_cone_omega_r(const HomDesign& d, const Vec& x) { return in_cone_omega_r(d, x, d.radius); }

bool in_ball_br(const HomDesign& d, const Vec& x, double r) {
    return design_hom_norm(d, x, r) <= std::exp(d.s_boost) + 1e-12;
}

bool in_ball_br(const HomDesign& d, const Vec& x) { return in_ball_br(d, x, d.radius); }

double u_mixed(const HomDesign& d, const Vec& x, double r) {
    const double v = design_hom_norm(d, x, r);
    if (v == 0.0) throw Error(Err::UndefinedAtOrigin, "u_mixed: undefined at the origin");
    if (v <= std::exp(d.s_boost)) return u_hom(d, x, r);
    return dot(d.base.k, x);
}

double u_mixed(const HomDesign& d, const Vec& x) { return u_mixed(d, x, d.radius); }

Mat barrier_dynamics_matrix(int n, double lambda, double gamma) {
    if (!(gamma > 0.0)) throw Error(Err::InvalidInput, "barrier dynamics: gamma must be positive");
    const ChainSystem sys = make_chain(n);
    const Mat g = dilation_generator(make_dilation(n));
    Mat ni_g(n, n);
    for (int i = 0; i < n; ++i) ni_g(i, i) = n - g(i, i);  // diag(i-1)
    Mat pi = (-lambda) * Mat::identity(n) + sys.a + gamma * g +
             (gamma * lambda) * (ni_g * transpose(sys.a));
    // Metzler structure check: every off-diagonal entry nonnegative
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && pi(i, j) < 0.0)
                throw Error(Err::InternalError, "barrier dynamics: matrix lost Metzler structure");
    return pi;
}

Mat barrier_dynamics_matrix(const HomDesign& d, double gamma) {
    return barrier_dynamics_matrix(d.base.n, d.base.lambda, gamma);
}

double control_bound(const HomDesign& d, double r) {
    const Mat pinv = inverse(d.shape);
    return r * std::sqrt(std::max(0.0, quad_form(d.base.k, pinv, d.base.k)));
}

}  // namespace homsafe
