#include "homsafe/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homsafe {

namespace {

bool all_finite(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

bool is_zero(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

Dilation make_dilation(int n) {
    if (n < 1 || n > 16) throw Error(Err::InvalidInput, "dilation: order out of range");
    Dilation d;
    d.n = n;
    d.weights.resize(n);
    for (int i = 0; i < n; ++i) d.weights[i] = static_cast<double>(n - i);
    return d;
}

Mat dilation_generator(const Dilation& d) {
    Mat g(d.n, d.n);
    for (int i = 0; i < d.n; ++i) g(i, i) = d.weights[i];
    return g;
}

Vec dil(const Dilation& d, double s, const Vec& x) {
    if (static_cast<int>(x.size()) != d.n) throw Error(Err::InvalidInput, "dil: dimension mismatch");
    Vec y(x.size());
    // zero components stay zero even when the exponential overflows
    for (int i = 0; i < d.n; ++i) y[i] = x[i] == 0.0 ? 0.0 : std::exp(d.weights[i] * s) * x[i];
    return y;
}

HomNormContext::HomNormContext(Dilation d, Mat shape) : dil_(std::move(d)), shape_(std::move(shape)) {
    if (shape_.rows() != dil_.n || shape_.cols() != dil_.n)
        throw Error(Err::InvalidContext, "hom norm context: shape matrix dimension mismatch");
    const Mat g = dilation_generator(dil_);
    mono_ = shape_ * g + g * shape_;

    const EigResult ep = sym_eig(shape_);
    const EigResult eq = sym_eig(mono_);
    min_eig_shape_ = ep.values.front();
    min_eig_mono_ = eq.values.front();
    if (min_eig_shape_ <= 1e-10 || min_eig_mono_ <= 1e-10)
        throw Error(Err::InvalidContext, "hom norm context: dilation not monotone for this shape matrix");

    // gen-eig range of (mono, shape): -gen_eig_max(-mono, shape) is the min
    rate_hi_ = gen_eig_max(mono_, shape_);
    rate_lo_ = -gen_eig_max(-1.0 * mono_, shape_);
}

double HomNormContext::weighted_norm(const Vec& x) const {
    // evaluate on the rescaled vector so mixed-sign overflow cannot produce
    // inf - inf
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] / m;
    const double q = quad_form(z, shape_, z);
    return m * std::sqrt(std::max(q, 0.0));
}

namespace {

// Bracketed Newton on ln ||d(-s)x||^2 with a bisection safeguard. The log
// form keeps the step well-scaled in the tails where the quadratic behaves
// like a single exponential; the plain-Newton step there advances a fixed
// fraction per iteration and can fail to reach the root at all.
double solve_norm_root(const HomNormContext& ctx, const Vec& x) {
    const double wn = ctx.weighted_norm(x);
    const double lw = std::log(wn);
    // log-derivative of ||d(s)x||^2 lies in [rate_lo, rate_hi], giving a
    // provable bracket around the root
    double lo = 2.0 * lw / ctx.rate_hi();
    double hi = 2.0 * lw / ctx.rate_lo();
    if (lo > hi) std::swap(lo, hi);
    lo -= 1e-12;
    hi += 1e-12;

    double s = std::clamp(2.0 * lw / (ctx.rate_lo() + ctx.rate_hi()), lo, hi);
    for (int it = 0; it < 200; ++it) {
        const Vec z = dil(ctx.dilation(), -s, x);
        // far from the root the components leave the representable range;
        // the sign of f is then decided by the magnitude alone (the shape
        // matrix is positive definite)
        double m = 0.0;
        for (double v : z) m = std::max(m, std::abs(v));
        double f, q = 0.0, dq = 0.0;
        if (m > 1e100) {
            f = 1.0;
        } else if (m < 1e-100) {
            f = -1.0;
        } else {
            q = quad_form(z, ctx.shape(), z);
            f = q - 1.0;
            const Mat& p = ctx.shape();
            const Vec& w = ctx.dilation().weights;
            for (int i = 0; i < ctx.n(); ++i)
                for (int j = 0; j < ctx.n(); ++j) dq += z[i] * p(i, j) * z[j] * (w[i] + w[j]);
        }
        if (std::abs(f) < 1e-12) return s;
        if (f > 0.0)
            lo = s;  // norm still above 1, root lies to the right
        else
            hi = s;
        // Newton on ln q: d(ln q)/ds = -z'(PG+GP)z / q
        double next = (q > 0.0 && dq > 0.0) ? s + std::log(q) * q / dq
                                            : std::numeric_limits<double>::quiet_NaN();
        // keep guaranteed progress: bisect when the step leaves the bracket
        // and force a bisection every third iteration
        if (!(next > lo && next < hi) || it % 3 == 2) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

// Closed-form branch for n = 2: the norm is the unique positive root of
// V^4 - p22 x2^2 V^2 - 2 p12 x1 x2 V - p11 x1^2 = 0.
std::optional<double> ferrari_branch(const HomNormContext& ctx, const Vec& x) {
    const Mat& p = ctx.shape();
    QuarticCoeffs qc;
    qc.a = -p(1, 1) * x[1] * x[1];
    qc.b = -2.0 * p(0, 1) * x[0] * x[1];
    qc.c = -p(0, 0) * x[0] * x[0];
    const std::vector<double> roots = ferrari_roots(qc);
    std::optional<double> best;
    for (double v : roots)
        if (v > 0.0 && (!best || v > *best)) best = v;
    return best;
}

}  // namespace

double hom_norm(const HomNormContext& ctx, const Vec& x) {
    if (static_cast<int>(x.size()) != ctx.n()) throw Error(Err::InvalidInput, "hom_norm: dimension mismatch");
    if (!all_finite(x)) throw Error(Err::InvalidInput, "hom_norm: non-finite state");
    if (is_zero(x)) return 0.0;

    const double wn = ctx.weighted_norm(x);
    if (ctx.n() == 2 && wn >= 1e-4) {
        if (const auto v = ferrari_branch(ctx, x)) {
            // accept only when the implicit equation is met to tolerance
            const Vec z = dil(ctx.dilation(), -std::log(*v), x);
            if (std::abs(quad_form(z, ctx.shape(), z) - 1.0) < 1e-10) return *v;
        }
    }
    return std::exp(solve_norm_root(ctx, x));
}

double hom_norm_scaled(const HomNormContext& ctx, const Vec& x, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(Err::InvalidInput, "hom_norm_scaled: radius must be positive");
    Vec xr(x.size());
    for (size_t i = 0; i < x.size(); ++i) xr[i] = x[i] / r;
    return hom_norm(ctx, xr);
}

Vec hom_norm_grad(const HomNormContext& ctx, const Vec& x) {
    if (static_cast<int>(x.size()) != ctx.n())
        throw Error(Err::InvalidInput, "hom_norm_grad: dimension mismatch");
    if (is_zero(x)) throw Error(Err::UndefinedAtOrigin, "hom_norm_grad: undefined at the origin");

    const double v = hom_norm(ctx, x);
    const double ls = std::log(v);
    const Vec y = dil(ctx.dilation(), -ls, x);
    const Vec py = ctx.shape() * y;

    double den = 0.0;
    for (int i = 0; i < ctx.n(); ++i) den += py[i] * ctx.dilation().weights[i] * y[i];
    if (std::abs(den) <= kAbsTol)
        throw Error(Err::DegenerateDenominator, "hom_norm_grad: degenerate denominator");

    Vec grad(ctx.n());
    for (int i = 0; i < ctx.n(); ++i)
        grad[i] = v * py[i] * std::exp(-ctx.dilation().weights[i] * ls) / den;
    return grad;
}

}  // namespace homsafe
