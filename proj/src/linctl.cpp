#include "homsafe/linctl.hpp"

#include <cmath>
#include <limits>

namespace homsafe {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return std::round(v);
}

void check_order(int n) {
    if (n < 1 || n > 16) throw Error(Err::InvalidInput, "chain order out of range [1, 16]");
}

}  // namespace

ChainSystem make_chain(int n) {
    check_order(n);
    ChainSystem s;
    s.n = n;
    s.a = Mat(n, n);
    for (int i = 0; i + 1 < n; ++i) s.a(i, i + 1) = 1.0;
    s.b.assign(n, 0.0);
    s.b[n - 1] = 1.0;
    return s;
}

LinearDesign build_linear_design(int n, double lambda) {
    check_order(n);
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(Err::InvalidInput, "linear design: lambda must be positive");

    LinearDesign d;
    d.n = n;
    d.lambda = lambda;
    d.h = Mat(n, n);
    // h_i = -e1'(A + lambda I)^{i-1}; column m (1-based) carries
    // -C(i-1, i-m) lambda^{i-m}
    for (int i = 1; i <= n; ++i)
        for (int m = 1; m <= i; ++m)
            d.h(i - 1, m - 1) = -binom(i - 1, i - m) * std::pow(lambda, i - m);
    // K = -e1'(A + lambda I)^n; the j = 0 term vanishes because A^n = 0
    d.k.assign(n, 0.0);
    for (int m = 1; m <= n; ++m) d.k[m - 1] = -binom(n, n + 1 - m) * std::pow(lambda, n + 1 - m);
    d.h_inv = inverse(d.h);
    return d;
}

double lambda_lower_bound(const Vec& x0) {
    const int n = static_cast<int>(x0.size());
    check_order(n);
    if (!(x0[0] < 0.0)) throw Error(Err::NotInInterior, "lambda bound: first component of x0 must be negative");
    double bound = -std::numeric_limits<double>::infinity();
    for (int i = 2; i <= n; ++i)
        for (int k = 1; k <= i - 1; ++k)
            bound = std::max(bound, 1.0 - (x0[k] / x0[0]) * binom(i - 1, i - k - 1));
    if (n == 1) bound = 0.0;  // no constraints beyond lambda > 0
    return bound;
}

bool check_lambda_feasible(const Vec& x0, double lambda) {
    const int n = static_cast<int>(x0.size());
    check_order(n);
    if (!(lambda > 0.0)) throw Error(Err::InvalidInput, "lambda must be positive");
    for (int i = 2; i <= n; ++i) {
        double sum = 0.0;
        for (int j = 0; j <= i - 1; ++j) sum += binom(i - 1, j) * x0[i - j - 1] * std::pow(lambda, j);
        if (sum > 0.0) return false;
    }
    return true;
}

double minimal_feasible_lambda(const Vec& x0) {
    double hi = std::max(lambda_lower_bound(x0), kAbsTol);
    if (!check_lambda_feasible(x0, hi)) throw Error(Err::InternalError, "conservative bound not feasible");
    double lo = 1e-9;
    if (check_lambda_feasible(x0, lo)) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (check_lambda_feasible(x0, mid))
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }
    return hi;
}

bool in_cone_omega(const LinearDesign& d, const Vec& x) {
    const Vec phi = barrier_coords(d, x);
    for (double v : phi)
        if (v < -1e-12) return false;
    return true;
}

Vec barrier_coords(const LinearDesign& d, const Vec& x) {
    if (static_cast<int>(x.size()) != d.n)
        throw Error(Err::InvalidInput, "barrier coords: dimension mismatch");
    return d.h * x;
}

Mat d_weight_matrix(int n, int i) {
    check_order(n);
    if (i < 1 || i > n) throw Error(Err::InvalidInput, "d_weight_matrix: index out of range");
    Mat m(n, n);
    for (int k = 0; k < i - 1; ++k) m(k, k) = static_cast<double>(i - 1 - k);
    return m;
}

}  // namespace homsafe
