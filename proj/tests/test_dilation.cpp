#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "homsafe/dilation.hpp"

using namespace homsafe;

namespace {

HomNormContext identity_ctx(int n) { return HomNormContext(make_dilation(n), Mat::identity(n)); }

// independent oracle: plain bisection on s -> ||d(-s)x|| - 1, bracket grown
// outward from ln||x|| until the sign flips (keeps the dilation exponents in
// the representable range)
double bisect_norm(const HomNormContext& ctx, const Vec& x) {
    auto above = [&](double s) { return ctx.weighted_norm(dil(ctx.dilation(), -s, x)) > 1.0; };
    double lo = std::log(ctx.weighted_norm(x));
    double hi = lo;
    double step = 1.0;
    if (above(lo)) {
        while (above(hi)) hi += (step *= 2);
    } else {
        while (!above(lo)) lo -= (step *= 2);
    }
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid))
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

Vec random_vec(std::mt19937_64& rng, int n, double lo = -2, double hi = 2) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> mag(lo, hi);
    Vec x(n);
    double s = 0;
    for (double& v : x) {
        v = g(rng);
        s += v * v;
    }
    const double scale = std::pow(10.0, mag(rng)) / std::max(std::sqrt(s), 1e-12);
    for (double& v : x) v *= scale;
    return x;
}

Mat random_monotone_shape(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    for (;;) {
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = g(rng);
        Mat p = transpose(a) * a;
        for (int i = 0; i < n; ++i) p(i, i) += 1.0;
        try {
            HomNormContext ctx(make_dilation(n), p);
            return p;
        } catch (const Error&) {
            // monotonicity failed for this draw, try another
        }
    }
}

}  // namespace

TEST_CASE("dil group identity and weights") {
    const Dilation d = make_dilation(2);
    const Vec x = {1.0, 1.0};
    const Vec same = dil(d, 0.0, x);
    CHECK(same[0] == 1.0);
    CHECK(same[1] == 1.0);

    const Vec y = dil(d, std::log(2.0), x);  // weights (2, 1)
    CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dil group law on random samples") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> us(-3, 3);
    for (int n : {2, 3, 5}) {
        const Dilation d = make_dilation(n);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec x = random_vec(rng, n);
            const double s1 = us(rng), s2 = us(rng);
            const Vec a = dil(d, s1, dil(d, s2, x));
            const Vec b = dil(d, s1 + s2, x);
            for (int i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("context rejects non-monotone shape") {
    Mat bad(2, 2);
    bad(0, 0) = 1;
    bad(0, 1) = bad(1, 0) = -2;
    bad(1, 1) = 1;  // indefinite
    CHECK_THROWS_AS(HomNormContext(make_dilation(2), bad), Error);
}

TEST_CASE("hom_norm basics") {
    const HomNormContext ctx = identity_ctx(2);
    CHECK(hom_norm(ctx, {0.0, 0.0}) == 0.0);

    // on the unit sphere both norms agree
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Vec x = random_vec(rng, 2);
        const double w = ctx.weighted_norm(x);
        for (double& v : x) v /= w;
        CHECK(hom_norm(ctx, x) == doctest::Approx(1.0).epsilon(1e-9));
    }

    // scaling the first coordinate only: e^{-2s} * 4 = 1 at e^s = 2
    CHECK(hom_norm(ctx, {4.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(hom_norm_scaled(ctx, {8.0, 0.0}, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("hom_norm homogeneity across orders") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> us(-5, 5);
    for (int n : {2, 3, 4, 5}) {
        const Mat p = random_monotone_shape(rng, n);
        const HomNormContext ctx(make_dilation(n), p);
        for (int trial = 0; trial < 250; ++trial) {
            const Vec x = random_vec(rng, n);
            const double s = us(rng);
            const double lhs = hom_norm(ctx, dil(ctx.dilation(), s, x));
            const double rhs = std::exp(s) * hom_norm(ctx, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("hom_norm matches the bisection oracle (closed-form branch)") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const Mat p = random_monotone_shape(rng, 2);
        const HomNormContext ctx(make_dilation(2), p);
        const Vec x = random_vec(rng, 2);
        const double vf = hom_norm(ctx, x);
        const double vb = bisect_norm(ctx, x);
        CHECK(std::abs(vf - vb) <= 1e-10 * std::max(1.0, vb));
    }
}

TEST_CASE("hom_norm ball equivalence and continuity at origin") {
    std::mt19937_64 rng(33);
    const Mat p = random_monotone_shape(rng, 3);
    const HomNormContext ctx(make_dilation(3), p);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x = random_vec(rng, 3);
        const double w = ctx.weighted_norm(x);
        const double v = hom_norm(ctx, x);
        if (std::abs(w - 1.0) > 1e-12) CHECK((w <= 1.0) == (v <= 1.0));
    }
    // shrink along rays
    const Vec ray = {0.3, -0.7, 0.2};
    double prev = 1e300;
    for (double scale : {1.0, 1e-2, 1e-4, 1e-8, 1e-12}) {
        Vec x = ray;
        for (double& c : x) c *= scale;
        const double v = hom_norm(ctx, x);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev <= 1e-3);
}

TEST_CASE("hom_norm_grad closed-form case") {
    const HomNormContext ctx = identity_ctx(2);
    const Vec g = hom_norm_grad(ctx, {4.0, 0.0});
    CHECK(g[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("hom_norm_grad Euler relation and finite differences") {
    std::mt19937_64 rng(41);
    for (int n : {2, 3, 4}) {
        const Mat p = random_monotone_shape(rng, n);
        const HomNormContext ctx(make_dilation(n), p);
        for (int trial = 0; trial < 200; ++trial) {
            Vec x = random_vec(rng, n, -0.5, 0.5);
            const double v = hom_norm(ctx, x);
            const Vec g = hom_norm_grad(ctx, x);

            // directional derivative along the generator direction equals the norm
            double along = 0;
            for (int i = 0; i < n; ++i) along += g[i] * ctx.dilation().weights[i] * x[i];
            CHECK(along == doctest::Approx(v).epsilon(1e-9));

            const double gs = std::max(1.0, norm2(g));
            for (int i = 0; i < n; ++i) {
                Vec xp = x, xm = x;
                const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
                xp[i] += h;
                xm[i] -= h;
                const double fd = (hom_norm(ctx, xp) - hom_norm(ctx, xm)) / (2 * h);
                CHECK(std::abs(fd - g[i]) / gs <= 1e-6);
            }
        }
    }
}

TEST_CASE("hom_norm_grad undefined at origin") {
    const HomNormContext ctx = identity_ctx(3);
    try {
        hom_norm_grad(ctx, {0, 0, 0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::UndefinedAtOrigin);
    }
}
