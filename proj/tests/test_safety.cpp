#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "homsafe/safety.hpp"

using namespace homsafe;

namespace {

HomDesign make_design(int n, double lambda, double t_settle, double r) {
    return build_hom_design(build_linear_design(n, lambda), t_settle, r);
}

Vec interior_point(std::mt19937_64& rng, const HomDesign& d, double mag) {
    std::normal_distribution<double> g;
    for (;;) {
        Vec x(d.base.n);
        for (double& v : x) v = g(rng);
        const double w = d.norm_ctx.weighted_norm(x);
        for (double& v : x) v *= mag / w;
        bool ok = true;
        for (double p : barrier_coords(d.base, x))
            if (p < 1e-6) ok = false;
        if (ok) return x;
    }
}

// term-by-term re-evaluation of the override margin, independent of delta_r
double margin_oracle(const FilterConfig& cfg, const HomDesign& d, const Vec& x, double r) {
    const int n = d.base.n;
    const Vec phi = hom_barrier(d, x, r);
    const GammaPair gp = gammas(d, x, r);
    double best = cfg.delta_cap;
    for (int i = 2; i <= n - 1; ++i) {
        const double ci = (static_cast<size_t>(i - 2) < cfg.c.size()) ? cfg.c[i - 2] : 1.0;
        if (phi[i - 2] <= 1e-14) continue;
        best = std::min(best, (ci * phi[i - 1] + phi[i]) / (d.base.lambda * (i - 1) * gp.gamma_u * phi[i - 2]));
    }
    return std::min(cfg.delta_cap, gp.gamma_r / gp.gamma_u + best);
}

}  // namespace

TEST_CASE("filter_min") {
    CHECK(filter_min(3, 5) == 3);
    CHECK(filter_min(5, 3) == 3);
    CHECK(filter_min(2.5, 2.5) == 2.5);
}

TEST_CASE("gammas signs on the homogeneous cone (order 3)") {
    std::mt19937_64 rng(3);
    const HomDesign d = make_design(3, 2.0, 2.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Vec x = interior_point(rng, d, 0.05 + 0.9 * std::generate_canonical<double, 53>(rng));
        const GammaPair gp = gammas(d, x, 1.0);
        CHECK(gp.gamma_r > 0.0);
        CHECK(gp.gamma_u >= -1e-10);
    }
}

TEST_CASE("gamma_u uses only the last barrier component") {
    std::mt19937_64 rng(5);
    const HomDesign d = make_design(3, 2.0, 2.0, 1.0);
    const Vec x = interior_point(rng, d, 0.7);
    const Vec phi = hom_barrier(d, x, 1.0);
    const GammaPair gp = gammas(d, x, 1.0);
    // reconstruct the shared denominator from gamma_u = phi_n / den
    const double den = phi[2] / gp.gamma_u;
    const Mat pt = [&] {
        Mat m(3, 3);
        for (int i = 0; i < 3; ++i) m(i, i) = d.ptilde[i];
        return m;
    }();
    const ChainSystem sys = make_chain(3);
    const Mat g = dilation_generator(d.dl);
    Mat ni_g(3, 3);
    for (int i = 0; i < 3; ++i) ni_g(i, i) = 3 - g(i, i);
    const Mat m = g + d.base.lambda * (ni_g * transpose(sys.a));
    CHECK(den == doctest::Approx(quad_form(phi, pt * m, phi)).epsilon(1e-9));
}

TEST_CASE("margin is infinite for order <= 2 and outside the cone") {
    FilterConfig cfg;
    const HomDesign d2 = make_design(2, 2.0, 1.0, 1.0);
    CHECK(delta_r(cfg, d2, {-1.0, 0.5}, 1.0) == cfg.delta_cap);

    const HomDesign d3 = make_design(3, 2.0, 2.0, 1.0);
    CHECK(delta_r(cfg, d3, {1.0, 0.0, 0.0}, 1.0) == cfg.delta_cap);  // positive x1: outside
}

TEST_CASE("margin formula agrees with an independent evaluation (order 3)") {
    std::mt19937_64 rng(7);
    FilterConfig cfg;
    cfg.c = {0.7};
    const HomDesign d = make_design(3, 2.0, 2.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x = interior_point(rng, d, 0.1 + 0.8 * std::generate_canonical<double, 53>(rng));
        const double m = delta_r(cfg, d, x, 1.0);
        CHECK(m > 0.0);
        if (m < cfg.delta_cap) CHECK(m == doctest::Approx(margin_oracle(cfg, d, x, 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("finite-time filter clipping logic") {
    std::mt19937_64 rng(9);
    FilterConfig cfg;
    const HomDesign d = make_design(3, 2.0, 2.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Vec x = interior_point(rng, d, 0.2 + 0.7 * std::generate_canonical<double, 53>(rng));
        const double uh = u_hom(d, x, 1.0);
        const double m = delta_r(cfg, d, x, 1.0);

        CHECK(filter_fntsf(cfg, d, uh + 1.0, x, 1.0) == doctest::Approx(uh));        // nominal above: safe law
        if (m < cfg.delta_cap && m > 1e-6) {
            const double mid = uh - 0.5 * std::min(m, 1.0);
            CHECK(filter_fntsf(cfg, d, mid, x, 1.0) == doctest::Approx(mid));        // inside the margin: pass
            const double low = uh - m - 1.0;
            CHECK(filter_fntsf(cfg, d, low, x, 1.0) == doctest::Approx(uh - m));     // below: clipped
        }
        // sandwich property
        const double u = filter_fntsf(cfg, d, -50.0 + 100.0 * std::generate_canonical<double, 53>(rng), x, 1.0);
        CHECK(u <= uh + 1e-12);
        CHECK(u >= uh - m - 1e-12);
    }
}

TEST_CASE("fixed-time filter radius bookkeeping") {
    FilterConfig cfg;
    cfg.r_min = 0.5;
    const HomDesign d = make_design(2, 2.0, 1.0, 1.0);

    FilterState st = make_filter_state(cfg, d, {-0.01, 0.0});
    CHECK(st.running_radius == 0.5);  // floor active for a small start

    Vec big = {-3.0, 1.0};
    filter_fxtsf(cfg, d, st, 0.0, big, 0.0);
    const double w = d.norm_ctx.weighted_norm(big);
    CHECK(st.running_radius == doctest::Approx(w));

    // shrinking state leaves the radius at its running maximum
    filter_fxtsf(cfg, d, st, 0.0, {-0.001, 0.0}, 0.5);
    CHECK(st.running_radius == doctest::Approx(w));

    // time regression is rejected
    CHECK_THROWS_AS(filter_fxtsf(cfg, d, st, 0.0, big, 0.2), Error);
}

TEST_CASE("theta membership and nesting in the radius") {
    std::mt19937_64 rng(11);
    const HomDesign d = make_design(3, 2.0, 2.0, 1.0);
    CHECK(in_theta(d, {0, 0, 0}, 1.0));

    for (int trial = 0; trial < 200; ++trial) {
        const Vec x = interior_point(rng, d, 0.2 + std::generate_canonical<double, 53>(rng));
        for (double r1 : {0.5, 1.0, 2.0}) {
            if (in_theta(d, x, r1)) {
                CHECK(in_theta(d, x, r1 * 2));
                CHECK(in_theta(d, x, r1 * 7.5));
            }
        }
    }

    // inside the cone but outside the ball
    const Vec far = interior_point(rng, d, 5.0);
    if (in_cone_omega_r(d, far, 0.1) && design_hom_norm(d, far, 0.1) > std::exp(d.s_boost))
        CHECK(!in_theta(d, far, 0.1));
}

TEST_CASE("barrier source terms stay nonnegative along filtered runs") {
    // along a finite-time-filter trajectory the componentwise barrier source
    // b_i = phi_{i+1} + c_i phi_i + lambda (i-1)(gamma_r - gamma_u (u_h - u)) phi_{i-1}
    // must stay nonnegative while inside the cone
    std::mt19937_64 rng(17);
    FilterConfig cfg;
    const HomDesign d = make_design(3, 2.0, 8.4, 1.0);
    const ChainSystem sys = make_chain(3);
    for (int run = 0; run < 4; ++run) {
        Vec x = interior_point(rng, d, 0.3 + 0.5 * std::generate_canonical<double, 53>(rng));
        const double dt = 1e-3;
        double worst_b = 1e300;
        for (int k = 0; k < 4000; ++k) {
            if (d.norm_ctx.weighted_norm(x) < 5e-3) break;
            const double unom = 3.0 * std::sin(2.0 * k * dt) + 1.0;
            const double u = filter_fntsf(cfg, d, unom, x, 1.0);
            const double uh = u_hom(d, x, 1.0);
            const Vec phi = hom_barrier(d, x, 1.0);
            const GammaPair gp = gammas(d, x, 1.0);
            const double gf = gp.gamma_r - gp.gamma_u * (uh - u);
            for (int i = 2; i <= 2; ++i)
                worst_b = std::min(worst_b, phi[i] + phi[i - 1] + d.base.lambda * (i - 1) * gf * phi[i - 2]);
            auto f = [&](const Vec& xx) {
                Vec dx = sys.a * xx;
                dx[2] += u;
                return dx;
            };
            const Vec k1 = f(x);
            Vec tmp(3);
            for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
            const Vec k2 = f(tmp);
            for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
            const Vec k3 = f(tmp);
            for (int i = 0; i < 3; ++i) tmp[i] = x[i] + dt * k3[i];
            const Vec k4 = f(tmp);
            for (int i = 0; i < 3; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        CHECK(worst_b >= -1e-8);
    }
}

TEST_CASE("mixed filter reduces to min filter outside the ball") {
    std::mt19937_64 rng(13);
    FilterConfig cfg;
    const HomDesign d = make_design(2, 2.0, 1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = interior_point(rng, d, 3.0 + std::generate_canonical<double, 53>(rng));
        if (in_ball_br(d, x, 1.0)) continue;
        const double unom = -20.0 + 40.0 * std::generate_canonical<double, 53>(rng);
        CHECK(filter_mixed(cfg, d, unom, x, 1.0) ==
              doctest::Approx(std::min(unom, dot(d.base.k, x))).epsilon(1e-10));
    }
}
