#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "homsafe/numkernel.hpp"

using namespace homsafe;

namespace {

Mat sym2(double a, double b, double c) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = m(1, 0) = b;
    m(1, 1) = c;
    return m;
}

Mat random_spd(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Mat s = transpose(a) * a;
    for (int i = 0; i < n; ++i) s(i, i) += 0.5;
    return s;
}

double cubic_value(const CubicCoeffs& c, double z) { return ((z + c.p) * z + c.q) * z + c.r; }
double quartic_value(const QuarticCoeffs& q, double v) { return ((v * v + q.a) * v + q.b) * v + q.c; }

}  // namespace

TEST_CASE("sym_eig identity and diagonal") {
    const EigResult e = sym_eig(Mat::identity(3));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    Mat d(2, 2);
    d(0, 0) = -2.0;
    d(1, 1) = 5.0;
    const EigResult ed = sym_eig(d);
    CHECK(ed.values[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(ed.values[1] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("sym_eig 2x2 hand case with residual check") {
    // characteristic polynomial of [[2,1],[1,2]] gives 1 and 3
    const Mat s = sym2(2, 1, 2);
    const EigResult e = sym_eig(s);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
    for (int k = 0; k < 2; ++k) {
        Vec v = {e.vectors(0, k), e.vectors(1, k)};
        const Vec sv = s * v;
        for (int i = 0; i < 2; ++i) CHECK(std::abs(sv[i] - e.values[k] * v[i]) <= 1e-10 * frob_norm(s));
    }
}

TEST_CASE("sym_eig residual and orthonormality on random symmetric matrices") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + int(rng() % 7);
        Mat s(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) s(i, j) = s(j, i) = g(rng);
        const EigResult e = sym_eig(s);
        const double fn = std::max(frob_norm(s), 1.0);
        for (int k = 0; k < n; ++k) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v[i] = e.vectors(i, k);
            const Vec sv = s * v;
            for (int i = 0; i < n; ++i) CHECK(std::abs(sv[i] - e.values[k] * v[i]) <= 1e-10 * fn);
            for (int k2 = 0; k2 <= k; ++k2) {
                double d = 0;
                for (int i = 0; i < n; ++i) d += e.vectors(i, k) * e.vectors(i, k2);
                CHECK(std::abs(d - (k == k2 ? 1.0 : 0.0)) <= 1e-10);
            }
        }
        for (int k = 0; k + 1 < n; ++k) CHECK(e.values[k] <= e.values[k + 1] + 1e-14);
    }
}

TEST_CASE("sym_eig rejects non-finite input") {
    Mat s = sym2(1, 0, 1);
    s(0, 0) = std::nan("");
    s(1, 1) = std::nan("");
    CHECK_THROWS_AS(sym_eig(s), Error);
}

TEST_CASE("sqrt_spd basic cases") {
    const Mat i3 = sqrt_spd(Mat::identity(3));
    CHECK(frob_norm(i3 - Mat::identity(3)) <= 1e-12);

    Mat d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const Mat sd = sqrt_spd(d);
    CHECK(sd(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sd(1, 1) == doctest::Approx(3.0).epsilon(1e-12));

    const Mat p = sym2(2, 1, 2);
    const Mat m = sqrt_spd(p);
    CHECK(frob_norm(m * m - p) <= 1e-9 * frob_norm(p));
}

TEST_CASE("sqrt_spd squaring property on random SPD matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng() % 7);
        const Mat p = random_spd(rng, n);
        const Mat m = sqrt_spd(p);
        CHECK(frob_norm(m * m - p) <= 1e-9 * frob_norm(p));
        CHECK(sym_eig(m).values.front() > 0.0);
    }
}

TEST_CASE("sqrt_spd rejects indefinite input") {
    CHECK_THROWS_AS(sqrt_spd(sym2(1, 2, 1)), Error);
    try {
        sqrt_spd(sym2(-1, 0, 1));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotPositiveDefinite);
    }
}

TEST_CASE("gen_eig_max trivial cases") {
    const Mat q = sym2(1, 0.2, 2);
    CHECK(gen_eig_max(-1.0 * q, q) == doctest::Approx(-1.0).epsilon(1e-10));

    Mat z(2, 2), qd(2, 2);
    z(0, 0) = -1;
    z(1, 1) = -4;
    qd(0, 0) = 1;
    qd(1, 1) = 2;
    CHECK(gen_eig_max(z, qd) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gen_eig_max matches the worked double-integrator pencil") {
    // lambda = 2, alpha = 0.50125
    const Mat z = sym2(-4.0, 1.0, -4.0);
    const Mat q = sym2(4.0 * 0.50125, 2.0, 2.0);
    CHECK(gen_eig_max(z, q) == doctest::Approx(-0.7495).epsilon(2e-4));
}

TEST_CASE("gen_eig_max invariant under congruence") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + int(rng() % 5);
        const Mat q = random_spd(rng, n);
        Mat z(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) z(i, j) = z(j, i) = g(rng);
        Mat t(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t(i, j) = g(rng);
        } while (std::abs(sym_eig(transpose(t) * t).values.front()) < 1e-3);
        const double e1 = gen_eig_max(z, q);
        const double e2 = gen_eig_max(transpose(t) * z * t, transpose(t) * q * t);
        CHECK(e1 == doctest::Approx(e2).epsilon(1e-8));
    }
}

TEST_CASE("gen_eig_max rejects non-PD weight") {
    try {
        gen_eig_max(sym2(1, 0, 1), sym2(-1, 0, 1));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::NotPositiveDefinite);
    }
}

TEST_CASE("cardano real roots") {
    CHECK(cardano_real_root({0, 0, 0}) == doctest::Approx(0.0));
    // z^3 = 1: the discriminant pieces are 0 and -27
    CHECK(cardano_real_root({0, 0, -1}) == doctest::Approx(1.0).epsilon(1e-12));
    // (z-2)^3
    CHECK(cardano_real_root({-6, 12, -8}) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const CubicCoeffs c{u(rng), u(rng), u(rng)};
        double z;
        try {
            z = cardano_real_root(c);
        } catch (const Error& e) {
            CHECK(e.code() == Err::UseFallback);
            z = cubic_real_root_any(c);
        }
        const double scale = std::max({1.0, std::abs(c.p), std::abs(c.q), std::abs(c.r)});
        CHECK(std::abs(cubic_value(c, z)) <= 1e-9 * scale * std::max(1.0, std::abs(z * z * z)));
    }
}

TEST_CASE("cardano signals the three-real-root case") {
    // (z-1)(z-2)(z-3): three distinct real roots
    try {
        cardano_real_root({-6, 11, -6});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::UseFallback);
    }
    CHECK(cubic_real_root_any({-6, 11, -6}) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("ferrari biquadratic and factored cases") {
    const auto r1 = ferrari_roots({0, 0, -16});
    REQUIRE(r1.size() == 2);
    CHECK(r1[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r1[1] == doctest::Approx(2.0).epsilon(1e-12));

    // (V^2-1)(V^2-4)
    const auto r2 = ferrari_roots({-5, 0, 4});
    REQUIRE(r2.size() == 4);
    CHECK(r2[0] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(r2[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(r2[2] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r2[3] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("ferrari residuals on random quartics") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 500; ++trial) {
        const QuarticCoeffs q{u(rng), u(rng), u(rng)};
        for (double v : ferrari_roots(q)) {
            const double scale =
                std::max({1.0, v * v * v * v, std::abs(q.a) * v * v, std::abs(q.b * v), std::abs(q.c)});
            CHECK(std::abs(quartic_value(q, v)) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("inverse round trips and flags singularity") {
    CHECK(frob_norm(inverse(Mat::identity(4)) - Mat::identity(4)) <= 1e-12);

    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + int(rng() % 7);
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = g(rng);
        Mat ainv;
        try {
            ainv = inverse(a);
        } catch (const Error&) {
            continue;  // genuinely near-singular draw
        }
        CHECK(frob_norm(a * ainv - Mat::identity(n)) <= 1e-9 * std::max(1.0, frob_norm(a)));
    }

    Mat sing(2, 2);
    sing(0, 0) = 1;
    sing(0, 1) = 2;
    sing(1, 0) = 2;
    sing(1, 1) = 4;
    try {
        inverse(sing);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Err::SingularMatrix);
    }
}

TEST_CASE("matrix product against hand expansion") {
    Mat a(2, 2), b(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(1, 0) = 3;
    a(1, 1) = 4;
    b(0, 0) = 5;
    b(0, 1) = 6;
    b(1, 0) = 7;
    b(1, 1) = 8;
    const Mat c = a * b;
    CHECK(c(0, 0) == 19);
    CHECK(c(0, 1) == 22);
    CHECK(c(1, 0) == 43);
    CHECK(c(1, 1) == 50);
}
