#pragma once

// Upgrade of the linear nonovershooting design to a generalized homogeneous
// one: constructive diagonal weights for the certificate matrices, the shape
// matrix of the homogeneous norm, the decay rate and settling bound, the gain
// boost, the homogeneous feedback itself, the homogeneous cone and ball, and
// the linear/homogeneous mixed law.

#include <optional>

#include "homsafe/dilation.hpp"
#include "homsafe/linctl.hpp"

namespace homsafe {

struct HomDesign {
    LinearDesign base;
    Dilation dl;
    Vec ptilde;            // positive diagonal certificate weights, last entry 1
    Mat shape;             // P = H' diag(ptilde) H
    Mat z_cert;            // negative-definite stability certificate in state coordinates
    Mat q_form;            // P G + G P (positive definite)
    double rho = 0;        // guaranteed decay rate of the homogeneous norm
    double settling_time = 0;  // T
    double radius = 0;         // r
    double s_boost = 0;        // gain-boost exponent, ln max{1/(rho T), 1}
    Vec k_boost;               // K d(s_boost)
    Mat h_boost;               // rows h_i d(s_boost)
    // context over the plain shape matrix; the boosted norm follows from the
    // group law: ||x||_d(boosted shape) = e^{s} ||x||_d(plain shape)
    HomNormContext norm_ctx;
};

/// Certificate weights p_1..p_n (p_n = 1) found by the backward doubling
/// recursion; both tridiagonal certificate matrices end positive definite
/// with margin >= 1e-8.
Vec build_diag_ptilde(int n, double lambda);

/// Tridiagonal stability certificate: diag 2*lambda*p_i, off-diagonal
/// (i, i+1) = -p_{i+1}. Positive definite iff the transformed stability
/// inequality holds.
Mat stab_certificate_matrix(int n, double lambda, const Vec& p);

/// Tridiagonal monotonicity certificate: diag 2(n-i+1)p_i, off-diagonal
/// (i, i+1) = i*lambda*p_{i+1}. Equals the congruence image of P G + G P.
Mat mono_certificate_matrix(int n, double lambda, const Vec& p);

/// Full design. alpha_override replaces the recursion weights by diag(alpha, 1)
/// for n = 2 (the canonical worked example's parametrization).
HomDesign build_hom_design(const LinearDesign& base, double settling_time, double radius,
                           std::optional<double> alpha_override = std::nullopt);

/// ||x/r||_d in the design's (boost-scaled) norm.
double design_hom_norm(const HomDesign& d, const Vec& x, double r);

/// Weighted Euclidean norm of the design, sqrt(z' d(s) P d(s) z).
double design_weighted_norm(const HomDesign& d, const Vec& z);

/// Homogeneous feedback u_h(x) = K d(s) d(-ln ||x/r||_d) x. Undefined at 0.
double u_hom(const HomDesign& d, const Vec& x, double r);
double u_hom(const HomDesign& d, const Vec& x);

/// Homogeneous barrier values phi_i = h_i d(s) d(-ln ||x/r||_d) x (zero at 0).
Vec hom_barrier(const HomDesign& d, const Vec& x, double r);

/// Homogeneous cone membership: all phi_i >= -1e-10. True at the origin.
bool in_cone_omega_r(const HomDesign& d, const Vec& x, double r);
bool in_cone_omega_r(const HomDesign& d, const Vec& x);

/// Homogeneous ball membership: ||x/r||_d <= e^{s} + 1e-12.
bool in_ball_br(const HomDesign& d, const Vec& x, double r);
bool in_ball_br(const HomDesign& d, const Vec& x);

/// Mixed law: homogeneous inside the ball, linear K x outside; the two agree
/// on the switching surface. Undefined at 0.
double u_mixed(const HomDesign& d, const Vec& x, double r);
double u_mixed(const HomDesign& d, const Vec& x);

/// Tridiagonal Metzler matrix governing the homogeneous barrier dynamics for
/// a given positive norm-decay value gamma.
Mat barrier_dynamics_matrix(int n, double lambda, double gamma);
Mat barrier_dynamics_matrix(const HomDesign& d, double gamma);

/// Global bound on |u_h|: r * sqrt(K P^{-1} K').
double control_bound(const HomDesign& d, double r);

}  // namespace homsafe
