#pragma once

// Linear nonovershooting controller for the integrator chain: barrier row
// vectors h_i built from powers of (A + lambda I), the stacked coordinate
// change H, the stabilizing gain K, the invariant cone of nonnegative
// barrier values, and the rules for picking a feasible lambda from the
// initial state.

#include "homsafe/numkernel.hpp"

namespace homsafe {

struct ChainSystem {
    int n = 0;
    Mat a;  // ones on the superdiagonal
    Vec b;  // last canonical basis vector
};

ChainSystem make_chain(int n);

struct LinearDesign {
    int n = 0;
    double lambda = 0;
    Mat h;      // rows h_1..h_n, h_1 = -e1'
    Mat h_inv;
    Vec k;      // gain row of u = K x
};

/// Exact integer-binomial construction of the h rows and the gain.
LinearDesign build_linear_design(int n, double lambda);

/// Conservative lower bound on lambda that places x0 inside the cone;
/// requires x0 strictly inside the safe half-space (first component < 0).
double lambda_lower_bound(const Vec& x0);

/// Direct evaluation of the cone-membership inequalities for a given lambda.
bool check_lambda_feasible(const Vec& x0, double lambda);

/// Smallest feasible lambda found by bisecting below the conservative bound.
double minimal_feasible_lambda(const Vec& x0);

/// Closed-cone membership: h_i x >= -1e-12 for every row.
bool in_cone_omega(const LinearDesign& d, const Vec& x);

/// Barrier coordinates H x.
Vec barrier_coords(const LinearDesign& d, const Vec& x);

/// Diagonal weight matrix D_i = diag(i-1, i-2, ..., 1, 0, ..., 0); test
/// support for the row-vector identities, not used on the runtime path.
Mat d_weight_matrix(int n, int i);

}  // namespace homsafe
