#pragma once

// Weighted dilation group, canonical homogeneous norm and its gradient.
// The dilation scales coordinate i by e^{(n-i+1)s}; the homogeneous norm of x
// is the unique e^{s} with ||d(-s)x|| = 1 in a weighted Euclidean norm whose
// shape matrix makes the dilation monotone.

#include <optional>

#include "homsafe/numkernel.hpp"

namespace homsafe {

struct Dilation {
    int n = 0;
    Vec weights;  // weights[i] = n - i (0-based), i.e. n, n-1, ..., 1
};

Dilation make_dilation(int n);

/// Generator matrix diag(weights).
Mat dilation_generator(const Dilation& d);

/// Apply d(s): component i -> e^{weights[i] * s} * x_i.
Vec dil(const Dilation& d, double s, const Vec& x);

/// Immutable context for homogeneous-norm evaluation: dilation, shape matrix
/// of the weighted Euclidean norm, and cached monotonicity certificates.
class HomNormContext {
  public:
    HomNormContext(Dilation d, Mat shape);

    [[nodiscard]] const Dilation& dilation() const noexcept { return dil_; }
    [[nodiscard]] const Mat& shape() const noexcept { return shape_; }
    [[nodiscard]] int n() const noexcept { return dil_.n; }

    /// sqrt(x' P x)
    [[nodiscard]] double weighted_norm(const Vec& x) const;

    [[nodiscard]] double min_eig_shape() const noexcept { return min_eig_shape_; }
    [[nodiscard]] double min_eig_mono() const noexcept { return min_eig_mono_; }
    /// Generalized eigenvalue range of (P G + G P, P); the log-derivative of
    /// s -> ||d(s)x||^2 lies in [rate_lo, rate_hi], which brackets the norm
    /// root solve.
    [[nodiscard]] double rate_lo() const noexcept { return rate_lo_; }
    [[nodiscard]] double rate_hi() const noexcept { return rate_hi_; }

  private:
    Dilation dil_;
    Mat shape_;
    Mat mono_;  // P G + G P
    double min_eig_shape_ = 0;
    double min_eig_mono_ = 0;
    double rate_lo_ = 0;
    double rate_hi_ = 0;
};

/// Canonical homogeneous norm. 0 at the origin; otherwise the unique V > 0
/// with ||d(-ln V)x|| = 1. For n = 2 solved in closed form through the
/// depressed quartic (Ferrari), with a bracketed Newton/bisection fallback;
/// n >= 3 always uses the bracketed solve.
double hom_norm(const HomNormContext& ctx, const Vec& x);

/// hom_norm of the componentwise-scaled vector x / r.
double hom_norm_scaled(const HomNormContext& ctx, const Vec& x, double r);

/// Gradient row of the homogeneous norm at x != 0.
Vec hom_norm_grad(const HomNormContext& ctx, const Vec& x);

}  // namespace homsafe
