#pragma once

// Self-contained small dense linear algebra and closed-form polynomial root
// solvers. Matrices in this project are tiny (n <= 16), so the algorithms
// favor robustness over speed: cyclic Jacobi for symmetric eigenproblems,
// pivoted Gauss-Jordan for inverses, Cardano/Ferrari with Newton polish for
// cubic/quartic roots.

#include <stdexcept>
#include <string>
#include <vector>

namespace homsafe {

// Shared tolerances: relative for residual checks, absolute floor for
// quantities that may legitimately be zero. All modules reuse these.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

enum class Err {
    InvalidInput,
    NotPositiveDefinite,
    SingularMatrix,
    UseFallback,
    UndefinedAtOrigin,
    InvalidContext,
    NotInInterior,
    InternalError,
    DegenerateDenominator,
    InvalidCallOrder,
    DivergenceDetected,
};

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Err code() const noexcept { return code_; }

  private:
    Err code_;
};

using Vec = std::vector<double>;

/// Dense row-major matrix.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Mat identity(int n);

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    [[nodiscard]] Vec row(int i) const;
    [[nodiscard]] bool finite() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    Vec data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Vec operator*(const Mat& a, const Vec& x);

Mat transpose(const Mat& a);
/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMatrix when a pivot falls below tolerance.
Mat inverse(const Mat& a);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double frob_norm(const Mat& a);
/// x' A y for a square A.
double quad_form(const Vec& x, const Mat& a, const Vec& y);

struct EigResult {
    Vec values;   // ascending
    Mat vectors;  // orthonormal columns, vectors.col(k) pairs with values[k]
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
EigResult sym_eig(const Mat& s);

/// Unique SPD square root M of an SPD matrix P (M*M = P).
Mat sqrt_spd(const Mat& p);

/// Largest generalized eigenvalue eta of Z v = eta Q v with Q SPD,
/// computed as lambda_max(Q^{-1/2} Z Q^{-1/2}).
double gen_eig_max(const Mat& z, const Mat& q);

/// Coefficients of z^3 + p z^2 + q z + r.
struct CubicCoeffs {
    double p = 0, q = 0, r = 0;
};

/// One real root by the Cardano formula, cube roots taken on the real branch.
/// Throws UseFallback when the discriminant condition fails (three distinct
/// real roots); callers switch to cubic_real_root_any.
double cardano_real_root(const CubicCoeffs& c);

/// Largest real root of the cubic, valid for every coefficient set
/// (trigonometric branch when Cardano does not apply).
double cubic_real_root_any(const CubicCoeffs& c);

/// Coefficients of the depressed quartic V^4 + a V^2 + b V + c.
struct QuarticCoeffs {
    double a = 0, b = 0, c = 0;
};

/// All real roots of the depressed quartic, ascending. Ferrari resolvent with
/// a biquadratic fallback when the resolvent root vanishes; every root is
/// polished by two Newton steps and residual-checked.
std::vector<double> ferrari_roots(const QuarticCoeffs& q);

}  // namespace homsafe
