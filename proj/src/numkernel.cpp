#include "homsafe/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace homsafe {

namespace {

void require(bool cond, Err code, const char* msg) {
    if (!cond) throw Error(code, msg);
}

void require_square(const Mat& a, const char* who) {
    require(a.rows() == a.cols() && a.rows() >= 1, Err::InvalidInput,
            (std::string(who) + ": square matrix expected").c_str());
    require(a.rows() <= 16, Err::InvalidInput, (std::string(who) + ": dimension above 16").c_str());
    require(a.finite(), Err::InvalidInput, (std::string(who) + ": non-finite entries").c_str());
}

void require_symmetric(const Mat& a, const char* who) {
    require_square(a, who);
    const double scale = std::max(1.0, frob_norm(a));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j)
            require(std::abs(a(i, j) - a(j, i)) <= 1e-12 * scale, Err::InvalidInput,
                    (std::string(who) + ": matrix not symmetric").c_str());
}

double real_cbrt(double x) { return x < 0.0 ? -std::cbrt(-x) : std::cbrt(x); }

}  // namespace

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vec Mat::row(int i) const {
    Vec out(cols_);
    for (int j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
}

bool Mat::finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw Error(Err::InvalidInput, "matrix product: shape mismatch");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Err::InvalidInput, "matrix sum: shape mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Err::InvalidInput, "matrix difference: shape mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Mat operator*(double s, const Mat& a) {
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

Vec operator*(const Mat& a, const Vec& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw Error(Err::InvalidInput, "matrix-vector product: shape mismatch");
    Vec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Mat inverse(const Mat& a) {
    require_square(a, "inverse");
    const int n = a.rows();
    Mat w = a;
    Mat inv = Mat::identity(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const double tol = std::max(kAbsTol, 1e-14 * scale);

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(w(r, col)) > std::abs(w(piv, col))) piv = r;
        if (std::abs(w(piv, col)) <= tol) throw Error(Err::SingularMatrix, "inverse: singular to tolerance");
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const double d = w(col, col);
        for (int j = 0; j < n; ++j) {
            w(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = w(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                w(r, j) -= f * w(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(Err::InvalidInput, "dot: size mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double frob_norm(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double quad_form(const Vec& x, const Mat& a, const Vec& y) { return dot(x, a * y); }

EigResult sym_eig(const Mat& s) {
    require_symmetric(s, "sym_eig");
    const int n = s.rows();
    Mat a = s;
    Mat v = Mat::identity(n);
    const double fn = std::max(frob_norm(a), kAbsTol);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-15 * fn) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * fn) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigResult out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

Mat sqrt_spd(const Mat& p) {
    require_symmetric(p, "sqrt_spd");
    const EigResult e = sym_eig(p);
    const double scale = std::max(std::abs(e.values.back()), kAbsTol);
    if (e.values.front() <= 1e-14 * scale)
        throw Error(Err::NotPositiveDefinite, "sqrt_spd: matrix not positive definite");
    const int n = p.rows();
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors(i, k) * std::sqrt(e.values[k]) * e.vectors(j, k);
            m(i, j) = s;
        }
    // exact symmetry of the result
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = m(j, i) = avg;
        }
    return m;
}

double gen_eig_max(const Mat& z, const Mat& q) {
    require_symmetric(z, "gen_eig_max");
    const Mat qs = sqrt_spd(q);  // throws NotPositiveDefinite for bad Q
    const Mat qi = inverse(qs);
    Mat m = qi * z * qi;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = m(j, i) = avg;
        }
    return sym_eig(m).values.back();
}

double cardano_real_root(const CubicCoeffs& c) {
    if (!std::isfinite(c.p) || !std::isfinite(c.q) || !std::isfinite(c.r))
        throw Error(Err::InvalidInput, "cardano: non-finite coefficients");
    const double d0 = c.p * c.p - 3.0 * c.q;
    const double d1 = 2.0 * c.p * c.p * c.p - 9.0 * c.p * c.q + 27.0 * c.r;
    const double disc = d1 * d1 - 4.0 * d0 * d0 * d0;
    if (disc < 0.0) throw Error(Err::UseFallback, "cardano: three distinct real roots");
    const double s = std::sqrt(disc);
    const double c1 = real_cbrt(0.5 * (d1 - s));
    const double c2 = real_cbrt(0.5 * (d1 + s));
    return -(c.p + c1 + c2) / 3.0;
}

double cubic_real_root_any(const CubicCoeffs& c) {
    const double d0 = c.p * c.p - 3.0 * c.q;
    const double d1 = 2.0 * c.p * c.p * c.p - 9.0 * c.p * c.q + 27.0 * c.r;
    if (d1 * d1 - 4.0 * d0 * d0 * d0 >= 0.0) {
        double z = cardano_real_root(c);
        // Newton polish
        for (int it = 0; it < 2; ++it) {
            const double f = ((z + c.p) * z + c.q) * z + c.r;
            const double df = (3.0 * z + 2.0 * c.p) * z + c.q;
            if (std::abs(df) > kAbsTol) z -= f / df;
        }
        return z;
    }
    // three real roots: trigonometric form on the depressed cubic t^3 + pt + q
    constexpr double kThirdTurn = 2.0943951023931953;  // 2*pi/3
    const double sh = c.p / 3.0;
    const double pp = c.q - c.p * c.p / 3.0;
    const double qq = 2.0 * c.p * c.p * c.p / 27.0 - c.p * c.q / 3.0 + c.r;
    const double m = 2.0 * std::sqrt(-pp / 3.0);
    const double arg = std::clamp(3.0 * qq / (pp * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) best = std::max(best, m * std::cos(phi - kThirdTurn * k) - sh);
    return best;
}

std::vector<double> ferrari_roots(const QuarticCoeffs& qc) {
    if (!std::isfinite(qc.a) || !std::isfinite(qc.b) || !std::isfinite(qc.c))
        throw Error(Err::InvalidInput, "ferrari: non-finite coefficients");

    // normalize the variable so the working coefficients are O(1); keeps the
    // resolvent cubic away from overflow for extreme inputs
    const double sigma = std::max({1e-30, std::sqrt(std::abs(qc.a)), std::cbrt(std::abs(qc.b)),
                                   std::pow(std::abs(qc.c), 0.25)});
    if (sigma > 2.0 || sigma < 0.5) {
        const QuarticCoeffs scaled{qc.a / (sigma * sigma), qc.b / (sigma * sigma * sigma),
                                   qc.c / (sigma * sigma * sigma * sigma)};
        std::vector<double> roots = ferrari_roots(scaled);
        for (double& v : roots) v *= sigma;
        // one Newton step back on the original polynomial absorbs the scaling
        for (double& v : roots) {
            const double df = (4.0 * v * v + 2.0 * qc.a) * v + qc.b;
            if (std::abs(df) > kAbsTol) v -= (((v * v + qc.a) * v + qc.b) * v + qc.c) / df;
        }
        return roots;
    }
    const double a = qc.a, b = qc.b, c = qc.c;

    auto poly = [&](double v) { return ((v * v + a) * v + b) * v + c; };
    auto dpoly = [&](double v) { return (4.0 * v * v + 2.0 * a) * v + b; };
    auto res_scale = [&](double v) {
        const double v2 = v * v;
        return std::max({1.0, v2 * v2, std::abs(a) * v2, std::abs(b) * std::abs(v), std::abs(c)});
    };

    std::vector<double> roots;
    auto push = [&](double v) {
        if (!std::isfinite(v)) return;
        for (int it = 0; it < 2; ++it) {
            const double df = dpoly(v);
            if (std::abs(df) > kAbsTol) v -= poly(v) / df;
        }
        if (std::abs(poly(v)) > kRelTol * res_scale(v)) return;
        for (double r : roots)
            if (std::abs(r - v) <= 1e-12 * (1.0 + std::abs(v))) return;
        roots.push_back(v);
    };

    const double coeff_scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    double z0 = 0.0;
    if (std::abs(b) > kAbsTol * coeff_scale) {
        // resolvent cubic; its value at 0 is -b^2 <= 0, so the largest real root
        // is nonnegative
        const CubicCoeffs cub{2.0 * a, a * a - 4.0 * c, -b * b};
        try {
            z0 = cardano_real_root(cub);
        } catch (const Error& e) {
            if (e.code() != Err::UseFallback) throw;
            z0 = cubic_real_root_any(cub);
        }
        z0 = std::max(z0, 0.0);
    }

    if (z0 <= kAbsTol * coeff_scale) {
        // biquadratic: V^4 + a V^2 + c = 0
        const double d = a * a - 4.0 * c;
        if (d >= 0.0) {
            const double sd = std::sqrt(d);
            for (double y : {0.5 * (-a + sd), 0.5 * (-a - sd)}) {
                if (y < 0.0) continue;
                const double sy = std::sqrt(y);
                push(sy);
                push(-sy);
            }
        }
    } else {
        const double s = std::sqrt(z0);
        const double rp = -z0 - 2.0 * a + 2.0 * b / s;
        const double rm = -z0 - 2.0 * a - 2.0 * b / s;
        if (rp >= 0.0) {
            push(0.5 * (-s + std::sqrt(rp)));
            push(0.5 * (-s - std::sqrt(rp)));
        }
        if (rm >= 0.0) {
            push(0.5 * (s + std::sqrt(rm)));
            push(0.5 * (s - std::sqrt(rm)));
        }
    }

    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace homsafe
