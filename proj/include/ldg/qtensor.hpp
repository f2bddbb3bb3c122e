#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ldg/geometry.hpp"

namespace ldg {

/// Traceless symmetric 3x3 order parameter, stored as five coefficients in an
/// orthonormal basis (Frobenius inner product). Tracelessness and symmetry are
/// structural: every coefficient vector is a valid tensor.
///
/// Basis:
///   E0 = diag(-1,-1,2)/sqrt(6)
///   E1 = diag(1,-1,0)/sqrt(2)
///   E2 = (ex ey^T + ey ex^T)/sqrt(2)
///   E3 = (ex ez^T + ez ex^T)/sqrt(2)
///   E4 = (ey ez^T + ez ey^T)/sqrt(2)
class QTensor {
  public:
    QTensor() = default;
    explicit QTensor(const std::array<double, 5>& c) : c_(c) {}

    static QTensor from_coeffs(double c0, double c1, double c2, double c3, double c4) {
        return QTensor({c0, c1, c2, c3, c4});
    }

    /// Orthogonal projection of an arbitrary 3x3 matrix onto the traceless
    /// symmetric subspace, expressed in the coefficient basis. For symmetric
    /// traceless input this is the exact inverse of matrix().
    static QTensor from_matrix(const Mat3& m) {
        constexpr double inv_sqrt6 = 0.40824829046386301637;  // 1/sqrt(6)
        constexpr double inv_sqrt2 = 0.70710678118654752440;  // 1/sqrt(2)
        QTensor q;
        q.c_[0] = inv_sqrt6 * (2.0 * m(2, 2) - m(0, 0) - m(1, 1));
        q.c_[1] = inv_sqrt2 * (m(0, 0) - m(1, 1));
        q.c_[2] = inv_sqrt2 * (m(0, 1) + m(1, 0));
        q.c_[3] = inv_sqrt2 * (m(0, 2) + m(2, 0));
        q.c_[4] = inv_sqrt2 * (m(1, 2) + m(2, 1));
        return q;
    }

    Mat3 matrix() const {
        constexpr double inv_sqrt6 = 0.40824829046386301637;
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        Mat3 m;
        m(0, 0) = -inv_sqrt6 * c_[0] + inv_sqrt2 * c_[1];
        m(1, 1) = -inv_sqrt6 * c_[0] - inv_sqrt2 * c_[1];
        m(2, 2) = 2.0 * inv_sqrt6 * c_[0];
        m(0, 1) = m(1, 0) = inv_sqrt2 * c_[2];
        m(0, 2) = m(2, 0) = inv_sqrt2 * c_[3];
        m(1, 2) = m(2, 1) = inv_sqrt2 * c_[4];
        return m;
    }

    double operator[](int i) const { return c_[i]; }
    double& operator[](int i) { return c_[i]; }
    const std::array<double, 5>& coeffs() const { return c_; }

    QTensor& operator+=(const QTensor& o) {
        for (int i = 0; i < 5; ++i) c_[i] += o.c_[i];
        return *this;
    }
    QTensor& operator-=(const QTensor& o) {
        for (int i = 0; i < 5; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    QTensor& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

  private:
    std::array<double, 5> c_{};
};

inline QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
inline QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
inline QTensor operator*(double s, QTensor q) { return q *= s; }
inline QTensor operator*(QTensor q, double s) { return q *= s; }
inline QTensor operator-(const QTensor& q) { return -1.0 * q; }

inline double dot(const QTensor& a, const QTensor& b) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += a[i] * b[i];
    return s;
}
inline double norm2(const QTensor& q) { return dot(q, q); }
inline double norm(const QTensor& q) { return std::sqrt(norm2(q)); }

/// Q = s (n (x) n - Id/3). Requires |n| = 1 to 1e-12; invariant under n -> -n.
inline QTensor uniaxial(const Vec3& n, double s) {
    if (std::abs(norm(n) - 1.0) > 1e-12)
        throw std::invalid_argument("uniaxial: director must be a unit vector, |n| = " +
                                    std::to_string(norm(n)));
    Mat3 m = Mat3::outer(n, n);
    m -= (1.0 / 3.0) * Mat3::identity();
    return QTensor::from_matrix(s * m);
}

/// tr(Q^2) = sum of squared eigenvalues = squared Frobenius norm.
inline double tr2(const QTensor& q) { return norm2(q); }

/// tr(Q^3) = 3 det(Q) for traceless Q.
inline double tr3(const QTensor& q) { return 3.0 * det(q.matrix()); }

/// Conjugation R Q R^T (frame rotation of the tensor).
inline QTensor conjugate(const QTensor& q, const Mat3& r) {
    return QTensor::from_matrix(r * q.matrix() * transpose(r));
}

/// Eigenvalues (descending, sum 0 for traceless input) and an orthonormal
/// eigenvector frame. Deterministic: repeated calls on identical input give
/// identical output; degenerate spectra fall back to a tie-break against the
/// canonical axes.
struct EigenSystem {
    std::array<double, 3> lambda{};  // lambda[0] >= lambda[1] >= lambda[2]
    std::array<Vec3, 3> vec{};
};

namespace detail {

/// Eigenvalues of a symmetric traceless 3x3 tensor by the trigonometric
/// closed form, descending order.
inline std::array<double, 3> eigenvalues(const QTensor& q) {
    const double j2 = 0.5 * tr2(q);  // (1/2) tr(Q^2)
    if (j2 <= 0.0) return {0.0, 0.0, 0.0};
    const double j3 = det(q.matrix());
    const double p = std::sqrt(j2 / 3.0);
    double r = j3 / (2.0 * p * p * p);
    r = std::min(1.0, std::max(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double l0 = 2.0 * p * std::cos(phi);
    const double l2 = 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    return {l0, -l0 - l2, l2};
}

/// Cyclic Jacobi rotations; robust fallback for near-degenerate spectra.
inline void jacobi_eigen(Mat3 a, std::array<double, 3>& lam, Mat3& v) {
    v = Mat3::identity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
        if (off < 1e-30) break;
        for (int p = 0; p < 2; ++p) {
            for (int qi = p + 1; qi < 3; ++qi) {
                if (std::abs(a(p, qi)) < 1e-300) continue;
                const double theta = (a(qi, qi) - a(p, p)) / (2.0 * a(p, qi));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, qi);
                    a(k, p) = c * akp - s * akq;
                    a(k, qi) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(qi, k);
                    a(p, k) = c * apk - s * aqk;
                    a(qi, k) = s * apk + c * aqk;
                    const double vkp = v(k, p), vkq = v(k, qi);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, qi) = s * vkp + c * vkq;
                }
            }
        }
    }
    lam = {a(0, 0), a(1, 1), a(2, 2)};
}

/// Eigenvector for a simple eigenvalue via the largest cross product of rows
/// of (A - lambda I). Returns squared norm of the best candidate so the
/// caller can detect ill conditioning.
inline double eigvec_cross(const Mat3& a, double lambda, Vec3& out) {
    Vec3 row0{a(0, 0) - lambda, a(0, 1), a(0, 2)};
    Vec3 row1{a(1, 0), a(1, 1) - lambda, a(1, 2)};
    Vec3 row2{a(2, 0), a(2, 1), a(2, 2) - lambda};
    const Vec3 c01 = cross(row0, row1), c02 = cross(row0, row2), c12 = cross(row1, row2);
    const double n01 = norm2(c01), n02 = norm2(c02), n12 = norm2(c12);
    if (n01 >= n02 && n01 >= n12) { out = c01; return n01; }
    if (n02 >= n12) { out = c02; return n02; }
    out = c12;
    return n12;
}

/// Orthonormal completion of a single unit vector by Gram-Schmidt against the
/// canonical axes in lexicographic order (the degenerate-pair tie-break).
inline void complete_frame(const Vec3& e, Vec3& u, Vec3& v) {
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    int first = -1;
    for (int i = 0; i < 3; ++i) {
        Vec3 cand = axes[i] - dot(axes[i], e) * e;
        if (norm2(cand) > 0.25) {
            u = normalized(cand);
            first = i;
            break;
        }
    }
    (void)first;
    v = cross(e, u);
}

}  // namespace detail

inline EigenSystem eigensystem(const QTensor& q) {
    EigenSystem es;
    es.lambda = detail::eigenvalues(q);
    const Mat3 a = q.matrix();
    const double scale = std::max({std::abs(es.lambda[0]), std::abs(es.lambda[2]), 1e-300});
    const double gap01 = es.lambda[0] - es.lambda[1];
    const double gap12 = es.lambda[1] - es.lambda[2];
    const double tol = 1e-6 * scale;

    if (norm(q) <= 1e-300) {
        es.lambda = {0.0, 0.0, 0.0};
        es.vec = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        return es;
    }

    if (gap01 > tol && gap12 > tol) {
        Vec3 e0, e2;
        const double q0 = detail::eigvec_cross(a, es.lambda[0], e0);
        const double q2 = detail::eigvec_cross(a, es.lambda[2], e2);
        if (q0 > 1e-24 * scale * scale * scale * scale && q2 > 1e-24 * scale * scale * scale * scale) {
            es.vec[0] = normalized(e0);
            e2 = e2 - dot(e2, es.vec[0]) * es.vec[0];
            es.vec[2] = normalized(e2);
            es.vec[1] = cross(es.vec[2], es.vec[0]);
            return es;
        }
    } else if (gap01 > tol || gap12 > tol) {
        // one simple eigenvalue, one near-degenerate pair
        const int simple = (gap01 > tol && gap01 >= gap12) ? 0 : 2;
        Vec3 e;
        const double qn = detail::eigvec_cross(a, es.lambda[simple], e);
        if (qn > 1e-24 * scale * scale * scale * scale) {
            e = normalized(e);
            Vec3 u, v;
            detail::complete_frame(e, u, v);
            if (simple == 0) {
                es.vec = {e, u, v};
            } else {
                es.vec = {u, v, e};
            }
            return es;
        }
    } else {
        // fully degenerate spectrum: canonical frame
        es.vec = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        return es;
    }

    // ill-conditioned closed form: Jacobi fallback
    std::array<double, 3> lam;
    Mat3 v;
    detail::jacobi_eigen(a, lam, v);
    int order[3] = {0, 1, 2};
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (lam[order[j]] > lam[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i < 3; ++i) {
        es.lambda[i] = lam[order[i]];
        es.vec[i] = Vec3{v(0, order[i]), v(1, order[i]), v(2, order[i])};
    }
    return es;
}

/// Nearest point of the uniaxial manifold N = { s+ (n(x)n - Id/3) }, defined
/// when the leading eigenvalue is simple. Throws when the gap drops below
/// gap_min (the tensor left the neighborhood where the projection is smooth).
inline QTensor project_to_N(const QTensor& q, double s_plus, double gap_min = 1e-8) {
    const EigenSystem es = eigensystem(q);
    if (es.lambda[0] - es.lambda[1] < gap_min)
        throw std::runtime_error("project_to_N: projection undefined, leading eigenvalue gap " +
                                 std::to_string(es.lambda[0] - es.lambda[1]) + " < " +
                                 std::to_string(gap_min));
    return uniaxial(normalized(es.vec[0]), s_plus);
}

/// Distance to N in Frobenius norm, by the sorted-eigenvalue closed form.
/// Defined for every Q; agrees with |Q - project_to_N(Q)| where the
/// projection exists and vanishes exactly on N.
inline double dist_to_N(const QTensor& q, double s_plus) {
    const auto lam = detail::eigenvalues(q);
    const double d0 = lam[0] - 2.0 * s_plus / 3.0;
    const double d1 = lam[1] + s_plus / 3.0;
    const double d2 = lam[2] + s_plus / 3.0;
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

/// Biaxiality beta = 1 - 6 tr(Q^3)^2 / tr(Q^2)^3 in [0,1]; 0 on uniaxial
/// tensors (including Q = 0 by convention), 1 when tr(Q^3) = 0.
inline double biaxiality(const QTensor& q) {
    const double t2 = tr2(q);
    if (t2 < 1e-300) return 0.0;
    const double t3 = tr3(q);
    const double beta = 1.0 - 6.0 * t3 * t3 / (t2 * t2 * t2);
    return std::min(1.0, std::max(0.0, beta));
}

}  // namespace ldg
