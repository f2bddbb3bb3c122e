#pragma once

#include <cmath>
#include <stdexcept>

#include "ldg/qtensor.hpp"

namespace ldg {

/// Material constants of the bulk potential
///   f_b(Q) = -(a2/2) tr(Q^2) - (b2/3) tr(Q^3) + (c2/4) [tr(Q^2)]^2 + C
/// together with the coherence length eps and the derived quantities: the
/// minimizing uniaxial order parameter s_plus and the offset C that makes
/// f_b vanish on the minimizing manifold N.
struct MaterialParams {
    double a2 = 1.0;
    double b2 = 1.0;
    double c2 = 1.0;
    double eps = 0.1;
    double s_plus = 0.0;   // derived
    double c_offset = 0.0; // derived
};

inline MaterialParams derive_params(double a2, double b2, double c2, double eps) {
    if (!(a2 > 0.0) || !(b2 > 0.0) || !(c2 > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("derive_params: a2, b2, c2, eps must all be positive");
    MaterialParams p;
    p.a2 = a2;
    p.b2 = b2;
    p.c2 = c2;
    p.eps = eps;
    p.s_plus = (b2 + std::sqrt(b2 * b2 + 24.0 * a2 * c2)) / (4.0 * c2);
    // bulk value at any Q in N, using tr(Q^2) = (2/3)s^2, tr(Q^3) = (2/9)s^3
    const double s = p.s_plus;
    const double fb_at_N = -(a2 / 3.0) * s * s - (2.0 * b2 / 27.0) * s * s * s +
                           (c2 / 9.0) * s * s * s * s;
    p.c_offset = -fb_at_N;
    return p;
}

inline double bulk_energy(const QTensor& q, const MaterialParams& p) {
    const double t2 = tr2(q);
    const double t3 = tr3(q);
    return -0.5 * p.a2 * t2 - (p.b2 / 3.0) * t3 + 0.25 * p.c2 * t2 * t2 + p.c_offset;
}

/// Gradient of f_b with respect to Q in the traceless symmetric space:
///   -a2 Q - b2 (Q^2 - tr(Q^2) Id/3) + c2 tr(Q^2) Q.
/// The Id/3 term is the Lagrange multiplier of the trace constraint; in the
/// coefficient basis it drops out automatically when projecting Q^2.
inline QTensor bulk_gradient(const QTensor& q, const MaterialParams& p) {
    const Mat3 m = q.matrix();
    const QTensor q2 = QTensor::from_matrix(m * m);  // traceless projection of Q^2
    const double t2 = tr2(q);
    return (-p.a2 + p.c2 * t2) * q - p.b2 * q2;
}

}  // namespace ldg
