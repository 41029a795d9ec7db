#pragma once

#include <algorithm>
#include <cmath>

#include "oqrw/complex2x2.hpp"

namespace oqrw {

/// Internal density matrix in the Pauli basis:
///   rho = (trace*I + q1*sigma1 + q2*sigma2 + q3*sigma3) / 2.
/// Normalized states have trace = 1 and q1^2+q2^2+q3^2 <= 1; pure states sit
/// on the unit sphere and det(rho) = 0.
struct BlochState {
    double trace = 1.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;

    static BlochState maximally_mixed() { return {1.0, 0.0, 0.0, 0.0}; }
    static BlochState pure_up() { return {1.0, 0.0, 0.0, 1.0}; }
    static BlochState pure_down() { return {1.0, 0.0, 0.0, -1.0}; }

    double norm_sq() const { return q1 * q1 + q2 * q2 + q3 * q3; }

    /// det(rho) = (trace^2 - |q|^2) / 4.
    double det() const { return 0.25 * (trace * trace - norm_sq()); }

    /// sqrt(det rho) with tiny negative roundoff clamped to 0.
    double sqrt_det() const { return std::sqrt(std::max(0.0, det())); }

    bool positivity_ok(double tol = 1e-9) const {
        return norm_sq() <= trace * trace + tol && det() >= -1e-12;
    }

    Complex2x2 to_matrix() const {
        return {cplx(0.5 * (trace + q3), 0.0), cplx(0.5 * q1, -0.5 * q2),
                cplx(0.5 * q1, 0.5 * q2), cplx(0.5 * (trace - q3), 0.0)};
    }

    static BlochState from_matrix(const Complex2x2& m) {
        BlochState s;
        s.trace = (m.a11 + m.a22).real();
        s.q1 = (m.a12 + m.a21).real();
        s.q2 = (m.a21 - m.a12).imag();
        s.q3 = (m.a11 - m.a22).real();
        return s;
    }
};

}  // namespace oqrw
