#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace oqrw {

using cplx = std::complex<double>;

/// Dense 2x2 complex matrix, row-major (a11 a12 / a21 a22). Value type,
/// all operations are pure.
struct Complex2x2 {
    cplx a11{0.0, 0.0};
    cplx a12{0.0, 0.0};
    cplx a21{0.0, 0.0};
    cplx a22{0.0, 0.0};

    static Complex2x2 zero() { return {}; }
    static Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Complex2x2 adjoint() const {
        return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }

    /// Largest entry magnitude (max norm).
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }

    bool finite() const {
        auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
        return ok(a11) && ok(a12) && ok(a21) && ok(a22);
    }

    Complex2x2 operator+(const Complex2x2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Complex2x2 operator-(const Complex2x2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Complex2x2 operator*(const Complex2x2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    friend Complex2x2 operator*(cplx s, const Complex2x2& m) {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }
    friend Complex2x2 operator*(double s, const Complex2x2& m) {
        return cplx(s, 0.0) * m;
    }
};

inline Complex2x2 pauli1() { return {0.0, 1.0, 1.0, 0.0}; }
inline Complex2x2 pauli2() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline Complex2x2 pauli3() { return {1.0, 0.0, 0.0, -1.0}; }

/// A^dag A + B^dag B distance from the identity, max norm.
inline double unitarity_residual(const Complex2x2& b_plus, const Complex2x2& b_minus) {
    Complex2x2 s = b_plus.adjoint() * b_plus + b_minus.adjoint() * b_minus;
    return (s - Complex2x2::identity()).max_abs();
}

/// Inverse square root of a Hermitian positive definite 2x2 matrix.
/// Closed form: sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
/// Throws std::domain_error if M is not positive definite.
inline Complex2x2 inv_sqrt_hpd(const Complex2x2& m) {
    double tr = m.trace().real();
    double dt = m.det().real();
    if (!(dt > 0.0) || !(tr > 0.0))
        throw std::domain_error("inv_sqrt_hpd: matrix not positive definite");
    double sd = std::sqrt(dt);
    double denom = std::sqrt(tr + 2.0 * sd);
    Complex2x2 root = (1.0 / denom) * (m + sd * Complex2x2::identity());
    // invert the 2x2 root
    cplx rdet = root.det();
    Complex2x2 inv{root.a22 / rdet, -root.a12 / rdet, -root.a21 / rdet, root.a11 / rdet};
    return inv;
}

}  // namespace oqrw
