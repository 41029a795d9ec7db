#pragma once

#include <cmath>
#include <stdexcept>

#include "oqrw/bloch.hpp"
#include "oqrw/complex2x2.hpp"
#include "oqrw/errors.hpp"

namespace oqrw {

/// One measurement-conditioned update: the pair (B+, B-) with
/// B+^dag B+ + B-^dag B- = I.
struct KrausPair {
    Complex2x2 b_plus;
    Complex2x2 b_minus;

    double unitarity_residual() const { return oqrw::unitarity_residual(b_plus, b_minus); }
};

/// Discrete parametrization B+ = (u r; s v)/delta, B- = (-v s; r -u)/delta.
struct KrausParamsUVRS {
    double u = 1.0;
    double v = 1.0;
    double r = 0.0;
    double s = 0.0;

    double delta() const { return std::sqrt(u * u + v * v + r * r + s * s); }
};

/// Continuous-limit parametrization: N = a*sigma3, H chosen so the Bloch
/// drift is dq3 = +2*omega0*q1, dq1 = -2*omega0*q3 (rotation orientation of
/// the continuous equations; with the standard Pauli matrices this is
/// H = -omega0*sigma2). epsilon is the discretization time step.
struct ScalingParams {
    double a = 1.0;
    double omega0 = 1.0;
    double epsilon = 1e-4;

    Complex2x2 noise_op() const { return a * pauli3(); }
    Complex2x2 hamiltonian() const { return -omega0 * pauli2(); }
};

inline KrausPair kraus_from_uvrs(const KrausParamsUVRS& p) {
    double d2 = p.u * p.u + p.v * p.v + p.r * p.r + p.s * p.s;
    if (!(d2 > 0.0))
        throw std::invalid_argument("kraus_from_uvrs: (u,v,r,s) must not all be zero");
    double inv_d = 1.0 / std::sqrt(d2);
    KrausPair k;
    k.b_plus = inv_d * Complex2x2{p.u, p.r, p.s, p.v};
    k.b_minus = inv_d * Complex2x2{-p.v, p.s, p.r, -p.u};
    return k;
}

/// B+- = (I +- sqrt(eps) N + eps(-iH - N^dag N / 2)) / sqrt(2), no
/// renormalization. The pair satisfies unitarity only to O(eps^2).
inline KrausPair kraus_from_scaling_raw(const ScalingParams& p) {
    if (!(p.epsilon > 0.0))
        throw std::invalid_argument("kraus_from_scaling: epsilon must be > 0");
    if (!std::isfinite(p.a) || !std::isfinite(p.omega0))
        throw std::invalid_argument("kraus_from_scaling: a, omega0 must be finite");
    Complex2x2 n = p.noise_op();
    Complex2x2 h = p.hamiltonian();
    Complex2x2 second = cplx(0.0, -1.0) * h - 0.5 * (n.adjoint() * n);
    double se = std::sqrt(p.epsilon);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    KrausPair k;
    k.b_plus = inv_sqrt2 * (Complex2x2::identity() + se * n + p.epsilon * second);
    k.b_minus = inv_sqrt2 * (Complex2x2::identity() + (-se) * n + p.epsilon * second);
    return k;
}

/// Scaling-form pair renormalized by S^{-1/2}, S = B+^dag B+ + B-^dag B-,
/// so the unitarity constraint holds exactly (to roundoff) at any epsilon.
inline KrausPair kraus_from_scaling(const ScalingParams& p) {
    KrausPair k = kraus_from_scaling_raw(p);
    Complex2x2 s = k.b_plus.adjoint() * k.b_plus + k.b_minus.adjoint() * k.b_minus;
    Complex2x2 sinv;
    try {
        sinv = inv_sqrt_hpd(s);
    } catch (const std::domain_error&) {
        throw NumericalError("kraus_from_scaling: epsilon too large (renormalizer not positive definite)");
    }
    return {k.b_plus * sinv, k.b_minus * sinv};
}

/// Outcome of one probe measurement on rho: branch probabilities and the
/// conditioned post-measurement states. A branch with probability below
/// 1e-14 is flagged degenerate and its state left unnormalized garbage-free
/// (maximally mixed placeholder).
struct MeasurementSplit {
    double p_plus = 0.0;
    double p_minus = 0.0;
    BlochState rho_plus;
    BlochState rho_minus;
    bool plus_degenerate = false;
    bool minus_degenerate = false;
};

constexpr double kBranchProbFloor = 1e-14;

inline MeasurementSplit measurement_split(const BlochState& rho, const KrausPair& k) {
    Complex2x2 m = rho.to_matrix();
    Complex2x2 mp = k.b_plus * m * k.b_plus.adjoint();
    Complex2x2 mm = k.b_minus * m * k.b_minus.adjoint();
    MeasurementSplit out;
    out.p_plus = mp.trace().real();
    out.p_minus = mm.trace().real();
    if (out.p_plus < kBranchProbFloor) {
        out.plus_degenerate = true;
        out.rho_plus = BlochState::maximally_mixed();
    } else {
        out.rho_plus = BlochState::from_matrix((1.0 / out.p_plus) * mp);
    }
    if (out.p_minus < kBranchProbFloor) {
        out.minus_degenerate = true;
        out.rho_minus = BlochState::maximally_mixed();
    } else {
        out.rho_minus = BlochState::from_matrix((1.0 / out.p_minus) * mm);
    }
    return out;
}

/// The three continuous-limit generators for measurement operator N and
/// Hamiltonian H:
///   U_N(rho) = tr(N rho + rho N^dag)            (position drift)
///   D_N(rho) = N rho + rho N^dag - rho U_N(rho) (noise backaction)
///   L_N(rho) = N rho N^dag - {N^dag N, rho}/2   (Lindblad dissipator)
struct LindbladTerms {
    Complex2x2 l_n;
    Complex2x2 d_n;
    double u_n = 0.0;
};

inline LindbladTerms lindblad_terms(const BlochState& rho, const Complex2x2& n_op) {
    Complex2x2 m = rho.to_matrix();
    Complex2x2 nr = n_op * m + m * n_op.adjoint();
    LindbladTerms out;
    out.u_n = nr.trace().real();
    out.d_n = nr - out.u_n * m;
    Complex2x2 ndn = n_op.adjoint() * n_op;
    out.l_n = n_op * m * n_op.adjoint() - 0.5 * (ndn * m + m * ndn);
    return out;
}

/// c = det^{1/2}(B+ B+^dag) + det^{1/2}(B- B-^dag) = |det B+| + |det B-|.
/// Equals 1 iff both Kraus operators are proportional to unitaries; the mean
/// sqrt-determinant of the internal state contracts by c each step.
inline double purification_constant(const KrausPair& k) {
    return std::abs(k.b_plus.det()) + std::abs(k.b_minus.det());
}

}  // namespace oqrw
