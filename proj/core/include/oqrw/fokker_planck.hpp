#pragma once

#include <cstddef>
#include <vector>

#include "oqrw/bloch.hpp"
#include "oqrw/kraus.hpp"

namespace oqrw {

/// Uniform 1D grid with explicit time step. Stability needs both the
/// diffusion bound dt <= dx^2/2 and the advection bound dt <= dx/(4a).
struct Grid1D {
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n_cells = 256;
    double dt_pde = 1e-4;

    double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }

    void validate(double a) const;
};

/// Grid-sampled 2x2 Hermitian matrix field rho(x): per cell the trace
/// density p = tr rho and the unnormalized Bloch densities w_k, so
/// rho(x) = (p(x) I + w1 sigma1 + w2 sigma2 + w3 sigma3)/2. Hermiticity is
/// structural. The scalar marginal is p(x); integral p dx = 1.
struct MatrixDensityField {
    Grid1D grid;
    std::vector<double> p, w1, w2, w3;
    double time = 0.0;
    double reflected_mass = 0.0;  // cumulative would-be boundary outflux

    explicit MatrixDensityField(const Grid1D& g)
        : grid(g), p(g.n_cells, 0.0), w1(g.n_cells, 0.0), w2(g.n_cells, 0.0),
          w3(g.n_cells, 0.0) {}

    double mass() const;

    /// Mean internal state integrated over x (trace-normalized).
    BlochState mean_internal() const;

    /// Moments of the scalar marginal p(x).
    struct Moments {
        double mean, var, skewness, excess_kurtosis;
    };
    Moments marginal_moments() const;
};

/// Gaussian packet of width sigma at x0 carrying the internal state rho_int,
/// normalized to unit mass. sigma <= 0 selects the default 3*dx.
MatrixDensityField gaussian_packet(const Grid1D& grid, double x0, double sigma,
                                   const BlochState& rho_int);

/// One Strang-split step of
///   d rho/dt = (1/2) d2x rho - (N dx rho + dx rho N^dag) - i[H, rho] + L_N(rho)
/// with N = a sigma3: exact local rotation/Lindblad half-steps around a
/// conservative flux-form transport-diffusion step in the characteristic
/// variables u+- = p +- w3 (velocities +-2a), upwinded per characteristic.
/// Zero-flux boundaries; throws "CFL violation" / "mass leak" NumericalError.
void pde_step(MatrixDensityField& field, double a, double omega0);

/// Steps to each requested time (rounded to whole steps) and returns the
/// snapshots in order.
std::vector<MatrixDensityField> fp_solve(MatrixDensityField initial, double a, double omega0,
                                         const std::vector<double>& snapshot_times);

/// Domain auto-sizing for ballistic fronts: |x| up to 2a t + 6 sqrt(t).
Grid1D auto_grid(double a, double t_max, double dx, double safety = 1.0);

}  // namespace oqrw
