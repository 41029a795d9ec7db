#pragma once

#include <cstddef>
#include <vector>

#include "oqrw/rng.hpp"

namespace oqrw {

/// Walker moving at speed +-1 with rate-1 Poisson velocity reversals,
/// starting at x = 0 with velocity +1.
struct TelegraphState {
    double x = 0.0;
    int velocity = +1;
    double t = 0.0;
};

/// Exact event-driven simulation: i.i.d. Exponential(1) waiting times,
/// ballistic motion in between — no time-discretization error.
TelegraphState simulate_telegraph(double t_max, RngStream& rng,
                                  std::vector<double>* flip_times = nullptr);

struct TelegraphGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n_cells = 512;
    double dt = 0.0;            // 0 -> dt = dx (exact-shift transport)
    double exchange_rate = 1.0;  // 0 disables the coupling (pure transport)

    double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
    std::size_t cell_of(double x) const;
};

/// Two-component density (p+, p-) plus the zero-flip Dirac mass tracked as a
/// separate point mass advected at +1 and depleted at rate 1 (a grid cannot
/// represent delta(x - t)).
struct TwoComponentField {
    TelegraphGrid grid;
    std::vector<double> p_plus, p_minus;
    double dirac_mass = 1.0;
    double dirac_pos = 0.0;
    double time = 0.0;

    explicit TwoComponentField(const TelegraphGrid& g)
        : grid(g), p_plus(g.n_cells, 0.0), p_minus(g.n_cells, 0.0) {}

    double mass() const;

    /// Continuous marginal p+(x) + p-(x); the Dirac mass is reported apart.
    std::vector<double> marginal() const;
};

/// One step of dP/dt + diag(1,-1) dxP + [[1,-1],[-1,1]] P = 0: upwind
/// transport at +-1 (exact cell shift when dt = dx) around exact half-steps
/// of the 2x2 exchange; the Dirac mass advances and leaks into p- at its
/// position. Mass conserved to roundoff per step.
void telegraph_fp_step(TwoComponentField& field);

/// Integrates to t_max (rounded to whole steps).
TwoComponentField telegraph_fp_solve(const TelegraphGrid& grid, double t_max);

/// Flip expansion of p(x, t) up to the given order (0, 1 or 2):
///   dirac weight e^{-t} at x = t,
///   one-flip layer  e^{-t}/2        on (-t, t),
///   two-flip layer  e^{-t}(t+x)/4   on (-t, t).
struct FlipExpansion {
    double dirac_weight;
    double density;
};

FlipExpansion flip_expansion_pdf(double x, double t, int order = 2);

/// Poisson tail P(N_t >= 3) = 1 - e^{-t}(1 + t + t^2/2): the mass the
/// order-2 expansion cannot account for.
double flip_expansion_tail_bound(double t);

}  // namespace oqrw
