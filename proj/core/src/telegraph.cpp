#include "oqrw/telegraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oqrw/errors.hpp"

namespace oqrw {

TelegraphState simulate_telegraph(double t_max, RngStream& rng,
                                  std::vector<double>* flip_times) {
    if (!(t_max >= 0.0)) throw std::invalid_argument("simulate_telegraph: t_max must be >= 0");
    TelegraphState s;
    for (;;) {
        double wait = rng.exponential();
        if (s.t + wait >= t_max) {
            s.x += s.velocity * (t_max - s.t);
            s.t = t_max;
            return s;
        }
        s.x += s.velocity * wait;
        s.t += wait;
        s.velocity = -s.velocity;
        if (flip_times) flip_times->push_back(s.t);
    }
}

std::size_t TelegraphGrid::cell_of(double x) const {
    double f = (x - x_min) / dx();
    long i = static_cast<long>(std::floor(f));
    i = std::clamp<long>(i, 0, static_cast<long>(n_cells) - 1);
    return static_cast<std::size_t>(i);
}

double TwoComponentField::mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < p_plus.size(); ++i) s += p_plus[i] + p_minus[i];
    return s * grid.dx() + dirac_mass;
}

std::vector<double> TwoComponentField::marginal() const {
    std::vector<double> out(p_plus.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p_plus[i] + p_minus[i];
    return out;
}

namespace {

// exp of the exchange -rate*[[1,-1],[-1,1]] over time h: sum preserved, the
// difference decays at rate 2*rate.
void exchange(std::vector<double>& pp, std::vector<double>& pm, double h, double rate) {
    if (rate == 0.0) return;
    double e = std::exp(-2.0 * rate * h);
    for (std::size_t i = 0; i < pp.size(); ++i) {
        double s = pp[i] + pm[i];
        double d = (pp[i] - pm[i]) * e;
        pp[i] = 0.5 * (s + d);
        pm[i] = 0.5 * (s - d);
    }
}

// upwind transport at velocity +-1, flux form, zero-flux boundaries
void transport(std::vector<double>& u, double vel, double dt, double dx) {
    const std::size_t n = u.size();
    double c = std::abs(vel) * dt / dx;
    static thread_local std::vector<double> next;
    next.resize(n);
    if (vel >= 0.0) {
        next[0] = u[0] - c * u[0];
        for (std::size_t i = 1; i < n; ++i) next[i] = u[i] - c * (u[i] - u[i - 1]);
        next[n - 1] += c * u[n - 1];  // reflect at the right wall (zero flux)
    } else {
        next[n - 1] = u[n - 1] - c * u[n - 1];
        for (std::size_t i = 0; i + 1 < n; ++i) next[i] = u[i] - c * (u[i] - u[i + 1]);
        next[0] += c * u[0];
    }
    u.swap(next);
}

}  // namespace

void telegraph_fp_step(TwoComponentField& field) {
    TelegraphGrid& g = field.grid;
    double dx = g.dx();
    double dt = g.dt > 0.0 ? g.dt : dx;
    if (dt > dx + 1e-15) throw NumericalError("CFL violation: telegraph dt must be <= dx");
    exchange(field.p_plus, field.p_minus, 0.5 * dt, g.exchange_rate);
    transport(field.p_plus, +1.0, dt, dx);
    transport(field.p_minus, -1.0, dt, dx);
    exchange(field.p_plus, field.p_minus, 0.5 * dt, g.exchange_rate);
    // Dirac peak: advances at +1, leaks into p- at its path
    if (field.dirac_mass > 0.0 && g.exchange_rate > 0.0) {
        double leaked = field.dirac_mass * (1.0 - std::exp(-g.exchange_rate * dt));
        std::size_t cell = g.cell_of(field.dirac_pos + 0.5 * dt);
        field.p_minus[cell] += leaked / dx;
        field.dirac_mass *= std::exp(-g.exchange_rate * dt);
    }
    if (field.dirac_mass > 0.0) field.dirac_pos += dt;
    field.time += dt;
}

TwoComponentField telegraph_fp_solve(const TelegraphGrid& grid, double t_max) {
    TwoComponentField f(grid);
    double dt = grid.dt > 0.0 ? grid.dt : grid.dx();
    long n = std::lround(t_max / dt);
    for (long k = 0; k < n; ++k) telegraph_fp_step(f);
    return f;
}

FlipExpansion flip_expansion_pdf(double x, double t, int order) {
    if (!(t > 0.0)) throw std::invalid_argument("flip_expansion_pdf: t must be > 0");
    if (order < 0 || order > 2)
        throw std::invalid_argument("flip_expansion_pdf: order must be 0, 1 or 2");
    if (std::abs(x) > t + 1e-12)
        throw std::domain_error("flip_expansion_pdf: |x| > t is outside the support");
    double et = std::exp(-t);
    FlipExpansion out{et, 0.0};
    if (order >= 1) out.density += 0.5 * et;
    if (order >= 2) out.density += 0.25 * (t + x) * et;
    return out;
}

double flip_expansion_tail_bound(double t) {
    return 1.0 - std::exp(-t) * (1.0 + t + 0.5 * t * t);
}

}  // namespace oqrw
