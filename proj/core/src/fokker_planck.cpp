#include "oqrw/fokker_planck.hpp"

#include <cmath>
#include <stdexcept>

namespace oqrw {

void Grid1D::validate(double a) const {
    if (n_cells < 16) throw std::invalid_argument("Grid1D: n_cells must be >= 16");
    if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
    if (!(dt_pde > 0.0)) throw std::invalid_argument("Grid1D: dt_pde must be > 0");
    double h = dx();
    if (dt_pde > 0.5 * h * h + 1e-15)
        throw NumericalError("CFL violation: dt_pde must be <= dx^2/2");
    if (a > 0.0 && dt_pde > h / (4.0 * a) + 1e-15)
        throw NumericalError("CFL violation: dt_pde must be <= dx/(4a)");
}

double MatrixDensityField::mass() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s * grid.dx();
}

BlochState MatrixDensityField::mean_internal() const {
    double h = grid.dx();
    BlochState out;
    double sp = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sp += p[i];
        s1 += w1[i];
        s2 += w2[i];
        s3 += w3[i];
    }
    out.trace = sp * h;
    out.q1 = s1 * h;
    out.q2 = s2 * h;
    out.q3 = s3 * h;
    return out;
}

MatrixDensityField::Moments MatrixDensityField::marginal_moments() const {
    double h = grid.dx();
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m0 += p[i];
        m1 += p[i] * grid.center(i);
    }
    m0 *= h;
    m1 *= h;
    double mean = m1 / m0;
    double c2 = 0.0, c3 = 0.0, c4 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = grid.center(i) - mean;
        c2 += p[i] * d * d;
        c3 += p[i] * d * d * d;
        c4 += p[i] * d * d * d * d;
    }
    c2 *= h / m0;
    c3 *= h / m0;
    c4 *= h / m0;
    return {mean, c2, c3 / std::pow(c2, 1.5), c4 / (c2 * c2) - 3.0};
}

MatrixDensityField gaussian_packet(const Grid1D& grid, double x0, double sigma,
                                   const BlochState& rho_int) {
    MatrixDensityField f(grid);
    double s = sigma > 0.0 ? sigma : 3.0 * grid.dx();
    double norm = 0.0;
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        double d = (grid.center(i) - x0) / s;
        f.p[i] = std::exp(-0.5 * d * d);
        norm += f.p[i];
    }
    norm *= grid.dx();
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        f.p[i] /= norm;
        f.w1[i] = rho_int.q1 * f.p[i];
        f.w2[i] = rho_int.q2 * f.p[i];
        f.w3[i] = rho_int.q3 * f.p[i];
    }
    return f;
}

namespace {

// Exact local map over time h for the internal generator
//   w1' = -2a^2 w1 - 2 w0 w3,  w3' = 2 w0 w1,  w2' = -2a^2 w2.
struct LocalMap {
    double m11, m13, m31, m33, m22;

    LocalMap(double a, double w0, double h) {
        double c = -a * a;  // half-trace of A = [[-2a^2, -2w0],[2w0, 0]]
        double disc = a * a * a * a - 4.0 * w0 * w0;  // (tr/2)^2 - det
        double ch, shc;  // cosh(Om h), sinh(Om h)/Om  (or trig analogues)
        if (disc > 1e-300) {
            double om = std::sqrt(disc);
            ch = std::cosh(om * h);
            shc = std::sinh(om * h) / om;
        } else if (disc < -1e-300) {
            double om = std::sqrt(-disc);
            ch = std::cos(om * h);
            shc = std::sin(om * h) / om;
        } else {
            ch = 1.0;
            shc = h;
        }
        double e = std::exp(c * h);
        // exp(Ah) = e^{ch} [ch I + shc (A - c I)]
        m11 = e * (ch + shc * (-2.0 * a * a - c));
        m13 = e * (shc * (-2.0 * w0));
        m31 = e * (shc * (2.0 * w0));
        m33 = e * (ch + shc * (0.0 - c));
        m22 = std::exp(-2.0 * a * a * h);
    }

    void apply(std::vector<double>& w1, std::vector<double>& w2, std::vector<double>& w3) const {
        for (std::size_t i = 0; i < w1.size(); ++i) {
            double a1 = w1[i], a3 = w3[i];
            w1[i] = m11 * a1 + m13 * a3;
            w3[i] = m31 * a1 + m33 * a3;
            w2[i] *= m22;
        }
    }
};

}  // namespace

void pde_step(MatrixDensityField& field, double a, double omega0) {
    const Grid1D& g = field.grid;
    g.validate(a);
    const std::size_t n = g.n_cells;
    const double h = g.dx();
    const double dt = g.dt_pde;
    const double v = 2.0 * a;

    LocalMap half(a, omega0, 0.5 * dt);
    half.apply(field.w1, field.w2, field.w3);

    // characteristic variables u+- = p +- w3, advected at +-2a
    static thread_local std::vector<double> up, um, fl;
    up.resize(n);
    um.resize(n);
    fl.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        up[i] = field.p[i] + field.w3[i];
        um[i] = field.p[i] - field.w3[i];
    }

    auto advect_diffuse = [&](std::vector<double>& u, double vel) {
        // flux at interface i+1/2, i in [0, n]; zero-flux boundaries
        fl[0] = 0.0;
        fl[n] = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double adv = vel >= 0.0 ? vel * u[i] : vel * u[i + 1];
            double dif = -0.5 * (u[i + 1] - u[i]) / h;
            fl[i + 1] = adv + dif;
        }
        // would-be outflux absorbed by the reflecting boundary
        if (vel > 0.0) field.reflected_mass += dt * vel * u[n - 1];
        if (vel < 0.0) field.reflected_mass += dt * (-vel) * u[0];
        for (std::size_t i = 0; i < n; ++i) u[i] -= (dt / h) * (fl[i + 1] - fl[i]);
    };

    advect_diffuse(up, v);
    advect_diffuse(um, -v);

    auto diffuse_only = [&](std::vector<double>& w) {
        fl[0] = 0.0;
        fl[n] = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) fl[i + 1] = -0.5 * (w[i + 1] - w[i]) / h;
        for (std::size_t i = 0; i < n; ++i) w[i] -= (dt / h) * (fl[i + 1] - fl[i]);
    };
    diffuse_only(field.w1);
    diffuse_only(field.w2);

    for (std::size_t i = 0; i < n; ++i) {
        field.p[i] = 0.5 * (up[i] + um[i]);
        field.w3[i] = 0.5 * (up[i] - um[i]);
    }

    half.apply(field.w1, field.w2, field.w3);
    field.time += dt;

    if (field.reflected_mass > 1e-6)
        throw NumericalError("mass leak: boundary flux exceeded 1e-6 of total mass "
                             "(domain too small)");
}

std::vector<MatrixDensityField> fp_solve(MatrixDensityField initial, double a, double omega0,
                                         const std::vector<double>& snapshot_times) {
    std::vector<MatrixDensityField> out;
    out.reserve(snapshot_times.size());
    double dt = initial.grid.dt_pde;
    long step = 0;
    for (double target : snapshot_times) {
        if (target < initial.time - 1e-12)
            throw std::invalid_argument("fp_solve: snapshot times must be non-decreasing");
        long want = std::lround(target / dt);
        while (step < want) {
            pde_step(initial, a, omega0);
            ++step;
        }
        out.push_back(initial);
    }
    return out;
}

Grid1D auto_grid(double a, double t_max, double dx, double safety) {
    double reach = (2.0 * a * t_max + 6.0 * std::sqrt(t_max)) * safety;
    Grid1D g;
    g.x_min = -reach;
    g.x_max = reach;
    g.n_cells = static_cast<std::size_t>(std::ceil(2.0 * reach / dx));
    double h = g.dx();
    g.dt_pde = 0.5 * h * h;
    if (a > 0.0) g.dt_pde = std::min(g.dt_pde, h / (4.0 * a));
    return g;
}

}  // namespace oqrw
