#include "oqrw/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace oqrw {

namespace {

// trapezoid MFPT on an N-cell grid over [wlo, yb]
double mfpt_on_grid(const PotentialSpec& pot, double d_coef, double wlo, double y0, double yb,
                    std::size_t n) {
    double h = (yb - wlo) / static_cast<double>(n);
    // prefix integral of e^{-V/D}
    double inner = 0.0;
    double f_prev = std::exp(-potential(pot, wlo).v / d_coef);
    // outer integral accumulates from y0 upward
    double outer = 0.0;
    double g_prev = 0.0;
    bool started = false;
    for (std::size_t i = 1; i <= n; ++i) {
        double y = wlo + h * static_cast<double>(i);
        double f = std::exp(-potential(pot, y).v / d_coef);
        inner += 0.5 * h * (f_prev + f);
        f_prev = f;
        if (y >= y0 - 1e-12) {
            double g = std::exp(potential(pot, y).v / d_coef) * inner;
            if (started) outer += 0.5 * h * (g_prev + g);
            g_prev = g;
            started = true;
        }
    }
    return outer / d_coef;
}

}  // namespace

double mfpt_oracle(const MfptSpec& spec) {
    if (!(spec.a * spec.a > spec.omega0))
        throw NumericalError("mfpt_oracle: no barrier (requires a^2 > omega0)");
    PotentialSpec pot{spec.a, spec.omega0, +1};
    PotentialExtrema ex = potential_extrema(pot);
    if (!ex.has_extrema) throw NumericalError("mfpt_oracle: no barrier (degenerate extrema)");
    double y0 = std::isnan(spec.y0) ? ex.y_min : spec.y0;
    double yb = std::isnan(spec.y_b) ? ex.y_max + 2.0 : spec.y_b;
    if (!(y0 < yb)) throw std::invalid_argument("mfpt_oracle: y0 must lie below y_b");
    double d_coef = 2.0 * spec.a * spec.a;

    // truncate the inner integral where e^{-V/D} is ~1e-16 of its peak
    double v_ref = potential(pot, y0).v;
    double wlo = y0;
    while (potential(pot, wlo).v - v_ref < 40.0 * d_coef && wlo > -80.0) wlo -= 0.5;

    std::size_t n = 4096;
    double prev = mfpt_on_grid(pot, d_coef, wlo, y0, yb, n);
    for (int it = 0; it < 10; ++it) {
        n *= 2;
        double cur = mfpt_on_grid(pot, d_coef, wlo, y0, yb, n);
        if (std::abs(cur - prev) <= 0.5 * spec.rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

DeffEstimate estimate_deff(const EnsembleX& ens, double window_lo, double window_hi,
                           std::optional<double> mean_flip_time, int n_bootstrap,
                           std::uint64_t bootstrap_seed) {
    const std::size_t n_traj = ens.x.size();
    const std::size_t n_t = ens.times.size();
    if (n_traj < 8 || n_t < 4) throw std::invalid_argument("estimate_deff: ensemble too small");
    for (const auto& row : ens.x)
        if (row.size() != n_t) throw std::invalid_argument("estimate_deff: ragged ensemble");

    if (window_lo < 0.0) window_lo = ens.times.front() + 0.5 * (ens.times.back() - ens.times.front());
    if (window_hi < 0.0) window_hi = ens.times.back();
    if (mean_flip_time && *mean_flip_time > 0.0 &&
        window_hi - window_lo < 20.0 * (*mean_flip_time))
        throw std::invalid_argument("estimate_deff: window too short (needs >= 20 mean flip times)");

    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n_t; ++j)
        if (ens.times[j] >= window_lo - 1e-12 && ens.times[j] <= window_hi + 1e-12)
            cols.push_back(j);
    if (cols.size() < 3) throw std::invalid_argument("estimate_deff: too few samples in window");

    auto var_slope = [&](const std::vector<std::size_t>& rows) {
        std::vector<double> ts(cols.size()), vs(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::size_t j = cols[c];
            double mu = 0.0;
            for (std::size_t r : rows) mu += ens.x[r][j];
            mu /= static_cast<double>(rows.size());
            double s2 = 0.0;
            for (std::size_t r : rows) {
                double d = ens.x[r][j] - mu;
                s2 += d * d;
            }
            ts[c] = ens.times[j];
            vs[c] = s2 / static_cast<double>(rows.size() - 1);
        }
        return linear_fit(ts, vs);
    };

    std::vector<std::size_t> all(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) all[i] = i;
    LinearFit fit = var_slope(all);

    DeffEstimate out;
    out.d_eff = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    RngStream rng(bootstrap_seed, 0);
    out.ci = bootstrap_percentile_ci(n_traj, n_bootstrap, 0.05, rng,
                                     [&](const std::vector<std::size_t>& idx) {
                                         return var_slope(idx).slope;
                                     });
    return out;
}

PdfSummary pdf_histogram(const std::vector<double>& samples, std::size_t n_bins) {
    if (samples.size() < 10000)
        throw std::invalid_argument("pdf_histogram: needs >= 1e4 samples");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it, hi = *hi_it;
    double pad = 1e-9 * std::max(1.0, hi - lo);
    PdfSummary out{histogram(samples, n_bins, lo - pad, hi + pad), moments(samples)};
    return out;
}

PurificationFit purification_fit(const DecaySeries& series) {
    PurificationFit out;
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < series.mean.size(); ++i) {
        double m = series.mean[i];
        double se = series.stderr_[i];
        if (!(m > 0.0)) break;
        if (se > 0.0 && m < 5.0 * se) break;  // noise floor reached
        xs.push_back(series.n[i]);
        ys.push_back(std::log(m));
        ws.push_back(se);
    }
    out.points_used = xs.size();
    if (xs.size() < 3) return out;
    LinearFit fit = linear_fit(xs, ys);
    out.rate = -fit.slope;
    out.stderr_ = fit.slope_stderr;
    out.sufficient_decay = std::exp(ys.front() - ys.back()) >= 10.0;
    return out;
}

}  // namespace oqrw
