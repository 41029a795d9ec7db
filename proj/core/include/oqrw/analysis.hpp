#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "oqrw/discrete.hpp"
#include "oqrw/sde.hpp"
#include "oqrw/stats.hpp"

namespace oqrw {

/// Mean-first-passage setup for dy = -V'(y) dt + 2a dB in the upper-sector
/// potential. Defaults (NaN) resolve to y0 = y_min and y_b = y_max + 2.
struct MfptSpec {
    double a = 2.0;
    double omega0 = 1.0;
    double y0 = std::numeric_limits<double>::quiet_NaN();
    double y_b = std::numeric_limits<double>::quiet_NaN();
    double rel_tol = 1e-4;
};

/// Exact 1D double-integral MFPT, D = 2a^2:
///   T = (1/D) int_{y0}^{y_b} dz e^{V(z)/D} int_{-inf}^{z} dw e^{-V(w)/D},
/// evaluated on refining trapezoid grids until the relative change is below
/// rel_tol. Throws NumericalError("no barrier") when a^2 <= omega0.
double mfpt_oracle(const MfptSpec& spec);

/// X samples of an ensemble on a common time grid: x[i][j] is trajectory i
/// at times[j].
struct EnsembleX {
    std::vector<double> times;
    std::vector<std::vector<double>> x;
};

struct DeffEstimate {
    double d_eff = 0.0;
    double slope_stderr = 0.0;
    ConfidenceInterval ci;  // bootstrap percentile CI over trajectories
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// Least-squares slope of Var(X_t) over times in [window_lo, window_hi]
/// (defaults: upper half of the grid), with a bootstrap CI. If
/// mean_flip_time is supplied, demands a window of at least 20 flip times.
DeffEstimate estimate_deff(const EnsembleX& ens, double window_lo = -1.0, double window_hi = -1.0,
                           std::optional<double> mean_flip_time = std::nullopt,
                           int n_bootstrap = 200, std::uint64_t bootstrap_seed = 0xb001);

/// Histogram plus moments of an ensemble snapshot (>= 1e4 samples).
struct PdfSummary {
    Histogram hist;
    Moments mom;
};

PdfSummary pdf_histogram(const std::vector<double>& samples, std::size_t n_bins);

struct PurificationFit {
    double rate = 0.0;     // decay rate per unit of the series abscissa
    double stderr_ = 0.0;
    bool sufficient_decay = false;  // series spans at least a factor 10
    std::size_t points_used = 0;
};

/// Log-linear fit of a mean-sqrt-det decay series. Points enter while the
/// mean stays clear of its standard error; insufficient decay is flagged,
/// not thrown, so a no-decay series still reports a rate consistent with 0.
PurificationFit purification_fit(const DecaySeries& series);

/// Aggregated estimator outputs for one ensemble run.
struct EnsembleSummary {
    std::vector<double> times;
    std::vector<double> mean_x, var_x, skew_x, kurt_x;
    std::size_t n_trajectories = 0;
    DecaySeries purification;
    std::optional<PurificationFit> purification_rate;
    std::vector<double> flip_intervals;
    double mean_flip_time = 0.0;
    std::size_t n_flips = 0;
    std::optional<DeffEstimate> d_eff;
    double d_eff_prediction = 0.0;
    std::optional<double> mfpt_prediction;
};

}  // namespace oqrw
