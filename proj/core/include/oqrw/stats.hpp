#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "oqrw/rng.hpp"

namespace oqrw {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double stderr_mean = 0.0;
};

Moments moments(std::span<const double> xs);

/// Density-normalized histogram over [lo, hi): integral of `density` over
/// the covered range equals the in-range fraction of the sample.
struct Histogram {
    std::vector<double> edges;    // n_bins + 1
    std::vector<double> density;  // n_bins
    std::vector<std::size_t> counts;
    std::size_t n_total = 0;
    std::size_t n_below = 0;
    std::size_t n_above = 0;

    double bin_width() const { return edges[1] - edges[0]; }
    double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

Histogram histogram(std::span<const double> xs, std::size_t n_bins, double lo, double hi);

/// L1 distance between two densities on identical edges.
double l1_distance(const Histogram& h1, const Histogram& h2);

/// L1 distance between a histogram and a density given per bin center.
double l1_distance(const Histogram& h, const std::vector<double>& density);

/// Kolmogorov-Smirnov distance of a sample to Exponential(mean).
double ks_to_exponential(std::vector<double> sample, double mean);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap over item indices: the estimator maps a resampled
/// index multiset to a scalar. Deterministic given the stream.
ConfidenceInterval bootstrap_percentile_ci(std::size_t n_items, int n_resamples, double alpha,
                                           RngStream& rng,
                                           const std::function<double(const std::vector<std::size_t>&)>& estimator);

}  // namespace oqrw
