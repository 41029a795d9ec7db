#include "oqrw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oqrw {

Moments moments(std::span<const double> xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    double s = 0.0;
    for (double x : xs) s += x;
    m.mean = s / static_cast<double>(m.n);
    double c2 = 0.0, c3 = 0.0, c4 = 0.0;
    for (double x : xs) {
        double d = x - m.mean;
        c2 += d * d;
        c3 += d * d * d;
        c4 += d * d * d * d;
    }
    double n = static_cast<double>(m.n);
    double v = c2 / n;
    m.var = m.n > 1 ? c2 / (n - 1.0) : 0.0;
    if (v > 0.0) {
        m.skewness = (c3 / n) / std::pow(v, 1.5);
        m.excess_kurtosis = (c4 / n) / (v * v) - 3.0;
    }
    m.stderr_mean = m.n > 1 ? std::sqrt(m.var / n) : 0.0;
    return m;
}

Histogram histogram(std::span<const double> xs, std::size_t n_bins, double lo, double hi) {
    if (n_bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram: bad bins or range");
    Histogram h;
    h.edges.resize(n_bins + 1);
    double w = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i) h.edges[i] = lo + w * static_cast<double>(i);
    h.counts.assign(n_bins, 0);
    h.n_total = xs.size();
    for (double x : xs) {
        if (x < lo) {
            ++h.n_below;
        } else if (x >= hi) {
            ++h.n_above;
        } else {
            ++h.counts[static_cast<std::size_t>((x - lo) / w)];
        }
    }
    h.density.resize(n_bins);
    double norm = static_cast<double>(h.n_total) * w;
    for (std::size_t i = 0; i < n_bins; ++i)
        h.density[i] = norm > 0.0 ? static_cast<double>(h.counts[i]) / norm : 0.0;
    return h;
}

double l1_distance(const Histogram& h1, const Histogram& h2) {
    if (h1.edges.size() != h2.edges.size() || h1.edges.front() != h2.edges.front() ||
        h1.edges.back() != h2.edges.back())
        throw std::invalid_argument("l1_distance: histograms must share edges");
    double w = h1.bin_width();
    double d = 0.0;
    for (std::size_t i = 0; i < h1.density.size(); ++i)
        d += std::abs(h1.density[i] - h2.density[i]) * w;
    return d;
}

double l1_distance(const Histogram& h, const std::vector<double>& density) {
    if (density.size() != h.density.size())
        throw std::invalid_argument("l1_distance: density size mismatch");
    double w = h.bin_width();
    double d = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        d += std::abs(h.density[i] - density[i]) * w;
    return d;
}

double ks_to_exponential(std::vector<double> sample, double mean) {
    if (sample.empty() || !(mean > 0.0))
        throw std::invalid_argument("ks_to_exponential: empty sample or bad mean");
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = 1.0 - std::exp(-sample[i] / mean);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("linear_fit: need >= 3 matched points");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
    return f;
}

ConfidenceInterval bootstrap_percentile_ci(std::size_t n_items, int n_resamples, double alpha,
                                           RngStream& rng,
                                           const std::function<double(const std::vector<std::size_t>&)>& estimator) {
    if (n_items == 0 || n_resamples < 10)
        throw std::invalid_argument("bootstrap_percentile_ci: too few items or resamples");
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(n_resamples));
    std::vector<std::size_t> idx(n_items);
    for (int b = 0; b < n_resamples; ++b) {
        for (std::size_t i = 0; i < n_items; ++i)
            idx[i] = static_cast<std::size_t>(rng.u64() % n_items);
        stats.push_back(estimator(idx));
    }
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        double pos = q * (static_cast<double>(stats.size()) - 1.0);
        std::size_t i = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(i);
        if (i + 1 >= stats.size()) return stats.back();
        return stats[i] * (1.0 - frac) + stats[i + 1] * frac;
    };
    return {pick(alpha / 2.0), pick(1.0 - alpha / 2.0)};
}

}  // namespace oqrw
