#include "oqrw/discrete.hpp"

#include <algorithm>

#include "oqrw/ensemble.hpp"

namespace oqrw {

TrajectoryRecord run_trajectory(const KrausPair& k, const BlochState& rho0, std::int64_t x0,
                                const DiscreteRunOptions& opts, std::uint64_t master_seed,
                                std::uint64_t stream_index) {
    if (opts.n_steps < 1) throw std::invalid_argument("run_trajectory: n_steps must be >= 1");
    std::int64_t stride = opts.sampling_stride;
    if (stride <= 0) stride = std::max<std::int64_t>(1, opts.n_steps / 10000);

    RngStream rng = seed_stream(master_seed, stream_index);
    DiscreteWalkerState state{rho0, x0, 0};

    TrajectoryRecord rec;
    rec.master_seed = master_seed;
    rec.stream_index = stream_index;
    rec.t_or_n.reserve(static_cast<std::size_t>(opts.n_steps / stride) + 2);
    rec.append(0.0, static_cast<double>(x0), rho0);
    if (opts.keep_outcomes) rec.outcomes.reserve(static_cast<std::size_t>(opts.n_steps));

    for (std::int64_t n = 1; n <= opts.n_steps; ++n) {
        int outcome = 0;
        state = step(state, k, rng, &outcome);
        if (opts.keep_outcomes) rec.outcomes.push_back(static_cast<std::int8_t>(outcome));
        if (n % stride == 0 || n == opts.n_steps) {
            rec.append(static_cast<double>(n), static_cast<double>(state.x), state.rho);
        }
    }
    return rec;
}

DecaySeries sqrt_det_decay(const KrausPair& k, const BlochState& rho0, std::int64_t n_max,
                           std::int64_t n_traj, std::uint64_t master_seed,
                           std::int64_t record_stride, unsigned n_threads) {
    if (n_max < 1 || n_traj < 1)
        throw std::invalid_argument("sqrt_det_decay: n_max and n_traj must be >= 1");
    if (record_stride < 1) record_stride = 1;

    std::vector<std::int64_t> record_n;
    for (std::int64_t n = 0; n <= n_max; n += record_stride) record_n.push_back(n);
    if (record_n.back() != n_max) record_n.push_back(n_max);
    const std::size_t n_rec = record_n.size();

    // Per-trajectory contributions land in fixed blocks so the final
    // reduction is independent of scheduling.
    constexpr std::int64_t kChunk = 256;
    const std::size_t n_chunks = static_cast<std::size_t>((n_traj + kChunk - 1) / kChunk);
    std::vector<std::vector<double>> sum(n_chunks, std::vector<double>(n_rec, 0.0));
    std::vector<std::vector<double>> sum2(n_chunks, std::vector<double>(n_rec, 0.0));

    parallel_for_indexed(n_chunks, n_threads, [&](std::size_t c) {
        std::int64_t lo = static_cast<std::int64_t>(c) * kChunk;
        std::int64_t hi = std::min<std::int64_t>(lo + kChunk, n_traj);
        auto& s = sum[c];
        auto& s2 = sum2[c];
        for (std::int64_t i = lo; i < hi; ++i) {
            RngStream rng = seed_stream(master_seed, static_cast<std::uint64_t>(i));
            DiscreteWalkerState st{rho0, 0, 0};
            std::size_t ri = 0;
            if (record_n[0] == 0) {
                double v = st.rho.sqrt_det();
                s[0] += v;
                s2[0] += v * v;
                ri = 1;
            }
            for (std::int64_t n = 1; n <= n_max && ri < n_rec; ++n) {
                st = step(st, k, rng);
                if (n == record_n[ri]) {
                    double v = st.rho.sqrt_det();
                    s[ri] += v;
                    s2[ri] += v * v;
                    ++ri;
                }
            }
        }
    });

    DecaySeries out;
    out.n.resize(n_rec);
    out.mean.resize(n_rec);
    out.stderr_.resize(n_rec);
    for (std::size_t j = 0; j < n_rec; ++j) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            s += sum[c][j];
            s2 += sum2[c][j];
        }
        double m = s / static_cast<double>(n_traj);
        double var = std::max(0.0, s2 / static_cast<double>(n_traj) - m * m);
        out.n[j] = static_cast<double>(record_n[j]);
        out.mean[j] = m;
        out.stderr_[j] = std::sqrt(var / static_cast<double>(n_traj));
    }
    return out;
}

}  // namespace oqrw
