#pragma once

#include <cstdint>
#include <vector>

#include "oqrw/bloch.hpp"
#include "oqrw/kraus.hpp"
#include "oqrw/rng.hpp"

namespace oqrw {

/// Walker state of the discrete open quantum random walk: internal density
/// matrix, integer lattice position, step counter.
struct DiscreteWalkerState {
    BlochState rho;
    std::int64_t x = 0;
    std::int64_t step_index = 0;
};

/// Sequence of probe outcomes, +1 / -1.
using MeasurementRecord = std::vector<std::int8_t>;

/// Sampled time series of one realization. `t_or_n` holds the step index for
/// discrete runs and physical time for continuous runs; the same CSV schema
/// serves both.
struct TrajectoryRecord {
    std::vector<double> t_or_n;
    std::vector<double> x;
    std::vector<double> q1, q2, q3;
    std::vector<double> sqrt_det;
    MeasurementRecord outcomes;  // only kept when requested (short runs)
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    std::size_t size() const { return t_or_n.size(); }

    void append(double t, double pos, const BlochState& rho) {
        t_or_n.push_back(t);
        x.push_back(pos);
        q1.push_back(rho.q1);
        q2.push_back(rho.q2);
        q3.push_back(rho.q3);
        sqrt_det.push_back(rho.sqrt_det());
    }
};

/// Deterministic branch application: moves x by +-1 and conditions rho.
/// Throws NumericalError if the requested branch is degenerate.
inline DiscreteWalkerState apply_outcome(const DiscreteWalkerState& state, const KrausPair& k,
                                         int outcome) {
    MeasurementSplit ms = measurement_split(state.rho, k);
    DiscreteWalkerState next;
    next.step_index = state.step_index + 1;
    if (outcome > 0) {
        if (ms.plus_degenerate) throw NumericalError("discrete step: degenerate + branch");
        next.rho = ms.rho_plus;
        next.x = state.x + 1;
    } else {
        if (ms.minus_degenerate) throw NumericalError("discrete step: degenerate - branch");
        next.rho = ms.rho_minus;
        next.x = state.x - 1;
    }
    return next;
}

/// One probe measurement. Consumes exactly one uniform variate: outcome is +
/// iff u < p_plus.
inline DiscreteWalkerState step(const DiscreteWalkerState& state, const KrausPair& k,
                                RngStream& rng, int* outcome_out = nullptr) {
    MeasurementSplit ms = measurement_split(state.rho, k);
    double u = rng.uniform();
    int outcome = (u < ms.p_plus) ? +1 : -1;
    if (outcome_out) *outcome_out = outcome;
    DiscreteWalkerState next;
    next.step_index = state.step_index + 1;
    if (outcome > 0) {
        if (ms.plus_degenerate) throw NumericalError("discrete step: degenerate + branch");
        next.rho = ms.rho_plus;
        next.x = state.x + 1;
    } else {
        if (ms.minus_degenerate) throw NumericalError("discrete step: degenerate - branch");
        next.rho = ms.rho_minus;
        next.x = state.x - 1;
    }
    return next;
}

struct DiscreteRunOptions {
    std::int64_t n_steps = 1000;
    std::int64_t sampling_stride = 0;  // 0 -> max(1, n_steps / 10000)
    bool keep_outcomes = false;
};

/// Runs one trajectory; records every stride-th state (plus initial and
/// final). Deterministic given (master_seed, stream_index).
TrajectoryRecord run_trajectory(const KrausPair& k, const BlochState& rho0, std::int64_t x0,
                                const DiscreteRunOptions& opts, std::uint64_t master_seed,
                                std::uint64_t stream_index = 0);

/// Mean sqrt(det rho_n) with standard error at each recorded step, estimated
/// over n_traj independent trajectories.
struct DecaySeries {
    std::vector<double> n;       // step index (or time, for continuous runs)
    std::vector<double> mean;    // empirical mean of sqrt(det rho)
    std::vector<double> stderr_; // standard error of the mean
};

DecaySeries sqrt_det_decay(const KrausPair& k, const BlochState& rho0, std::int64_t n_max,
                           std::int64_t n_traj, std::uint64_t master_seed,
                           std::int64_t record_stride = 1, unsigned n_threads = 1);

}  // namespace oqrw
