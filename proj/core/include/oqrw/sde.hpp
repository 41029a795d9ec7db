#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oqrw/bloch.hpp"
#include "oqrw/discrete.hpp"
#include "oqrw/kraus.hpp"
#include "oqrw/rng.hpp"

namespace oqrw {

/// Continuous-limit walker: internal state plus real position, time in the
/// convention dx^2 = dt.
struct ContinuousWalkerState {
    BlochState rho;
    double x = 0.0;
    double t = 0.0;
};

struct AngleState {
    double theta = 0.0;  // wrapped to (-pi, pi]
    double t = 0.0;
};

/// Effective potential for y = -log|tan(theta/2)|:
///   V(y) = -2 (sector*omega0*sinh(y) + 2 a^2 log cosh(y)),
/// sector = +1 on the upper half circle, -1 on the lower.
struct PotentialSpec {
    double a = 1.0;
    double omega0 = 1.0;
    int sector = +1;
};

struct PotentialValue {
    double v;
    double dv;  // V'(y)
};

PotentialValue potential(const PotentialSpec& spec, double y);

/// Barrier structure of V. Exists strictly when a^2 > omega0; the marginal
/// case a^2 = omega0 classifies as "no extremum".
struct PotentialExtrema {
    bool has_extrema = false;
    double y_min = 0.0;
    double y_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    double delta_v = 0.0;
};

/// Bracketed root-finding on V' to 1e-10 in y.
PotentialExtrema potential_extrema(const PotentialSpec& spec);

/// Gyroscope flip events: times where q3 completed a hysteresis crossing.
/// direction +1 = ended above +h, -1 = ended below -h.
struct FlipRecord {
    std::vector<double> times;
    std::vector<std::int8_t> directions;

    std::size_t count() const { return times.size(); }

    /// Inter-flip intervals (consecutive diffs).
    std::vector<double> intervals() const {
        std::vector<double> out;
        if (times.size() < 2) return out;
        out.reserve(times.size() - 1);
        for (std::size_t i = 1; i < times.size(); ++i) out.push_back(times[i] - times[i - 1]);
        return out;
    }
};

/// Streaming hysteresis detector: a flip is recorded when q3 moves from
/// beyond one threshold to beyond the other; chatter inside (-h, h) is
/// ignored. The first threshold attainment only arms the detector.
class FlipDetector {
  public:
    explicit FlipDetector(double hysteresis = 0.8);

    void observe(double t, double q3);
    const FlipRecord& record() const { return record_; }
    FlipRecord take() { return std::move(record_); }

  private:
    double h_;
    int side_ = 0;  // last threshold reached: +1, -1, 0 = not armed yet
    FlipRecord record_;
};

/// Applies the detector to a sampled series.
FlipRecord flip_detector(std::span<const double> times, std::span<const double> q3,
                         double hysteresis = 0.8);

struct SdeStepOptions {
    /// Hard error threshold: |q| beyond 1 + blow_up_tol aborts the run.
    /// Radial projection handles statistical overshoot below it. At the
    /// recommended dt = 0.01 min(1/a^2, 1/omega0) a tangential kick is
    /// 0.2z with z standard normal, so the ball overshoot ~0.02 z^2 only
    /// reaches this threshold at ~7 sigma; genuine step-size divergence
    /// shoots far past it within a few steps.
    double blow_up_tol = 1.0;

    /// Adds the Milstein term -4 a^2 q3 (1-q3^2)(dB^2 - dt) to the q3
    /// update (single driving noise, so this is the full correction).
    bool milstein_q3 = false;
};

/// One Euler-Maruyama step of the coupled Bloch/position system
///   dq3 = 2 w0 q1 dt + 2a(1-q3^2) dB
///   dq1 = -2(w0 q3 + a^2 q1) dt - 2a q1 q3 dB
///   dq2 = -2 a^2 q2 dt - 2a q2 q3 dB
///   dX  = 2a q3 dt + dB
/// with the SAME increment dB feeding the state and the position.
ContinuousWalkerState bloch_sde_step(const ContinuousWalkerState& state, double a, double omega0,
                                     double dt, double dB, const SdeStepOptions& opts = {});

/// dtheta = -2(w0 + a^2 sin cos) dt - 2a sin(theta) dB, wrapped.
AngleState theta_sde_step(const AngleState& state, double a, double omega0, double dt, double dB);

/// dy = -V'(y) dt + 2a dB, clamped to |y| <= 50 (V grows exponentially; past
/// the clamp the trajectory is committed).
double y_sde_step(double y, const PotentialSpec& spec, double dt, double dB);

struct ContinuousRunOptions {
    double t_max = 10.0;
    double dt = 1e-3;
    std::int64_t sampling_stride = 0;  // in steps; 0 -> max(1, n_steps/10000)
    double flip_hysteresis = 0.8;
    SdeStepOptions step;
};

struct ContinuousRunResult {
    TrajectoryRecord trajectory;
    FlipRecord flips;
    ContinuousWalkerState final_state;
};

/// Integrates the Bloch system (valid for mixed states, unlike the angle
/// form), detecting flips at full step resolution. Deterministic given
/// (master_seed, stream_index).
ContinuousRunResult simulate_continuous(const ScalingParams& p, const BlochState& rho0, double x0,
                                        const ContinuousRunOptions& opts,
                                        std::uint64_t master_seed,
                                        std::uint64_t stream_index = 0);

}  // namespace oqrw
