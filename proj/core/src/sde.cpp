#include "oqrw/sde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oqrw {

namespace {

// log(cosh y) without overflow.
double log_cosh(double y) {
    double ay = std::abs(y);
    return ay - std::log(2.0) + std::log1p(std::exp(-2.0 * ay));
}

double wrap_angle(double theta) {
    // to (-pi, pi]
    constexpr double two_pi = 6.283185307179586476925286766559;
    double w = std::remainder(theta, two_pi);
    if (w <= -3.141592653589793238462643383280) w += two_pi;
    return w;
}

}  // namespace

PotentialValue potential(const PotentialSpec& spec, double y) {
    double s = spec.sector >= 0 ? 1.0 : -1.0;
    PotentialValue out;
    out.v = -2.0 * (s * spec.omega0 * std::sinh(y) + 2.0 * spec.a * spec.a * log_cosh(y));
    out.dv = -2.0 * (s * spec.omega0 * std::cosh(y) + 2.0 * spec.a * spec.a * std::tanh(y));
    return out;
}

namespace {

// g(y) := omega0 cosh y + 2 a^2 tanh y on the upper sector; V' = -2 g.
double gfun(double y, double a, double w0) {
    return w0 * std::cosh(y) + 2.0 * a * a * std::tanh(y);
}
double gfun_prime(double y, double a, double w0) {
    double c = std::cosh(y);
    return w0 * std::sinh(y) + 2.0 * a * a / (c * c);
}

double bisect(double lo, double hi, double flo, const std::function<double(double)>& f,
              double tol) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PotentialExtrema potential_extrema(const PotentialSpec& spec) {
    if (!(spec.a >= 0.0)) throw std::invalid_argument("potential_extrema: a must be >= 0");
    if (!(spec.omega0 > 0.0)) throw std::invalid_argument("potential_extrema: omega0 must be > 0");
    PotentialExtrema out;
    double a = spec.a, w0 = spec.omega0;
    if (a == 0.0) return out;  // V = -2 w0 sinh y, monotone

    // Work in the upper sector (g has its structure on y < 0), mirror after.
    // g(0) = w0 > 0, g'(0) = 2a^2 > 0, g' -> -inf as y -> -inf: locate the
    // minimum of g at the unique zero of g', then test its sign.
    double lo = -1.0;
    while (gfun_prime(lo, a, w0) > 0.0 && lo > -100.0) lo *= 2.0;
    double y_g = bisect(lo, 0.0, gfun_prime(lo, a, w0),
                        [&](double y) { return gfun_prime(y, a, w0); }, 1e-12);
    double g_min = gfun(y_g, a, w0);
    double scale = w0 * std::cosh(y_g) + 2.0 * a * a;
    if (!(g_min < -1e-12 * scale)) return out;  // a^2 <= omega0: no barrier

    // Two roots of g bracket the g-minimum.
    double lo2 = y_g - 1.0;
    while (gfun(lo2, a, w0) < 0.0 && lo2 > -200.0) lo2 -= 1.0;
    double y_upper_min = bisect(lo2, y_g, gfun(lo2, a, w0),
                                [&](double y) { return gfun(y, a, w0); }, 1e-10);
    double y_upper_max = bisect(y_g, 0.0, g_min,
                                [&](double y) { return gfun(y, a, w0); }, 1e-10);

    out.has_extrema = true;
    double sgn = spec.sector >= 0 ? 1.0 : -1.0;
    // Lower sector mirrors y -> -y with the same potential values.
    out.y_min = sgn * y_upper_min;
    out.y_max = sgn * y_upper_max;
    PotentialSpec upper{a, w0, +1};
    out.v_min = potential(upper, y_upper_min).v;
    out.v_max = potential(upper, y_upper_max).v;
    out.delta_v = out.v_max - out.v_min;
    return out;
}

FlipDetector::FlipDetector(double hysteresis) : h_(hysteresis) {
    if (!(hysteresis > 0.0 && hysteresis < 1.0))
        throw std::invalid_argument("FlipDetector: hysteresis must be in (0, 1)");
}

void FlipDetector::observe(double t, double q3) {
    if (q3 >= h_) {
        if (side_ == -1) {
            record_.times.push_back(t);
            record_.directions.push_back(+1);
        }
        side_ = +1;
    } else if (q3 <= -h_) {
        if (side_ == +1) {
            record_.times.push_back(t);
            record_.directions.push_back(-1);
        }
        side_ = -1;
    }
}

FlipRecord flip_detector(std::span<const double> times, std::span<const double> q3,
                         double hysteresis) {
    if (times.size() != q3.size())
        throw std::invalid_argument("flip_detector: series length mismatch");
    FlipDetector det(hysteresis);
    for (std::size_t i = 0; i < times.size(); ++i) det.observe(times[i], q3[i]);
    return det.take();
}

ContinuousWalkerState bloch_sde_step(const ContinuousWalkerState& state, double a, double omega0,
                                     double dt, double dB, const SdeStepOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("bloch_sde_step: dt must be > 0");
    const BlochState& q = state.rho;
    ContinuousWalkerState next;
    next.rho.trace = q.trace;
    next.rho.q3 = q.q3 + 2.0 * omega0 * q.q1 * dt + 2.0 * a * (1.0 - q.q3 * q.q3) * dB;
    if (opts.milstein_q3)
        next.rho.q3 -= 4.0 * a * a * q.q3 * (1.0 - q.q3 * q.q3) * (dB * dB - dt);
    next.rho.q1 = q.q1 - 2.0 * (omega0 * q.q3 + a * a * q.q1) * dt - 2.0 * a * q.q1 * q.q3 * dB;
    next.rho.q2 = q.q2 - 2.0 * a * a * q.q2 * dt - 2.0 * a * q.q2 * q.q3 * dB;
    next.x = state.x + 2.0 * a * q.q3 * dt + dB;
    next.t = state.t + dt;

    double n2 = next.rho.norm_sq();
    if (n2 > 1.0) {
        double n = std::sqrt(n2);
        if (n > 1.0 + opts.blow_up_tol)
            throw NumericalError("bloch_sde_step: state blow-up (step too large)");
        double inv = 1.0 / n;
        next.rho.q1 *= inv;
        next.rho.q2 *= inv;
        next.rho.q3 *= inv;
    }
    return next;
}

AngleState theta_sde_step(const AngleState& state, double a, double omega0, double dt, double dB) {
    double th = state.theta;
    double s = std::sin(th), c = std::cos(th);
    double next = th - 2.0 * (omega0 + a * a * s * c) * dt - 2.0 * a * s * dB;
    return {wrap_angle(next), state.t + dt};
}

double y_sde_step(double y, const PotentialSpec& spec, double dt, double dB) {
    double next = y - potential(spec, y).dv * dt + 2.0 * spec.a * dB;
    return std::clamp(next, -50.0, 50.0);
}

ContinuousRunResult simulate_continuous(const ScalingParams& p, const BlochState& rho0, double x0,
                                        const ContinuousRunOptions& opts,
                                        std::uint64_t master_seed, std::uint64_t stream_index) {
    if (!(opts.t_max > 0.0) || !(opts.dt > 0.0))
        throw std::invalid_argument("simulate_continuous: t_max and dt must be > 0");
    const std::int64_t n_steps = static_cast<std::int64_t>(std::llround(opts.t_max / opts.dt));
    std::int64_t stride = opts.sampling_stride;
    if (stride <= 0) stride = std::max<std::int64_t>(1, n_steps / 10000);

    RngStream rng = seed_stream(master_seed, stream_index);
    ContinuousWalkerState state{rho0, x0, 0.0};
    FlipDetector flips(opts.flip_hysteresis);
    flips.observe(0.0, state.rho.q3);

    ContinuousRunResult out;
    out.trajectory.master_seed = master_seed;
    out.trajectory.stream_index = stream_index;
    out.trajectory.t_or_n.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
    out.trajectory.append(0.0, x0, rho0);

    const double sqrt_dt = std::sqrt(opts.dt);
    for (std::int64_t k = 1; k <= n_steps; ++k) {
        double dB = rng.normal() * sqrt_dt;
        state = bloch_sde_step(state, p.a, p.omega0, opts.dt, dB, opts.step);
        flips.observe(state.t, state.rho.q3);
        if (k % stride == 0 || k == n_steps) {
            out.trajectory.append(state.t, state.x, state.rho);
        }
    }
    out.flips = flips.take();
    out.final_state = state;
    return out;
}

}  // namespace oqrw
