#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oqrw/bloch.hpp"
#include "oqrw/errors.hpp"
#include "oqrw/kraus.hpp"

namespace oqrw {

enum class Mode { discrete, sde, fp, toy, analyze };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Declarative experiment description. Parsed from / serialized to an INI
/// style "key = value" text with one section per concern; command-line
/// overrides address entries as "section.key=value".
struct ExperimentConfig {
    // [run]
    Mode mode = Mode::sde;
    std::uint64_t seed = 42;
    std::string out_dir;  // empty -> $OQRW_OUT_ROOT or "."
    unsigned threads = 0;  // 0 -> hardware concurrency
    std::int64_t n_record_trajectories = 3;

    // [model] — exactly one parametrization is active
    bool use_uvrs = false;
    double u = 1.0, v = 1.0, r = 0.0, s = 0.0;
    double a = 1.0, omega0 = 1.0, epsilon = 1e-4;
    std::string rho0 = "maximally-mixed";  // maximally-mixed | pure-up | pure-down | q:q1,q2,q3

    // [discrete]
    std::int64_t n_steps = 10000;

    // [sde]
    double t_max = 10.0;
    double dt = 1e-3;

    // ensembles (shared by discrete and sde)
    std::int64_t n_trajectories = 0;  // 0 -> single recorded trajectory only
    std::int64_t n_sample_times = 50;
    std::int64_t sampling_stride = 0;
    std::vector<double> histogram_times;

    // [fp]
    double fp_x_min = 0.0, fp_x_max = 0.0;  // both 0 -> auto-sized domain
    std::int64_t fp_n_cells = 0;            // 0 -> from fp_dx
    double fp_dt = 0.0;                     // 0 -> stability-bound default
    double fp_dx = 0.02;
    double fp_init_width = 0.0;  // 0 -> 3*dx
    std::vector<double> fp_snapshots{1.0};

    // [toy]
    double toy_t_max = 0.5;
    std::int64_t toy_n_runs = 100000;
    std::int64_t toy_n_cells = 700;

    // [estimators]
    double flip_hysteresis = 0.8;
    double deff_window_frac = 0.5;
    std::int64_t n_bins = 81;
    std::int64_t n_bootstrap = 200;

    // [analyze]
    std::string in_dir;

    BlochState rho0_state() const;
    KrausPair kraus() const;
    ScalingParams scaling() const;
    double a2_over_omega0() const;
};

/// Parses the INI text; unknown sections/keys and malformed values raise
/// ConfigError naming the offending entry.
ExperimentConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Applies one "section.key=value" override.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Cross-field validation of module preconditions; throws ConfigError with
/// the offending field name.
void validate(const ExperimentConfig& cfg);

}  // namespace oqrw
