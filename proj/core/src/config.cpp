#include "oqrw/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace oqrw {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::discrete: return "discrete";
        case Mode::sde: return "sde";
        case Mode::fp: return "fp";
        case Mode::toy: return "toy";
        case Mode::analyze: return "analyze";
    }
    return "sde";
}

Mode mode_from_string(const std::string& s) {
    if (s == "discrete") return Mode::discrete;
    if (s == "sde") return Mode::sde;
    if (s == "fp") return Mode::fp;
    if (s == "toy") return Mode::toy;
    if (s == "analyze") return Mode::analyze;
    throw ConfigError("run.mode: unknown mode '" + s + "'");
}

BlochState ExperimentConfig::rho0_state() const {
    if (rho0 == "maximally-mixed") return BlochState::maximally_mixed();
    if (rho0 == "pure-up") return BlochState::pure_up();
    if (rho0 == "pure-down") return BlochState::pure_down();
    if (rho0.rfind("q:", 0) == 0) {
        BlochState st;
        if (std::sscanf(rho0.c_str(), "q:%lf,%lf,%lf", &st.q1, &st.q2, &st.q3) != 3)
            throw ConfigError("model.rho0: expected q:q1,q2,q3");
        if (!st.positivity_ok())
            throw ConfigError("model.rho0: Bloch vector outside the unit ball");
        return st;
    }
    throw ConfigError("model.rho0: unknown state spec '" + rho0 + "'");
}

KrausPair ExperimentConfig::kraus() const {
    if (use_uvrs) return kraus_from_uvrs({u, v, r, s});
    return kraus_from_scaling(scaling());
}

ScalingParams ExperimentConfig::scaling() const {
    if (use_uvrs)
        throw ConfigError("model.parametrization: this mode needs the scaling form (a, omega0, epsilon)");
    return {a, omega0, epsilon};
}

double ExperimentConfig::a2_over_omega0() const {
    if (use_uvrs) {
        // per-step map: sqrt(eps)*a = (u-v)/(u+v), eps*omega0 = sqrt(2)|r|/delta
        double se_a = (u - v) / (u + v);
        double d = std::sqrt(u * u + v * v + r * r + s * s);
        double e_w = std::sqrt(2.0) * std::abs(r) / d;
        return e_w > 0.0 ? se_a * se_a / e_w : std::numeric_limits<double>::infinity();
    }
    return omega0 != 0.0 ? a * a / omega0 : std::numeric_limits<double>::infinity();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": not a number: '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": not an integer: '" + v + "'");
    }
}

std::uint64_t parse_uint(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": not a non-negative integer: '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& field, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(field, trim(tok)));
    return out;
}

std::string list_to_string(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
        if (i) out += ",";
        out += buf;
    }
    return out;
}

void set_field(ExperimentConfig& c, const std::string& sec, const std::string& key,
               const std::string& val) {
    const std::string field = sec + "." + key;
    if (sec == "run") {
        if (key == "mode") c.mode = mode_from_string(val);
        else if (key == "seed") c.seed = parse_uint(field, val);
        else if (key == "out_dir") c.out_dir = val;
        else if (key == "threads") c.threads = static_cast<unsigned>(parse_uint(field, val));
        else if (key == "n_record_trajectories") c.n_record_trajectories = parse_int(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "model") {
        if (key == "parametrization") {
            if (val == "uvrs") c.use_uvrs = true;
            else if (val == "scaling") c.use_uvrs = false;
            else throw ConfigError(field + ": expected 'uvrs' or 'scaling'");
        }
        else if (key == "u") c.u = parse_double(field, val);
        else if (key == "v") c.v = parse_double(field, val);
        else if (key == "r") c.r = parse_double(field, val);
        else if (key == "s") c.s = parse_double(field, val);
        else if (key == "a") c.a = parse_double(field, val);
        else if (key == "omega0") c.omega0 = parse_double(field, val);
        else if (key == "epsilon") c.epsilon = parse_double(field, val);
        else if (key == "rho0") c.rho0 = val;
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "discrete") {
        if (key == "n_steps") c.n_steps = parse_int(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "sde") {
        if (key == "t_max") c.t_max = parse_double(field, val);
        else if (key == "dt") c.dt = parse_double(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "ensemble") {
        if (key == "n_trajectories") c.n_trajectories = parse_int(field, val);
        else if (key == "n_sample_times") c.n_sample_times = parse_int(field, val);
        else if (key == "sampling_stride") c.sampling_stride = parse_int(field, val);
        else if (key == "histogram_times") c.histogram_times = parse_list(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "fp") {
        if (key == "x_min") c.fp_x_min = parse_double(field, val);
        else if (key == "x_max") c.fp_x_max = parse_double(field, val);
        else if (key == "n_cells") c.fp_n_cells = parse_int(field, val);
        else if (key == "dt_pde") c.fp_dt = parse_double(field, val);
        else if (key == "dx") c.fp_dx = parse_double(field, val);
        else if (key == "init_width") c.fp_init_width = parse_double(field, val);
        else if (key == "snapshot_times") c.fp_snapshots = parse_list(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "toy") {
        if (key == "t_max") c.toy_t_max = parse_double(field, val);
        else if (key == "n_runs") c.toy_n_runs = parse_int(field, val);
        else if (key == "n_cells") c.toy_n_cells = parse_int(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "estimators") {
        if (key == "flip_hysteresis") c.flip_hysteresis = parse_double(field, val);
        else if (key == "deff_window_frac") c.deff_window_frac = parse_double(field, val);
        else if (key == "n_bins") c.n_bins = parse_int(field, val);
        else if (key == "n_bootstrap") c.n_bootstrap = parse_int(field, val);
        else throw ConfigError(field + ": unknown key");
    } else if (sec == "analyze") {
        if (key == "in_dir") c.in_dir = val;
        else throw ConfigError(field + ": unknown key");
    } else {
        throw ConfigError(sec + ": unknown section");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        set_field(cfg, section, key, val);
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    char buf[48];
    auto d = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    o << "[run]\n";
    o << "mode = " << to_string(c.mode) << "\n";
    o << "seed = " << c.seed << "\n";
    o << "out_dir = " << c.out_dir << "\n";
    o << "threads = " << c.threads << "\n";
    o << "n_record_trajectories = " << c.n_record_trajectories << "\n";
    o << "\n[model]\n";
    o << "parametrization = " << (c.use_uvrs ? "uvrs" : "scaling") << "\n";
    if (c.use_uvrs) {
        o << "u = " << d(c.u) << "\nv = " << d(c.v) << "\nr = " << d(c.r) << "\ns = " << d(c.s)
          << "\n";
    } else {
        o << "a = " << d(c.a) << "\nomega0 = " << d(c.omega0) << "\nepsilon = " << d(c.epsilon)
          << "\n";
    }
    o << "rho0 = " << c.rho0 << "\n";
    o << "\n[discrete]\n";
    o << "n_steps = " << c.n_steps << "\n";
    o << "\n[sde]\n";
    o << "t_max = " << d(c.t_max) << "\ndt = " << d(c.dt) << "\n";
    o << "\n[ensemble]\n";
    o << "n_trajectories = " << c.n_trajectories << "\n";
    o << "n_sample_times = " << c.n_sample_times << "\n";
    o << "sampling_stride = " << c.sampling_stride << "\n";
    o << "histogram_times = " << list_to_string(c.histogram_times) << "\n";
    o << "\n[fp]\n";
    o << "x_min = " << d(c.fp_x_min) << "\nx_max = " << d(c.fp_x_max) << "\n";
    o << "n_cells = " << c.fp_n_cells << "\ndt_pde = " << d(c.fp_dt) << "\ndx = " << d(c.fp_dx)
      << "\n";
    o << "init_width = " << d(c.fp_init_width) << "\n";
    o << "snapshot_times = " << list_to_string(c.fp_snapshots) << "\n";
    o << "\n[toy]\n";
    o << "t_max = " << d(c.toy_t_max) << "\nn_runs = " << c.toy_n_runs << "\nn_cells = "
      << c.toy_n_cells << "\n";
    o << "\n[estimators]\n";
    o << "flip_hysteresis = " << d(c.flip_hysteresis) << "\n";
    o << "deff_window_frac = " << d(c.deff_window_frac) << "\n";
    o << "n_bins = " << c.n_bins << "\nn_bootstrap = " << c.n_bootstrap << "\n";
    o << "\n[analyze]\n";
    o << "in_dir = " << c.in_dir << "\n";
    return o.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    std::string path = trim(assignment.substr(0, eq));
    std::string val = trim(assignment.substr(eq + 1));
    std::size_t dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + assignment + "': key must be section.key");
    set_field(cfg, path.substr(0, dot), path.substr(dot + 1), val);
}

void validate(const ExperimentConfig& c) {
    if (c.use_uvrs) {
        if (!(c.u * c.u + c.v * c.v + c.r * c.r + c.s * c.s > 0.0))
            throw ConfigError("model.u/v/r/s: parameters must not all be zero");
    } else {
        if (!(c.epsilon > 0.0)) throw ConfigError("model.epsilon: must be > 0");
        if (!std::isfinite(c.a) || !std::isfinite(c.omega0))
            throw ConfigError("model.a/omega0: must be finite");
    }
    c.rho0_state();  // throws on malformed spec
    if (!(c.flip_hysteresis > 0.0 && c.flip_hysteresis < 1.0))
        throw ConfigError("estimators.flip_hysteresis: must be in (0, 1)");
    if (c.n_bins < 2) throw ConfigError("estimators.n_bins: must be >= 2");
    if (!(c.deff_window_frac > 0.0 && c.deff_window_frac < 1.0))
        throw ConfigError("estimators.deff_window_frac: must be in (0, 1)");
    switch (c.mode) {
        case Mode::discrete:
            if (c.n_steps < 1) throw ConfigError("discrete.n_steps: must be >= 1");
            break;
        case Mode::sde:
            if (c.use_uvrs)
                throw ConfigError("model.parametrization: sde mode requires the scaling form");
            if (!(c.t_max > 0.0)) throw ConfigError("sde.t_max: must be > 0");
            if (!(c.dt > 0.0) || c.dt > c.t_max) throw ConfigError("sde.dt: must be in (0, t_max]");
            break;
        case Mode::fp: {
            if (c.use_uvrs)
                throw ConfigError("model.parametrization: fp mode requires the scaling form");
            if (!(c.fp_dx > 0.0) && c.fp_n_cells == 0)
                throw ConfigError("fp.dx: must be > 0 when n_cells is not given");
            if (c.fp_snapshots.empty()) throw ConfigError("fp.snapshot_times: need at least one");
            for (double t : c.fp_snapshots)
                if (!(t >= 0.0)) throw ConfigError("fp.snapshot_times: times must be >= 0");
            break;
        }
        case Mode::toy:
            if (!(c.toy_t_max > 0.0)) throw ConfigError("toy.t_max: must be > 0");
            if (c.toy_n_runs < 1) throw ConfigError("toy.n_runs: must be >= 1");
            if (c.toy_n_cells < 16) throw ConfigError("toy.n_cells: must be >= 16");
            break;
        case Mode::analyze:
            if (c.in_dir.empty()) throw ConfigError("analyze.in_dir: required");
            break;
    }
    if (c.n_trajectories < 0) throw ConfigError("ensemble.n_trajectories: must be >= 0");
    if (c.n_sample_times < 2) throw ConfigError("ensemble.n_sample_times: must be >= 2");
}

}  // namespace oqrw
