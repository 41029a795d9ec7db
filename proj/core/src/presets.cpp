#include "oqrw/presets.hpp"

#include <cstdio>

namespace oqrw {

namespace {

ExperimentConfig uvrs_base(double u, double v, double r, double s) {
    ExperimentConfig c;
    c.mode = Mode::discrete;
    c.use_uvrs = true;
    c.u = u;
    c.v = v;
    c.r = r;
    c.s = s;
    c.rho0 = "pure-up";
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "toy"};
}

std::vector<std::pair<std::string, ExperimentConfig>> preset_configs(const std::string& name) {
    std::vector<std::pair<std::string, ExperimentConfig>> out;
    if (name == "fig1") {
        // seesaw trajectory in the trapping regime; the flip-time oracle
        // puts the mean reversal interval near 1.1e5 steps here
        ExperimentConfig c = uvrs_base(1.1, 1.00, 0.00015, -0.00015);
        c.n_steps = 600000;
        c.sampling_stride = 60;
        c.n_record_trajectories = 1;
        out.emplace_back("", c);
    } else if (name == "fig2") {
        // spreading p.d.f. with right-moving peak and one-flip plateau
        ExperimentConfig c = uvrs_base(1.1, 1.00, 0.0006, -0.0006);
        c.n_steps = 15000;
        c.n_trajectories = 10000;
        c.n_sample_times = 30;
        c.histogram_times = {2000.0, 6000.0, 15000.0};
        c.n_record_trajectories = 1;
        out.emplace_back("", c);
    } else if (name == "fig3") {
        // equal-time p.d.f.s at increasing a^2/omega0
        for (double u : {1.005, 1.05, 1.15}) {
            ExperimentConfig c = uvrs_base(u, 1.00, 0.0006, -0.0006);
            c.n_steps = 5000;
            c.n_trajectories = 10000;
            c.n_sample_times = 20;
            c.histogram_times = {5000.0};
            c.n_record_trajectories = 0;
            char buf[24];
            std::snprintf(buf, sizeof buf, "u%g", u);
            out.emplace_back(buf, c);
        }
    } else if (name == "fig4") {
        // oscillatory regime trajectory
        ExperimentConfig c = uvrs_base(1.005, 1.00, 0.00015, -0.00015);
        c.n_steps = 200000;
        c.sampling_stride = 20;
        c.n_record_trajectories = 1;
        out.emplace_back("", c);
    } else if (name == "fig5") {
        // potential profiles below, at and above the bi-stability threshold
        for (double a : {0.0, 1.0, 2.0}) {
            ExperimentConfig c;
            c.mode = Mode::sde;
            c.use_uvrs = false;
            c.a = a;
            c.omega0 = 1.0;
            c.epsilon = 1e-4;
            c.rho0 = "pure-up";
            c.t_max = 1.0;
            c.dt = 1e-3;
            c.n_trajectories = 0;
            c.n_record_trajectories = 0;
            char buf[24];
            std::snprintf(buf, sizeof buf, "a%g", a);
            out.emplace_back(buf, c);
        }
    } else if (name == "toy") {
        ExperimentConfig c;
        c.mode = Mode::toy;
        c.toy_t_max = 0.5;
        c.toy_n_runs = 1000000;
        c.toy_n_cells = 700;
        c.n_bins = 50;
        out.emplace_back("", c);
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return out;
}

}  // namespace oqrw
