#include "oqrw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oqrw/csv.hpp"
#include "oqrw/ensemble.hpp"
#include "oqrw/fokker_planck.hpp"
#include "oqrw/telegraph.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace oqrw {

std::string version_string() { return "0.1.0"; }

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("checksum: cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 14];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (!f) break;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string resolve_out_dir(const ExperimentConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("OQRW_OUT_ROOT")) return env;
    return ".";
}

struct Paths {
    std::string dir;
    std::string tag;  // "_s<seed>"

    std::string at(const std::string& stem, const std::string& ext = ".csv") const {
        return dir + "/" + stem + tag + ext;
    }
};

/// Shared ensemble pass for discrete and sde modes: X samples on a common
/// grid, flips, and the sqrt-det decay curve, gathered in fixed chunks so
/// the reduction is thread-count independent.
struct EnsemblePass {
    EnsembleX xs;
    std::vector<std::pair<std::uint64_t, FlipRecord>> flips;
    DecaySeries decay;
    std::vector<double> flip_intervals;
};

template <typename SimulateOne>
EnsemblePass run_ensemble(std::int64_t n_traj, const std::vector<double>& sample_times,
                          unsigned threads, SimulateOne&& simulate) {
    const std::size_t n_t = sample_times.size();
    EnsemblePass out;
    out.xs.times = sample_times;
    out.xs.x.assign(static_cast<std::size_t>(n_traj), std::vector<double>(n_t, 0.0));
    std::vector<FlipRecord> flip_slots(static_cast<std::size_t>(n_traj));
    std::vector<std::vector<double>> sqrt_det(static_cast<std::size_t>(n_traj),
                                              std::vector<double>(n_t, 0.0));

    parallel_for_indexed(static_cast<std::size_t>(n_traj), threads, [&](std::size_t i) {
        simulate(i, out.xs.x[i], sqrt_det[i], flip_slots[i]);
    });

    out.decay.n = sample_times;
    out.decay.mean.assign(n_t, 0.0);
    out.decay.stderr_.assign(n_t, 0.0);
    for (std::size_t j = 0; j < n_t; ++j) {
        double s = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < n_traj; ++i) {
            double v = sqrt_det[static_cast<std::size_t>(i)][j];
            s += v;
            s2 += v * v;
        }
        double m = s / static_cast<double>(n_traj);
        out.decay.mean[j] = m;
        out.decay.stderr_[j] =
            std::sqrt(std::max(0.0, s2 / static_cast<double>(n_traj) - m * m) /
                      static_cast<double>(n_traj));
    }
    for (std::int64_t i = 0; i < n_traj; ++i) {
        auto& rec = flip_slots[static_cast<std::size_t>(i)];
        auto iv = rec.intervals();
        out.flip_intervals.insert(out.flip_intervals.end(), iv.begin(), iv.end());
        if (!rec.times.empty())
            out.flips.emplace_back(static_cast<std::uint64_t>(i), std::move(rec));
    }
    return out;
}

std::vector<double> even_sample_times(double t_max, std::int64_t n,
                                      const std::vector<double>& extra) {
    std::vector<double> ts;
    for (std::int64_t j = 1; j <= n; ++j)
        ts.push_back(t_max * static_cast<double>(j) / static_cast<double>(n));
    ts.insert(ts.end(), extra.begin(), extra.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             ts.end());
    while (!ts.empty() && ts.back() > t_max + 1e-12) ts.pop_back();
    return ts;
}

json summary_to_json(const EnsembleSummary& s) {
    json j;
    j["n_trajectories"] = s.n_trajectories;
    j["times"] = s.times;
    j["mean_x"] = s.mean_x;
    j["var_x"] = s.var_x;
    j["skew_x"] = s.skew_x;
    j["kurt_x"] = s.kurt_x;
    j["purification"] = {{"t_or_n", s.purification.n},
                         {"mean_sqrt_det", s.purification.mean},
                         {"stderr", s.purification.stderr_}};
    if (s.purification_rate) {
        j["purification_fit"] = {{"rate", s.purification_rate->rate},
                                 {"stderr", s.purification_rate->stderr_},
                                 {"sufficient_decay", s.purification_rate->sufficient_decay},
                                 {"points_used", s.purification_rate->points_used}};
    }
    j["n_flips"] = s.n_flips;
    if (s.n_flips > 0) {
        j["mean_flip_time"] = s.mean_flip_time;
        if (s.flip_intervals.size() >= 16) {
            double hi = *std::max_element(s.flip_intervals.begin(), s.flip_intervals.end());
            Histogram h = histogram(s.flip_intervals, 24, 0.0, hi * (1.0 + 1e-9));
            std::vector<double> centers(h.density.size());
            for (std::size_t b = 0; b < centers.size(); ++b) centers[b] = h.center(b);
            j["flip_time_histogram"] = {{"t", centers}, {"density", h.density},
                                        {"counts", h.counts}};
        }
    }
    if (s.d_eff) {
        j["d_eff"] = {{"estimate", s.d_eff->d_eff},
                      {"slope_stderr", s.d_eff->slope_stderr},
                      {"ci_lo", s.d_eff->ci.lo},
                      {"ci_hi", s.d_eff->ci.hi},
                      {"window_lo", s.d_eff->window_lo},
                      {"window_hi", s.d_eff->window_hi}};
    }
    j["d_eff_prediction"] = s.d_eff_prediction;
    if (s.mfpt_prediction) j["mfpt_oracle"] = *s.mfpt_prediction;
    return j;
}

void summarize_ensemble(const ExperimentConfig& cfg, const EnsemblePass& pass,
                        EnsembleSummary& summary) {
    summary.times = pass.xs.times;
    summary.n_trajectories = pass.xs.x.size();
    const std::size_t n_t = pass.xs.times.size();
    summary.mean_x.resize(n_t);
    summary.var_x.resize(n_t);
    summary.skew_x.resize(n_t);
    summary.kurt_x.resize(n_t);
    std::vector<double> col(pass.xs.x.size());
    for (std::size_t j = 0; j < n_t; ++j) {
        for (std::size_t i = 0; i < pass.xs.x.size(); ++i) col[i] = pass.xs.x[i][j];
        Moments m = moments(col);
        summary.mean_x[j] = m.mean;
        summary.var_x[j] = m.var;
        summary.skew_x[j] = m.skewness;
        summary.kurt_x[j] = m.excess_kurtosis;
    }
    summary.purification = pass.decay;
    summary.purification_rate = purification_fit(pass.decay);
    summary.flip_intervals = pass.flip_intervals;
    summary.n_flips = pass.flip_intervals.size();
    if (!pass.flip_intervals.empty()) {
        double s = 0.0;
        for (double v : pass.flip_intervals) s += v;
        summary.mean_flip_time = s / static_cast<double>(pass.flip_intervals.size());
    }
    // D_eff only when the requested window is admissible
    double t_lo = pass.xs.times.front() +
                  (1.0 - cfg.deff_window_frac) * (pass.xs.times.back() - pass.xs.times.front());
    bool window_ok = pass.xs.x.size() >= 8 && n_t >= 4;
    if (window_ok && summary.n_flips >= 10 &&
        pass.xs.times.back() - t_lo < 20.0 * summary.mean_flip_time)
        window_ok = false;
    if (window_ok) {
        summary.d_eff = estimate_deff(pass.xs, t_lo, pass.xs.times.back(), std::nullopt,
                                      static_cast<int>(cfg.n_bootstrap),
                                      cfg.seed ^ 0xd3ffULL);
    }
}

void write_histograms(const ExperimentConfig& cfg, const Paths& paths, const EnsemblePass& pass,
                      std::vector<std::string>& files) {
    for (double t : cfg.histogram_times) {
        std::size_t j = 0;
        double best = 1e300;
        for (std::size_t c = 0; c < pass.xs.times.size(); ++c) {
            double d = std::abs(pass.xs.times[c] - t);
            if (d < best) {
                best = d;
                j = c;
            }
        }
        std::vector<double> col(pass.xs.x.size());
        for (std::size_t i = 0; i < pass.xs.x.size(); ++i) col[i] = pass.xs.x[i][j];
        auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        double pad = 1e-9 * std::max(1.0, *hi_it - *lo_it);
        Histogram h = histogram(col, static_cast<std::size_t>(cfg.n_bins), *lo_it - pad,
                                *hi_it + pad);
        char stem[64];
        std::snprintf(stem, sizeof stem, "hist_t%g", pass.xs.times[j]);
        std::string path = paths.at(stem);
        write_histogram_csv(path, h);
        files.push_back(path);
    }
}

void run_discrete(const ExperimentConfig& cfg, const Paths& paths, RunOutputs& out) {
    KrausPair k = cfg.kraus();
    BlochState rho0 = cfg.rho0_state();

    std::int64_t n_rec = std::min<std::int64_t>(cfg.n_record_trajectories,
                                                std::max<std::int64_t>(cfg.n_trajectories, 1));
    for (std::int64_t i = 0; i < n_rec; ++i) {
        DiscreteRunOptions opts{cfg.n_steps, cfg.sampling_stride, false};
        TrajectoryRecord rec = run_trajectory(k, rho0, 0, opts, cfg.seed,
                                              static_cast<std::uint64_t>(i));
        char stem[32];
        std::snprintf(stem, sizeof stem, "traj_%03lld", static_cast<long long>(i));
        std::string path = paths.at(stem);
        write_trajectory_csv(path, rec);
        out.files.push_back(path);
    }

    if (cfg.n_trajectories > 0) {
        std::vector<double> sample_steps =
            even_sample_times(static_cast<double>(cfg.n_steps), cfg.n_sample_times,
                              cfg.histogram_times);
        std::vector<std::int64_t> steps;
        for (double t : sample_steps) steps.push_back(std::llround(t));

        EnsemblePass pass = run_ensemble(
            cfg.n_trajectories, sample_steps, cfg.threads,
            [&](std::size_t i, std::vector<double>& xrow, std::vector<double>& srow,
                FlipRecord& flips) {
                RngStream rng = seed_stream(cfg.seed, i);
                DiscreteWalkerState st{rho0, 0, 0};
                FlipDetector det(cfg.flip_hysteresis);
                det.observe(0.0, st.rho.q3);
                std::size_t si = 0;
                for (std::int64_t n = 1; n <= cfg.n_steps && si < steps.size(); ++n) {
                    st = step(st, k, rng);
                    det.observe(static_cast<double>(n), st.rho.q3);
                    if (n == steps[si]) {
                        xrow[si] = static_cast<double>(st.x);
                        srow[si] = st.rho.sqrt_det();
                        ++si;
                    }
                }
                flips = det.take();
            });

        write_xsamples_csv(paths.at("xsamples"), pass.xs);
        out.files.push_back(paths.at("xsamples"));
        write_flips_csv(paths.at("flips"), pass.flips);
        out.files.push_back(paths.at("flips"));
        write_decay_csv(paths.at("decay"), pass.decay);
        out.files.push_back(paths.at("decay"));
        write_histograms(cfg, paths, pass, out.files);
        summarize_ensemble(cfg, pass, out.summary);
        out.summary.d_eff_prediction = 0.0;  // lattice-units slope; no closed prediction used
    }
}

void run_sde(const ExperimentConfig& cfg, const Paths& paths, RunOutputs& out) {
    ScalingParams p = cfg.scaling();
    BlochState rho0 = cfg.rho0_state();

    std::int64_t n_rec = std::min<std::int64_t>(cfg.n_record_trajectories,
                                                std::max<std::int64_t>(cfg.n_trajectories, 1));
    ContinuousRunOptions ropts;
    ropts.t_max = cfg.t_max;
    ropts.dt = cfg.dt;
    ropts.sampling_stride = cfg.sampling_stride;
    ropts.flip_hysteresis = cfg.flip_hysteresis;
    for (std::int64_t i = 0; i < n_rec; ++i) {
        auto res = simulate_continuous(p, rho0, 0.0, ropts, cfg.seed,
                                       static_cast<std::uint64_t>(i));
        char stem[32];
        std::snprintf(stem, sizeof stem, "traj_%03lld", static_cast<long long>(i));
        std::string path = paths.at(stem);
        write_trajectory_csv(path, res.trajectory);
        out.files.push_back(path);
    }

    // potential profile (upper sector) for the configured couplings
    {
        std::string path = paths.at("potential");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + path);
        f << "y,V,Vprime\n";
        PotentialSpec spec{p.a, p.omega0, +1};
        for (int i = 0; i <= 800; ++i) {
            double y = -10.0 + 20.0 * i / 800.0;
            PotentialValue v = potential(spec, y);
            f << format_double(y) << ',' << format_double(v.v) << ',' << format_double(v.dv)
              << '\n';
        }
        out.files.push_back(path);
    }

    if (cfg.n_trajectories > 0) {
        std::vector<double> sample_times =
            even_sample_times(cfg.t_max, cfg.n_sample_times, cfg.histogram_times);
        const std::int64_t n_steps = std::llround(cfg.t_max / cfg.dt);
        std::vector<std::int64_t> sample_steps;
        for (double t : sample_times)
            sample_steps.push_back(std::min<std::int64_t>(n_steps, std::llround(t / cfg.dt)));

        EnsemblePass pass = run_ensemble(
            cfg.n_trajectories, sample_times, cfg.threads,
            [&](std::size_t i, std::vector<double>& xrow, std::vector<double>& srow,
                FlipRecord& flips) {
                RngStream rng = seed_stream(cfg.seed, i);
                ContinuousWalkerState st{rho0, 0.0, 0.0};
                FlipDetector det(cfg.flip_hysteresis);
                det.observe(0.0, st.rho.q3);
                const double sdt = std::sqrt(cfg.dt);
                std::size_t si = 0;
                for (std::int64_t k = 1; k <= n_steps && si < sample_steps.size(); ++k) {
                    double dB = rng.normal() * sdt;
                    st = bloch_sde_step(st, p.a, p.omega0, cfg.dt, dB);
                    det.observe(st.t, st.rho.q3);
                    while (si < sample_steps.size() && k == sample_steps[si]) {
                        xrow[si] = st.x;
                        srow[si] = st.rho.sqrt_det();
                        ++si;
                    }
                }
                flips = det.take();
            });

        write_xsamples_csv(paths.at("xsamples"), pass.xs);
        out.files.push_back(paths.at("xsamples"));
        write_flips_csv(paths.at("flips"), pass.flips);
        out.files.push_back(paths.at("flips"));
        write_decay_csv(paths.at("decay"), pass.decay);
        out.files.push_back(paths.at("decay"));
        write_histograms(cfg, paths, pass, out.files);
        summarize_ensemble(cfg, pass, out.summary);
        out.summary.d_eff_prediction =
            1.0 + 4.0 * std::pow(p.a, 4) / (p.omega0 * p.omega0);
        if (p.a * p.a > p.omega0) {
            MfptSpec ms;
            ms.a = p.a;
            ms.omega0 = p.omega0;
            out.summary.mfpt_prediction = mfpt_oracle(ms);
        }
    }
}

void run_fp(const ExperimentConfig& cfg, const Paths& paths, RunOutputs& out) {
    ScalingParams p = cfg.scaling();
    double t_end = *std::max_element(cfg.fp_snapshots.begin(), cfg.fp_snapshots.end());

    Grid1D grid;
    if (cfg.fp_x_min == 0.0 && cfg.fp_x_max == 0.0) {
        grid = auto_grid(p.a, t_end, cfg.fp_dx);
    } else {
        grid.x_min = cfg.fp_x_min;
        grid.x_max = cfg.fp_x_max;
        grid.n_cells = cfg.fp_n_cells > 0
                           ? static_cast<std::size_t>(cfg.fp_n_cells)
                           : static_cast<std::size_t>(
                                 std::ceil((grid.x_max - grid.x_min) / cfg.fp_dx));
        double h = grid.dx();
        grid.dt_pde = 0.5 * h * h;
        if (p.a > 0.0) grid.dt_pde = std::min(grid.dt_pde, h / (4.0 * p.a));
    }
    if (cfg.fp_dt > 0.0) grid.dt_pde = cfg.fp_dt;
    grid.validate(p.a);

    MatrixDensityField init = gaussian_packet(grid, 0.0, cfg.fp_init_width, cfg.rho0_state());
    auto snaps = fp_solve(std::move(init), p.a, p.omega0, cfg.fp_snapshots);
    for (const auto& snap : snaps) {
        char stem[64];
        std::snprintf(stem, sizeof stem, "field_t%g", snap.time);
        std::string path = paths.at(stem);
        write_field_csv(path, snap);
        out.files.push_back(path);
    }
}

void run_toy(const ExperimentConfig& cfg, const Paths& paths, RunOutputs& out) {
    const double t = cfg.toy_t_max;
    const double pad = std::max(0.05, 0.1 * t);
    const double lo = -t - pad, hi = t + pad;
    std::size_t n_bins = static_cast<std::size_t>(cfg.n_bins);
    std::size_t cells_per_bin = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.toy_n_cells) / n_bins);
    std::size_t n_cells = n_bins * cells_per_bin;

    // exact event-driven ensemble
    std::vector<double> endpoints(static_cast<std::size_t>(cfg.toy_n_runs));
    std::vector<unsigned char> no_flip(static_cast<std::size_t>(cfg.toy_n_runs));
    parallel_for_indexed(endpoints.size(), cfg.threads, [&](std::size_t i) {
        RngStream rng = seed_stream(cfg.seed, i);
        std::vector<double> flips;
        TelegraphState st = simulate_telegraph(t, rng, &flips);
        endpoints[i] = st.x;
        no_flip[i] = flips.empty() ? 1 : 0;
    });
    std::vector<double> continuous;
    continuous.reserve(endpoints.size());
    std::size_t zero_flip_count = 0;
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (no_flip[i]) {
            ++zero_flip_count;
        } else {
            continuous.push_back(endpoints[i]);
        }
    }
    double sim_dirac = static_cast<double>(zero_flip_count) /
                       static_cast<double>(endpoints.size());
    Histogram sim_h = histogram(continuous, n_bins, lo, hi);
    // density as fraction of ALL runs (Dirac mass is reported separately)
    double cont_frac = 1.0 - sim_dirac;
    for (auto& d : sim_h.density) d *= cont_frac;
    write_histogram_csv(paths.at("toy_sim"), sim_h, sim_dirac, t);
    out.files.push_back(paths.at("toy_sim"));

    // two-component FP solve on an aligned grid
    TelegraphGrid grid{lo, hi, n_cells, 0.0};
    TwoComponentField fp = telegraph_fp_solve(grid, t);
    Histogram fp_h = sim_h;
    auto marg = fp.marginal();
    for (std::size_t b = 0; b < n_bins; ++b) {
        double s = 0.0;
        for (std::size_t c = 0; c < cells_per_bin; ++c) s += marg[b * cells_per_bin + c];
        fp_h.density[b] = s / static_cast<double>(cells_per_bin);
    }
    write_histogram_csv(paths.at("toy_fp"), fp_h, fp.dirac_mass, fp.dirac_pos);
    out.files.push_back(paths.at("toy_fp"));

    // flip expansion, orders 0-2
    Histogram exp_h = sim_h;
    for (std::size_t b = 0; b < n_bins; ++b) {
        double x = exp_h.center(b);
        exp_h.density[b] = std::abs(x) <= t ? flip_expansion_pdf(x, t, 2).density : 0.0;
    }
    write_histogram_csv(paths.at("toy_expansion"), exp_h, std::exp(-t), t);
    out.files.push_back(paths.at("toy_expansion"));

    json cmp;
    cmp["t"] = t;
    cmp["n_runs"] = cfg.toy_n_runs;
    cmp["dirac_weight"] = {{"sim", sim_dirac},
                           {"fp", fp.dirac_mass},
                           {"expansion", std::exp(-t)}};
    cmp["l1"] = {{"sim_vs_fp", l1_distance(sim_h, fp_h)},
                 {"sim_vs_expansion", l1_distance(sim_h, exp_h)},
                 {"fp_vs_expansion", l1_distance(fp_h, exp_h)}};
    cmp["poisson_tail_bound"] = flip_expansion_tail_bound(t);
    std::string path = paths.at("toy_compare", ".json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << cmp.dump(2) << "\n";
    out.files.push_back(path);
}

void run_analyze(const ExperimentConfig& cfg, const Paths& paths, RunOutputs& out) {
    // locate the prior run's xsamples/flips files
    std::string xs_path, flips_path;
    for (const auto& entry : fs::directory_iterator(cfg.in_dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("xsamples_s", 0) == 0) xs_path = entry.path().string();
        if (name.rfind("flips_s", 0) == 0) flips_path = entry.path().string();
    }
    if (xs_path.empty()) throw IoError("analyze: no xsamples_s*.csv under " + cfg.in_dir);

    EnsemblePass pass;
    pass.xs = read_xsamples_csv(xs_path);
    if (!flips_path.empty()) {
        for (auto& [id, rec] : read_flips_csv(flips_path)) {
            auto iv = rec.intervals();
            pass.flip_intervals.insert(pass.flip_intervals.end(), iv.begin(), iv.end());
            pass.flips.emplace_back(id, std::move(rec));
        }
    }
    pass.decay.n = {};
    summarize_ensemble(cfg, pass, out.summary);
    out.summary.purification_rate.reset();
    if (!cfg.use_uvrs)
        out.summary.d_eff_prediction =
            1.0 + 4.0 * std::pow(cfg.a, 4) / (cfg.omega0 * cfg.omega0);
}

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    auto t_start = std::chrono::steady_clock::now();

    RunOutputs out;
    Paths paths;
    paths.dir = resolve_out_dir(cfg);
    paths.tag = "_s" + std::to_string(cfg.seed);
    std::error_code ec;
    fs::create_directories(paths.dir, ec);
    if (ec) throw IoError("cannot create output directory " + paths.dir);

    out.manifest_path = paths.at("manifest", ".json");

    json manifest;
    manifest["tool"] = "oqrw";
    manifest["version"] = version_string();
    manifest["status"] = "running";
    manifest["config"] = serialize_config(cfg);

    json derived;
    if (cfg.mode == Mode::discrete || cfg.mode == Mode::sde || cfg.mode == Mode::fp) {
        if (cfg.use_uvrs) {
            KrausParamsUVRS uv{cfg.u, cfg.v, cfg.r, cfg.s};
            derived["delta"] = uv.delta();
        }
        derived["c_purification"] = purification_constant(cfg.kraus());
        derived["a2_over_omega0"] = cfg.a2_over_omega0();
        if (!cfg.use_uvrs) {
            derived["deff_prediction"] =
                1.0 + 4.0 * std::pow(cfg.a, 4) / (cfg.omega0 * cfg.omega0);
            if (cfg.a * cfg.a > cfg.omega0) {
                MfptSpec ms;
                ms.a = cfg.a;
                ms.omega0 = cfg.omega0;
                derived["mfpt_oracle"] = mfpt_oracle(ms);
            }
        }
    }
    manifest["derived"] = derived;

    {
        std::ofstream f(out.manifest_path, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + out.manifest_path);
        f << manifest.dump(2) << "\n";
    }

    try {
        switch (cfg.mode) {
            case Mode::discrete: run_discrete(cfg, paths, out); break;
            case Mode::sde: run_sde(cfg, paths, out); break;
            case Mode::fp: run_fp(cfg, paths, out); break;
            case Mode::toy: run_toy(cfg, paths, out); break;
            case Mode::analyze: run_analyze(cfg, paths, out); break;
        }
        if (cfg.mode != Mode::fp && cfg.mode != Mode::toy &&
            (cfg.n_trajectories > 0 || cfg.mode == Mode::analyze)) {
            std::string spath = paths.at("summary", ".json");
            std::ofstream f(spath, std::ios::binary);
            if (!f) throw IoError("cannot open for writing: " + spath);
            f << summary_to_json(out.summary).dump(2) << "\n";
            out.files.push_back(spath);
        }
    } catch (...) {
        manifest["status"] = "incomplete";
        std::ofstream f(out.manifest_path, std::ios::binary);
        if (f) f << manifest.dump(2) << "\n";
        throw;
    }

    manifest["status"] = "complete";
    json checksums;
    for (const auto& file : out.files)
        checksums[fs::path(file).filename().string()] = hex64(fnv1a_file(file));
    manifest["outputs"] = checksums;
    auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              t_start);
    manifest["wall_ms"] = wall.count();
    {
        std::ofstream f(out.manifest_path, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + out.manifest_path);
        f << manifest.dump(2) << "\n";
    }
    out.files.push_back(out.manifest_path);
    return out;
}

}  // namespace oqrw
