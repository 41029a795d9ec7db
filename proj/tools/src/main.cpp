#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oqrw/config.hpp"
#include "oqrw/experiment.hpp"
#include "oqrw/presets.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw oqrw::IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CommonArgs {
    std::string config_file;
    std::string preset;
    std::string out;
    std::string in_dir;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool threads_set = false;
    bool dump_config = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_file, "config file (key = value sections)");
    sub->add_option("--preset", args.preset, "bundled preset name (fig1..fig5, toy)");
    sub->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    sub->add_option("--out", args.out, "output directory (default $OQRW_OUT_ROOT or .)");
    sub->add_option("--in", args.in_dir, "input directory (analyze mode)");
    sub->add_option("--threads", args.threads, "worker threads (0 = hardware)")
        ->each([&](const std::string&) { args.threads_set = true; });
    sub->add_option("--override", args.overrides, "section.key=value override")
        ->take_all();
    sub->add_flag("--dump-config", args.dump_config, "print the resolved config and exit");
}

int run_one(oqrw::ExperimentConfig cfg, const CommonArgs& args, oqrw::Mode mode,
            const std::string& subdir) {
    cfg.mode = mode;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads_set) cfg.threads = args.threads;
    if (!args.out.empty()) cfg.out_dir = args.out;
    if (!args.in_dir.empty()) cfg.in_dir = args.in_dir;
    if (!subdir.empty()) cfg.out_dir = (cfg.out_dir.empty() ? "." : cfg.out_dir) + "/" + subdir;
    for (const auto& ov : args.overrides) oqrw::apply_override(cfg, ov);
    if (args.dump_config) {
        std::cout << oqrw::serialize_config(cfg);
        return 0;
    }
    oqrw::validate(cfg);
    oqrw::RunOutputs out = oqrw::run_experiment(cfg);
    for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

int dispatch(oqrw::Mode mode, const CommonArgs& args) {
    try {
        if (!args.preset.empty()) {
            int rc = 0;
            for (auto& [subdir, cfg] : oqrw::preset_configs(args.preset)) {
                if (cfg.mode != mode && args.preset != "")
                    ; // presets carry their own mode; trust it
                rc = run_one(cfg, args, cfg.mode, subdir);
                if (rc != 0) return rc;
            }
            return rc;
        }
        oqrw::ExperimentConfig cfg;
        if (!args.config_file.empty()) cfg = oqrw::parse_config(slurp(args.config_file));
        return run_one(cfg, args, mode, "");
    } catch (const oqrw::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const oqrw::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const oqrw::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open quantum random walk simulation lab"};
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* help;
        oqrw::Mode mode;
    };
    const SubSpec specs[] = {
        {"discrete", "discrete Kraus-map walker runs and ensembles", oqrw::Mode::discrete},
        {"sde", "continuous-limit Bloch/position SDE ensembles", oqrw::Mode::sde},
        {"fp", "matrix-valued Fokker-Planck grid solves", oqrw::Mode::fp},
        {"toy", "telegraph toy model: exact sim, FP solve, flip expansion", oqrw::Mode::toy},
        {"analyze", "estimators over a prior run directory", oqrw::Mode::analyze},
    };

    CommonArgs args[5];
    oqrw::Mode chosen = oqrw::Mode::sde;
    const CommonArgs* chosen_args = nullptr;
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(specs[i].name, specs[i].help);
        add_common(sub, args[i]);
        sub->callback([&, i] {
            chosen = specs[i].mode;
            chosen_args = &args[i];
        });
    }

    CLI11_PARSE(app, argc, argv);
    if (!chosen_args) return 1;
    return dispatch(chosen, *chosen_args);
}
