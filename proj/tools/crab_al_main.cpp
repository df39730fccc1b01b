// crab-al: command-line front end for the CRAB active-learning engine.
// Talks to the engine exclusively through the C API in crab/crab.h.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "crab/crab.h"

namespace {

int report(crab_status status) {
    if (status == CRAB_OK) return 0;
    std::fprintf(stderr, "error (%s): %s\n", crab_status_name(status), crab_last_error());
    return static_cast<int>(status);
}

struct DatasetHandle {
    crab_dataset* ptr = nullptr;
    ~DatasetHandle() { crab_dataset_free(ptr); }
};

struct ConfigHandle {
    crab_config* ptr = nullptr;
    ~ConfigHandle() { crab_config_free(ptr); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CRAB multi-label active learning"};
    app.require_subcommand(1);

    // ---- run ----------------------------------------------------------
    auto* run = app.add_subcommand("run", "run an active-learning campaign");
    std::string run_config, run_strategy, run_seeds, run_out;
    bool run_dump = false;
    run->add_option("--config", run_config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--strategy", run_strategy, "crab|besra|random (overrides config)");
    run->add_option("--seeds", run_seeds, "comma-separated seeds (overrides config)");
    run->add_option("--out", run_out, "output directory (overrides config)");
    run->add_flag("--dump-correlation", run_dump, "dump A and NegA per iteration");

    // ---- synth --------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "build a synthetic imbalanced dataset");
    std::string synth_base, synth_out;
    double synth_target = 10.0, synth_tol = 0.5;
    std::uint64_t synth_seed = 1;
    std::size_t gen_instances = 2000, gen_dim = 64;
    int gen_labels = 10;
    synth->add_option("--base", synth_base, "base dataset to subsample")
        ->check(CLI::ExistingFile);
    synth->add_option("--target-ir", synth_target, "target MeanIR")->required();
    synth->add_option("--tol", synth_tol, "MeanIR tolerance (default 0.5)");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output dataset path")->required();
    synth->add_option("--gen-instances", gen_instances,
                      "instances when generating (no --base)");
    synth->add_option("--gen-labels", gen_labels, "label-space size when generating");
    synth->add_option("--gen-dim", gen_dim, "feature dimension when generating");

    // ---- plot ---------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "render figures from campaign CSV output");
    std::string plot_in, plot_out;
    plot->add_option("--in", plot_in, "directory holding results CSVs")->required();
    plot->add_option("--out", plot_out, "figure output directory (default: --in)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ConfigHandle cfg;
        if (crab_status s = crab_config_load(run_config.c_str(), &cfg.ptr)) return report(s);
        if (!run_strategy.empty())
            if (crab_status s =
                    crab_config_set(cfg.ptr, "experiment.strategy", run_strategy.c_str()))
                return report(s);
        if (!run_seeds.empty())
            if (crab_status s =
                    crab_config_set(cfg.ptr, "experiment.seeds", run_seeds.c_str()))
                return report(s);
        if (!run_out.empty())
            if (crab_status s = crab_config_set(cfg.ptr, "experiment.out", run_out.c_str()))
                return report(s);
        if (run_dump)
            if (crab_status s =
                    crab_config_set(cfg.ptr, "experiment.dump_correlation", "true"))
                return report(s);
        return report(crab_run_experiment(cfg.ptr));
    }

    if (synth->parsed()) {
        DatasetHandle result;
        if (synth_base.empty()) {
            if (crab_status s = crab_synth_generate(gen_instances, gen_labels, gen_dim,
                                                    synth_target, synth_tol, synth_seed,
                                                    &result.ptr))
                return report(s);
        } else {
            DatasetHandle base;
            if (crab_status s = crab_dataset_load(synth_base.c_str(), &base.ptr))
                return report(s);
            if (crab_status s = crab_synth_subsample(base.ptr, synth_target, synth_tol,
                                                     synth_seed, &result.ptr))
                return report(s);
        }
        if (crab_status s = crab_dataset_save(result.ptr, synth_out.c_str()))
            return report(s);
        double achieved = 0.0;
        int warned = 0;
        if (crab_status s = crab_dataset_mean_ir(result.ptr, &achieved, &warned))
            return report(s);
        std::printf("wrote %zu instances (K=%d) to %s, MeanIR %.4g%s\n",
                    crab_dataset_size(result.ptr), crab_dataset_num_labels(result.ptr),
                    synth_out.c_str(), achieved, warned ? " (labels without support)" : "");
        return 0;
    }

    if (plot->parsed())
        return report(
            crab_emit_plots(plot_in.c_str(), plot_out.empty() ? nullptr : plot_out.c_str()));

    return 0;
}
