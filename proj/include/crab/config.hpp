#ifndef CRAB_CONFIG_HPP
#define CRAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crab/strategy.hpp"

namespace crab {

enum class StrategyKind { Crab, Besra, Random };

StrategyKind strategy_from_name(const std::string& name);
const char* strategy_name(StrategyKind kind);

// Generative parameters for the self-contained synthetic path. Labels are
// driven by latent factors so the label space carries real co-occurrence
// structure; per-label base rates decay geometrically to create imbalance.
struct SyntheticGenConfig {
    std::size_t instances = 2000;
    int labels = 10;
    std::size_t feature_dim = 64;
    int factors = 3;
    double max_rate = 0.35;       // base rate of the most frequent label
    double imbalance = 20.0;      // most-frequent / least-frequent rate ratio
    double noise = 0.3;           // feature noise scale
    double target_mean_ir = 0.0;  // 0 = keep the raw generated imbalance
    double tolerance = 1.0;
    std::uint64_t seed = 1;
};

// Full experiment description: where the data comes from, which strategy
// runs, how pools are split, and every knob the strategy stack reads.
struct ExperimentConfig {
    std::string data_path;          // empty when synthetic
    bool synthetic = false;
    SyntheticGenConfig synth;

    StrategyKind strategy = StrategyKind::Crab;
    std::vector<long> seeds{1, 2, 3, 4, 5};
    std::size_t init_labeled = 100;
    std::size_t validation = 1000;

    StrategyConfig strategy_config;

    std::string out_dir = "out";
    bool dump_correlation = false;
};

// Flat "key = value" text format with '#' comments. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Apply a single dotted-key override (the CLI route into the same parser).
void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Everything that must hold before a run starts: at least one seed, a
// recognized strategy, resolvable data path, positive sizes.
void validate_config(const ExperimentConfig& cfg);

std::vector<long> parse_seed_list(const std::string& text);

} // namespace crab

#endif
