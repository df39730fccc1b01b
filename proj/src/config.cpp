#include "crab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "crab/error.hpp"

namespace crab {

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "crab") return StrategyKind::Crab;
    if (name == "besra") return StrategyKind::Besra;
    if (name == "random") return StrategyKind::Random;
    throw ConfigError("unknown strategy '" + name + "' (expected crab, besra or random)");
}

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Crab: return "crab";
        case StrategyKind::Besra: return "besra";
        case StrategyKind::Random: return "random";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long r = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

} // namespace

std::vector<long> parse_seed_list(const std::string& text) {
    std::vector<long> seeds;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string part = trim(text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!part.empty()) seeds.push_back(to_long("seeds", part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    return seeds;
}

void set_config_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    auto& sc = cfg.strategy_config;

    if (key == "data.path") cfg.data_path = value;
    else if (key == "data.synthetic") cfg.synthetic = to_bool(key, value);
    else if (key == "synth.instances") cfg.synth.instances = static_cast<std::size_t>(to_long(key, value));
    else if (key == "synth.labels") cfg.synth.labels = static_cast<int>(to_long(key, value));
    else if (key == "synth.feature_dim") cfg.synth.feature_dim = static_cast<std::size_t>(to_long(key, value));
    else if (key == "synth.factors") cfg.synth.factors = static_cast<int>(to_long(key, value));
    else if (key == "synth.max_rate") cfg.synth.max_rate = to_double(key, value);
    else if (key == "synth.imbalance") cfg.synth.imbalance = to_double(key, value);
    else if (key == "synth.noise") cfg.synth.noise = to_double(key, value);
    else if (key == "synth.target_ir") cfg.synth.target_mean_ir = to_double(key, value);
    else if (key == "synth.tolerance") cfg.synth.tolerance = to_double(key, value);
    else if (key == "synth.seed") cfg.synth.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "experiment.strategy") cfg.strategy = strategy_from_name(value);
    else if (key == "experiment.seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "experiment.out") cfg.out_dir = value;
    else if (key == "experiment.dump_correlation") cfg.dump_correlation = to_bool(key, value);
    else if (key == "pool.init_labeled") cfg.init_labeled = static_cast<std::size_t>(to_long(key, value));
    else if (key == "pool.validation") cfg.validation = static_cast<std::size_t>(to_long(key, value));
    else if (key == "scoring.alpha") sc.params = BetaParams(to_double(key, value), sc.params.beta);
    else if (key == "scoring.beta") sc.params = BetaParams(sc.params.alpha, to_double(key, value));
    else if (key == "scoring.gamma") sc.gamma = to_double(key, value);
    else if (key == "correlation.asym_z") sc.pair_policy.asym_z = to_double(key, value);
    else if (key == "correlation.excl_z") sc.pair_policy.excl_z = to_double(key, value);
    else if (key == "ensemble.size") sc.ensemble_size = static_cast<int>(to_long(key, value));
    else if (key == "classifier.lr") sc.classifier.lr = to_double(key, value);
    else if (key == "classifier.epochs") sc.classifier.epochs = static_cast<int>(to_long(key, value));
    else if (key == "classifier.l2") sc.classifier.l2 = to_double(key, value);
    else if (key == "classifier.batch") sc.classifier.batch = static_cast<int>(to_long(key, value));
    else if (key == "budget.N") sc.budget.batch = static_cast<int>(to_long(key, value));
    else if (key == "budget.N_label") sc.budget.per_label = static_cast<int>(to_long(key, value));
    else if (key == "budget.Z0") sc.budget.hard_initial = static_cast<int>(to_long(key, value));
    else if (key == "budget.T") sc.budget.iterations = static_cast<int>(to_long(key, value));
    else if (key == "budget.decay") sc.budget.decay = decay_from_name(value);
    else if (key == "budget.decay_power") sc.budget.decay_power = to_double(key, value);
    else if (key == "strategy.anchors") sc.anchors = static_cast<int>(to_long(key, value));
    else if (key == "strategy.attention") sc.attention = to_bool(key, value);
    else if (key == "strategy.refinement") sc.refinement = to_bool(key, value);
    else if (key == "strategy.joint_labels") sc.joint_labels = to_bool(key, value);
    else if (key == "strategy.pool_subsample") sc.pool_subsample = static_cast<std::size_t>(to_long(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty config key", line_no);
        try {
            set_config_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
    if (!cfg.synthetic) {
        if (cfg.data_path.empty())
            throw ConfigError("data.path is required unless data.synthetic = true");
        std::ifstream probe(cfg.data_path);
        if (!probe) throw ConfigError("data.path '" + cfg.data_path + "' is not readable");
    }
    const auto& sc = cfg.strategy_config;
    if (sc.budget.batch < 1) throw ConfigError("budget.N must be >= 1");
    if (sc.budget.iterations < 1) throw ConfigError("budget.T must be >= 1");
    if (sc.budget.per_label < 0) throw ConfigError("budget.N_label must be >= 0");
    if (sc.budget.hard_initial < 0) throw ConfigError("budget.Z0 must be >= 0");
    if (!(sc.budget.decay_power > 0.0)) throw ConfigError("budget.decay_power must be > 0");
    if (sc.anchors < 1) throw ConfigError("strategy.anchors must be >= 1");
    if (sc.ensemble_size < 1) throw ConfigError("ensemble.size must be >= 1");
    if (!(sc.gamma > 0.0)) throw ConfigError("scoring.gamma must be > 0");
    if (cfg.init_labeled < 1) throw ConfigError("pool.init_labeled must be >= 1");
    if (cfg.out_dir.empty()) throw ConfigError("experiment.out must not be empty");
}

} // namespace crab
