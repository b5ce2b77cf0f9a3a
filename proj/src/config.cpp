#include "summgcn/config.hpp"

#include <fstream>
#include <type_traits>

#include "summgcn/errors.hpp"

namespace summgcn {

SummaryMethod parse_method(const std::string& name) {
    if (name == "attributes") return SummaryMethod::Attributes;
    if (name == "io") return SummaryMethod::IO;
    if (name == "incoming") return SummaryMethod::Incoming;
    if (name == "bisim") return SummaryMethod::Bisim;
    throw ConfigError("unknown summary method '" + name + "' (attributes/io/incoming/bisim)");
}

std::string method_name(SummaryMethod m) {
    switch (m) {
        case SummaryMethod::Attributes: return "attributes";
        case SummaryMethod::IO: return "io";
        case SummaryMethod::Incoming: return "incoming";
        case SummaryMethod::Bisim: return "bisim";
    }
    return "attributes";
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "' expects a boolean, got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return static_cast<T>(std::stod(value));
        } else {
            return static_cast<T>(std::stoull(value));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
    }
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dataset") {
        cfg.dataset = value;
    } else if (key == "summary_method") {
        cfg.method = parse_method(value);
    } else if (key == "bisim_k") {
        cfg.bisim_k = parse_number<unsigned>(key, value);
    } else if (key == "drop_literals") {
        cfg.drop_literals = parse_bool(key, value);
    } else if (key == "epochs") {
        cfg.epochs = parse_number<unsigned>(key, value);
    } else if (key == "folds") {
        cfg.folds = parse_number<unsigned>(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "freeze") {
        cfg.freeze = parse_freeze(value);
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "per_fold_summary") {
        cfg.per_fold_summary = parse_bool(key, value);
    } else if (key == "hidden") {
        cfg.hidden = parse_number<std::size_t>(key, value);
    } else if (key == "learning_rate") {
        cfg.lr = parse_number<double>(key, value);
    } else if (key == "weight_decay") {
        cfg.weight_decay = parse_number<double>(key, value);
    } else if (key == "timings") {
        cfg.timings = parse_bool(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::validate() const {
    if (dataset.empty()) throw ConfigError("no dataset configured");
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (hidden == 0) throw ConfigError("hidden width must be positive");
    if (lr <= 0) throw ConfigError("learning rate must be positive");
    if (weight_decay < 0) throw ConfigError("weight decay must be non-negative");
    if (out_dir.empty()) throw ConfigError("output directory must be set");
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    ExperimentConfig cfg;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trimmed(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_number) + " is not key = value");
        std::string key = trimmed(t.substr(0, eq));
        std::string value = trimmed(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_number) + " has an empty key");
        apply_config_kv(cfg, key, value);
    }
    return cfg;
}

}  // namespace summgcn
