#pragma once

#include <cstdint>
#include <string>

#include "summgcn/rgcn.hpp"

namespace summgcn {

enum class SummaryMethod { Attributes, IO, Incoming, Bisim };

SummaryMethod parse_method(const std::string& name);  // ConfigError on unknown names
std::string method_name(SummaryMethod m);

struct ExperimentConfig {
    std::string dataset;  // path to an N-Triples file
    SummaryMethod method = SummaryMethod::Attributes;
    unsigned bisim_k = 3;
    bool drop_literals = false;  // literal ablation: summary input only
    unsigned epochs = 51;
    unsigned folds = 5;
    std::uint64_t seed = 1;
    FreezePlan freeze;  // applied to the transfer model
    std::string out_dir = "out";
    // Summary labels recomputed from each fold's train labels (no test-label
    // leakage into the transfer initialization). false = one summary model
    // trained on all labels.
    bool per_fold_summary = true;
    std::size_t hidden = 16;
    double lr = 1e-2;
    double weight_decay = 5e-4;
    // When false the CSV's ms column is 0, keeping outputs byte-identical
    // across runs of the same configuration.
    bool timings = false;

    void validate() const;  // ConfigError on inconsistent values
};

// Flat `key = value` text, UTF-8, '#' comments. Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);

// Applies a single key/value pair; shared by the file loader and CLI overrides.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace summgcn
