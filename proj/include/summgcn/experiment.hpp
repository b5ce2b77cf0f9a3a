#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "summgcn/config.hpp"
#include "summgcn/transfer.hpp"

namespace summgcn {

// One CSV row. Epoch 0 of the transfer and baseline models is the
// pre-training evaluation. fold is -1 for a shared (non-per-fold) summary model.
struct RunRecord {
    int fold = 0;
    std::string model;  // summary | transfer | baseline
    unsigned epoch = 0;
    double loss = 0.0;
    double subset_acc = 0.0;
    double hamming_acc = 0.0;
    long long ms = 0;
};

struct AggregateStat {
    double mean = 0.0;
    double stddev = 0.0;  // sample stddev over folds
};

struct ModelStats {
    AggregateStat epoch0_subset, final_subset;
    AggregateStat epoch0_hamming, final_hamming;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    double compression = 0.0;
    std::map<std::string, ModelStats> stats;  // keyed by model name
    std::vector<TransferReport> transfer_reports;  // one per fold
    std::filesystem::path results_csv;
};

// Full experiment: parse -> strip types -> filter OWL -> (optional literal
// drop for the summary input) -> summarize -> per fold: summary labels from
// the train fold, summary training, transfer + epoch-0 evaluation, transfer
// and baseline training on identical folds and seeds. Writes results.csv,
// summary_stats.csv, transfer_reports.txt and best-effort SVG plots into
// cfg.out_dir. A stage failure flushes partial records next to a FAILED
// marker naming the stage, then rethrows.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> read_records_csv(std::istream& in);

// Renders accuracy/loss-vs-epoch SVGs (one series per model, mean over
// folds) from a results.csv. Returns false on any problem; never throws.
bool write_plots_from_csv(const std::filesystem::path& csv,
                          const std::filesystem::path& out_dir);

}  // namespace summgcn
