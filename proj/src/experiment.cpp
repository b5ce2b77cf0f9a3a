#include "summgcn/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "summgcn/labels.hpp"
#include "summgcn/ntriples.hpp"
#include "summgcn/preprocess.hpp"
#include "summgcn/rng.hpp"

namespace summgcn {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTagSummaryInit = 0x53;
constexpr std::uint64_t kTagTransfer = 0x54;
constexpr std::uint64_t kTagBaseline = 0x42;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SummaryResult summarize(const TripleGraph& g, const ExperimentConfig& cfg) {
    switch (cfg.method) {
        case SummaryMethod::Attributes: return attribute_summary(g);
        case SummaryMethod::IO: return io_summary(g);
        case SummaryMethod::Incoming: return incoming_attribute_summary(g);
        case SummaryMethod::Bisim: return k_forward_bisimulation(g, BisimConfig{cfg.bisim_k});
    }
    return attribute_summary(g);
}

std::vector<std::string> node_labels_of(const TripleGraph& g) {
    std::vector<std::string> labels;
    labels.reserve(g.num_nodes());
    for (const NodeRef& n : g.nodes()) labels.push_back(n.label);
    return labels;
}

struct ModelRunner {
    std::vector<RunRecord>& records;
    bool timings;

    // Epoch-0 pre-training evaluation followed by the training history.
    void run(int fold, const std::string& model, const MessagePassingStructure& structure,
             RgcnParams& params, const LabelMatrix& targets, const std::vector<NodeId>& train_rows,
             const LabelMatrix& eval_targets, const std::vector<NodeId>& eval_rows,
             const TrainOptions& options) {
        auto start = std::chrono::steady_clock::now();
        ForwardPass fwd = forward(structure, params);
        RunRecord epoch0;
        epoch0.fold = fold;
        epoch0.model = model;
        epoch0.epoch = 0;
        epoch0.loss = bce_loss(fwd.probs, targets, train_rows);
        Metrics m = evaluate(fwd.probs, eval_targets, eval_rows);
        epoch0.subset_acc = m.subset_accuracy;
        epoch0.hamming_acc = m.hamming_accuracy;
        long long base_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        epoch0.ms = timings ? base_ms : 0;
        records.push_back(epoch0);

        EvalSet eval{&eval_targets, &eval_rows};
        for (const EpochStats& s : train(structure, params, targets, train_rows, options, eval)) {
            RunRecord r;
            r.fold = fold;
            r.model = model;
            r.epoch = s.epoch;
            r.loss = s.loss;
            r.subset_acc = s.eval ? s.eval->subset_accuracy : 0.0;
            r.hamming_acc = s.eval ? s.eval->hamming_accuracy : 0.0;
            r.ms = timings ? base_ms + s.ms : 0;
            records.push_back(r);
        }
    }
};

AggregateStat aggregate(const std::vector<double>& values) {
    AggregateStat s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::map<std::string, ModelStats> compute_stats(const std::vector<RunRecord>& records,
                                                unsigned final_epoch) {
    std::map<std::string, std::vector<double>> e0s, fs_, e0h, fh;
    for (const RunRecord& r : records) {
        if (r.epoch == 0) {
            e0s[r.model].push_back(r.subset_acc);
            e0h[r.model].push_back(r.hamming_acc);
        }
        if (r.epoch == final_epoch) {
            fs_[r.model].push_back(r.subset_acc);
            fh[r.model].push_back(r.hamming_acc);
        }
    }
    std::map<std::string, ModelStats> stats;
    for (const auto& [model, values] : e0s) {
        ModelStats& m = stats[model];
        m.epoch0_subset = aggregate(values);
        m.epoch0_hamming = aggregate(e0h[model]);
        m.final_subset = aggregate(fs_[model]);
        m.final_hamming = aggregate(fh[model]);
    }
    return stats;
}

void write_stats_csv(const std::map<std::string, ModelStats>& stats, std::ostream& out) {
    out << "model,epoch0_subset_mean,epoch0_subset_std,final_subset_mean,final_subset_std,"
           "epoch0_hamming_mean,epoch0_hamming_std,final_hamming_mean,final_hamming_std\n";
    for (const auto& [model, m] : stats) {
        out << model << ',' << g17(m.epoch0_subset.mean) << ',' << g17(m.epoch0_subset.stddev)
            << ',' << g17(m.final_subset.mean) << ',' << g17(m.final_subset.stddev) << ','
            << g17(m.epoch0_hamming.mean) << ',' << g17(m.epoch0_hamming.stddev) << ','
            << g17(m.final_hamming.mean) << ',' << g17(m.final_hamming.stddev) << '\n';
    }
}

void flush_outputs(const ExperimentResult& result, const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    {
        std::ofstream csv(dir / "results.csv", std::ios::trunc);
        write_records_csv(result.records, csv);
    }
    {
        std::ofstream stats(dir / "summary_stats.csv", std::ios::trunc);
        write_stats_csv(result.stats, stats);
        stats << "compression," << g17(result.compression) << ",,,,,,,\n";
    }
    {
        std::ofstream reports(dir / "transfer_reports.txt", std::ios::trunc);
        for (std::size_t f = 0; f < result.transfer_reports.size(); ++f) {
            reports << "[fold " << f << "]\n" << result.transfer_reports[f].to_text();
        }
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);
    fs::remove(out_dir / "FAILED");

    ExperimentResult result;
    result.results_csv = out_dir / "results.csv";
    std::string stage = "parse";

    try {
        if (!fs::exists(cfg.dataset)) throw DataError("dataset not found: " + cfg.dataset);
        TripleGraph raw = parse_ntriples_file(cfg.dataset);

        stage = "strip_types";
        StripResult stripped = strip_types(raw);

        stage = "filter_owl";
        FilterResult filtered = filter_owl(stripped.graph);
        TypeAssignment types = remap_types(stripped.types, filtered.remap);
        const TripleGraph& graph = filtered.graph;

        stage = "labels";
        LabelMatrix binary = binary_labels(types, graph.num_nodes());
        if (binary.cols == 0) throw DataError("dataset has no rdf:type statements to learn from");
        std::vector<NodeId> mask = binary.masked_rows();
        std::vector<Split> folds = make_folds(mask, cfg.folds, cfg.seed);

        stage = "summarize";
        const TripleGraph* summary_input = &graph;
        FilterResult literal_free;
        std::vector<std::optional<NodeId>> to_summary_input;
        if (cfg.drop_literals) {
            literal_free = drop_literal_edges(graph);
            summary_input = &literal_free.graph;
            to_summary_input = literal_free.remap.node_map;
        } else {
            to_summary_input.resize(graph.num_nodes());
            for (NodeId v = 0; v < graph.num_nodes(); ++v) to_summary_input[v] = v;
        }
        SummaryResult summarized = summarize(*summary_input, cfg);
        result.compression = compression_rate(*summary_input, summarized.summary);

        // Original node -> summary-model row (partition id).
        std::vector<std::optional<std::uint32_t>> row_of_node(graph.num_nodes());
        for (NodeId v = 0; v < graph.num_nodes(); ++v) {
            if (to_summary_input[v])
                row_of_node[v] = summarized.mapping.partition_of[*to_summary_input[v]];
        }

        stage = "structure";
        MessagePassingStructure structure = build_structure(graph);
        MessagePassingStructure summary_structure = build_structure(summarized.summary);
        std::vector<std::string> graph_labels = node_labels_of(graph);
        std::vector<std::string> summary_labels_list = node_labels_of(summarized.summary);

        ModelRunner runner{result.records, cfg.timings};
        TrainOptions base_options;
        base_options.epochs = cfg.epochs;
        base_options.adam.lr = cfg.lr;
        base_options.adam.weight_decay = cfg.weight_decay;

        auto train_summary_model = [&](int fold_id, const LabelMatrix& fold_binary) {
            LabelMatrix targets = summary_labels(fold_binary, summarized.mapping);
            std::vector<NodeId> rows = targets.masked_rows();
            if (rows.empty()) throw DataError("no summary partition carries supervision");
            RgcnParams params = init_params(
                summary_structure, summary_labels_list, binary.columns, cfg.hidden,
                derive_seed(cfg.seed, kTagSummaryInit, fold_id < 0 ? 0 : fold_id));
            LabelMatrix self_eval = rounded(targets);
            runner.run(fold_id, "summary", summary_structure, params, targets, rows, self_eval,
                       rows, base_options);
            return params;
        };

        RgcnParams shared_summary_model;
        if (!cfg.per_fold_summary) {
            stage = "train_summary";
            shared_summary_model = train_summary_model(-1, binary);
        }

        for (const Split& fold : folds) {
            // Both lists are sorted; any common element breaks fold isolation.
            for (std::size_t a = 0, b = 0; a < fold.train.size() && b < fold.test.size();) {
                if (fold.train[a] < fold.test[b]) {
                    ++a;
                } else if (fold.train[a] > fold.test[b]) {
                    ++b;
                } else {
                    throw DataError("fold isolation violated");
                }
            }

            RgcnParams summary_model;
            if (cfg.per_fold_summary) {
                stage = "train_summary";
                LabelMatrix train_only = binary;
                train_only.masked.assign(binary.rows, 0);
                for (NodeId v : fold.train) train_only.masked[v] = 1;
                summary_model = train_summary_model(static_cast<int>(fold.fold), train_only);
            } else {
                summary_model = shared_summary_model;
            }

            stage = "transfer";
            check_transfer_compatible(summary_model, cfg.hidden, binary.columns);
            auto [transfer_model, report] =
                transfer_params(summary_model, row_of_node, structure, graph_labels,
                                derive_seed(cfg.seed, kTagTransfer, fold.fold));
            result.transfer_reports.push_back(report);

            stage = "train_transfer";
            TrainOptions transfer_options = base_options;
            transfer_options.freeze = cfg.freeze;
            runner.run(static_cast<int>(fold.fold), "transfer", structure, transfer_model, binary,
                       fold.train, binary, fold.test, transfer_options);

            stage = "train_baseline";
            RgcnParams baseline_model =
                init_params(structure, graph_labels, binary.columns, cfg.hidden,
                            derive_seed(cfg.seed, kTagBaseline, fold.fold));
            runner.run(static_cast<int>(fold.fold), "baseline", structure, baseline_model, binary,
                       fold.train, binary, fold.test, base_options);
        }

        stage = "report";
        result.stats = compute_stats(result.records, cfg.epochs);
        flush_outputs(result, cfg);
        write_plots_from_csv(result.results_csv, out_dir);
        return result;
    } catch (const std::exception& e) {
        flush_outputs(result, cfg);
        std::ofstream marker(out_dir / "FAILED", std::ios::trunc);
        marker << "stage=" << stage << "\nerror=" << e.what() << '\n';
        throw;
    }
}

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    out << "fold,model,epoch,loss,subset_acc,hamming_acc,ms\n";
    for (const RunRecord& r : records) {
        out << r.fold << ',' << r.model << ',' << r.epoch << ',' << g17(r.loss) << ','
            << g17(r.subset_acc) << ',' << g17(r.hamming_acc) << ',' << r.ms << '\n';
    }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("results CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "fold,model,epoch,loss,subset_acc,hamming_acc,ms")
        throw DataError("unexpected results CSV header: " + line);

    std::vector<RunRecord> records;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw ParseError(line_number, "expected 7 CSV fields");
        RunRecord r;
        try {
            r.fold = std::stoi(fields[0]);
            r.model = fields[1];
            r.epoch = static_cast<unsigned>(std::stoul(fields[2]));
            r.loss = std::stod(fields[3]);
            r.subset_acc = std::stod(fields[4]);
            r.hamming_acc = std::stod(fields[5]);
            r.ms = std::stoll(fields[6]);
        } catch (const std::logic_error&) {
            throw ParseError(line_number, "malformed CSV field");
        }
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

struct Series {
    std::string model;
    std::string color;
    std::vector<std::pair<unsigned, double>> points;  // epoch -> mean value
};

std::vector<Series> mean_series(const std::vector<RunRecord>& records, bool use_loss) {
    const std::vector<std::pair<std::string, std::string>> palette = {
        {"summary", "#7f7f7f"}, {"transfer", "#d62728"}, {"baseline", "#2ca02c"}};
    std::vector<Series> series;
    for (const auto& [model, color] : palette) {
        std::map<unsigned, std::pair<double, std::size_t>> acc;
        for (const RunRecord& r : records) {
            if (r.model != model) continue;
            auto& slot = acc[r.epoch];
            slot.first += use_loss ? r.loss : r.subset_acc;
            slot.second += 1;
        }
        if (acc.empty()) continue;
        Series s{model, color, {}};
        for (const auto& [epoch, sums] : acc)
            s.points.emplace_back(epoch, sums.first / static_cast<double>(sums.second));
        series.push_back(std::move(s));
    }
    return series;
}

void render_svg(const std::vector<Series>& series, const std::string& y_label, double y_max,
                std::ostream& out) {
    const double width = 860, height = 480;
    const double left = 64, right = 710, top = 24, bottom = 430;
    unsigned max_epoch = 1;
    for (const Series& s : series)
        for (auto [e, v] : s.points) max_epoch = std::max(max_epoch, e);

    auto sx = [&](double epoch) { return left + (right - left) * (epoch / max_epoch); };
    auto sy = [&](double v) { return bottom - (bottom - top) * (v / y_max); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        double v = y_max * i / 5.0;
        double y = sy(v);
        out << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << g17(std::round(v * 1000) / 1000) << "</text>\n";
        double epoch = max_epoch * i / 5.0;
        double x = sx(epoch);
        out << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
            << bottom + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << bottom + 20
            << "\" text-anchor=\"middle\">" << static_cast<unsigned>(epoch) << "</text>\n";
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\">epoch</text>\n";
    out << "<text x=\"16\" y=\"" << (top + bottom) / 2 << "\" transform=\"rotate(-90 16 "
        << (top + bottom) / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

    double legend_y = top + 10;
    for (const Series& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\" points=\"";
        for (auto [e, v] : s.points) out << sx(e) << ',' << sy(std::min(v, y_max)) << ' ';
        out << "\"/>\n";
        out << "<line x1=\"" << right + 14 << "\" y1=\"" << legend_y << "\" x2=\"" << right + 40
            << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"/>\n";
        out << "<text x=\"" << right + 46 << "\" y=\"" << legend_y + 4 << "\">" << s.model
            << "</text>\n";
        legend_y += 20;
    }
    out << "</svg>\n";
}

}  // namespace

bool write_plots_from_csv(const fs::path& csv, const fs::path& out_dir) {
    try {
        std::ifstream in(csv);
        if (!in) return false;
        std::vector<RunRecord> records = read_records_csv(in);
        if (records.empty()) return false;

        {
            std::ofstream out(out_dir / "accuracy_vs_epoch.svg", std::ios::trunc);
            render_svg(mean_series(records, false), "subset accuracy", 1.0, out);
        }
        double max_loss = 0.0;
        for (const RunRecord& r : records) max_loss = std::max(max_loss, r.loss);
        if (max_loss <= 0.0) max_loss = 1.0;
        {
            std::ofstream out(out_dir / "loss_vs_epoch.svg", std::ios::trunc);
            render_svg(mean_series(records, true), "train loss", max_loss * 1.05, out);
        }
        return true;
    } catch (...) {
        return false;
    }
}

}  // namespace summgcn
