// summgcn: graph summarization + R-GCN transfer experiments.
//
// Subcommands mirror the pipeline stages so each step can be run and
// inspected in isolation: summarize, train, transfer, eval, experiment.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <unordered_map>

#include "summgcn/checkpoint.hpp"
#include "summgcn/experiment.hpp"
#include "summgcn/ntriples.hpp"
#include "summgcn/precise.hpp"
#include "summgcn/preprocess.hpp"

namespace fs = std::filesystem;
using namespace summgcn;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string dataset;
    std::string out;
    std::string method = "attributes";
    unsigned bisim_k = 3;
    bool drop_literals = false;
    std::string freeze;
    unsigned folds = 5;
    unsigned epochs = 51;
    std::uint64_t seed = 1;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value config file");
    cmd->add_option("--dataset", args.dataset, "N-Triples dataset path");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--summary-method", args.method, "attributes|io|incoming|bisim");
    cmd->add_option("--k", args.bisim_k, "bisimulation chaining depth");
    cmd->add_flag("--drop-literals", args.drop_literals, "exclude literal edges from the summary input");
    cmd->add_option("--freeze", args.freeze, "layers to freeze, e.g. layer1,layer2");
    cmd->add_option("--folds", args.folds, "cross-validation folds");
    cmd->add_option("--epochs", args.epochs, "training epochs");
    cmd->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
}

ExperimentConfig build_config(const CommonArgs& args, const CLI::App* cmd) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
    if (cmd->count("--dataset")) cfg.dataset = args.dataset;
    if (cmd->count("--out")) cfg.out_dir = args.out;
    if (cmd->count("--summary-method")) cfg.method = parse_method(args.method);
    if (cmd->count("--k")) cfg.bisim_k = args.bisim_k;
    if (cmd->count("--drop-literals")) cfg.drop_literals = true;
    if (cmd->count("--freeze")) cfg.freeze = parse_freeze(args.freeze);
    if (cmd->count("--folds")) cfg.folds = args.folds;
    if (cmd->count("--epochs")) cfg.epochs = args.epochs;
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

struct Preprocessed {
    TripleGraph graph;
    TypeAssignment types;
};

Preprocessed preprocess_dataset(const std::string& path) {
    if (!fs::exists(path)) throw DataError("dataset not found: " + path);
    TripleGraph raw = parse_ntriples_file(path);
    StripResult stripped = strip_types(raw);
    FilterResult filtered = filter_owl(stripped.graph);
    Preprocessed p;
    p.types = remap_types(stripped.types, filtered.remap);
    p.graph = std::move(filtered.graph);
    return p;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    fn(out);
}

int cmd_summarize(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    Preprocessed pre = preprocess_dataset(cfg.dataset);
    LabelMatrix binary = binary_labels(pre.types, pre.graph.num_nodes());

    const TripleGraph* summary_input = &pre.graph;
    FilterResult literal_free;
    if (cfg.drop_literals) {
        literal_free = drop_literal_edges(pre.graph);
        summary_input = &literal_free.graph;
    }

    SummaryResult result;
    switch (cfg.method) {
        case SummaryMethod::Attributes: result = attribute_summary(*summary_input); break;
        case SummaryMethod::IO: result = io_summary(*summary_input); break;
        case SummaryMethod::Incoming: result = incoming_attribute_summary(*summary_input); break;
        case SummaryMethod::Bisim:
            result = k_forward_bisimulation(*summary_input, BisimConfig{cfg.bisim_k});
            break;
    }

    write_file(out_dir / "preprocessed.nt", [&](std::ostream& o) { write_ntriples(pre.graph, o); });
    write_file(out_dir / "labels.tsv", [&](std::ostream& o) { write_labels_tsv(binary, pre.graph, o); });
    write_file(out_dir / "summary.nt", [&](std::ostream& o) { write_ntriples(result.summary, o); });
    write_file(out_dir / "mapping.tsv",
               [&](std::ostream& o) { write_mapping_tsv(result.mapping, *summary_input, o); });
    LabelMatrix weighted = summary_labels(binary, result.mapping);
    write_file(out_dir / "summary_labels.tsv",
               [&](std::ostream& o) { write_labels_tsv(weighted, result.summary, o); });

    double rate = compression_rate(*summary_input, result.summary);
    std::cout << "method=" << method_name(cfg.method) << " nodes=" << summary_input->num_nodes()
              << " edges=" << summary_input->num_edges()
              << " partitions=" << result.mapping.num_partitions()
              << " summary_edges=" << result.summary.num_edges() << " compression=" << rate
              << '\n';
    return 0;
}

int cmd_train(const std::string& graph_path, const std::string& labels_path,
              const std::string& init_path, const std::string& out_path,
              const std::string& history_path, const ExperimentConfig& cfg) {
    if (!fs::exists(graph_path)) throw DataError("graph not found: " + graph_path);
    if (!fs::exists(labels_path)) throw DataError("labels not found: " + labels_path);

    TripleGraph graph = parse_ntriples_file(graph_path);
    std::ifstream labels_in(labels_path);
    LabelMatrix targets = read_labels_tsv(labels_in, graph);
    std::vector<NodeId> rows = targets.masked_rows();
    if (rows.empty()) throw DataError("labels file provides no supervised rows");

    MessagePassingStructure structure = build_structure(graph);
    std::vector<std::string> node_labels;
    for (const NodeRef& n : graph.nodes()) node_labels.push_back(n.label);

    RgcnParams params;
    if (!init_path.empty()) {
        params = load_checkpoint(init_path);
        if (params.num_nodes != graph.num_nodes() || params.node_labels != node_labels)
            throw IncompatibleError("checkpoint does not match the graph's nodes");
        if (params.class_names != targets.columns)
            throw IncompatibleError("checkpoint class vocabulary does not match the labels");
    } else {
        params = init_params(structure, node_labels, targets.columns, cfg.hidden, cfg.seed);
    }

    TrainOptions options;
    options.epochs = cfg.epochs;
    options.adam.lr = cfg.lr;
    options.adam.weight_decay = cfg.weight_decay;
    options.freeze = cfg.freeze;

    std::vector<EpochStats> history = train(structure, params, targets, rows, options);
    save_checkpoint(params, out_path);

    if (!history_path.empty()) {
        write_file(history_path, [&](std::ostream& o) {
            o << "epoch,loss\n";
            for (const EpochStats& s : history) o << s.epoch << ',' << s.loss << '\n';
        });
    }
    std::cout << "trained epochs=" << history.size()
              << " final_loss=" << (history.empty() ? 0.0 : history.back().loss)
              << " checkpoint=" << out_path << '\n';
    return 0;
}

int cmd_transfer(const std::string& summary_ckpt, const std::string& mapping_path,
                 const std::string& graph_path, const std::string& out_path,
                 const std::string& report_path, std::uint64_t seed) {
    if (!fs::exists(summary_ckpt)) throw DataError("checkpoint not found: " + summary_ckpt);
    if (!fs::exists(mapping_path)) throw DataError("mapping not found: " + mapping_path);
    if (!fs::exists(graph_path)) throw DataError("graph not found: " + graph_path);

    RgcnParams summary_model = load_checkpoint(summary_ckpt);
    TripleGraph graph = parse_ntriples_file(graph_path);
    MessagePassingStructure structure = build_structure(graph);

    std::unordered_map<std::string, std::uint32_t> summary_row_of;
    for (std::uint32_t r = 0; r < summary_model.node_labels.size(); ++r)
        summary_row_of.emplace(summary_model.node_labels[r], r);

    std::ifstream mapping_in(mapping_path);
    std::unordered_map<std::string, PartitionId> partition_of_label;
    for (auto& [label, partition] : read_mapping_tsv(mapping_in))
        partition_of_label.emplace(std::move(label), partition);

    std::vector<std::optional<std::uint32_t>> row_of_node(graph.num_nodes());
    std::vector<std::string> node_labels;
    for (const NodeRef& n : graph.nodes()) {
        node_labels.push_back(n.label);
        auto it = partition_of_label.find(n.label);
        if (it == partition_of_label.end()) continue;
        auto row = summary_row_of.find("urn:summary:" + std::to_string(it->second));
        if (row != summary_row_of.end()) row_of_node[n.id] = row->second;
    }

    auto [params, report] = transfer_params(summary_model, row_of_node, structure,
                                            std::move(node_labels), seed);
    save_checkpoint(params, out_path);
    std::cout << report.to_text();
    if (!report_path.empty()) write_file(report_path, [&](std::ostream& o) { o << report.to_text(); });
    return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& graph_path,
             const std::string& labels_path) {
    if (!fs::exists(ckpt_path)) throw DataError("checkpoint not found: " + ckpt_path);
    if (!fs::exists(graph_path)) throw DataError("graph not found: " + graph_path);
    if (!fs::exists(labels_path)) throw DataError("labels not found: " + labels_path);

    RgcnParams params = load_checkpoint(ckpt_path);
    TripleGraph graph = parse_ntriples_file(graph_path);
    std::ifstream labels_in(labels_path);
    LabelMatrix targets = read_labels_tsv(labels_in, graph);
    std::vector<NodeId> rows = targets.masked_rows();

    if (params.class_names != targets.columns)
        throw IncompatibleError("checkpoint class vocabulary does not match the labels");
    MessagePassingStructure structure = build_structure(graph);
    ForwardPass fwd = forward(structure, params);
    double loss = bce_loss(fwd.probs, targets, rows);
    Metrics m = evaluate(fwd.probs, rounded(targets), rows);
    std::cout << "rows=" << rows.size() << " loss=" << loss << " subset_acc=" << m.subset_accuracy
              << " hamming_acc=" << m.hamming_accuracy << '\n';
    return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result = run_experiment(cfg);
    std::cout << "compression=" << result.compression << '\n';
    for (const auto& [model, stats] : result.stats) {
        std::cout << model << ": epoch0_subset=" << stats.epoch0_subset.mean << "±"
                  << stats.epoch0_subset.stddev << " final_subset=" << stats.final_subset.mean
                  << "±" << stats.final_subset.stddev << '\n';
    }
    std::cout << "results=" << result.results_csv.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph summarization + R-GCN transfer training"};
    app.require_subcommand(1);

    CommonArgs experiment_args;
    CLI::App* experiment = app.add_subcommand("experiment", "run the full cross-validated experiment");
    add_common(experiment, experiment_args);

    CommonArgs summarize_args;
    CLI::App* summarize = app.add_subcommand("summarize", "preprocess a dataset and compute a summary");
    add_common(summarize, summarize_args);

    CommonArgs train_args;
    std::string train_graph, train_labels, train_init, train_out, train_history;
    std::size_t train_hidden = 16;
    double train_lr = 1e-2, train_wd = 5e-4;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model on a graph + labels");
    add_common(train_cmd, train_args);
    train_cmd->add_option("--graph", train_graph, "N-Triples graph")->required();
    train_cmd->add_option("--labels", train_labels, "labels TSV")->required();
    train_cmd->add_option("--init", train_init, "initial checkpoint (e.g. a transferred model)");
    train_cmd->add_option("--ckpt-out", train_out, "output checkpoint path")->required();
    train_cmd->add_option("--history", train_history, "per-epoch loss CSV");
    train_cmd->add_option("--hidden", train_hidden, "hidden width for fresh models");
    train_cmd->add_option("--lr", train_lr, "learning rate");
    train_cmd->add_option("--weight-decay", train_wd, "weight decay");

    CommonArgs transfer_args;
    std::string transfer_summary, transfer_mapping, transfer_graph, transfer_out, transfer_report;
    CLI::App* transfer_cmd = app.add_subcommand("transfer", "initialize a model from a summary checkpoint");
    add_common(transfer_cmd, transfer_args);
    transfer_cmd->add_option("--summary-ckpt", transfer_summary, "summary model checkpoint")->required();
    transfer_cmd->add_option("--mapping", transfer_mapping, "mapping TSV")->required();
    transfer_cmd->add_option("--graph", transfer_graph, "original graph N-Triples")->required();
    transfer_cmd->add_option("--ckpt-out", transfer_out, "output checkpoint path")->required();
    transfer_cmd->add_option("--report", transfer_report, "transfer report output path");

    std::string eval_ckpt, eval_graph, eval_labels;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint against labels");
    eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint")->required();
    eval_cmd->add_option("--graph", eval_graph, "graph N-Triples")->required();
    eval_cmd->add_option("--labels", eval_labels, "labels TSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(experiment)) return cmd_experiment(build_config(experiment_args, experiment));
        if (app.got_subcommand(summarize)) return cmd_summarize(build_config(summarize_args, summarize));
        if (app.got_subcommand(train_cmd)) {
            ExperimentConfig cfg = build_config(train_args, train_cmd);
            if (train_cmd->count("--hidden")) cfg.hidden = train_hidden;
            if (train_cmd->count("--lr")) cfg.lr = train_lr;
            if (train_cmd->count("--weight-decay")) cfg.weight_decay = train_wd;
            return cmd_train(train_graph, train_labels, train_init, train_out, train_history, cfg);
        }
        if (app.got_subcommand(transfer_cmd))
            return cmd_transfer(transfer_summary, transfer_mapping, transfer_graph, transfer_out,
                                transfer_report, transfer_args.seed);
        if (app.got_subcommand(eval_cmd)) return cmd_eval(eval_ckpt, eval_graph, eval_labels);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric fault: " << e.what() << '\n';
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
