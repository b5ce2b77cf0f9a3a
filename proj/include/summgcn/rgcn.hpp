#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "summgcn/graph.hpp"
#include "summgcn/labels.hpp"
#include "summgcn/matrix.hpp"

namespace summgcn {

// Message-passing aggregation for one relation slot: for every target i the
// contiguous run sources[offsets[k]..offsets[k+1]) holds its distinct
// neighbors j, so c_{i,r} = run length.
struct SlotAdjacency {
    std::vector<NodeId> targets;
    std::vector<std::uint32_t> offsets;  // size targets.size() + 1
    std::vector<NodeId> sources;
};

// Slots 0..R-1 are the forward relations; with inverses enabled slots
// R..2R-1 are their synthesized reverses; the final slot is the
// self-relation with one (i, i) pair per node.
struct MessagePassingStructure {
    std::size_t num_nodes = 0;
    bool inverses = true;
    std::vector<std::string> relation_labels;  // forward labels
    std::vector<SlotAdjacency> slots;

    std::size_t num_slots() const { return slots.size(); }
    std::size_t self_slot() const { return slots.size() - 1; }
    std::string slot_name(std::size_t slot) const;
};

MessagePassingStructure build_structure(const TripleGraph& g, bool add_inverses = true);

// Featureless two-layer R-GCN. Inputs are one-hot identities, so the
// layer-1 matrices are |V| x H with row v acting as node v's embedding
// contribution; layer-2 matrices are H x C. The last matrix of each layer
// is the self-loop weight.
struct RgcnParams {
    std::size_t num_nodes = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;
    bool inverses = true;
    std::vector<std::string> relation_labels;  // forward labels, slot-aligned
    std::vector<std::string> class_names;
    std::vector<std::string> node_labels;
    std::vector<DenseMatrix> layer1;  // per slot, |V| x H
    std::vector<DenseMatrix> layer2;  // per slot, H x C
};

// Uniform Glorot initialization of every matrix from a seeded generator.
RgcnParams init_params(const MessagePassingStructure& structure,
                       std::vector<std::string> node_labels,
                       std::vector<std::string> class_names, std::size_t hidden,
                       std::uint64_t seed);

struct ForwardPass {
    DenseMatrix hidden_pre;  // |V| x H, before ReLU
    DenseMatrix hidden;      // |V| x H
    DenseMatrix probs;       // |V| x C, sigmoid outputs
};

// h_i = ReLU(sum_r sum_{j in N_i^r} (1/c_{i,r}) row_j(W_r) + row_i(W_0)),
// logits_i = sum_r sum_j (1/c_{i,r}) h_j W_r' + h_i W_0', probs = sigmoid.
// Throws NumericError naming the layer when a non-finite value appears.
ForwardPass forward(const MessagePassingStructure& structure, const RgcnParams& params);

// Mean over the selected rows and all columns of the elementwise binary
// cross entropy, with probabilities clamped to [1e-7, 1 - 1e-7].
double bce_loss(const DenseMatrix& probs, const LabelMatrix& targets,
                const std::vector<NodeId>& rows);

struct Gradients {
    std::vector<DenseMatrix> layer1;
    std::vector<DenseMatrix> layer2;
};

// Exact reverse-mode gradients of bce_loss; sigmoid and BCE are fused as
// (p - t) / (|rows| * C) at the logits.
Gradients backward(const MessagePassingStructure& structure, const RgcnParams& params,
                   const ForwardPass& fwd, const LabelMatrix& targets,
                   const std::vector<NodeId>& rows);

struct FreezePlan {
    bool layer1 = false;
    bool layer2 = false;
};

// Parses "layer1,layer2"-style lists. Empty input freezes nothing.
FreezePlan parse_freeze(const std::string& spec);

void apply_freeze(Gradients& grads, const FreezePlan& freeze);

struct AdamConfig {
    double lr = 1e-2;
    double weight_decay = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::uint64_t step = 0;
    std::vector<DenseMatrix> m1_layer1, m2_layer1;
    std::vector<DenseMatrix> m1_layer2, m2_layer2;

    static AdamState init(const RgcnParams& params, AdamConfig cfg);
};

// grad' = grad + weight_decay * param, then the standard bias-corrected
// Adam update. Frozen layers are skipped entirely so their parameters stay
// bitwise unchanged (weight decay would otherwise still move them).
void adam_step(RgcnParams& params, const Gradients& grads, AdamState& state,
               const FreezePlan& freeze = {});

struct Metrics {
    double subset_accuracy = 0.0;   // rounded prediction vector equals the target exactly
    double hamming_accuracy = 0.0;  // mean per-entry agreement
};

// Rounds at threshold 0.5 (ties up) against binary targets.
Metrics evaluate(const DenseMatrix& probs, const LabelMatrix& binary_targets,
                 const std::vector<NodeId>& rows);

struct EvalSet {
    const LabelMatrix* targets = nullptr;
    const std::vector<NodeId>* rows = nullptr;
};

struct EpochStats {
    unsigned epoch = 0;
    double loss = 0.0;
    std::optional<Metrics> eval;
    long long ms = 0;  // wall clock since training started
};

struct TrainOptions {
    unsigned epochs = 51;
    AdamConfig adam;
    FreezePlan freeze;
};

// Full-batch training: per epoch forward -> loss on the train rows ->
// backward -> freeze -> adam step. history[e] holds the loss and optional
// evaluation after e updates (one entry per epoch). Numeric faults carry
// the epoch index.
std::vector<EpochStats> train(const MessagePassingStructure& structure, RgcnParams& params,
                              const LabelMatrix& targets, const std::vector<NodeId>& train_rows,
                              const TrainOptions& options, const EvalSet& eval = {});

}  // namespace summgcn
