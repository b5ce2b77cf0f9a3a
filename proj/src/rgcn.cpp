#include "summgcn/rgcn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "summgcn/errors.hpp"
#include "summgcn/rng.hpp"

namespace summgcn {

std::string MessagePassingStructure::slot_name(std::size_t slot) const {
    std::size_t r = relation_labels.size();
    if (slot < r) return "rel:" + relation_labels[slot];
    if (inverses && slot < 2 * r) return "inv:" + relation_labels[slot - r];
    return "self";
}

MessagePassingStructure build_structure(const TripleGraph& g, bool add_inverses) {
    MessagePassingStructure s;
    s.num_nodes = g.num_nodes();
    s.inverses = add_inverses;
    s.relation_labels = g.relations();

    std::size_t r = g.num_relations();
    std::size_t num_slots = (add_inverses ? 2 * r : r) + 1;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> pairs(num_slots);  // (target, source)

    for (const Triple& t : g.edges()) {
        pairs[t.predicate].emplace_back(t.target, t.source);
        if (add_inverses) pairs[r + t.predicate].emplace_back(t.source, t.target);
    }
    for (NodeId v = 0; v < g.num_nodes(); ++v) pairs[num_slots - 1].emplace_back(v, v);

    s.slots.resize(num_slots);
    for (std::size_t slot = 0; slot < num_slots; ++slot) {
        auto& p = pairs[slot];
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        SlotAdjacency& adj = s.slots[slot];
        adj.sources.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i == 0 || p[i].first != p[i - 1].first) {
                adj.targets.push_back(p[i].first);
                adj.offsets.push_back(static_cast<std::uint32_t>(i));
            }
            adj.sources.push_back(p[i].second);
        }
        adj.offsets.push_back(static_cast<std::uint32_t>(p.size()));
    }
    return s;
}

namespace {

void glorot_fill(DenseMatrix& m, Rng& rng) {
    double bound = std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
    for (double& v : m.values) v = rng.uniform(-bound, bound);
}

void check_finite(const DenseMatrix& m, const char* layer) {
    if (!m.all_finite()) throw NumericError(std::string("non-finite value produced by ") + layer);
}

}  // namespace

RgcnParams init_params(const MessagePassingStructure& structure,
                       std::vector<std::string> node_labels,
                       std::vector<std::string> class_names, std::size_t hidden,
                       std::uint64_t seed) {
    if (node_labels.size() != structure.num_nodes)
        throw IncompatibleError("node label list does not match the structure");
    RgcnParams p;
    p.num_nodes = structure.num_nodes;
    p.hidden = hidden;
    p.classes = class_names.size();
    p.inverses = structure.inverses;
    p.relation_labels = structure.relation_labels;
    p.class_names = std::move(class_names);
    p.node_labels = std::move(node_labels);

    Rng rng(seed);
    p.layer1.reserve(structure.num_slots());
    for (std::size_t s = 0; s < structure.num_slots(); ++s) {
        DenseMatrix m(p.num_nodes, hidden);
        glorot_fill(m, rng);
        p.layer1.push_back(std::move(m));
    }
    p.layer2.reserve(structure.num_slots());
    for (std::size_t s = 0; s < structure.num_slots(); ++s) {
        DenseMatrix m(hidden, p.classes);
        glorot_fill(m, rng);
        p.layer2.push_back(std::move(m));
    }
    return p;
}

ForwardPass forward(const MessagePassingStructure& structure, const RgcnParams& params) {
    const std::size_t n = structure.num_nodes;
    const std::size_t h = params.hidden;
    const std::size_t c = params.classes;
    if (params.layer1.size() != structure.num_slots() || params.layer2.size() != structure.num_slots())
        throw IncompatibleError("parameter slot count does not match the structure");

    ForwardPass out;
    out.hidden_pre = DenseMatrix(n, h);

    for (std::size_t slot = 0; slot < structure.num_slots(); ++slot) {
        const SlotAdjacency& adj = structure.slots[slot];
        const DenseMatrix& w = params.layer1[slot];
        for (std::size_t k = 0; k < adj.targets.size(); ++k) {
            NodeId i = adj.targets[k];
            std::uint32_t begin = adj.offsets[k], end = adj.offsets[k + 1];
            double inv_c = 1.0 / static_cast<double>(end - begin);
            double* dst = out.hidden_pre.row(i);
            for (std::uint32_t e = begin; e < end; ++e) {
                const double* src = w.row(adj.sources[e]);
                for (std::size_t x = 0; x < h; ++x) dst[x] += inv_c * src[x];
            }
        }
    }

    out.hidden = out.hidden_pre;
    for (double& v : out.hidden.values) v = v > 0.0 ? v : 0.0;
    check_finite(out.hidden, "layer1");

    DenseMatrix logits(n, c);
    std::vector<double> agg(h);
    for (std::size_t slot = 0; slot < structure.num_slots(); ++slot) {
        const SlotAdjacency& adj = structure.slots[slot];
        const DenseMatrix& w = params.layer2[slot];
        for (std::size_t k = 0; k < adj.targets.size(); ++k) {
            NodeId i = adj.targets[k];
            std::uint32_t begin = adj.offsets[k], end = adj.offsets[k + 1];
            double inv_c = 1.0 / static_cast<double>(end - begin);
            std::fill(agg.begin(), agg.end(), 0.0);
            for (std::uint32_t e = begin; e < end; ++e) {
                const double* src = out.hidden.row(adj.sources[e]);
                for (std::size_t x = 0; x < h; ++x) agg[x] += inv_c * src[x];
            }
            double* dst = logits.row(i);
            for (std::size_t x = 0; x < h; ++x) {
                double a = agg[x];
                if (a == 0.0) continue;
                const double* wrow = w.row(x);
                for (std::size_t y = 0; y < c; ++y) dst[y] += a * wrow[y];
            }
        }
    }

    out.probs = DenseMatrix(n, c);
    for (std::size_t i = 0; i < logits.values.size(); ++i)
        out.probs.values[i] = 1.0 / (1.0 + std::exp(-logits.values[i]));
    check_finite(out.probs, "layer2");
    return out;
}

namespace {
constexpr double kProbClamp = 1e-7;
}

double bce_loss(const DenseMatrix& probs, const LabelMatrix& targets,
                const std::vector<NodeId>& rows) {
    if (rows.empty()) throw DataError("binary cross entropy undefined over an empty row subset");
    if (probs.cols != targets.cols) throw IncompatibleError("probability and target widths differ");
    double total = 0.0;
    for (NodeId r : rows) {
        const double* p = probs.row(r);
        for (std::size_t c = 0; c < probs.cols; ++c) {
            double pc = std::min(std::max(p[c], kProbClamp), 1.0 - kProbClamp);
            double t = targets.at(r, c);
            total -= t * std::log(pc) + (1.0 - t) * std::log(1.0 - pc);
        }
    }
    return total / (static_cast<double>(rows.size()) * static_cast<double>(probs.cols));
}

Gradients backward(const MessagePassingStructure& structure, const RgcnParams& params,
                   const ForwardPass& fwd, const LabelMatrix& targets,
                   const std::vector<NodeId>& rows) {
    if (rows.empty()) throw DataError("gradient undefined over an empty row subset");
    const std::size_t n = structure.num_nodes;
    const std::size_t h = params.hidden;
    const std::size_t c = params.classes;
    if (targets.cols != c) throw IncompatibleError("target width does not match the class count");

    Gradients g;
    g.layer1.assign(structure.num_slots(), DenseMatrix(n, h));
    g.layer2.assign(structure.num_slots(), DenseMatrix(h, c));

    // d loss / d logits, fused through the sigmoid.
    DenseMatrix dlogits(n, c);
    double scale = 1.0 / (static_cast<double>(rows.size()) * static_cast<double>(c));
    for (NodeId r : rows) {
        const double* p = fwd.probs.row(r);
        double* d = dlogits.row(r);
        for (std::size_t y = 0; y < c; ++y) d[y] = (p[y] - targets.at(r, y)) * scale;
    }

    DenseMatrix dhidden(n, h);
    std::vector<double> agg(h);
    for (std::size_t slot = 0; slot < structure.num_slots(); ++slot) {
        const SlotAdjacency& adj = structure.slots[slot];
        const DenseMatrix& w2 = params.layer2[slot];
        DenseMatrix& dw2 = g.layer2[slot];
        for (std::size_t k = 0; k < adj.targets.size(); ++k) {
            NodeId i = adj.targets[k];
            const double* di = dlogits.row(i);
            bool zero = true;
            for (std::size_t y = 0; y < c; ++y) {
                if (di[y] != 0.0) {
                    zero = false;
                    break;
                }
            }
            if (zero) continue;
            std::uint32_t begin = adj.offsets[k], end = adj.offsets[k + 1];
            double inv_c = 1.0 / static_cast<double>(end - begin);

            std::fill(agg.begin(), agg.end(), 0.0);
            for (std::uint32_t e = begin; e < end; ++e) {
                const double* src = fwd.hidden.row(adj.sources[e]);
                for (std::size_t x = 0; x < h; ++x) agg[x] += inv_c * src[x];
            }
            for (std::size_t x = 0; x < h; ++x) {
                if (agg[x] == 0.0) continue;
                double* dwrow = dw2.row(x);
                for (std::size_t y = 0; y < c; ++y) dwrow[y] += agg[x] * di[y];
            }
            for (std::size_t x = 0; x < h; ++x) {
                const double* wrow = w2.row(x);
                double acc = 0.0;
                for (std::size_t y = 0; y < c; ++y) acc += wrow[y] * di[y];
                agg[x] = acc;  // reuse as d(aggregate)
            }
            for (std::uint32_t e = begin; e < end; ++e) {
                double* dh = dhidden.row(adj.sources[e]);
                for (std::size_t x = 0; x < h; ++x) dh[x] += inv_c * agg[x];
            }
        }
    }

    // ReLU: pass gradient where the pre-activation was positive.
    for (std::size_t i = 0; i < dhidden.values.size(); ++i) {
        if (fwd.hidden_pre.values[i] <= 0.0) dhidden.values[i] = 0.0;
    }

    for (std::size_t slot = 0; slot < structure.num_slots(); ++slot) {
        const SlotAdjacency& adj = structure.slots[slot];
        DenseMatrix& dw1 = g.layer1[slot];
        for (std::size_t k = 0; k < adj.targets.size(); ++k) {
            NodeId i = adj.targets[k];
            const double* dh = dhidden.row(i);
            bool zero = true;
            for (std::size_t x = 0; x < h; ++x) {
                if (dh[x] != 0.0) {
                    zero = false;
                    break;
                }
            }
            if (zero) continue;
            std::uint32_t begin = adj.offsets[k], end = adj.offsets[k + 1];
            double inv_c = 1.0 / static_cast<double>(end - begin);
            for (std::uint32_t e = begin; e < end; ++e) {
                double* dst = dw1.row(adj.sources[e]);
                for (std::size_t x = 0; x < h; ++x) dst[x] += inv_c * dh[x];
            }
        }
    }
    return g;
}

FreezePlan parse_freeze(const std::string& spec) {
    FreezePlan plan;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "layer1") {
            plan.layer1 = true;
        } else if (item == "layer2") {
            plan.layer2 = true;
        } else {
            throw ConfigError("unknown freeze target '" + item + "' (expected layer1/layer2)");
        }
    }
    return plan;
}

void apply_freeze(Gradients& grads, const FreezePlan& freeze) {
    if (freeze.layer1)
        for (DenseMatrix& m : grads.layer1) m.fill(0.0);
    if (freeze.layer2)
        for (DenseMatrix& m : grads.layer2) m.fill(0.0);
}

AdamState AdamState::init(const RgcnParams& params, AdamConfig cfg) {
    AdamState s;
    s.cfg = cfg;
    auto zeros_like = [](const std::vector<DenseMatrix>& src) {
        std::vector<DenseMatrix> out;
        out.reserve(src.size());
        for (const DenseMatrix& m : src) out.emplace_back(m.rows, m.cols);
        return out;
    };
    s.m1_layer1 = zeros_like(params.layer1);
    s.m2_layer1 = zeros_like(params.layer1);
    s.m1_layer2 = zeros_like(params.layer2);
    s.m2_layer2 = zeros_like(params.layer2);
    return s;
}

namespace {

void adam_update_tensor(DenseMatrix& param, const DenseMatrix& grad, DenseMatrix& m1,
                        DenseMatrix& m2, const AdamConfig& cfg, double bias1, double bias2) {
    for (std::size_t i = 0; i < param.values.size(); ++i) {
        double g = grad.values[i] + cfg.weight_decay * param.values[i];
        m1.values[i] = cfg.beta1 * m1.values[i] + (1.0 - cfg.beta1) * g;
        m2.values[i] = cfg.beta2 * m2.values[i] + (1.0 - cfg.beta2) * g * g;
        double mhat = m1.values[i] / bias1;
        double vhat = m2.values[i] / bias2;
        param.values[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

}  // namespace

void adam_step(RgcnParams& params, const Gradients& grads, AdamState& state,
               const FreezePlan& freeze) {
    ++state.step;
    double bias1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.step));
    double bias2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.step));
    if (!freeze.layer1) {
        for (std::size_t i = 0; i < params.layer1.size(); ++i)
            adam_update_tensor(params.layer1[i], grads.layer1[i], state.m1_layer1[i],
                               state.m2_layer1[i], state.cfg, bias1, bias2);
    }
    if (!freeze.layer2) {
        for (std::size_t i = 0; i < params.layer2.size(); ++i)
            adam_update_tensor(params.layer2[i], grads.layer2[i], state.m1_layer2[i],
                               state.m2_layer2[i], state.cfg, bias1, bias2);
    }
}

Metrics evaluate(const DenseMatrix& probs, const LabelMatrix& binary_targets,
                 const std::vector<NodeId>& rows) {
    if (rows.empty()) throw DataError("metrics undefined over an empty row subset");
    if (probs.cols != binary_targets.cols) throw IncompatibleError("prediction and target widths differ");
    std::size_t exact_rows = 0;
    std::size_t agreeing_entries = 0;
    for (NodeId r : rows) {
        const double* p = probs.row(r);
        bool exact = true;
        for (std::size_t c = 0; c < probs.cols; ++c) {
            double predicted = p[c] >= 0.5 ? 1.0 : 0.0;
            if (predicted == binary_targets.at(r, c)) {
                ++agreeing_entries;
            } else {
                exact = false;
            }
        }
        if (exact) ++exact_rows;
    }
    Metrics m;
    m.subset_accuracy = static_cast<double>(exact_rows) / static_cast<double>(rows.size());
    m.hamming_accuracy = static_cast<double>(agreeing_entries) /
                         (static_cast<double>(rows.size()) * static_cast<double>(probs.cols));
    return m;
}

std::vector<EpochStats> train(const MessagePassingStructure& structure, RgcnParams& params,
                              const LabelMatrix& targets, const std::vector<NodeId>& train_rows,
                              const TrainOptions& options, const EvalSet& eval) {
    AdamState state = AdamState::init(params, options.adam);
    std::vector<EpochStats> history;
    history.reserve(options.epochs);
    if (options.epochs == 0) return history;
    auto start = std::chrono::steady_clock::now();

    ForwardPass fwd;
    try {
        fwd = forward(structure, params);
    } catch (const NumericError& e) {
        throw NumericError(std::string("epoch 1: ") + e.what());
    }
    for (unsigned epoch = 1; epoch <= options.epochs; ++epoch) {
        try {
            Gradients grads = backward(structure, params, fwd, targets, train_rows);
            apply_freeze(grads, options.freeze);
            adam_step(params, grads, state, options.freeze);
            fwd = forward(structure, params);

            EpochStats stats;
            stats.epoch = epoch;
            stats.loss = bce_loss(fwd.probs, targets, train_rows);
            if (eval.targets && eval.rows) stats.eval = evaluate(fwd.probs, *eval.targets, *eval.rows);
            stats.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
            history.push_back(stats);
        } catch (const NumericError& e) {
            throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
        }
    }
    return history;
}

}  // namespace summgcn
