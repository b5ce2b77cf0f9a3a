#include "summgcn/transfer.hpp"

#include <cstring>
#include <sstream>
#include <unordered_map>

#include "summgcn/errors.hpp"

namespace summgcn {

std::string TransferReport::to_text() const {
    std::ostringstream out;
    out << "transferred_nodes=" << transferred_nodes << '\n'
        << "unmapped_nodes=" << unmapped_nodes << '\n'
        << "transferred_relations=" << transferred_relations << '\n'
        << "original_only_relations=" << original_only_relations << '\n'
        << "summary_only_relations=" << summary_only_relations << '\n';
    return out.str();
}

void check_transfer_compatible(const RgcnParams& summary_model, std::size_t hidden,
                               const std::vector<std::string>& class_names) {
    if (summary_model.hidden != hidden)
        throw IncompatibleError("hidden width mismatch: summary model has " +
                                std::to_string(summary_model.hidden) + ", expected " +
                                std::to_string(hidden));
    if (summary_model.class_names != class_names)
        throw IncompatibleError("class vocabulary mismatch between summary model and targets");
}

std::vector<std::optional<std::uint32_t>> rows_from_mapping(const SummaryMapping& mapping) {
    std::vector<std::optional<std::uint32_t>> rows(mapping.partition_of.size());
    for (std::size_t v = 0; v < mapping.partition_of.size(); ++v) rows[v] = mapping.partition_of[v];
    return rows;
}

std::pair<RgcnParams, TransferReport> transfer_params(
    const RgcnParams& summary_model,
    const std::vector<std::optional<std::uint32_t>>& source_row_of_node,
    const MessagePassingStructure& original_structure,
    std::vector<std::string> original_node_labels, std::uint64_t seed) {
    if (summary_model.inverses != original_structure.inverses)
        throw IncompatibleError("inverse-relation settings differ between summary model and structure");
    if (source_row_of_node.size() != original_structure.num_nodes)
        throw IncompatibleError("node map size does not match the original structure");

    // Fresh seeded model first; unmapped rows and unmatched relations simply
    // keep this initialization.
    RgcnParams params = init_params(original_structure, std::move(original_node_labels),
                                    summary_model.class_names, summary_model.hidden, seed);

    TransferReport report;

    std::unordered_map<std::string, std::size_t> summary_slot_of;
    for (std::size_t r = 0; r < summary_model.relation_labels.size(); ++r)
        summary_slot_of.emplace(summary_model.relation_labels[r], r);

    const std::size_t r_orig = params.relation_labels.size();
    const std::size_t r_summ = summary_model.relation_labels.size();
    // (original slot, summary slot) pairs to copy, incl. inverse and self slots.
    std::vector<std::pair<std::size_t, std::size_t>> slot_pairs;
    for (std::size_t r = 0; r < r_orig; ++r) {
        auto it = summary_slot_of.find(params.relation_labels[r]);
        if (it == summary_slot_of.end()) {
            ++report.original_only_relations;
            continue;
        }
        ++report.transferred_relations;
        slot_pairs.emplace_back(r, it->second);
        if (params.inverses) slot_pairs.emplace_back(r_orig + r, r_summ + it->second);
    }
    slot_pairs.emplace_back(params.layer1.size() - 1, summary_model.layer1.size() - 1);  // self

    std::unordered_map<std::string, bool> original_has;
    for (const auto& label : params.relation_labels) original_has.emplace(label, true);
    for (const auto& label : summary_model.relation_labels)
        if (!original_has.count(label)) ++report.summary_only_relations;

    // Layer-1 row copies through the node map.
    std::vector<std::uint32_t> mapped_nodes;
    mapped_nodes.reserve(source_row_of_node.size());
    for (std::size_t v = 0; v < source_row_of_node.size(); ++v) {
        if (!source_row_of_node[v]) {
            ++report.unmapped_nodes;
            continue;
        }
        if (*source_row_of_node[v] >= summary_model.num_nodes)
            throw DataError("node map references summary row " +
                            std::to_string(*source_row_of_node[v]) + " outside the summary model");
        ++report.transferred_nodes;
        mapped_nodes.push_back(static_cast<std::uint32_t>(v));
    }

    const std::size_t h = params.hidden;
    for (auto [dst_slot, src_slot] : slot_pairs) {
        DenseMatrix& dst = params.layer1[dst_slot];
        const DenseMatrix& src = summary_model.layer1[src_slot];
        for (std::uint32_t v : mapped_nodes) {
            std::memcpy(dst.row(v), src.row(*source_row_of_node[v]), h * sizeof(double));
        }
        // Layer-2 shapes are node independent: copy verbatim.
        params.layer2[dst_slot] = summary_model.layer2[src_slot];
    }

    return {std::move(params), report};
}

}  // namespace summgcn
