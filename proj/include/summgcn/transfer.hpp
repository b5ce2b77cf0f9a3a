#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summgcn/rgcn.hpp"
#include "summgcn/summary.hpp"

namespace summgcn {

struct TransferReport {
    std::size_t transferred_nodes = 0;  // layer-1 rows copied from the summary model
    std::size_t unmapped_nodes = 0;     // rows left at their seeded random init
    std::size_t transferred_relations = 0;
    std::size_t original_only_relations = 0;  // fresh seeded matrices
    std::size_t summary_only_relations = 0;

    std::string to_text() const;  // flat key=value block
};

// Initializes an original-graph model from a summary-trained model.
// source_row_of_node maps every original node to the summary-model row
// holding its partition's parameters (nullopt = unmapped). Relations are
// matched by label between the two models; layer-1 rows are copied through
// the node map, layer-2 matrices verbatim. Everything unmatched keeps its
// seeded random initialization and is counted in the report.
// Hidden width and class vocabulary follow the summary model; callers that
// expect specific ones should validate with check_transfer_compatible.
std::pair<RgcnParams, TransferReport> transfer_params(
    const RgcnParams& summary_model,
    const std::vector<std::optional<std::uint32_t>>& source_row_of_node,
    const MessagePassingStructure& original_structure,
    std::vector<std::string> original_node_labels, std::uint64_t seed);

// Throws IncompatibleError when the summary model cannot initialize a model
// of the requested hidden width and class vocabulary.
void check_transfer_compatible(const RgcnParams& summary_model, std::size_t hidden,
                               const std::vector<std::string>& class_names);

// For a summary produced in-process the summary node id equals the
// partition id, so the mapping is usable as a row map directly.
std::vector<std::optional<std::uint32_t>> rows_from_mapping(const SummaryMapping& mapping);

}  // namespace summgcn
