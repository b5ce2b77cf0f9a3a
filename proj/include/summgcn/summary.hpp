#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "summgcn/graph.hpp"

namespace summgcn {

using PartitionId = std::uint32_t;

// Total map from original nodes to summary partitions. Two nodes share a
// partition iff their summarization signatures are equal; the designated
// empty partition collects nodes whose signature is empty.
struct SummaryMapping {
    std::vector<PartitionId> partition_of;          // indexed by original node id
    std::optional<PartitionId> empty_partition;
    std::vector<std::vector<NodeId>> member_lists;  // inverse of partition_of

    std::size_t num_partitions() const { return member_lists.size(); }
};

// Summary graph (a TripleGraph over partitions, nodes labeled
// `urn:summary:<id>` with node id == partition id, sharing the original
// relation vocabulary) plus the mapping that produced it.
struct SummaryResult {
    TripleGraph summary;
    SummaryMapping mapping;
};

struct BisimConfig {
    unsigned k = 3;  // chaining depth
};

// Nodes grouped by equal outgoing-attribute sets; nodes with an empty
// attribute set (literals, sinks) all map to the single empty partition.
SummaryResult attribute_summary(const TripleGraph& g);

// Signature = (outgoing attribute set, incoming attribute set); the empty
// partition is reserved for nodes with both sets empty.
SummaryResult io_summary(const TripleGraph& g);

// Nodes grouped by equal incoming-attribute sets; source-only nodes fall
// into the empty partition.
SummaryResult incoming_attribute_summary(const TripleGraph& g);

// Stratified forward (k)-bisimulation by iterative partition refinement.
// Level 0 is the universal block; the level-(i+1) signature of a node is its
// level-i block together with the set of (label, level-i block of target)
// pairs over its outgoing edges.
SummaryResult k_forward_bisimulation(const TripleGraph& g, BisimConfig cfg);

// 1 - |edges(summary)| / |edges(g)|. Throws DataError when g has no edges.
double compression_rate(const TripleGraph& g, const TripleGraph& summary);

// TSV export: `original_label<TAB>partition_id`, one row per original node.
void write_mapping_tsv(const SummaryMapping& mapping, const TripleGraph& original, std::ostream& out);

// Parsed back as label -> partition id.
std::vector<std::pair<std::string, PartitionId>> read_mapping_tsv(std::istream& in);

}  // namespace summgcn
