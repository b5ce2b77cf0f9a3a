#pragma once

#include <cstddef>
#include <vector>

#include "summgcn/graph.hpp"
#include "summgcn/summary.hpp"

namespace summgcn {

// A walk through the summary graph: nodes.size() == predicates.size() + 1.
struct SummaryPath {
    std::vector<PartitionId> nodes;
    std::vector<RelationId> predicates;

    friend bool operator==(const SummaryPath&, const SummaryPath&) = default;
};

// Enumerates every summary path of length 1..max_path_len and returns those
// with at least one instance (a choice of one original node per partition)
// that does not form a path in the original graph. An empty result means the
// summary is precise up to that length. Throws SizeError once more than
// max_paths paths have been enumerated.
//
// A path has a non-realizing instance iff one of its edges is not "complete"
// (some member pair of its endpoint partitions lacks the original edge), so
// completeness is computed once per summary edge and paths are then walked.
std::vector<SummaryPath> check_precise(const TripleGraph& summary, const SummaryMapping& mapping,
                                       const TripleGraph& original, unsigned max_path_len,
                                       std::size_t max_paths = 1000000);

}  // namespace summgcn
