#include "summgcn/precise.hpp"

#include <array>
#include <unordered_set>

#include "summgcn/errors.hpp"

namespace summgcn {

namespace {

struct TripleKeyHash {
    std::size_t operator()(const std::array<std::uint32_t, 3>& k) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint32_t x : k) {
            h ^= x;
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Walker {
    const std::vector<std::vector<std::size_t>>& adjacency;  // summary node -> edge indices
    const std::vector<Triple>& edges;
    const std::vector<bool>& complete;
    unsigned max_len;
    std::size_t max_paths;
    std::size_t enumerated = 0;
    std::vector<SummaryPath> violations;
    SummaryPath current;

    void extend(PartitionId node, bool imprecise_so_far, unsigned len) {
        if (len == max_len) return;
        for (std::size_t e : adjacency[node]) {
            if (++enumerated > max_paths)
                throw SizeError("summary path enumeration exceeds the guard of " +
                                std::to_string(max_paths) + " paths");
            const Triple& t = edges[e];
            bool imprecise = imprecise_so_far || !complete[e];
            current.nodes.push_back(t.target);
            current.predicates.push_back(t.predicate);
            if (imprecise) violations.push_back(current);
            extend(t.target, imprecise, len + 1);
            current.nodes.pop_back();
            current.predicates.pop_back();
        }
    }
};

}  // namespace

std::vector<SummaryPath> check_precise(const TripleGraph& summary, const SummaryMapping& mapping,
                                       const TripleGraph& original, unsigned max_path_len,
                                       std::size_t max_paths) {
    std::unordered_set<std::array<std::uint32_t, 3>, TripleKeyHash> original_triples;
    original_triples.reserve(original.num_edges());
    for (const Triple& t : original.edges())
        original_triples.insert({t.source, t.predicate, t.target});

    // A summary edge is complete when every member pair realizes it.
    std::vector<bool> complete(summary.num_edges(), true);
    for (std::size_t e = 0; e < summary.num_edges(); ++e) {
        const Triple& t = summary.edges()[e];
        const auto& sources = mapping.member_lists.at(t.source);
        const auto& targets = mapping.member_lists.at(t.target);
        for (NodeId u : sources) {
            for (NodeId v : targets) {
                if (!original_triples.count({u, t.predicate, v})) {
                    complete[e] = false;
                    break;
                }
            }
            if (!complete[e]) break;
        }
    }

    std::vector<std::vector<std::size_t>> adjacency(summary.num_nodes());
    for (std::size_t e = 0; e < summary.num_edges(); ++e)
        adjacency[summary.edges()[e].source].push_back(e);

    Walker walker{adjacency, summary.edges(), complete, max_path_len, max_paths};
    for (PartitionId p = 0; p < summary.num_nodes(); ++p) {
        walker.current.nodes.assign(1, p);
        walker.current.predicates.clear();
        walker.extend(p, false, 0);
    }
    return std::move(walker.violations);
}

}  // namespace summgcn
