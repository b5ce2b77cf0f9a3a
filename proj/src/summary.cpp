#include "summgcn/summary.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "summgcn/errors.hpp"

namespace summgcn {

namespace {

// Signatures are encoded as flat u64 vectors so one grouping routine serves
// all four summarization relations.
using Signature = std::vector<std::uint64_t>;

constexpr std::uint64_t kSeparator = ~0ull;

struct SignatureHash {
    std::size_t operator()(const Signature& s) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint64_t x : s) {
            h ^= x;
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

// Partition ids assigned by first occurrence of each signature in node-id
// order, which makes identical inputs yield identical partition ids.
std::vector<PartitionId> group_by_signature(const std::vector<Signature>& sigs) {
    std::vector<PartitionId> partition_of(sigs.size());
    std::unordered_map<Signature, PartitionId, SignatureHash> seen;
    for (std::size_t v = 0; v < sigs.size(); ++v) {
        auto [it, inserted] = seen.try_emplace(sigs[v], static_cast<PartitionId>(seen.size()));
        partition_of[v] = it->second;
    }
    return partition_of;
}

SummaryResult materialize(const TripleGraph& g, std::vector<PartitionId> partition_of,
                          std::optional<PartitionId> empty_partition) {
    SummaryResult result;
    result.mapping.partition_of = std::move(partition_of);
    result.mapping.empty_partition = empty_partition;

    PartitionId num_partitions = 0;
    for (PartitionId p : result.mapping.partition_of) num_partitions = std::max(num_partitions, p + 1);
    if (result.mapping.partition_of.empty()) num_partitions = 0;

    result.mapping.member_lists.resize(num_partitions);
    for (NodeId v = 0; v < result.mapping.partition_of.size(); ++v)
        result.mapping.member_lists[result.mapping.partition_of[v]].push_back(v);

    for (PartitionId p = 0; p < num_partitions; ++p)
        result.summary.add_node("urn:summary:" + std::to_string(p), NodeKind::Resource);
    for (const std::string& label : g.relations()) result.summary.add_relation(label);

    // Summary triples are a set: map each original edge endpoint-wise and
    // keep the first occurrence of every (source, predicate, target).
    std::set<std::tuple<PartitionId, RelationId, PartitionId>> seen;
    for (const Triple& t : g.edges()) {
        PartitionId s = result.mapping.partition_of[t.source];
        PartitionId o = result.mapping.partition_of[t.target];
        if (seen.emplace(s, t.predicate, o).second) result.summary.add_edge(s, t.predicate, o);
    }
    return result;
}

std::vector<std::vector<std::uint64_t>> out_sets(const TripleGraph& g) {
    std::vector<std::vector<std::uint64_t>> sets(g.num_nodes());
    for (const Triple& t : g.edges()) sets[t.source].push_back(t.predicate);
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return sets;
}

std::vector<std::vector<std::uint64_t>> in_sets(const TripleGraph& g) {
    std::vector<std::vector<std::uint64_t>> sets(g.num_nodes());
    for (const Triple& t : g.edges()) sets[t.target].push_back(t.predicate);
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return sets;
}

std::optional<PartitionId> find_empty_partition(const std::vector<PartitionId>& partition_of,
                                                const std::vector<bool>& is_empty_sig) {
    for (NodeId v = 0; v < partition_of.size(); ++v) {
        if (is_empty_sig[v]) return partition_of[v];
    }
    return std::nullopt;
}

}  // namespace

SummaryResult attribute_summary(const TripleGraph& g) {
    auto sets = out_sets(g);
    std::vector<Signature> sigs(g.num_nodes());
    std::vector<bool> empty_sig(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        sigs[v] = sets[v];
        empty_sig[v] = sets[v].empty();
    }
    auto partition_of = group_by_signature(sigs);
    auto empty = find_empty_partition(partition_of, empty_sig);
    return materialize(g, std::move(partition_of), empty);
}

SummaryResult io_summary(const TripleGraph& g) {
    auto out = out_sets(g);
    auto in = in_sets(g);
    std::vector<Signature> sigs(g.num_nodes());
    std::vector<bool> empty_sig(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        Signature s = out[v];
        s.push_back(kSeparator);
        s.insert(s.end(), in[v].begin(), in[v].end());
        sigs[v] = std::move(s);
        empty_sig[v] = out[v].empty() && in[v].empty();
    }
    auto partition_of = group_by_signature(sigs);
    auto empty = find_empty_partition(partition_of, empty_sig);
    return materialize(g, std::move(partition_of), empty);
}

SummaryResult incoming_attribute_summary(const TripleGraph& g) {
    auto sets = in_sets(g);
    std::vector<Signature> sigs(g.num_nodes());
    std::vector<bool> empty_sig(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        sigs[v] = sets[v];
        empty_sig[v] = sets[v].empty();
    }
    auto partition_of = group_by_signature(sigs);
    auto empty = find_empty_partition(partition_of, empty_sig);
    return materialize(g, std::move(partition_of), empty);
}

SummaryResult k_forward_bisimulation(const TripleGraph& g, BisimConfig cfg) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<std::pair<RelationId, NodeId>>> adj(n);
    for (const Triple& t : g.edges()) adj[t.source].emplace_back(t.predicate, t.target);

    std::vector<PartitionId> block(n, 0);
    std::size_t block_count = n > 0 ? 1 : 0;
    bool refined_once = false;

    for (unsigned level = 1; level <= cfg.k && n > 0; ++level) {
        std::vector<Signature> sigs(n);
        for (NodeId v = 0; v < n; ++v) {
            Signature s;
            s.reserve(adj[v].size() + 1);
            s.push_back(block[v]);
            for (auto [rel, target] : adj[v])
                s.push_back((static_cast<std::uint64_t>(rel) << 32) | block[target]);
            std::sort(s.begin() + 1, s.end());
            s.erase(std::unique(s.begin() + 1, s.end()), s.end());
            sigs[v] = std::move(s);
        }
        auto next = group_by_signature(sigs);
        std::size_t next_count = 0;
        for (PartitionId p : next) next_count = std::max<std::size_t>(next_count, p + 1);
        refined_once = true;
        bool stable = next_count == block_count;
        block = std::move(next);
        block_count = next_count;
        // Refinement only splits blocks: a stable count means a fixed point.
        if (stable) break;
    }

    std::optional<PartitionId> empty;
    if (refined_once) {
        for (NodeId v = 0; v < n; ++v) {
            if (adj[v].empty()) {
                empty = block[v];
                break;
            }
        }
    }
    return materialize(g, std::move(block), empty);
}

double compression_rate(const TripleGraph& g, const TripleGraph& summary) {
    if (g.num_edges() == 0) throw DataError("compression rate undefined for a graph without edges");
    return 1.0 - static_cast<double>(summary.num_edges()) / static_cast<double>(g.num_edges());
}

void write_mapping_tsv(const SummaryMapping& mapping, const TripleGraph& original, std::ostream& out) {
    for (NodeId v = 0; v < mapping.partition_of.size(); ++v) {
        out << original.node(v).label << '\t' << mapping.partition_of[v] << '\n';
    }
}

std::vector<std::pair<std::string, PartitionId>> read_mapping_tsv(std::istream& in) {
    std::vector<std::pair<std::string, PartitionId>> rows;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.rfind('\t');
        if (tab == std::string::npos) throw ParseError(line_number, "mapping row lacks a tab separator");
        try {
            rows.emplace_back(line.substr(0, tab),
                              static_cast<PartitionId>(std::stoul(line.substr(tab + 1))));
        } catch (const std::logic_error&) {
            throw ParseError(line_number, "mapping row has a non-numeric partition id");
        }
    }
    return rows;
}

}  // namespace summgcn
