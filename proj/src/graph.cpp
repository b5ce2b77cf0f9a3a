#include "summgcn/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace summgcn {

namespace {

void check_id(const TripleGraph& g, NodeId id) {
    if (id >= g.num_nodes()) throw std::out_of_range("node id " + std::to_string(id) + " outside graph");
}

void sort_unique(std::vector<RelationId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<RelationId> attributes(const TripleGraph& g, NodeId id) {
    check_id(g, id);
    std::vector<RelationId> out;
    for (const Triple& t : g.edges()) {
        if (t.source == id) out.push_back(t.predicate);
    }
    sort_unique(out);
    return out;
}

std::vector<RelationId> inverse_attributes(const TripleGraph& g, NodeId id) {
    check_id(g, id);
    std::vector<RelationId> in;
    for (const Triple& t : g.edges()) {
        if (t.target == id) in.push_back(t.predicate);
    }
    sort_unique(in);
    return in;
}

std::vector<std::vector<std::pair<RelationId, NodeId>>> out_adjacency(const TripleGraph& g) {
    std::vector<std::vector<std::pair<RelationId, NodeId>>> adj(g.num_nodes());
    for (const Triple& t : g.edges()) adj[t.source].emplace_back(t.predicate, t.target);
    return adj;
}

std::vector<std::vector<std::pair<RelationId, NodeId>>> in_adjacency(const TripleGraph& g) {
    std::vector<std::vector<std::pair<RelationId, NodeId>>> adj(g.num_nodes());
    for (const Triple& t : g.edges()) adj[t.target].emplace_back(t.predicate, t.source);
    return adj;
}

}  // namespace summgcn
