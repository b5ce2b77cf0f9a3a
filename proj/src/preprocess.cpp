#include "summgcn/preprocess.hpp"

#include <algorithm>

namespace summgcn {

namespace {

// Rebuilds the graph from the edges where keep_edge is true. A node is
// dropped iff it was the target of a removed edge, ended up with no
// remaining edge, and is not protected. Relation vocabulary is rebuilt by
// first occurrence over the kept edges.
FilterResult compact(const TripleGraph& g, const std::vector<bool>& keep_edge,
                     const std::vector<bool>* protected_nodes) {
    const std::size_t n = g.num_nodes();
    std::vector<bool> removed_target(n, false);
    std::vector<bool> has_edge(n, false);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Triple& t = g.edges()[e];
        if (keep_edge[e]) {
            has_edge[t.source] = true;
            has_edge[t.target] = true;
        } else {
            removed_target[t.target] = true;
        }
    }

    FilterResult result;
    result.remap.node_map.assign(n, std::nullopt);
    result.remap.relation_map.assign(g.num_relations(), std::nullopt);

    for (NodeId v = 0; v < n; ++v) {
        bool drop = removed_target[v] && !has_edge[v] &&
                    !(protected_nodes && (*protected_nodes)[v]);
        if (drop) continue;
        const NodeRef& ref = g.node(v);
        result.remap.node_map[v] = result.graph.add_node(ref.label, ref.kind);
    }

    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (!keep_edge[e]) continue;
        const Triple& t = g.edges()[e];
        auto& rel = result.remap.relation_map[t.predicate];
        if (!rel) rel = result.graph.add_relation(g.relation_label(t.predicate));
        result.graph.add_edge(*result.remap.node_map[t.source], *rel,
                              *result.remap.node_map[t.target]);
    }
    return result;
}

}  // namespace

StripResult strip_types(const TripleGraph& g, std::string_view type_predicate) {
    std::vector<bool> keep(g.num_edges(), true);
    TypeAssignment raw;  // keyed by old node ids until the remap is known
    std::unordered_map<std::string, std::uint32_t> type_index;
    std::vector<bool> has_own_types(g.num_nodes(), false);

    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Triple& t = g.edges()[e];
        if (g.relation_label(t.predicate) != type_predicate) continue;
        keep[e] = false;
        const std::string& type_label = g.node(t.target).label;
        auto [it, inserted] = type_index.try_emplace(type_label, raw.type_vocabulary.size());
        if (inserted) raw.type_vocabulary.push_back(type_label);
        raw.types_of[t.source].push_back(it->second);
        has_own_types[t.source] = true;
    }

    FilterResult compacted = compact(g, keep, &has_own_types);

    StripResult result;
    result.graph = std::move(compacted.graph);
    result.remap = std::move(compacted.remap);
    result.types.type_vocabulary = std::move(raw.type_vocabulary);
    for (auto& [old_id, types] : raw.types_of) {
        std::sort(types.begin(), types.end());
        types.erase(std::unique(types.begin(), types.end()), types.end());
        if (auto new_id = result.remap.node_map[old_id]) {
            result.types.types_of.emplace(*new_id, std::move(types));
        }
    }
    return result;
}

FilterResult filter_owl(const TripleGraph& g) {
    std::vector<bool> keep(g.num_edges(), true);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const std::string& label = g.relation_label(g.edges()[e].predicate);
        if (label.rfind(kOwlPrefix, 0) == 0) keep[e] = false;
    }
    return compact(g, keep, nullptr);
}

FilterResult drop_literal_edges(const TripleGraph& g) {
    std::vector<bool> keep(g.num_edges(), true);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (g.node(g.edges()[e].target).kind == NodeKind::Literal) keep[e] = false;
    }
    return compact(g, keep, nullptr);
}

TypeAssignment remap_types(const TypeAssignment& types, const Remap& remap) {
    TypeAssignment out;
    out.type_vocabulary = types.type_vocabulary;
    for (const auto& [old_id, t] : types.types_of) {
        if (old_id < remap.node_map.size()) {
            if (auto new_id = remap.node_map[old_id]) out.types_of.emplace(*new_id, t);
        }
    }
    return out;
}

}  // namespace summgcn
