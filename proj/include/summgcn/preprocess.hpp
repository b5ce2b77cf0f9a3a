#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "summgcn/graph.hpp"

namespace summgcn {

inline constexpr std::string_view kRdfTypeIri = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kOwlPrefix = "http://www.w3.org/2002/07/owl#";

// node id -> set of type indices into an ordered type vocabulary.
struct TypeAssignment {
    std::vector<std::string> type_vocabulary;  // ordered by first occurrence
    std::unordered_map<NodeId, std::vector<std::uint32_t>> types_of;  // sorted unique per node

    bool empty() const { return types_of.empty(); }
};

// Old index -> new index after edge removal re-compaction; nullopt = dropped.
struct Remap {
    std::vector<std::optional<NodeId>> node_map;
    std::vector<std::optional<RelationId>> relation_map;
};

struct StripResult {
    TripleGraph graph;
    TypeAssignment types;  // keyed by NEW node ids
    Remap remap;
};

struct FilterResult {
    TripleGraph graph;
    Remap remap;
};

// Removes every edge whose predicate label equals `type_predicate` and
// collects (source -> target label) pairs into a TypeAssignment. Type-object
// nodes left without any edge are dropped, unless they collected types of
// their own. Node ids are re-compacted; the relation vocabulary is rebuilt
// from the remaining edges, ordered by first occurrence.
StripResult strip_types(const TripleGraph& g, std::string_view type_predicate = kRdfTypeIri);

// Removes every edge whose predicate IRI starts with the OWL namespace
// prefix; re-compacts as strip_types does.
FilterResult filter_owl(const TripleGraph& g);

// Removes every edge whose target is a literal, and the then-isolated
// literal nodes. Used by the literal-ablation mode only; the default
// pipeline keeps literal edges when computing summaries.
FilterResult drop_literal_edges(const TripleGraph& g);

// Re-keys a TypeAssignment through a Remap. Entries of dropped nodes vanish;
// the type vocabulary is unchanged.
TypeAssignment remap_types(const TypeAssignment& types, const Remap& remap);

}  // namespace summgcn
