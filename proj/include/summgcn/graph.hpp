#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "summgcn/errors.hpp"

namespace summgcn {

using NodeId = std::uint32_t;
using RelationId = std::uint32_t;

enum class NodeKind : std::uint8_t { Resource, Literal };

struct NodeRef {
    NodeId id;
    std::string label;  // IRI (no angle brackets), blank-node id, or the literal token as parsed
    NodeKind kind;
};

struct Triple {
    NodeId source;
    RelationId predicate;
    NodeId target;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// Labeled directed multigraph. Nodes and relations are dictionary-encoded
// with dense contiguous indices; edges keep their insertion order.
// Immutable once built; concurrent reads are safe.
class TripleGraph {
public:
    NodeId add_node(std::string label, NodeKind kind) {
        NodeId id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(NodeRef{id, std::move(label), kind});
        return id;
    }

    RelationId add_relation(std::string label) {
        RelationId id = static_cast<RelationId>(relations_.size());
        relations_.push_back(std::move(label));
        return id;
    }

    void add_edge(NodeId source, RelationId predicate, NodeId target) {
        if (source >= nodes_.size() || target >= nodes_.size())
            throw DataError("edge references a node id outside the graph");
        if (predicate >= relations_.size())
            throw DataError("edge references a relation id outside the vocabulary");
        if (nodes_[source].kind == NodeKind::Literal)
            throw DataError("literal node cannot be the source of an edge");
        edges_.push_back(Triple{source, predicate, target});
    }

    const std::vector<NodeRef>& nodes() const { return nodes_; }
    const std::vector<std::string>& relations() const { return relations_; }
    const std::vector<Triple>& edges() const { return edges_; }

    const NodeRef& node(NodeId id) const { return nodes_.at(id); }
    const std::string& relation_label(RelationId id) const { return relations_.at(id); }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_relations() const { return relations_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    // The size of a graph is its number of edges.
    std::size_t size() const { return edges_.size(); }

private:
    std::vector<NodeRef> nodes_;
    std::vector<std::string> relations_;
    std::vector<Triple> edges_;
};

// Set of predicates on the node's outgoing edges, sorted ascending.
// Empty for sinks and literals. Throws std::out_of_range on a bad id.
std::vector<RelationId> attributes(const TripleGraph& g, NodeId id);

// Same over incoming edges.
std::vector<RelationId> inverse_attributes(const TripleGraph& g, NodeId id);

// Per-node (predicate, neighbor) lists in edge order; one entry per edge.
std::vector<std::vector<std::pair<RelationId, NodeId>>> out_adjacency(const TripleGraph& g);
std::vector<std::vector<std::pair<RelationId, NodeId>>> in_adjacency(const TripleGraph& g);

}  // namespace summgcn
