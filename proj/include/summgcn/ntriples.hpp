#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "summgcn/graph.hpp"

namespace summgcn {

struct ParseOptions {
    // When true, every literal occurrence becomes its own node. Default merges
    // literals with an identical lexical form into one node.
    bool distinct_literals = false;
};

// Line-oriented N-Triples: `<subj> <pred> <obj> .` per line, IRIs in angle
// brackets, blank nodes as `_:x`, literals quoted with optional `^^<type>`
// or `@lang` tag. Empty lines and `#` comment lines are skipped.
// Node and relation vocabularies are deduplicated; edges keep input order.
// Throws ParseError (with line number) on malformed input.
TripleGraph parse_ntriples(std::istream& in, const ParseOptions& options = {});
TripleGraph parse_ntriples_file(const std::string& path, const ParseOptions& options = {});

// Emits one statement per edge, subjects/objects exactly as parsed.
// Nodes without any edge do not appear (N-Triples cannot express them).
void write_ntriples(const TripleGraph& g, std::ostream& out);
std::string to_ntriples(const TripleGraph& g);

}  // namespace summgcn
