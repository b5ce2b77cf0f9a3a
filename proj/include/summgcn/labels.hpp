#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "summgcn/graph.hpp"
#include "summgcn/preprocess.hpp"
#include "summgcn/summary.hpp"

namespace summgcn {

// node x type matrix. Binary {0,1} for original nodes, weights in [0,1] for
// summary nodes. The mask marks rows that carry supervision.
struct LabelMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;        // row-major
    std::vector<std::uint8_t> masked;  // per row
    std::vector<std::string> columns;  // type vocabulary, positional

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }

    std::vector<NodeId> masked_rows() const {
        std::vector<NodeId> out;
        for (NodeId r = 0; r < rows; ++r)
            if (masked[r]) out.push_back(r);
        return out;
    }
};

struct Split {
    std::vector<NodeId> train;
    std::vector<NodeId> test;
    unsigned fold = 0;
    std::uint64_t seed = 0;
};

// Row v has 1 at column t iff the assignment lists (v, t); rows with at
// least one type are masked.
LabelMatrix binary_labels(const TypeAssignment& types, std::size_t num_nodes);

// Weighted summary labels: for a partition, each column holds the relative
// frequency of that type among the partition's masked members. Partitions
// without masked members are unmasked. Column order is preserved so weights
// transfer positionally. Throws ConfigError when the input is not binary.
LabelMatrix summary_labels(const LabelMatrix& binary, const SummaryMapping& mapping);

// Deterministic seeded shuffle; fold i's test set is the i-th contiguous
// block (the first |mask| mod num_folds blocks are one larger). Together the
// test sets partition the mask. Throws SizeError when num_folds < 2 or the
// mask is smaller than num_folds.
std::vector<Split> make_folds(const std::vector<NodeId>& mask, unsigned num_folds,
                              std::uint64_t seed);

// Rounds every entry at threshold 0.5, ties up. Mask is preserved.
LabelMatrix rounded(const LabelMatrix& m);

// TSV export `node_label<TAB>type_iri<TAB>weight`: nonzero entries of masked rows.
void write_labels_tsv(const LabelMatrix& m, const TripleGraph& g, std::ostream& out);

// Rebuilds a LabelMatrix over the graph's nodes; columns ordered by first
// occurrence in the stream. Rows present in the stream are masked.
LabelMatrix read_labels_tsv(std::istream& in, const TripleGraph& g);

}  // namespace summgcn
