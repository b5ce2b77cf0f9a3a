#include "summgcn/labels.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <unordered_map>

#include "summgcn/rng.hpp"

namespace summgcn {

LabelMatrix binary_labels(const TypeAssignment& types, std::size_t num_nodes) {
    LabelMatrix m;
    m.rows = num_nodes;
    m.cols = types.type_vocabulary.size();
    m.columns = types.type_vocabulary;
    m.values.assign(m.rows * m.cols, 0.0);
    m.masked.assign(m.rows, 0);
    for (const auto& [node, ts] : types.types_of) {
        if (node >= num_nodes) throw DataError("type assignment references a node outside the universe");
        m.masked[node] = 1;
        for (std::uint32_t t : ts) m.at(node, t) = 1.0;
    }
    return m;
}

LabelMatrix summary_labels(const LabelMatrix& binary, const SummaryMapping& mapping) {
    for (double v : binary.values) {
        if (v != 0.0 && v != 1.0) throw ConfigError("summary_labels requires a binary label matrix");
    }
    LabelMatrix m;
    m.rows = mapping.num_partitions();
    m.cols = binary.cols;
    m.columns = binary.columns;
    m.values.assign(m.rows * m.cols, 0.0);
    m.masked.assign(m.rows, 0);

    for (PartitionId p = 0; p < mapping.num_partitions(); ++p) {
        std::size_t labeled_members = 0;
        for (NodeId v : mapping.member_lists[p]) {
            if (v >= binary.rows || !binary.masked[v]) continue;
            ++labeled_members;
            for (std::size_t c = 0; c < m.cols; ++c) m.at(p, c) += binary.at(v, c);
        }
        if (labeled_members == 0) continue;
        m.masked[p] = 1;
        for (std::size_t c = 0; c < m.cols; ++c) m.at(p, c) /= static_cast<double>(labeled_members);
    }
    return m;
}

std::vector<Split> make_folds(const std::vector<NodeId>& mask, unsigned num_folds,
                              std::uint64_t seed) {
    if (num_folds < 2) throw SizeError("cross-validation needs at least 2 folds");
    if (mask.size() < num_folds)
        throw SizeError("only " + std::to_string(mask.size()) + " supervised rows for " +
                        std::to_string(num_folds) + " folds");

    std::vector<NodeId> shuffled = mask;
    Rng rng(seed);
    rng.shuffle(shuffled);

    std::size_t base = shuffled.size() / num_folds;
    std::size_t extra = shuffled.size() % num_folds;

    std::vector<Split> folds;
    folds.reserve(num_folds);
    std::size_t offset = 0;
    for (unsigned f = 0; f < num_folds; ++f) {
        std::size_t block = base + (f < extra ? 1 : 0);
        Split s;
        s.fold = f;
        s.seed = seed;
        s.test.assign(shuffled.begin() + offset, shuffled.begin() + offset + block);
        s.train.reserve(shuffled.size() - block);
        s.train.insert(s.train.end(), shuffled.begin(), shuffled.begin() + offset);
        s.train.insert(s.train.end(), shuffled.begin() + offset + block, shuffled.end());
        std::sort(s.test.begin(), s.test.end());
        std::sort(s.train.begin(), s.train.end());
        folds.push_back(std::move(s));
        offset += block;
    }
    return folds;
}

LabelMatrix rounded(const LabelMatrix& m) {
    LabelMatrix r = m;
    for (double& v : r.values) v = v >= 0.5 ? 1.0 : 0.0;
    return r;
}

void write_labels_tsv(const LabelMatrix& m, const TripleGraph& g, std::ostream& out) {
    if (m.rows != g.num_nodes()) throw DataError("label matrix does not cover the graph's nodes");
    char buf[40];
    for (NodeId r = 0; r < m.rows; ++r) {
        if (!m.masked[r]) continue;
        for (std::size_t c = 0; c < m.cols; ++c) {
            double w = m.at(r, c);
            if (w == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", w);
            out << g.node(r).label << '\t' << m.columns[c] << '\t' << buf << '\n';
        }
    }
}

LabelMatrix read_labels_tsv(std::istream& in, const TripleGraph& g) {
    std::unordered_map<std::string, NodeId> node_of;
    node_of.reserve(g.num_nodes());
    for (const NodeRef& n : g.nodes()) node_of.emplace(n.label, n.id);

    LabelMatrix m;
    m.rows = g.num_nodes();
    m.masked.assign(m.rows, 0);

    std::unordered_map<std::string, std::size_t> column_of;
    std::vector<std::tuple<NodeId, std::size_t, double>> entries;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw ParseError(line_number, "label row needs 3 tab-separated fields");
        std::string label = line.substr(0, t1);
        std::string type = line.substr(t1 + 1, t2 - t1 - 1);
        double weight;
        try {
            weight = std::stod(line.substr(t2 + 1));
        } catch (const std::logic_error&) {
            throw ParseError(line_number, "label row has a non-numeric weight");
        }
        auto node_it = node_of.find(label);
        if (node_it == node_of.end())
            throw ParseError(line_number, "label row references unknown node '" + label + "'");
        auto [col_it, inserted] = column_of.try_emplace(type, m.columns.size());
        if (inserted) m.columns.push_back(type);
        entries.emplace_back(node_it->second, col_it->second, weight);
        m.masked[node_it->second] = 1;
    }

    m.cols = m.columns.size();
    m.values.assign(m.rows * m.cols, 0.0);
    for (auto [r, c, w] : entries) m.at(r, c) = w;
    return m;
}

}  // namespace summgcn
