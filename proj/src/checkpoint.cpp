#include "summgcn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "summgcn/errors.hpp"

namespace summgcn {

namespace {

constexpr char kMagic[8] = {'S', 'G', 'C', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_matrix(std::ostream& out, const std::string& name, const DenseMatrix& m) {
    put_string(out, name);
    put_u32(out, static_cast<std::uint32_t>(m.rows));
    put_u32(out, static_cast<std::uint32_t>(m.cols));
    out.write(reinterpret_cast<const char*>(m.values.data()),
              static_cast<std::streamsize>(m.values.size() * sizeof(double)));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw DataError("checkpoint truncated");
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw DataError("checkpoint truncated");
    return v;
}

std::string get_string(std::istream& in) {
    std::uint32_t len = get_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw DataError("checkpoint truncated");
    return s;
}

DenseMatrix get_matrix(std::istream& in) {
    std::uint32_t rows = get_u32(in);
    std::uint32_t cols = get_u32(in);
    DenseMatrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(double)));
    if (!in) throw DataError("checkpoint truncated");
    return m;
}

std::string slot_name(const RgcnParams& p, std::size_t slot) {
    std::size_t r = p.relation_labels.size();
    if (slot < r) return "rel:" + p.relation_labels[slot];
    if (p.inverses && slot < 2 * r) return "inv:" + p.relation_labels[slot - r];
    return "self";
}

}  // namespace

void save_checkpoint(const RgcnParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path);

    out.write(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, params.inverses ? 1u : 0u);
    put_u64(out, params.num_nodes);
    put_u32(out, static_cast<std::uint32_t>(params.hidden));
    put_u32(out, static_cast<std::uint32_t>(params.classes));

    put_u32(out, static_cast<std::uint32_t>(params.relation_labels.size()));
    for (const auto& s : params.relation_labels) put_string(out, s);
    put_u32(out, static_cast<std::uint32_t>(params.class_names.size()));
    for (const auto& s : params.class_names) put_string(out, s);
    put_u32(out, static_cast<std::uint32_t>(params.node_labels.size()));
    for (const auto& s : params.node_labels) put_string(out, s);

    put_u32(out, static_cast<std::uint32_t>(params.layer1.size() + params.layer2.size()));
    for (std::size_t s = 0; s < params.layer1.size(); ++s)
        put_matrix(out, "layer1." + slot_name(params, s), params.layer1[s]);
    for (std::size_t s = 0; s < params.layer2.size(); ++s)
        put_matrix(out, "layer2." + slot_name(params, s), params.layer2[s]);
    if (!out) throw DataError("write failed for checkpoint: " + path);
}

RgcnParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DataError("not a summgcn checkpoint: " + path);
    std::uint32_t version = get_u32(in);
    if (version != kVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version));

    RgcnParams p;
    p.inverses = get_u32(in) != 0;
    p.num_nodes = get_u64(in);
    p.hidden = get_u32(in);
    p.classes = get_u32(in);

    std::uint32_t nrel = get_u32(in);
    p.relation_labels.reserve(nrel);
    for (std::uint32_t i = 0; i < nrel; ++i) p.relation_labels.push_back(get_string(in));
    std::uint32_t ncls = get_u32(in);
    p.class_names.reserve(ncls);
    for (std::uint32_t i = 0; i < ncls; ++i) p.class_names.push_back(get_string(in));
    std::uint32_t nnode = get_u32(in);
    p.node_labels.reserve(nnode);
    for (std::uint32_t i = 0; i < nnode; ++i) p.node_labels.push_back(get_string(in));

    std::uint32_t tensors = get_u32(in);
    std::size_t expected_slots = (p.inverses ? 2 * p.relation_labels.size() : p.relation_labels.size()) + 1;
    if (tensors != 2 * expected_slots) throw DataError("checkpoint tensor count mismatch");
    for (std::uint32_t i = 0; i < tensors; ++i) {
        std::string name = get_string(in);
        DenseMatrix m = get_matrix(in);
        if (name.rfind("layer1.", 0) == 0) {
            p.layer1.push_back(std::move(m));
        } else if (name.rfind("layer2.", 0) == 0) {
            p.layer2.push_back(std::move(m));
        } else {
            throw DataError("unknown checkpoint section '" + name + "'");
        }
    }
    if (p.layer1.size() != expected_slots || p.layer2.size() != expected_slots)
        throw DataError("checkpoint layer sections incomplete");
    return p;
}

}  // namespace summgcn
