#include "summgcn/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace summgcn {

namespace {

enum class TermType { Iri, Blank, Literal };

struct Term {
    TermType type;
    std::string token;     // exact original span
    std::string identity;  // IRI text / blank id / literal lexical form
};

struct LineParser {
    std::string_view line;
    std::size_t pos = 0;
    std::size_t line_number;

    LineParser(std::string_view l, std::size_t n) : line(l), line_number(n) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_number, msg); }

    bool eof() const { return pos >= line.size(); }
    char peek() const { return line[pos]; }

    void skip_ws() {
        while (!eof() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    }

    Term parse_iri() {
        std::size_t start = pos;
        ++pos;  // '<'
        while (!eof() && line[pos] != '>') ++pos;
        if (eof()) fail("unterminated IRI");
        ++pos;  // '>'
        std::string token(line.substr(start, pos - start));
        std::string identity = token.substr(1, token.size() - 2);
        if (identity.empty()) fail("empty IRI");
        return Term{TermType::Iri, std::move(token), std::move(identity)};
    }

    Term parse_blank() {
        std::size_t start = pos;
        pos += 2;  // "_:"
        while (!eof() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        std::string token(line.substr(start, pos - start));
        if (token.size() <= 2) fail("empty blank node label");
        return Term{TermType::Blank, token, token};
    }

    Term parse_literal() {
        std::size_t start = pos;
        ++pos;  // opening quote
        std::size_t lex_start = pos;
        while (!eof()) {
            char c = line[pos];
            if (c == '\\') {
                pos += 2;
                continue;
            }
            if (c == '"') break;
            ++pos;
        }
        if (eof()) fail("unterminated literal");
        std::string identity(line.substr(lex_start, pos - lex_start));
        ++pos;  // closing quote
        if (!eof() && line[pos] == '^') {
            if (pos + 1 >= line.size() || line[pos + 1] != '^') fail("malformed datatype suffix");
            pos += 2;
            if (eof() || line[pos] != '<') fail("datatype IRI expected after ^^");
            parse_iri();
        } else if (!eof() && line[pos] == '@') {
            ++pos;
            std::size_t tag_start = pos;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '-')) ++pos;
            if (pos == tag_start) fail("empty language tag");
        }
        std::string token(line.substr(start, pos - start));
        return Term{TermType::Literal, std::move(token), std::move(identity)};
    }

    Term parse_term(bool allow_literal, bool allow_blank) {
        skip_ws();
        if (eof()) fail("unexpected end of statement");
        char c = peek();
        if (c == '<') return parse_iri();
        if (c == '_' && pos + 1 < line.size() && line[pos + 1] == ':') {
            if (!allow_blank) fail("blank node not allowed here");
            return parse_blank();
        }
        if (c == '"') {
            if (!allow_literal) fail("literal not allowed here");
            return parse_literal();
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void expect_terminator() {
        skip_ws();
        if (eof() || line[pos] != '.') fail("statement must end with '.'");
        ++pos;
        skip_ws();
        if (!eof() && line[pos] != '#') fail("trailing content after '.'");
    }
};

class GraphBuilder {
public:
    explicit GraphBuilder(const ParseOptions& options) : options_(options) {}

    NodeId node_for(const Term& term) {
        NodeKind kind = term.type == TermType::Literal ? NodeKind::Literal : NodeKind::Resource;
        if (kind == NodeKind::Literal && options_.distinct_literals)
            return graph_.add_node(term.token, kind);

        std::string key;
        key.reserve(term.identity.size() + 1);
        key.push_back(kind == NodeKind::Literal ? 'L' : 'R');
        key.append(term.identity);
        auto [it, inserted] = node_ids_.try_emplace(std::move(key), 0);
        if (inserted) {
            const std::string& label = term.type == TermType::Literal ? term.token : term.identity;
            it->second = graph_.add_node(label, kind);
        }
        return it->second;
    }

    RelationId relation_for(const Term& term) {
        auto [it, inserted] = relation_ids_.try_emplace(term.identity, 0);
        if (inserted) it->second = graph_.add_relation(term.identity);
        return it->second;
    }

    TripleGraph take() { return std::move(graph_); }
    TripleGraph& graph() { return graph_; }

private:
    ParseOptions options_;
    TripleGraph graph_;
    std::unordered_map<std::string, NodeId> node_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
};

bool is_skippable(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t') return false;
    }
    return true;
}

}  // namespace

TripleGraph parse_ntriples(std::istream& in, const ParseOptions& options) {
    GraphBuilder builder(options);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_skippable(line)) continue;

        LineParser p(line, line_number);
        Term subject = p.parse_term(/*allow_literal=*/false, /*allow_blank=*/true);
        p.skip_ws();
        if (p.eof() || p.peek() != '<') p.fail("predicate must be an IRI");
        Term predicate = p.parse_iri();
        Term object = p.parse_term(/*allow_literal=*/true, /*allow_blank=*/true);
        p.expect_terminator();

        NodeId s = builder.node_for(subject);
        NodeId o = builder.node_for(object);
        RelationId r = builder.relation_for(predicate);
        builder.graph().add_edge(s, r, o);
    }
    return builder.take();
}

TripleGraph parse_ntriples_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open N-Triples file: " + path);
    return parse_ntriples(in, options);
}

namespace {

void write_resource(const std::string& label, std::ostream& out) {
    if (label.rfind("_:", 0) == 0) {
        out << label;
    } else {
        out << '<' << label << '>';
    }
}

}  // namespace

void write_ntriples(const TripleGraph& g, std::ostream& out) {
    for (const Triple& t : g.edges()) {
        const NodeRef& s = g.node(t.source);
        const NodeRef& o = g.node(t.target);
        write_resource(s.label, out);
        out << ' ' << '<' << g.relation_label(t.predicate) << '>' << ' ';
        if (o.kind == NodeKind::Literal) {
            out << o.label;
        } else {
            write_resource(o.label, out);
        }
        out << " .\n";
    }
}

std::string to_ntriples(const TripleGraph& g) {
    std::ostringstream out;
    write_ntriples(g, out);
    return out.str();
}

}  // namespace summgcn
