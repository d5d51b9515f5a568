#include "nacdens/nac_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace nac {

namespace {

int node_depth(const NacNode& n) {
    int d = 1;
    for (const auto& c : n.children)
        if (!is_leaf(c)) d = std::max(d, 1 + node_depth(std::get<NacNode>(c)));
    return d;
}

void collect_leaves(const NacNode& n, std::vector<int>& idx) {
    if (n.children.empty()) throw config_error("every node needs at least one child");
    for (const auto& c : n.children) {
        if (is_leaf(c))
            idx.push_back(std::get<int>(c));
        else
            collect_leaves(std::get<NacNode>(c), idx);
    }
}

void validate_edges(const NacNode& n) {
    validate(n.gen);
    for (const auto& c : n.children) {
        if (is_leaf(c)) continue;
        const NacNode& child = std::get<NacNode>(c);
        validate_pair({n.gen, child.gen});
        validate_edges(child);
    }
}

}  // namespace

NacTree make_tree(NacNode root) {
    std::vector<int> idx;
    collect_leaves(root, idx);
    const int d = static_cast<int>(idx.size());
    std::vector<char> seen(static_cast<std::size_t>(d) + 1, 0);
    for (int i : idx) {
        if (i < 1 || i > d)
            throw config_error("leaf indices must cover 1.." + std::to_string(d) +
                               " exactly once (got " + std::to_string(i) + ")");
        if (seen[static_cast<std::size_t>(i)]++)
            throw config_error("duplicate leaf index " + std::to_string(i));
    }
    validate_edges(root);
    const int depth = node_depth(root);
    if (depth > 3)
        throw unsupported_error("structures deeper than three generator levels are not supported");
    return {std::move(root), d, depth};
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NacNode run() {
        NacNode root = parse_node();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters after the structure");
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error(what + " at position " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    char peek() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        return s_[pos_];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    double parse_number() {
        skip_ws();
        const char* first = s_.data() + pos_;
        const char* last = s_.data() + s_.size();
        double v = 0.0;
        const auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc{}) fail("expected a number");
        pos_ = static_cast<std::size_t>(r.ptr - s_.data());
        return v;
    }

    int parse_leaf_index() {
        skip_ws();
        const char* first = s_.data() + pos_;
        const char* last = s_.data() + s_.size();
        int v = 0;
        const auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc{}) fail("expected a leaf index");
        pos_ = static_cast<std::size_t>(r.ptr - s_.data());
        return v;
    }

    NacNode parse_node() {
        const char c = peek();
        Family fam;
        switch (c) {
            case 'C': fam = Family::clayton; break;
            case 'G': fam = Family::gumbel; break;
            case 'F': fam = Family::frank; break;
            case 'J': fam = Family::joe; break;
            case 'A': fam = Family::amh; break;
            case 'T': fam = Family::tilted_outer_power; break;
            default: fail(std::string("unknown family letter '") + c + "'");
        }
        ++pos_;
        expect('(');
        NacNode node;
        if (fam == Family::tilted_outer_power) {
            const double theta = parse_number();
            expect(',');
            const double tilt = parse_number();
            expect(',');
            const char b = peek();
            if (b != 'E' && b != 'R') fail("expected base letter 'E' or 'R'");
            ++pos_;
            node.gen = GeneratorSpec::top(theta, tilt,
                                          b == 'E' ? TopBase::exp_neg : TopBase::reciprocal);
        } else {
            node.gen = GeneratorSpec::make(fam, parse_number());
        }
        expect(';');
        while (true) {
            const char n = peek();
            if (n >= '0' && n <= '9')
                node.children.emplace_back(parse_leaf_index());
            else
                node.children.emplace_back(parse_node());
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect(')');
        return node;
    }
};

std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

char family_letter(Family f) {
    switch (f) {
        case Family::clayton: return 'C';
        case Family::gumbel: return 'G';
        case Family::frank: return 'F';
        case Family::joe: return 'J';
        case Family::amh: return 'A';
        case Family::tilted_outer_power: return 'T';
    }
    return '?';
}

void format_node(const NacNode& n, std::string& out) {
    if (n.gen.custom) throw argument_error("a custom base has no textual form");
    out += family_letter(n.gen.family);
    out += '(';
    out += format_double(n.gen.theta);
    if (n.gen.family == Family::tilted_outer_power) {
        out += ", ";
        out += format_double(n.gen.tilt);
        out += ", ";
        out += n.gen.base == TopBase::exp_neg ? 'E' : 'R';
    }
    out += "; ";
    bool first = true;
    for (const auto& c : n.children) {
        if (!first) out += ", ";
        first = false;
        if (is_leaf(c))
            out += std::to_string(std::get<int>(c));
        else
            format_node(std::get<NacNode>(c), out);
    }
    out += ')';
}

}  // namespace

NacTree parse_structure(std::string_view text) { return make_tree(Parser(text).run()); }

std::string format_structure(const NacNode& node) {
    std::string out;
    format_node(node, out);
    return out;
}

std::string format_structure(const NacTree& tree) { return format_structure(tree.root); }

}  // namespace nac
