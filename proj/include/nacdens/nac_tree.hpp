#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nacdens/inner_coeffs.hpp"

namespace nac {

/* One node of a nesting structure.  A child is either a 1-based coordinate
 * index (leaf) or a nested node with its own generator. */
struct NacNode {
    GeneratorSpec gen;
    std::vector<std::variant<int, NacNode>> children;
};

inline bool is_leaf(const std::variant<int, NacNode>& c) {
    return std::holds_alternative<int>(c);
}

/* Validated structure: every index 1..dim appears exactly once, every
 * parent/child generator edge satisfies the nesting condition, and at most
 * three generator levels are present. */
struct NacTree {
    NacNode root;
    int dim = 0;
    int depth = 0;  // generator levels on the longest path
};

/* Validates and freezes a structure.  Throws config_error (bad parameters or
 * leaf cover), unsupported_error (nesting condition violated or more than
 * three levels). */
NacTree make_tree(NacNode root);

/* Structure expressions like  G(1.3333; 1, G(2; 2, 3))
 *   family letters: C Clayton, G Gumbel, F Frank, J Joe, A Ali-Mikhail-Haq,
 *   T tilted outer power with parameters (theta, tilt, E|R) for the
 *   exponential or reciprocal base.
 * Numbers before ';', children (leaf indices or nested expressions) after.
 * Throws parse_error on malformed input, then validates as make_tree. */
NacTree parse_structure(std::string_view text);

/* Canonical form: shortest round-trip numbers, ", " between children,
 * "; " after parameters.  parse_structure(format_structure(t)) rebuilds t.
 * Trees carrying a custom base have no textual form (argument_error). */
std::string format_structure(const NacTree& tree);
std::string format_structure(const NacNode& node);

}  // namespace nac
