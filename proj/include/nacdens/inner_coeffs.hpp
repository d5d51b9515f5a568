#pragma once

#include <span>
#include <vector>

#include "nacdens/combinatorics.hpp"
#include "nacdens/generators.hpp"

namespace nac {

/* Parent/child generator pair along one edge of a nested structure. */
struct NodePair {
    GeneratorSpec parent;
    GeneratorSpec child;
    double alpha() const { return parent.theta / child.theta; }
};

/* Sufficient nesting condition: same family with theta_parent <= theta_child
 * (tilted outer power additionally needs identical base and tilt), or the
 * AMH parent / Clayton child pair with theta_child >= 1. */
bool pair_supported(const NodePair& p);
void validate_pair(const NodePair& p);  // throws unsupported_error / config_error

/* psi_parent^{-1}( psi_child(t) ), t >= 0; vanishes at t = 0 */
double node_value(const NodePair& p, double t);

/* k-th derivative of the node function at t > 0, signed log.
 * Sign is (-1)^{k-1} (the node has a completely monotone first derivative). */
SignedLog node_deriv(const NodePair& p, int k, double t);

/* Coefficient vector over consecutive derivative orders. */
struct CoeffTable {
    int k_lo = 1;
    std::vector<SignedLog> coeff;  // coeff[i] belongs to order k_lo + i
    int deriv_shift = 0;           // product tables: outer-order shift from single-leaf children

    int k_hi() const { return k_lo + static_cast<int>(coeff.size()) - 1; }
    const SignedLog& at(int k) const {
        if (k < k_lo || k > k_hi()) throw argument_error("coefficient index out of range");
        return coeff[static_cast<std::size_t>(k - k_lo)];
    }
};

/* a_{nk}(t), k = 1..n: the Bell-polynomial coefficients of the inner
 * generator's n-th derivative, by the per-pair closed forms. */
CoeffTable a_coeff_table(const NodePair& p, int n, double t, Cancellation* cancel = nullptr);

/* rows l = 1..n at the same argument (row l equals a_coeff_table(p, l, t)) */
std::vector<CoeffTable> a_coeff_rows(const NodePair& p, int n, double t,
                                     Cancellation* cancel = nullptr);

/* Convolution of coefficient polynomials (degree offsets add).  Empty input
 * gives the unit polynomial (single coefficient 1 at order 0). */
CoeffTable poly_product(std::span<const CoeffTable> tables, Cancellation* cancel = nullptr);

/* Outer coefficients b_k: convolution over the non-degenerate children's
 * a-tables; each degenerate (single-leaf) child instead raises the outer
 * derivative order by one, recorded in deriv_shift. */
CoeffTable b_coeff_table(std::span<const CoeffTable> tables, int n_degenerate,
                         Cancellation* cancel = nullptr);

}  // namespace nac
