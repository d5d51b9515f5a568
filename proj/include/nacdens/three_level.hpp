#pragma once

#include <span>

#include "nacdens/nac_tree.hpp"

namespace nac {

/* Folds a nested child's inner coefficient polynomial up through its edge to
 * the parent's argument: out_k = sum_l inner_l a_{l,k}(t_child) over the
 * edge's coefficient rows.  `inner` is the convolution of the child's own
 * per-block tables (a direct leaf contributes a unit factor at order one) and
 * `t_child` the edge's node argument.  Cancellation-free: for fixed k every
 * summand carries the same sign. */
CoeffTable fold_child_table(const NodePair& edge, const CoeffTable& inner, double t_child,
                            Cancellation* cancel = nullptr);

/* log density for structures with three generator levels (also correct for
 * shallower ones; logpdf dispatches here only at depth three) */
double logpdf_three_level(const NacTree& tree, std::span<const double> u,
                          Cancellation* cancel = nullptr);

}  // namespace nac
