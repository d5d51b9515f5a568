#pragma once

#include <span>

#include "nacdens/nac_tree.hpp"

namespace nac {

/* C(u) by recursive generator evaluation; u may touch 0 and 1 */
double cdf(const NacTree& tree, std::span<const double> u);

/* log density at u in (0,1)^d, any supported depth.  Severe cancellation in
 * the coefficient assembly is reported through `cancel`, never as an error.
 * Coordinates on the boundary throw boundary_error. */
double logpdf(const NacTree& tree, std::span<const double> u, Cancellation* cancel = nullptr);
double pdf(const NacTree& tree, std::span<const double> u, Cancellation* cancel = nullptr);

/* Log-space evaluation specialized to structures with at most two generator
 * levels (what logpdf dispatches to for depth <= 2). */
double logpdf_two_level(const NacTree& tree, std::span<const double> u,
                        Cancellation* cancel = nullptr);

/* Independent direct-space route for depth <= 2: per-family closed forms,
 * plain double arithmetic, outer coefficients by explicit enumeration of
 * bounded compositions instead of convolution.  Exists to cross-validate the
 * log-space path (and vice versa); prefer logpdf for production use. */
double pdf_two_level_direct(const NacTree& tree, std::span<const double> u);

}  // namespace nac
