#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdio>
#include <functional>
#include <span>

#include "nacdens/combinatorics.hpp"

namespace nac::verify {

using BigRational = boost::multiprecision::cpp_rational;

/* exact-rational route for s_{nk}(x) = sum_l s(n,l) S(l,k) x^l */
BigRational s_poly_rational(int n, int k, const BigRational& x,
                            const CombTables& tables = default_tables());
/* exact-rational route for the reverse order sum_l S(n,l) s(l,k) x^l */
BigRational s_poly_rev_rational(int n, int k, const BigRational& x,
                                const CombTables& tables = default_tables());

/* number of vectors j with 1 <= j_s <= d_s and sum j_s = k, by the
 * generating-function route prod_s (x + ... + x^{d_s}) */
BigInt composition_count_gf(const std::vector<int>& d_vec, int k);

/* k-th derivative (k <= 6) of f at t: central binomial stencil of width k+1
 * at steps h and h/2, combined by one Richardson level */
double fd_derivative(const std::function<double(double)>& f, double t, int k, double h);

/* mixed partial d^d f / du_1 ... du_d over the 2^d sign corners, with one
 * Richardson level (h and h/2); d <= 5 */
double fd_mixed_partial(const std::function<double(std::span<const double>)>& f,
                        std::span<const double> u, std::span<const double> h);

/* log of sum_{j>=1} j^n z^j truncated at relative 1e-18: series route for
 * the negative-order polylog */
double polylog_neg_series(int n, double z);

/* Curated cross-checks over every layer (combinatorics through densities and
 * sampling), runnable from the command line.  Prints one line per check to
 * `out` when non-null.  Returns the number of failed checks. */
int run_selftest(std::FILE* out);

}  // namespace nac::verify
