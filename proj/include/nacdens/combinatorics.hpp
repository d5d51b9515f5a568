#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <span>
#include <vector>

#include "nacdens/errors.hpp"
#include "nacdens/signed_log.hpp"

namespace nac {

using BigInt = boost::multiprecision::cpp_int;

/* exact value -> signed log-space, safe for magnitudes beyond double range */
SignedLog signedlog_from_bigint(const BigInt& v);

/* Exact triangular tables built once (Stirling both kinds, binomials,
 * Eulerian numbers) plus the signed-log coefficient cache for
 * s_{nk}(x) = sum_l s(n,l) S(l,k) x^l.  Immutable after construction. */
class CombTables {
public:
    explicit CombTables(int nmax = 64);

    int nmax() const { return nmax_; }

    /* signed Stirling first kind s(n,k) */
    const BigInt& stirling1(int n, int k) const;
    /* Stirling second kind S(n,k) */
    const BigInt& stirling2(int n, int k) const;
    const BigInt& binomial(int n, int k) const;
    /* Eulerian A(n,k); defined for n=0,k=0 and n>=1, 0<=k<=n-1 */
    const BigInt& eulerian(int n, int k) const;

    SignedLog binomial_sl(int n, int k) const;
    double eulerian_log(int n, int k) const;
    /* cached SignedLog of s(n,l)*S(l,k), k <= l <= n */
    const SignedLog& spoly_coeff(int n, int k, int l) const;
    /* cached SignedLog of S(n,l)*s(l,k), k <= l <= n */
    const SignedLog& spoly_rev_coeff(int n, int k, int l) const;

private:
    void check(int n, int k) const;
    int nmax_;
    std::vector<std::vector<BigInt>> s1_, s2_, binom_, euler_;
    std::vector<SignedLog> binom_sl_;
    std::vector<double> euler_log_;
    std::vector<SignedLog> spoly_, spoly_rev_;  // packed triangular (n,k,l)
    std::vector<std::size_t> spoly_off_nk_;     // offset per (n,k), shared layout
    std::size_t idx2(int n, int k) const { return static_cast<std::size_t>(n) * (nmax_ + 1) + k; }
};

/* process-wide tables with the default order cap (64) */
const CombTables& default_tables();

/* (x)_n = x (x-1) ... (x-n+1); n = 0 -> 1 */
double falling_factorial(double x, int n);
SignedLog falling_factorial_sl(double x, int n);

/* s_{nk}(x) = sum_{l=k}^{n} s(n,l) S(l,k) x^l, evaluated with sign-separated
 * log-space accumulation.  Near-total cancellation is reported through
 * `cancel`, never through the value itself. */
SignedLog s_poly(int n, int k, double x, Cancellation* cancel = nullptr,
                 const CombTables& tables = default_tables());

/* Reverse composition order: sum_{l=k}^{n} S(n,l) s(l,k) x^l.  Shows up when a
 * logarithmic outer layer wraps an exponential-type inner one (the mirror image
 * of s_poly); also collapses to the Kronecker delta at x = 1. */
SignedLog s_poly_rev(int n, int k, double x, Cancellation* cancel = nullptr,
                     const CombTables& tables = default_tables());

/* Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}) by the standard
 * binomial recurrence, carried in signed log space. */
SignedLog bell_partial(int n, int k, std::span<const SignedLog> xs,
                       Cancellation* cancel = nullptr,
                       const CombTables& tables = default_tables());
SignedLog bell_partial(int n, int k, std::span<const double> xs,
                       Cancellation* cancel = nullptr,
                       const CombTables& tables = default_tables());

/* Direct enumeration of B_{n,k} over the index set
 * { j : sum_i i j_i = n, sum_i j_i = k }.  Exponential blowup is the point:
 * independent route for certifying the recurrence.  Refused for n > 20. */
SignedLog bell_partial_enumerated(int n, int k, std::span<const double> xs);

/* all j with 1 <= j_s <= d_vec[s] and sum_s j_s = k, lexicographic */
struct CompositionSet {
    std::vector<int> d_vec;
    int k = 0;
    std::vector<std::vector<int>> elements;
};
CompositionSet bounded_compositions(const std::vector<int>& d_vec, int k);
void for_each_bounded_composition(const std::vector<int>& d_vec, int k,
                                  const std::function<void(const std::vector<int>&)>& fn);

}  // namespace nac
