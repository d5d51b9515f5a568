#include "nacdens/combinatorics.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>

namespace nac {

namespace mp = boost::multiprecision;

SignedLog signedlog_from_bigint(const BigInt& v) {
    if (v == 0) return SignedLog::zero();
    const int sign = v < 0 ? -1 : 1;
    BigInt a = mp::abs(v);
    const unsigned bits = mp::msb(a) + 1;
    if (bits <= 512) return SignedLog::from_log(sign, std::log(a.convert_to<double>()));
    /* keep 512 leading bits, fold the rest into the exponent */
    const unsigned shift = bits - 512;
    a >>= shift;
    return SignedLog::from_log(sign, std::log(a.convert_to<double>()) + shift * 0.6931471805599453094);
}

CombTables::CombTables(int nmax) : nmax_(nmax) {
    if (nmax < 0) throw argument_error("table order cap must be nonnegative");
    const int N = nmax + 1;
    auto tri = [N]() { return std::vector<std::vector<BigInt>>(N, std::vector<BigInt>(N, BigInt(0))); };
    s1_ = tri();
    s2_ = tri();
    binom_ = tri();
    s1_[0][0] = 1;
    s2_[0][0] = 1;
    for (int n = 1; n <= nmax; ++n) {
        for (int k = 1; k <= n; ++k) {
            /* s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k);  S(n,k) = S(n-1,k-1) + k S(n-1,k) */
            s1_[n][k] = s1_[n - 1][k - 1] - BigInt(n - 1) * s1_[n - 1][k];
            s2_[n][k] = s2_[n - 1][k - 1] + BigInt(k) * s2_[n - 1][k];
        }
    }
    for (int n = 0; n <= nmax; ++n) {
        binom_[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : BigInt(0));
    }
    euler_.resize(N);
    euler_[0] = {BigInt(1)};
    for (int n = 1; n <= nmax; ++n) {
        euler_[n].assign(n, BigInt(0));
        for (int k = 0; k <= n - 1; ++k) {
            const BigInt left = k < static_cast<int>(euler_[n - 1].size()) ? euler_[n - 1][k] : BigInt(0);
            const BigInt right = (k >= 1 && k - 1 < static_cast<int>(euler_[n - 1].size())) ? euler_[n - 1][k - 1] : BigInt(0);
            euler_[n][k] = BigInt(k + 1) * left + BigInt(n - k) * right;
        }
    }

    binom_sl_.resize(static_cast<std::size_t>(N) * N);
    for (int n = 0; n <= nmax; ++n)
        for (int k = 0; k <= n; ++k) binom_sl_[idx2(n, k)] = signedlog_from_bigint(binom_[n][k]);
    euler_log_.resize(static_cast<std::size_t>(N) * N, neg_inf);
    for (int n = 0; n <= nmax; ++n)
        for (int k = 0; k < static_cast<int>(euler_[n].size()); ++k)
            euler_log_[idx2(n, k)] = signedlog_from_bigint(euler_[n][k]).logmag;

    /* packed cache of signed-log s(n,l)*S(l,k) over k <= l <= n */
    spoly_off_nk_.assign(static_cast<std::size_t>(N) * N, 0);
    std::size_t total = 0;
    for (int n = 0; n <= nmax; ++n)
        for (int k = 0; k <= n; ++k) {
            spoly_off_nk_[idx2(n, k)] = total;
            total += static_cast<std::size_t>(n - k + 1);
        }
    spoly_.resize(total);
    spoly_rev_.resize(total);
    for (int n = 0; n <= nmax; ++n)
        for (int k = 0; k <= n; ++k) {
            const std::size_t base = spoly_off_nk_[idx2(n, k)];
            for (int l = k; l <= n; ++l) {
                spoly_[base + (l - k)] = signedlog_from_bigint(s1_[n][l] * s2_[l][k]);
                spoly_rev_[base + (l - k)] = signedlog_from_bigint(s2_[n][l] * s1_[l][k]);
            }
        }
}

void CombTables::check(int n, int k) const {
    if (n < 0 || k < 0 || n > nmax_ || k > nmax_)
        throw argument_error("order " + std::to_string(n) + "," + std::to_string(k) +
                             " outside table cap " + std::to_string(nmax_));
}

const BigInt& CombTables::stirling1(int n, int k) const {
    check(n, k);
    return s1_[n][k];
}
const BigInt& CombTables::stirling2(int n, int k) const {
    check(n, k);
    return s2_[n][k];
}
const BigInt& CombTables::binomial(int n, int k) const {
    check(n, k);
    return binom_[n][k];
}
const BigInt& CombTables::eulerian(int n, int k) const {
    check(n, k);
    static const BigInt zero(0);
    if (k >= static_cast<int>(euler_[n].size())) return zero;
    return euler_[n][k];
}
SignedLog CombTables::binomial_sl(int n, int k) const {
    check(n, k);
    if (k > n) return SignedLog::zero();
    return binom_sl_[idx2(n, k)];
}
double CombTables::eulerian_log(int n, int k) const {
    check(n, k);
    return euler_log_[idx2(n, k)];
}
const SignedLog& CombTables::spoly_coeff(int n, int k, int l) const {
    check(n, k);
    if (l < k || l > n) throw argument_error("s_poly coefficient index outside k..n");
    return spoly_[spoly_off_nk_[idx2(n, k)] + (l - k)];
}
const SignedLog& CombTables::spoly_rev_coeff(int n, int k, int l) const {
    check(n, k);
    if (l < k || l > n) throw argument_error("s_poly coefficient index outside k..n");
    return spoly_rev_[spoly_off_nk_[idx2(n, k)] + (l - k)];
}

const CombTables& default_tables() {
    static const CombTables tables(64);
    return tables;
}

double falling_factorial(double x, int n) {
    if (n < 0) throw argument_error("falling factorial needs n >= 0");
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= x - i;
    return p;
}

SignedLog falling_factorial_sl(double x, int n) {
    if (n < 0) throw argument_error("falling factorial needs n >= 0");
    SignedLog p = SignedLog::one();
    for (int i = 0; i < n; ++i) p *= SignedLog::from_real(x - i);
    return p;
}

SignedLog s_poly(int n, int k, double x, Cancellation* cancel, const CombTables& tables) {
    if (n < 0 || k < 0) throw argument_error("s_poly needs n, k >= 0");
    if (n > tables.nmax() || k > tables.nmax())
        throw argument_error("s_poly order exceeds table cap " + std::to_string(tables.nmax()));
    if (k > n) return SignedLog::zero();
    /* at x = 1 the polynomial telescopes to the Kronecker delta; short-circuit
     * so callers see an exact zero instead of cancellation noise */
    if (x == 1.0) return k == n ? SignedLog::one() : SignedLog::zero();
    const SignedLog xl = SignedLog::from_real(x);
    SignedLogAcc acc;
    for (int l = k; l <= n; ++l) acc.add(tables.spoly_coeff(n, k, l) * xl.pow_int(l));
    return acc.result(cancel);
}

SignedLog s_poly_rev(int n, int k, double x, Cancellation* cancel, const CombTables& tables) {
    if (n < 0 || k < 0) throw argument_error("s_poly_rev needs n, k >= 0");
    if (n > tables.nmax() || k > tables.nmax())
        throw argument_error("s_poly_rev order exceeds table cap " + std::to_string(tables.nmax()));
    if (k > n) return SignedLog::zero();
    if (x == 1.0) return k == n ? SignedLog::one() : SignedLog::zero();
    const SignedLog xl = SignedLog::from_real(x);
    SignedLogAcc acc;
    for (int l = k; l <= n; ++l) acc.add(tables.spoly_rev_coeff(n, k, l) * xl.pow_int(l));
    return acc.result(cancel);
}

SignedLog bell_partial(int n, int k, std::span<const SignedLog> xs, Cancellation* cancel,
                       const CombTables& tables) {
    if (n < 0 || k < 0 || k > n) throw argument_error("bell_partial needs 0 <= k <= n");
    if (n > tables.nmax()) throw argument_error("bell_partial order exceeds table cap");
    if (xs.size() != static_cast<std::size_t>(n - k + 1))
        throw argument_error("bell_partial needs exactly n-k+1 arguments");
    if (n == 0) return SignedLog::one();
    if (k == 0) return SignedLog::zero();
    /* DP over (m, j); only m - j <= n - k is reachable from (n, k) */
    std::vector<std::vector<SignedLog>> B(n + 1, std::vector<SignedLog>(k + 1));
    B[0][0] = SignedLog::one();
    for (int m = 1; m <= n; ++m) {
        for (int j = 1; j <= std::min(k, m); ++j) {
            if (m - j > n - k) continue;
            SignedLogAcc acc;
            const int imax = m - j + 1;
            for (int i = 1; i <= imax; ++i)
                acc.add(tables.binomial_sl(m - 1, i - 1) * xs[i - 1] * B[m - i][j - 1]);
            B[m][j] = acc.result(cancel);
        }
    }
    return B[n][k];
}

SignedLog bell_partial(int n, int k, std::span<const double> xs, Cancellation* cancel,
                       const CombTables& tables) {
    std::vector<SignedLog> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = SignedLog::from_real(xs[i]);
    return bell_partial(n, k, std::span<const SignedLog>(v), cancel, tables);
}

namespace {

void enumerate_bell(std::span<const double> xs, int i, int rem_n, int rem_k, SignedLog term,
                    SignedLogAcc& acc) {
    /* term carries n! * prod (x_l / l!)^{j_l} / prod j_l! so far */
    const int len = static_cast<int>(xs.size());
    if (i > len) {
        if (rem_n == 0 && rem_k == 0) acc.add(term);
        return;
    }
    /* j_i copies of part size i */
    const double log_i_fact = std::lgamma(i + 1.0);
    const SignedLog xi = SignedLog::from_real(xs[i - 1]);
    for (int j = 0; i * j <= rem_n && j <= rem_k; ++j) {
        SignedLog t = term;
        if (j > 0) {
            t *= xi.pow_int(j);
            if (t.is_zero()) continue;  // zero argument kills every j >= 1
            t *= SignedLog::from_log(1, -j * log_i_fact - std::lgamma(j + 1.0));
        }
        enumerate_bell(xs, i + 1, rem_n - i * j, rem_k - j, t, acc);
    }
}

}  // namespace

SignedLog bell_partial_enumerated(int n, int k, std::span<const double> xs) {
    if (n > 20) throw argument_error("enumerated Bell polynomial refused for n > 20");
    if (n < 0 || k < 0 || k > n) throw argument_error("bell_partial_enumerated needs 0 <= k <= n");
    if (xs.size() != static_cast<std::size_t>(n - k + 1))
        throw argument_error("bell_partial_enumerated needs exactly n-k+1 arguments");
    if (n == 0) return SignedLog::one();
    if (k == 0) return SignedLog::zero();
    SignedLogAcc acc;
    enumerate_bell(xs, 1, n, k, SignedLog::from_log(1, std::lgamma(n + 1.0)), acc);
    return acc.result();
}

namespace {

void compose_rec(const std::vector<int>& d_vec, std::size_t s, int rem, std::vector<int>& cur,
                 const std::function<void(const std::vector<int>&)>& fn) {
    const std::size_t m = d_vec.size();
    if (s == m) {
        if (rem == 0) fn(cur);
        return;
    }
    /* remaining positions need at least 1 and at most d each */
    int tail_min = static_cast<int>(m - s - 1);
    int tail_max = 0;
    for (std::size_t t = s + 1; t < m; ++t) tail_max += d_vec[t];
    for (int j = 1; j <= d_vec[s]; ++j) {
        const int r = rem - j;
        if (r < tail_min || r > tail_max) continue;
        cur[s] = j;
        compose_rec(d_vec, s + 1, r, cur, fn);
    }
}

}  // namespace

void for_each_bounded_composition(const std::vector<int>& d_vec, int k,
                                  const std::function<void(const std::vector<int>&)>& fn) {
    for (int d : d_vec)
        if (d < 1) throw argument_error("bounded compositions need d_s >= 1");
    if (d_vec.empty()) return;
    std::vector<int> cur(d_vec.size(), 0);
    compose_rec(d_vec, 0, k, cur, fn);
}

CompositionSet bounded_compositions(const std::vector<int>& d_vec, int k) {
    CompositionSet out;
    out.d_vec = d_vec;
    out.k = k;
    for_each_bounded_composition(d_vec, k,
                                 [&out](const std::vector<int>& j) { out.elements.push_back(j); });
    return out;
}

}  // namespace nac
