#include "nacdens/inner_coeffs.hpp"

#include <cmath>
#include <string>

namespace nac {

namespace {

enum class PairKind {
    identity,     // parent == child
    power,        // node (C+t)^alpha - C^alpha  (Gumbel C=0, Clayton C=1, outer power C=c^theta_child)
    amh,          // AMH / AMH
    joe,          // Joe / Joe
    frank,        // Frank / Frank: Joe node shifted by h = -log(1 - e^{-theta_child})
    amh_clayton,  // AMH parent, Clayton child
};

struct PairInfo {
    PairKind kind;
    double alpha = 1.0;  // theta_parent / theta_child
    double C = 0.0;      // power kind
    double theta0s = 0.0;  // amh kind: (theta_c - theta_p) / (1 - theta_p)
    double h = 0.0;        // frank kind: shift
};

bool same_generator(const GeneratorSpec& a, const GeneratorSpec& b) { return a == b; }

PairInfo classify(const NodePair& p) {
    validate(p.parent);
    validate(p.child);
    if (same_generator(p.parent, p.child)) return {PairKind::identity};
    const Family fp = p.parent.family, fc = p.child.family;
    if (fp == Family::amh && fc == Family::clayton) {
        if (p.child.theta < 1.0)
            throw unsupported_error("AMH over Clayton needs child theta >= 1");
        PairInfo i{PairKind::amh_clayton, 1.0 / p.child.theta};  // alpha reused as 1/theta_c
        i.theta0s = p.parent.theta;                              // theta0s reused as theta_0
        return i;
    }
    if (fp != fc)
        throw unsupported_error(std::string("unsupported nesting pair ") + family_name(fp) +
                                " over " + family_name(fc));
    if (p.parent.theta > p.child.theta)
        throw unsupported_error(std::string(family_name(fp)) +
                                " nesting needs parent theta <= child theta");
    const double alpha = p.parent.theta / p.child.theta;
    switch (fp) {
        case Family::gumbel: return {PairKind::power, alpha, 0.0};
        case Family::clayton: return {PairKind::power, alpha, 1.0};
        case Family::tilted_outer_power: {
            if (p.parent.base != p.child.base || p.parent.tilt != p.child.tilt ||
                p.parent.custom != p.child.custom)
                throw unsupported_error("outer power nesting needs a shared base and tilt");
            return {PairKind::power, alpha, std::pow(p.child.tilt, p.child.theta)};
        }
        case Family::amh: {
            PairInfo i{PairKind::amh, alpha};
            i.theta0s = (p.child.theta - p.parent.theta) / (1.0 - p.parent.theta);
            return i;
        }
        case Family::joe: return {PairKind::joe, alpha};
        case Family::frank: {
            PairInfo i{PairKind::frank, alpha};
            i.h = -std::log(-std::expm1(-p.child.theta));
            return i;
        }
        default: break;
    }
    throw unsupported_error(std::string("unsupported nesting pair within ") + family_name(fp));
}

double log1m_exp_neg(double t) {
    if (t > 0.693) return std::log1p(-std::exp(-t));
    return std::log(-std::expm1(-t));
}

/* node of the Joe/Joe pair: -log(1 - (1-e^{-t})^alpha) */
double joe_node_value(double alpha, double t) {
    if (t == 0.0) return 0.0;
    return -std::log(-std::expm1(alpha * log1m_exp_neg(t)));
}

/* a_{nk}(t) for the Joe/Joe pair:
 * (-1)^{n-k} sum_{m=k}^n S(n,m) (-q)^m sum_{l=k}^m s(l,k) s_{ml}(alpha) r^l,
 * q = e^{-t}/(1-e^{-t}), r = -(1-e^{-t})^alpha / (1-(1-e^{-t})^alpha). */
SignedLog joe_a_entry(int n, int k, double alpha, double t, Cancellation* cancel) {
    const auto& T = default_tables();
    const double l1me = log1m_exp_neg(t);
    const double lq = -t - l1me;
    const double A = alpha * l1me;             // log (1-e^{-t})^alpha
    const double lr = A - std::log(-std::expm1(A));  // log |r|, r < 0
    SignedLogAcc acc;
    for (int m = k; m <= n; ++m) {
        const SignedLog s2 = signedlog_from_bigint(T.stirling2(n, m));
        if (s2.is_zero()) continue;
        const SignedLog qm = SignedLog::from_log(m % 2 ? -1 : 1, m * lq);
        for (int l = k; l <= m; ++l) {
            const SignedLog s1 = signedlog_from_bigint(T.stirling1(l, k));
            if (s1.is_zero()) continue;
            const SignedLog sp = s_poly(m, l, alpha, cancel);
            if (sp.is_zero()) continue;
            const SignedLog rl = SignedLog::from_log(l % 2 ? -1 : 1, l * lr);
            acc.add(s2 * qm * s1 * sp * rl);
        }
    }
    SignedLog R = acc.result(cancel);
    if ((n - k) % 2) R = -R;
    return R;
}

/* a_{nk}(t) of the AMH parent / Clayton child pair:
 * sum_{j=k}^n s(j,k) s_{nj}(1/theta_c) w^j (1+t)^{j/theta_c - n},
 * w = (1-theta_0) / (theta_0 + (1-theta_0)(1+t)^{1/theta_c}). */
SignedLog amh_clayton_a_entry(int n, int k, double theta0, double inv_tc, double t,
                              Cancellation* cancel) {
    const auto& T = default_tables();
    const double L = inv_tc * std::log1p(t);  // log (1+t)^{1/theta_c}
    /* log(theta_0 + (1-theta_0) e^L) = L + log1p(theta_0 (e^{-L} - 1)) */
    const double ldenom = L + std::log1p(theta0 * std::expm1(-L));
    const double lw = std::log1p(-theta0) - ldenom;
    const double l1pt = std::log1p(t);
    SignedLogAcc acc;
    for (int j = k; j <= n; ++j) {
        const SignedLog s1 = signedlog_from_bigint(T.stirling1(j, k));
        if (s1.is_zero()) continue;
        const SignedLog sp = s_poly(n, j, inv_tc, cancel);
        if (sp.is_zero()) continue;
        acc.add(s1 * sp * SignedLog::from_log(1, j * lw + (j * inv_tc - n) * l1pt));
    }
    return acc.result(cancel);
}

SignedLog a_entry(const PairInfo& i, int n, int k, double t, Cancellation* cancel) {
    switch (i.kind) {
        case PairKind::identity:
            return n == k ? SignedLog::one() : SignedLog::zero();
        case PairKind::power:
            return s_poly(n, k, i.alpha, cancel) *
                   SignedLog::from_log(1, (i.alpha * k - n) * std::log(i.C + t));
        case PairKind::amh:
            /* log-type outer around an exponential-type inner: the mirror
             * composition, so the reverse-order polynomial applies */
            return s_poly_rev(n, k, 1.0 / (1.0 - i.theta0s * std::exp(-t)), cancel);
        case PairKind::joe:
            return joe_a_entry(n, k, i.alpha, t, cancel);
        case PairKind::frank:
            return joe_a_entry(n, k, i.alpha, t + i.h, cancel);
        case PairKind::amh_clayton:
            return amh_clayton_a_entry(n, k, i.theta0s, i.alpha, t, cancel);
    }
    return SignedLog::zero();
}

}  // namespace

bool pair_supported(const NodePair& p) {
    try {
        classify(p);
        return true;
    } catch (const error&) {
        return false;
    }
}

void validate_pair(const NodePair& p) { (void)classify(p); }

double node_value(const NodePair& p, double t) {
    if (!(t >= 0.0)) throw argument_error("node argument must be >= 0");
    const PairInfo i = classify(p);
    switch (i.kind) {
        case PairKind::identity: return t;
        case PairKind::power: {
            if (i.C == 0.0) return std::pow(t, i.alpha);
            return std::pow(i.C + t, i.alpha) - std::pow(i.C, i.alpha);
        }
        case PairKind::amh:
            return t + std::log1p(-i.theta0s * std::exp(-t)) - std::log1p(-i.theta0s);
        case PairKind::joe: return joe_node_value(i.alpha, t);
        case PairKind::frank: return joe_node_value(i.alpha, t + i.h) - joe_node_value(i.alpha, i.h);
        case PairKind::amh_clayton: {
            const double L = i.alpha * std::log1p(t);  // alpha = 1/theta_c here
            return L + std::log1p(i.theta0s * std::expm1(-L));
        }
    }
    throw argument_error("unknown pair kind");
}

SignedLog node_deriv(const NodePair& p, int k, double t) {
    if (k < 1) throw argument_error("node derivative order must be >= 1");
    if (!(t > 0.0)) throw boundary_error("node derivative needs t > 0");
    const PairInfo i = classify(p);
    switch (i.kind) {
        case PairKind::identity:
            return k == 1 ? SignedLog::one() : SignedLog::zero();
        case PairKind::power:
            return falling_factorial_sl(i.alpha, k) *
                   SignedLog::from_log(1, (i.alpha - k) * std::log(i.C + t));
        case PairKind::amh: {
            const double z = i.theta0s * std::exp(-t);
            if (k == 1) return SignedLog::from_log(1, -std::log1p(-z));
            return SignedLog::from_log(k % 2 ? 1 : -1, polylog_neg(k - 1, z));
        }
        case PairKind::joe:
        case PairKind::frank:
        case PairKind::amh_clayton:
            /* the order-k expansion's leading Bell coefficient IS the k-th
             * node derivative: B_{k,1}(x_1,...,x_k) = x_k */
            return a_entry(i, k, 1, t, nullptr);
    }
    throw argument_error("unknown pair kind");
}

CoeffTable a_coeff_table(const NodePair& p, int n, double t, Cancellation* cancel) {
    if (n < 1) throw argument_error("a-table order must be >= 1");
    if (!(t > 0.0)) throw boundary_error("a-table needs t > 0");
    if (n > default_tables().nmax()) throw argument_error("a-table order exceeds table cap");
    const PairInfo i = classify(p);
    CoeffTable out;
    out.k_lo = 1;
    out.coeff.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) out.coeff[k - 1] = a_entry(i, n, k, t, cancel);
    return out;
}

std::vector<CoeffTable> a_coeff_rows(const NodePair& p, int n, double t, Cancellation* cancel) {
    std::vector<CoeffTable> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) rows.push_back(a_coeff_table(p, l, t, cancel));
    return rows;
}

CoeffTable poly_product(std::span<const CoeffTable> tables, Cancellation* cancel) {
    CoeffTable acc;
    acc.k_lo = 0;
    acc.coeff = {SignedLog::one()};
    for (const CoeffTable& q : tables) {
        CoeffTable next;
        next.k_lo = acc.k_lo + q.k_lo;
        next.coeff.assign(acc.coeff.size() + q.coeff.size() - 1, SignedLog::zero());
        for (std::size_t c = 0; c < next.coeff.size(); ++c) {
            SignedLogAcc cell;
            const std::size_t a_lo = c >= q.coeff.size() - 1 ? c - (q.coeff.size() - 1) : 0;
            for (std::size_t a = a_lo; a < acc.coeff.size() && a <= c; ++a)
                cell.add(acc.coeff[a] * q.coeff[c - a]);
            next.coeff[c] = cell.result(cancel);
        }
        acc = std::move(next);
    }
    return acc;
}

CoeffTable b_coeff_table(std::span<const CoeffTable> tables, int n_degenerate,
                         Cancellation* cancel) {
    if (n_degenerate < 0) throw argument_error("degenerate child count must be >= 0");
    /* With no product terms this is the unit polynomial at order 0 and the
     * assembled density collapses to the plain Archimedean one. */
    CoeffTable out = poly_product(tables, cancel);
    out.deriv_shift = n_degenerate;
    return out;
}

}  // namespace nac
