#include "nacdens/density.hpp"

#include <cmath>
#include <vector>

#include "nacdens/three_level.hpp"

namespace nac {

namespace {

void check_point(const NacTree& tree, std::span<const double> u, bool open) {
    if (static_cast<int>(u.size()) != tree.dim) throw argument_error("point dimension mismatch");
    for (double v : u) {
        if (open ? !(v > 0.0 && v < 1.0) : !(v >= 0.0 && v <= 1.0))
            throw boundary_error(open ? "coordinate outside (0,1)" : "coordinate outside [0,1]");
    }
}

double cdf_node(const NacNode& n, std::span<const double> u) {
    double s = 0.0;
    for (const auto& c : n.children) {
        const double v =
            is_leaf(c) ? u[static_cast<std::size_t>(std::get<int>(c)) - 1]
                       : cdf_node(std::get<NacNode>(c), u);
        s += psi_inv(n.gen, v);
    }
    return psi(n.gen, s);
}

}  // namespace

double cdf(const NacTree& tree, std::span<const double> u) {
    check_point(tree, u, false);
    return cdf_node(tree.root, u);
}

double logpdf_two_level(const NacTree& tree, std::span<const double> u, Cancellation* cancel) {
    if (tree.depth > 2) throw argument_error("two-level evaluator got a deeper structure");
    check_point(tree, u, true);
    const NacNode& root = tree.root;

    double T = 0.0;        // outer generator argument
    double leaf_log = 0.0; // sum of log(-(psi^{-1})'(u_i)) over all leaves
    int n_degenerate = 0;
    std::vector<CoeffTable> tables;
    for (const auto& c : root.children) {
        if (is_leaf(c)) {
            const double ui = u[static_cast<std::size_t>(std::get<int>(c)) - 1];
            T += psi_inv(root.gen, ui);
            leaf_log += log_neg_psi_inv_prime(root.gen, ui);
            ++n_degenerate;
            continue;
        }
        const NacNode& sec = std::get<NacNode>(c);
        double ts = 0.0;
        for (const auto& lc : sec.children) {
            const double ui = u[static_cast<std::size_t>(std::get<int>(lc)) - 1];
            ts += psi_inv(sec.gen, ui);
            leaf_log += log_neg_psi_inv_prime(sec.gen, ui);
        }
        const NodePair edge{root.gen, sec.gen};
        T += node_value(edge, ts);
        tables.push_back(a_coeff_table(edge, static_cast<int>(sec.children.size()), ts, cancel));
    }

    /* Every term k carries the same sign once the leaf factors are folded in,
     * so the sum collapses to a plain log-sum-exp over magnitudes. */
    const CoeffTable b = b_coeff_table(tables, n_degenerate, cancel);
    LogSumAcc acc;
    for (int k = b.k_lo; k <= b.k_hi(); ++k) {
        const SignedLog& bk = b.at(k);
        if (bk.is_zero()) continue;
        acc.add_log(bk.logmag + log_abs_psi_deriv(root.gen, k + b.deriv_shift, T, cancel));
    }
    return acc.total_log() + leaf_log;
}

double logpdf(const NacTree& tree, std::span<const double> u, Cancellation* cancel) {
    if (tree.depth <= 2) return logpdf_two_level(tree, u, cancel);
    return logpdf_three_level(tree, u, cancel);
}

double pdf(const NacTree& tree, std::span<const double> u, Cancellation* cancel) {
    return std::exp(logpdf(tree, u, cancel));
}

/* ------------------------------------------------------------------ */
/* Direct-space route: per-family closed forms in plain double         */
/* arithmetic.  No signed-log accumulation, no convolution — outer     */
/* coefficients come from explicit enumeration of bounded compositions */
/* — so agreement with logpdf cross-validates both implementations.    */
/* ------------------------------------------------------------------ */

namespace {

double spoly_direct(int n, int k, double x) {
    const auto& tb = default_tables();
    double s = 0.0;
    double xl = std::pow(x, k);
    for (int l = k; l <= n; ++l, xl *= x)
        s += (tb.stirling1(n, l) * tb.stirling2(l, k)).convert_to<double>() * xl;
    return s;
}

double spoly_rev_direct(int n, int k, double x) {
    const auto& tb = default_tables();
    double s = 0.0;
    double xl = std::pow(x, k);
    for (int l = k; l <= n; ++l, xl *= x)
        s += (tb.stirling2(n, l) * tb.stirling1(l, k)).convert_to<double>() * xl;
    return s;
}

/* Li_{-m}(z) for 0 < z < 1 via the Eulerian closed form */
double li_neg_direct(int m, double z) {
    if (m == 0) return z / (1.0 - z);
    const auto& tb = default_tables();
    double s = 0.0;
    for (int j = 0; j < m; ++j)
        s += tb.eulerian(m, j).convert_to<double>() * std::pow(z, m - j);
    return s / std::pow(1.0 - z, m + 1);
}

double base_deriv_direct(const GeneratorSpec& g, int j, double y) {
    if (g.custom) return g.custom->deriv(j, y).to_real();
    const double sgn = j % 2 ? -1.0 : 1.0;
    if (g.base == TopBase::exp_neg) return sgn * std::exp(-y);
    double fac = 1.0;
    for (int i = 2; i <= j; ++i) fac *= i;
    return sgn * fac * std::pow(1.0 + y, -(j + 1.0));
}

/* signed value of psi^{(n)}(t) */
double psi_deriv_direct(const GeneratorSpec& g, int n, double t) {
    const double sgn = n % 2 ? -1.0 : 1.0;
    switch (g.family) {
        case Family::clayton:
            return falling_factorial(-1.0 / g.theta, n) * std::pow(1.0 + t, -1.0 / g.theta - n);
        case Family::gumbel: {
            const double a = 1.0 / g.theta;
            double s = 0.0;
            for (int j = 1; j <= n; ++j)
                s += (j % 2 ? -1.0 : 1.0) * spoly_direct(n, j, a) * std::pow(t, a * j);
            return std::exp(-std::pow(t, a)) * std::pow(t, -n) * s;
        }
        case Family::frank: {
            const double z = -std::expm1(-g.theta) * std::exp(-t);
            return sgn / g.theta * li_neg_direct(n - 1, z);
        }
        case Family::joe: {
            const auto& tb = default_tables();
            const double a = 1.0 / g.theta;
            const double w = -std::expm1(-t);  // 1 - e^{-t}
            const double x = std::exp(-t) / w;
            double s = 0.0;
            for (int l = 1; l <= n; ++l)
                s += tb.stirling2(n, l).convert_to<double>() * falling_factorial(l - 1.0 - a, l - 1) *
                     std::pow(x, l);
            return sgn * std::pow(w, a) / g.theta * s;
        }
        case Family::amh:
            return sgn * (1.0 - g.theta) / g.theta * li_neg_direct(n, g.theta * std::exp(-t));
        case Family::tilted_outer_power: {
            const double a = 1.0 / g.theta;
            const double C = std::pow(g.tilt, g.theta);
            const double y = std::pow(C + t, a) - g.tilt;
            double s = 0.0;
            for (int j = 1; j <= n; ++j)
                s += base_deriv_direct(g, j, y) * std::pow(C + t, a * j - n) * spoly_direct(n, j, a);
            return s;
        }
    }
    throw argument_error("unknown family");
}

/* value of -(psi^{-1})'(u), u in (0,1) */
double neg_psi_inv_prime_direct(const GeneratorSpec& g, double u) {
    switch (g.family) {
        case Family::clayton: return g.theta * std::pow(u, -g.theta - 1.0);
        case Family::gumbel: return g.theta * std::pow(-std::log(u), g.theta - 1.0) / u;
        case Family::frank: return g.theta / std::expm1(g.theta * u);
        case Family::joe: {
            const double w = std::pow(1.0 - u, g.theta);
            return g.theta * w / ((1.0 - u) * (1.0 - w));
        }
        case Family::amh: return (1.0 - g.theta) / (u * (1.0 - g.theta * (1.0 - u)));
        case Family::tilted_outer_power: {
            double binv, neg_binv_prime;
            if (g.custom) {
                binv = g.custom->psi_inv(u);
                neg_binv_prime = 1.0 / -g.custom->deriv(1, binv).to_real();
            } else if (g.base == TopBase::exp_neg) {
                binv = -std::log(u);
                neg_binv_prime = 1.0 / u;
            } else {
                binv = 1.0 / u - 1.0;
                neg_binv_prime = 1.0 / (u * u);
            }
            return g.theta * std::pow(g.tilt + binv, g.theta - 1.0) * neg_binv_prime;
        }
    }
    throw argument_error("unknown family");
}

/* signed a_{nk}(t), k = 1..n, by the per-pair closed forms in doubles */
std::vector<double> a_direct(const GeneratorSpec& parent, const GeneratorSpec& child, int n,
                             double t) {
    const auto& tb = default_tables();
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    if (parent == child) {  // identity node
        a[static_cast<std::size_t>(n) - 1] = 1.0;
        return a;
    }
    if (parent.family == Family::amh && child.family == Family::clayton) {
        const double itc = 1.0 / child.theta;
        const double P = std::pow(1.0 + t, itc);
        const double w = (1.0 - parent.theta) / (parent.theta + (1.0 - parent.theta) * P);
        for (int k = 1; k <= n; ++k) {
            double s = 0.0;
            for (int j = k; j <= n; ++j)
                s += tb.stirling1(j, k).convert_to<double>() * spoly_direct(n, j, itc) *
                     std::pow(w, j) * std::pow(1.0 + t, j * itc - n);
            a[static_cast<std::size_t>(k) - 1] = s;
        }
        return a;
    }
    const double alpha = parent.theta / child.theta;
    switch (parent.family) {
        case Family::gumbel:
        case Family::clayton:
        case Family::tilted_outer_power: {
            const double C = parent.family == Family::gumbel ? 0.0
                           : parent.family == Family::clayton
                               ? 1.0
                               : std::pow(child.tilt, child.theta);
            for (int k = 1; k <= n; ++k)
                a[static_cast<std::size_t>(k) - 1] =
                    spoly_direct(n, k, alpha) * std::pow(C + t, alpha * k - n);
            return a;
        }
        case Family::amh: {
            const double t0s = (child.theta - parent.theta) / (1.0 - parent.theta);
            const double x = 1.0 / (1.0 - t0s * std::exp(-t));
            for (int k = 1; k <= n; ++k)
                a[static_cast<std::size_t>(k) - 1] = spoly_rev_direct(n, k, x);
            return a;
        }
        case Family::joe:
        case Family::frank: {
            double te = t;
            if (parent.family == Family::frank) te += -std::log(-std::expm1(-child.theta));
            const double w = -std::expm1(-te);  // 1 - e^{-t}
            const double q = std::exp(-te) / w;
            const double wa = std::pow(w, alpha);
            const double r = -wa / (1.0 - wa);
            for (int k = 1; k <= n; ++k) {
                double s = 0.0;
                for (int m = k; m <= n; ++m) {
                    double inner = 0.0;
                    for (int l = k; l <= m; ++l)
                        inner += tb.stirling1(l, k).convert_to<double>() *
                                 spoly_direct(m, l, alpha) * std::pow(r, l);
                    s += tb.stirling2(n, m).convert_to<double>() * std::pow(-q, m) * inner;
                }
                a[static_cast<std::size_t>(k) - 1] = ((n - k) % 2 ? -1.0 : 1.0) * s;
            }
            return a;
        }
        default: break;
    }
    throw unsupported_error("direct route: unsupported nesting pair");
}

}  // namespace

double pdf_two_level_direct(const NacTree& tree, std::span<const double> u) {
    if (tree.depth > 2)
        throw unsupported_error("direct route handles at most two generator levels");
    check_point(tree, u, true);
    const NacNode& root = tree.root;

    double T = 0.0;
    double leaf_factor = 1.0;  // product of -(psi^{-1})'(u_i)
    int n_degenerate = 0;
    std::vector<int> d_vec;
    std::vector<std::vector<double>> a_vecs;
    for (const auto& c : root.children) {
        if (is_leaf(c)) {
            const double ui = u[static_cast<std::size_t>(std::get<int>(c)) - 1];
            T += psi_inv(root.gen, ui);
            leaf_factor *= neg_psi_inv_prime_direct(root.gen, ui);
            ++n_degenerate;
            continue;
        }
        const NacNode& sec = std::get<NacNode>(c);
        double ts = 0.0;
        for (const auto& lc : sec.children) {
            const double ui = u[static_cast<std::size_t>(std::get<int>(lc)) - 1];
            ts += psi_inv(sec.gen, ui);
            leaf_factor *= neg_psi_inv_prime_direct(sec.gen, ui);
        }
        T += node_value(NodePair{root.gen, sec.gen}, ts);
        d_vec.push_back(static_cast<int>(sec.children.size()));
        a_vecs.push_back(a_direct(root.gen, sec.gen, static_cast<int>(sec.children.size()), ts));
    }

    double total = 0.0;
    if (d_vec.empty()) {
        total = psi_deriv_direct(root.gen, n_degenerate, T);
    } else {
        int d_inner = 0;
        for (int d : d_vec) d_inner += d;
        for (int k = static_cast<int>(d_vec.size()); k <= d_inner; ++k) {
            double bk = 0.0;
            for_each_bounded_composition(d_vec, k, [&](const std::vector<int>& j) {
                double p = 1.0;
                for (std::size_t s = 0; s < j.size(); ++s)
                    p *= a_vecs[s][static_cast<std::size_t>(j[s]) - 1];
                bk += p;
            });
            total += bk * psi_deriv_direct(root.gen, k + n_degenerate, T);
        }
    }
    /* leaf_factor collects the factors' magnitudes; their true signs
     * contribute (-1)^d */
    return total * leaf_factor * (tree.dim % 2 ? -1.0 : 1.0);
}

}  // namespace nac
