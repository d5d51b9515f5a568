#include "nacdens/three_level.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nac {

namespace {

void check_point_open(const NacTree& tree, std::span<const double> u) {
    if (static_cast<int>(u.size()) != tree.dim) throw argument_error("point dimension mismatch");
    for (double v : u)
        if (!(v > 0.0 && v < 1.0)) throw boundary_error("coordinate outside (0,1)");
}

CoeffTable unit_at_order_one() {
    CoeffTable t;
    t.k_lo = 1;
    t.coeff = {SignedLog::one()};
    return t;
}

}  // namespace

CoeffTable fold_child_table(const NodePair& edge, const CoeffTable& inner, double t_child,
                            Cancellation* cancel) {
    if (inner.k_lo < 1 || inner.coeff.empty())
        throw argument_error("inner table must start at order >= 1");
    const int n = inner.k_hi();
    const std::vector<CoeffTable> rows = a_coeff_rows(edge, n, t_child, cancel);
    CoeffTable out;
    out.k_lo = 1;
    out.coeff.assign(static_cast<std::size_t>(n), SignedLog::zero());
    for (int k = 1; k <= n; ++k) {
        SignedLogAcc cell;
        for (int l = std::max(k, inner.k_lo); l <= n; ++l) {
            const SignedLog& il = inner.at(l);
            if (il.is_zero()) continue;
            cell.add(il * rows[static_cast<std::size_t>(l) - 1].at(k));
        }
        out.coeff[static_cast<std::size_t>(k) - 1] = cell.result(cancel);
    }
    return out;
}

double logpdf_three_level(const NacTree& tree, std::span<const double> u, Cancellation* cancel) {
    check_point_open(tree, u);
    const NacNode& root = tree.root;

    double T = 0.0;
    double leaf_log = 0.0;
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
        const NacNode& mid = std::get<NacNode>(c);
        double tm = 0.0;
        std::vector<CoeffTable> parts;
        for (const auto& mc : mid.children) {
            if (is_leaf(mc)) {
                const double ui = u[static_cast<std::size_t>(std::get<int>(mc)) - 1];
                tm += psi_inv(mid.gen, ui);
                leaf_log += log_neg_psi_inv_prime(mid.gen, ui);
                parts.push_back(unit_at_order_one());
                continue;
            }
            const NacNode& sec = std::get<NacNode>(mc);
            double ts = 0.0;
            for (const auto& lc : sec.children) {
                if (!is_leaf(lc)) throw argument_error("structure exceeds three generator levels");
                const double ui = u[static_cast<std::size_t>(std::get<int>(lc)) - 1];
                ts += psi_inv(sec.gen, ui);
                leaf_log += log_neg_psi_inv_prime(sec.gen, ui);
            }
            const NodePair edge{mid.gen, sec.gen};
            tm += node_value(edge, ts);
            parts.push_back(a_coeff_table(edge, static_cast<int>(sec.children.size()), ts, cancel));
        }
        const CoeffTable inner = poly_product(parts, cancel);
        const NodePair edge{root.gen, mid.gen};
        T += node_value(edge, tm);
        tables.push_back(fold_child_table(edge, inner, tm, cancel));
    }

    const CoeffTable b = b_coeff_table(tables, n_degenerate, cancel);
    LogSumAcc acc;
    for (int k = b.k_lo; k <= b.k_hi(); ++k) {
        const SignedLog& bk = b.at(k);
        if (bk.is_zero()) continue;
        acc.add_log(bk.logmag + log_abs_psi_deriv(root.gen, k + b.deriv_shift, T, cancel));
    }
    return acc.total_log() + leaf_log;
}

}  // namespace nac
