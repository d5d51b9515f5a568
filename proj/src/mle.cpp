#include "nacdens/mle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "nacdens/density.hpp"

namespace nac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

NacNode retheta(const NacNode& n, double theta0, double theta1, bool root) {
    NacNode out;
    out.gen = n.gen;
    out.gen.theta = root ? theta0 : theta1;
    for (const auto& c : n.children) {
        if (is_leaf(c))
            out.children.push_back(std::get<int>(c));
        else
            out.children.push_back(retheta(std::get<NacNode>(c), theta0, theta1, false));
    }
    return out;
}

}  // namespace

NacTree instantiate_two_param(const NacTree& skeleton, double theta0, double theta1) {
    return make_tree(retheta(skeleton.root, theta0, theta1, true));
}

double nll(const NacTree& tree, const SampleMatrix& data) {
    if (data.d != tree.dim) throw argument_error("data dimension does not match the structure");
    double total = 0.0;
    for (int i = 0; i < data.n; ++i) {
        const std::span<const double> row(data.data.data() + static_cast<std::size_t>(i) * data.d,
                                          static_cast<std::size_t>(data.d));
        double lp;
        try {
            lp = logpdf(tree, row);
        } catch (const boundary_error&) {
            throw boundary_error("row " + std::to_string(i) + " touches the unit-cube boundary",
                                 i);
        }
        if (std::isnan(lp)) return kInf;
        total -= lp;
    }
    return total;
}

std::vector<GridCell> grid_scan(const NacTree& skeleton, const SampleMatrix& data,
                                GridAxis axis0, GridAxis axis1, int threads) {
    if (axis0.steps < 1 || axis1.steps < 1) throw argument_error("grid needs at least one step");
    if (axis0.steps > 1 && !(axis0.hi > axis0.lo))
        throw argument_error("grid axis must be increasing");
    if (axis1.steps > 1 && !(axis1.hi > axis1.lo))
        throw argument_error("grid axis must be increasing");

    auto tick = [](const GridAxis& a, int i) {
        if (a.steps == 1) return a.lo;
        return a.lo + (a.hi - a.lo) * i / (a.steps - 1);
    };
    std::vector<GridCell> cells;
    cells.reserve(static_cast<std::size_t>(axis0.steps) * static_cast<std::size_t>(axis1.steps));
    for (int i = 0; i < axis0.steps; ++i)
        for (int j = 0; j < axis1.steps; ++j)
            cells.push_back({tick(axis0, i), tick(axis1, j), kInf});

    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            try {
                cells[c].nll = nll(instantiate_two_param(skeleton, cells[c].theta0,
                                                         cells[c].theta1),
                                   data);
            } catch (const config_error&) {
            } catch (const unsupported_error&) {
            }
        }
    };
    const int nt = std::clamp(threads, 1, 64);
    if (nt == 1 || cells.size() < 2) {
        eval_range(0, cells.size());
        return cells;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (cells.size() + nt - 1) / static_cast<std::size_t>(nt);
    for (std::size_t lo = 0; lo < cells.size(); lo += chunk)
        pool.emplace_back(eval_range, lo, std::min(lo + chunk, cells.size()));
    for (auto& t : pool) t.join();
    return cells;
}

Fit2Result fit2(const NacTree& skeleton, const SampleMatrix& data, double init0, double init1) {
    const double lower = theta_lower_bound(skeleton.root.gen.family);
    if (!(init0 > lower))
        throw argument_error("initial theta0 must exceed the family lower bound");
    if (!(init1 > init0)) throw argument_error("initial theta1 must exceed initial theta0");

    using Point = std::array<double, 2>;
    auto objective = [&](const Point& x) {
        const double t0 = lower + std::exp(x[0]);
        const double t1 = t0 + std::exp(x[1]);
        if (!std::isfinite(t0) || !std::isfinite(t1)) return kInf;
        try {
            return nll(instantiate_two_param(skeleton, t0, t1), data);
        } catch (const config_error&) {
            return kInf;
        } catch (const unsupported_error&) {
            return kInf;
        }
    };

    std::array<Point, 3> xs;
    xs[0] = {std::log(init0 - lower), std::log(init1 - init0)};
    xs[1] = {xs[0][0] + 0.5, xs[0][1]};
    xs[2] = {xs[0][0], xs[0][1] + 0.5};
    std::array<double, 3> fs{objective(xs[0]), objective(xs[1]), objective(xs[2])};

    auto order = [&] {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        const std::array<Point, 3> px = xs;
        const std::array<double, 3> pf = fs;
        for (int i = 0; i < 3; ++i) {
            xs[i] = px[static_cast<std::size_t>(idx[i])];
            fs[i] = pf[static_cast<std::size_t>(idx[i])];
        }
    };
    auto diameter = [&] {
        double d = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                d = std::max(d, std::max(std::fabs(xs[a][0] - xs[b][0]),
                                         std::fabs(xs[a][1] - xs[b][1])));
        return d;
    };

    Fit2Result res;
    const int max_iter = 500;
    int it = 0;
    for (; it < max_iter; ++it) {
        order();
        if (diameter() < 1e-6) {
            res.converged = true;
            break;
        }
        const Point centroid{(xs[0][0] + xs[1][0]) / 2.0, (xs[0][1] + xs[1][1]) / 2.0};
        auto along = [&](double w) {
            return Point{centroid[0] + w * (xs[2][0] - centroid[0]),
                         centroid[1] + w * (xs[2][1] - centroid[1])};
        };
        const Point xr = along(-1.0);
        const double fr = objective(xr);
        if (fr < fs[0]) {
            const Point xe = along(-2.0);
            const double fe = objective(xe);
            if (fe < fr) {
                xs[2] = xe;
                fs[2] = fe;
            } else {
                xs[2] = xr;
                fs[2] = fr;
            }
            continue;
        }
        if (fr < fs[1]) {
            xs[2] = xr;
            fs[2] = fr;
            continue;
        }
        const Point xc = fr < fs[2] ? along(-0.5) : along(0.5);
        const double fc = objective(xc);
        if (fc < std::min(fr, fs[2])) {
            xs[2] = xc;
            fs[2] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {  // shrink toward the best vertex
            xs[i] = {xs[0][0] + 0.5 * (xs[i][0] - xs[0][0]),
                     xs[0][1] + 0.5 * (xs[i][1] - xs[0][1])};
            fs[i] = objective(xs[i]);
        }
    }
    order();
    res.iterations = it;
    res.theta0 = lower + std::exp(xs[0][0]);
    res.theta1 = res.theta0 + std::exp(xs[0][1]);
    res.nll = fs[0];
    res.constraint_active = res.theta1 - res.theta0 < 1e-3 * std::max(1.0, res.theta0);
    return res;
}

}  // namespace nac
