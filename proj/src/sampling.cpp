#include "nacdens/sampling.hpp"

#include <cmath>
#include <numbers>

namespace nac {

namespace {

std::uint64_t mix_once(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix_once(seed ^ mix_once(stream * 0xD1B54A32D192ED03ULL + 1))) {}

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::exponential() { return -std::log(uniform01()); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(2.0 * exponential());
    const double a = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw argument_error("gamma shape must be positive");
    if (shape < 1.0) {
        /* boost: G(a) = G(a+1) U^{1/a} */
        return gamma(shape + 1.0) * std::pow(uniform01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::positive_stable(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw argument_error("stable exponent must lie in (0,1]");
    if (alpha == 1.0) return 1.0;
    const double th = std::numbers::pi * uniform01();
    const double w = exponential();
    const double ls = std::log(std::sin(th));
    const double la = alpha / (1.0 - alpha) * std::log(std::sin(alpha * th)) +
                      std::log(std::sin((1.0 - alpha) * th)) - ls / (1.0 - alpha);
    return std::exp((1.0 - alpha) / alpha * (la - std::log(w)));
}

double Rng::tilted_positive_stable(double alpha, double v) {
    if (!(v >= 0.0)) throw argument_error("tilt weight must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw argument_error("stable exponent must lie in (0,1]");
    if (alpha == 1.0 || v == 0.0) return v;
    const int blocks = v <= 1.0 ? 1 : static_cast<int>(std::ceil(v));
    const double w = v / blocks;
    const double scale = std::pow(w, 1.0 / alpha);
    double total = 0.0;
    for (int b = 0; b < blocks; ++b) {
        for (;;) {
            const double x = scale * positive_stable(alpha);
            if (uniform01() <= std::exp(-x)) {
                total += x;
                break;
            }
        }
    }
    return total;
}

namespace {

double root_frailty(Rng& rng, const GeneratorSpec& g) {
    if (g.family == Family::gumbel) return rng.positive_stable(1.0 / g.theta);
    return rng.gamma(1.0 / g.theta);  // clayton
}

double child_frailty(Rng& rng, const GeneratorSpec& parent, const GeneratorSpec& child,
                     double v) {
    const double alpha = parent.theta / child.theta;
    if (parent.family == Family::gumbel)
        return std::pow(v, 1.0 / alpha) * rng.positive_stable(alpha);
    return rng.tilted_positive_stable(alpha, v);  // clayton
}

void fill_node(Rng& rng, const NacNode& node, double v, double* row) {
    for (const auto& c : node.children) {
        if (is_leaf(c)) {
            row[std::get<int>(c) - 1] = psi(node.gen, rng.exponential() / v);
            continue;
        }
        const NacNode& sub = std::get<NacNode>(c);
        fill_node(rng, sub, child_frailty(rng, node.gen, sub.gen, v), row);
    }
}

}  // namespace

SampleMatrix sample(const NacTree& tree, int n, std::uint64_t seed) {
    if (n < 0) throw argument_error("sample count must be >= 0");
    const Family f = tree.root.gen.family;
    if (f != Family::gumbel && f != Family::clayton)
        throw unsupported_error("sampling is available for Gumbel and Clayton structures");
    SampleMatrix out;
    out.n = n;
    out.d = tree.dim;
    out.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(tree.dim));
    for (int i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        fill_node(rng, tree.root, root_frailty(rng, tree.root.gen),
                  out.data.data() + static_cast<std::size_t>(i) * tree.dim);
    }
    return out;
}

}  // namespace nac
