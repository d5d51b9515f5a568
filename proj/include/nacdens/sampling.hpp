#pragma once

#include <cstdint>
#include <vector>

#include "nacdens/nac_tree.hpp"

namespace nac {

/* Counter-keyed generator: every (seed, stream) pair opens its own
 * deterministic splitmix64 sequence, so observation i can be drawn
 * independently of how many rows surround it. */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();
    double uniform01();    // strictly inside (0,1)
    double exponential();  // rate one
    double normal();       // standard normal, Box-Muller with a cached spare

    /* shape-k gamma with unit scale (squeeze-accept, shape < 1 boosted) */
    double gamma(double shape);

    /* positive alpha-stable with Laplace transform exp(-s^alpha), alpha in
     * (0,1]; alpha = 1 degenerates to the point mass at one */
    double positive_stable(double alpha);

    /* Laplace transform exp(-v((1+s)^alpha - 1)): exponentially tilted
     * positive stable, drawn as ceil(v) accept/reject blocks so the expected
     * number of proposals stays below e per block */
    double tilted_positive_stable(double alpha, double v);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct SampleMatrix {
    int n = 0, d = 0;
    std::vector<double> data;  // row-major
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * d + j]; }
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * d + j]; }
};

/* n observations of the structure's copula.  Supported for Gumbel and Clayton
 * structures (any nesting depth the tree allows); other families throw
 * unsupported_error.  Row i depends only on (seed, i): draws walk the tree
 * depth-first in declaration order, parent frailty before children. */
SampleMatrix sample(const NacTree& tree, int n, std::uint64_t seed);

}  // namespace nac
