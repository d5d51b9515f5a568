#pragma once

#include <vector>

#include "nacdens/sampling.hpp"

namespace nac {

/* Re-parameterizes a structure skeleton with two strengths: the root keeps
 * theta0, every nested generator gets theta1.  Families and the leaf layout
 * come from the skeleton.  Throws like make_tree when the pair is invalid. */
NacTree instantiate_two_param(const NacTree& skeleton, double theta0, double theta1);

/* Negative log likelihood of the rows of `data` under the structure's
 * density.  A row touching the boundary throws boundary_error carrying the
 * row index; a density that underflows to zero at some row yields +inf (the
 * optimizer's rejection sentinel). */
double nll(const NacTree& tree, const SampleMatrix& data);

struct GridAxis {
    double lo = 0.0, hi = 0.0;  // inclusive
    int steps = 1;              // number of grid points along the axis
};

struct GridCell {
    double theta0, theta1, nll;  // nll = +inf where the pair is infeasible
};

/* Dense scan of the two-parameter likelihood surface, row-major over theta0
 * then theta1.  Cells are independent; `threads` > 1 splits them. */
std::vector<GridCell> grid_scan(const NacTree& skeleton, const SampleMatrix& data,
                                GridAxis axis0, GridAxis axis1, int threads = 1);

struct Fit2Result {
    double theta0 = 0.0, theta1 = 0.0;
    double nll = 0.0;
    int iterations = 0;
    bool converged = false;
    /* the theta1 >= theta0 ordering constraint pinched to its boundary */
    bool constraint_active = false;
};

/* Two-parameter maximum likelihood fit: Nelder-Mead on the unconstrained
 * coordinates (log(theta0 - lower), log(theta1 - theta0)), so every probe
 * satisfies the nesting constraint by construction.  The initial point must
 * already respect lower < init0 < init1. */
Fit2Result fit2(const NacTree& skeleton, const SampleMatrix& data, double init0, double init1);

}  // namespace nac
