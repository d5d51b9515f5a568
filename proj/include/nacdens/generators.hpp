#pragma once

#include <functional>
#include <memory>

#include "nacdens/errors.hpp"
#include "nacdens/signed_log.hpp"

namespace nac {

enum class Family { clayton, gumbel, frank, joe, amh, tilted_outer_power };

const char* family_name(Family f);

/* bases for the tilted outer power construction psi((c^theta + t)^{1/theta} - c) */
enum class TopBase {
    exp_neg,    // exp(-t); c = 0 reduces to Gumbel
    reciprocal  // 1/(1+t); c = 1 reduces to Clayton
};

/* user-supplied completely monotone base with psi(0) = 1 */
struct TopCustomBase {
    std::function<double(double)> psi;
    std::function<double(double)> psi_inv;
    /* k-th derivative of psi at x, k >= 0, as a signed log value */
    std::function<SignedLog(int, double)> deriv;
};

struct GeneratorSpec {
    Family family = Family::gumbel;
    double theta = 1.0;
    /* tilted outer power only: */
    TopBase base = TopBase::exp_neg;
    double tilt = 0.0;  // c >= 0
    std::shared_ptr<const TopCustomBase> custom;

    static GeneratorSpec make(Family f, double theta) { return {f, theta}; }
    static GeneratorSpec top(double theta, double tilt, TopBase base = TopBase::exp_neg) {
        GeneratorSpec g{Family::tilted_outer_power, theta};
        g.base = base;
        g.tilt = tilt;
        return g;
    }
};

bool operator==(const GeneratorSpec& a, const GeneratorSpec& b);

/* throws config_error outside the family's admissible parameter range */
void validate(const GeneratorSpec& g);

/* psi(t), t >= 0 */
double psi(const GeneratorSpec& g, double t);
/* psi^{-1}(u), u in [0,1]; u = 0 maps to +inf */
double psi_inv(const GeneratorSpec& g, double u);
/* log( (-1)^k psi^{(k)}(t) ), k >= 1, t > 0.  Positive for every supported
 * family by complete monotonicity. */
double log_abs_psi_deriv(const GeneratorSpec& g, int k, double t,
                         Cancellation* cancel = nullptr);
/* log( -(psi^{-1})'(u) ), u in (0,1) */
double log_neg_psi_inv_prime(const GeneratorSpec& g, double u);

/* log Li_{-n}(z) for z in (0,1), n >= 0, via the Eulerian-number closed form
 * (all-positive terms); n = 0 is z/(1-z). */
double polylog_neg(int n, double z);

/* Kendall's tau <-> theta where a closed form exists (Gumbel, Clayton) */
double tau_to_theta(Family f, double tau);
double theta_to_tau(Family f, double theta);

/* lower end of the admissible theta range (fit reparameterization) */
double theta_lower_bound(Family f);

}  // namespace nac
