#include "nacdens/generators.hpp"

#include <cmath>
#include <string>

#include "nacdens/combinatorics.hpp"

namespace nac {

namespace {

/* log(e^x - 1) without overflow */
double log_expm1(double x) {
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

/* log(1 - e^{-t}) for t > 0, accurate at both ends */
double log1m_exp_neg(double t) {
    if (t > 0.693) return std::log1p(-std::exp(-t));
    return std::log(-std::expm1(-t));
}

[[noreturn]] void bad_theta(const GeneratorSpec& g, const char* range) {
    throw config_error(std::string(family_name(g.family)) + " parameter " +
                       std::to_string(g.theta) + " outside " + range);
}

double top_big_c(const GeneratorSpec& g) { return std::pow(g.tilt, g.theta); }  // c^theta

double base_psi(const GeneratorSpec& g, double x) {
    if (g.custom) return g.custom->psi(x);
    return g.base == TopBase::exp_neg ? std::exp(-x) : 1.0 / (1.0 + x);
}

double base_psi_inv(const GeneratorSpec& g, double u) {
    if (g.custom) return g.custom->psi_inv(u);
    return g.base == TopBase::exp_neg ? -std::log(u) : 1.0 / u - 1.0;
}

/* signed log of the k-th base derivative at x */
SignedLog base_deriv(const GeneratorSpec& g, int k, double x) {
    if (g.custom) return g.custom->deriv(k, x);
    if (g.base == TopBase::exp_neg) return SignedLog::from_log(k % 2 ? -1 : 1, -x);
    return SignedLog::from_log(k % 2 ? -1 : 1, std::lgamma(k + 1.0) - (k + 1.0) * std::log1p(x));
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::clayton: return "Clayton";
        case Family::gumbel: return "Gumbel";
        case Family::frank: return "Frank";
        case Family::joe: return "Joe";
        case Family::amh: return "AMH";
        case Family::tilted_outer_power: return "TiltedOuterPower";
    }
    return "?";
}

bool operator==(const GeneratorSpec& a, const GeneratorSpec& b) {
    if (a.family != b.family || a.theta != b.theta) return false;
    if (a.family != Family::tilted_outer_power) return true;
    return a.base == b.base && a.tilt == b.tilt && a.custom == b.custom;
}

void validate(const GeneratorSpec& g) {
    if (!std::isfinite(g.theta)) bad_theta(g, "finite range");
    switch (g.family) {
        case Family::clayton:
            if (g.theta <= 0.0) bad_theta(g, "(0, inf)");
            break;
        case Family::gumbel:
            if (g.theta < 1.0) bad_theta(g, "[1, inf)");
            break;
        case Family::frank:
            if (g.theta <= 0.0) bad_theta(g, "(0, inf)");
            break;
        case Family::joe:
            if (g.theta < 1.0) bad_theta(g, "[1, inf)");
            break;
        case Family::amh:
            if (g.theta <= 0.0 || g.theta >= 1.0) bad_theta(g, "(0, 1)");
            break;
        case Family::tilted_outer_power:
            if (g.theta < 1.0) bad_theta(g, "[1, inf)");
            if (!(g.tilt >= 0.0) || !std::isfinite(g.tilt))
                throw config_error("tilted outer power needs tilt c >= 0");
            if (g.custom && (!g.custom->psi || !g.custom->psi_inv || !g.custom->deriv))
                throw config_error("custom base needs psi, psi_inv and deriv callbacks");
            break;
    }
}

double psi(const GeneratorSpec& g, double t) {
    if (!(t >= 0.0)) throw argument_error("generator argument must be >= 0");
    switch (g.family) {
        case Family::clayton: return std::pow(1.0 + t, -1.0 / g.theta);
        case Family::gumbel: return std::exp(-std::pow(t, 1.0 / g.theta));
        case Family::frank: return -std::log1p(std::expm1(-g.theta) * std::exp(-t)) / g.theta;
        case Family::joe: {
            if (t == 0.0) return 1.0;
            return -std::expm1(log1m_exp_neg(t) / g.theta);
        }
        case Family::amh: {
            const double e = std::exp(-t);
            return (1.0 - g.theta) * e / (1.0 - g.theta * e);
        }
        case Family::tilted_outer_power:
            return base_psi(g, std::pow(top_big_c(g) + t, 1.0 / g.theta) - g.tilt);
    }
    throw argument_error("unknown family");
}

double psi_inv(const GeneratorSpec& g, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw argument_error("generator inverse needs u in [0,1]");
    if (u == 0.0) return std::numeric_limits<double>::infinity();
    switch (g.family) {
        case Family::clayton: return std::pow(u, -g.theta) - 1.0;
        case Family::gumbel: return u == 1.0 ? 0.0 : std::pow(-std::log(u), g.theta);
        case Family::frank: {
            if (u == 1.0) return 0.0;
            /* -log( (1-e^{-theta u}) / (1-e^{-theta}) ) */
            return -(std::log(-std::expm1(-g.theta * u)) - std::log(-std::expm1(-g.theta)));
        }
        case Family::joe: {
            if (u == 1.0) return 0.0;
            return -std::log(-std::expm1(g.theta * std::log1p(-u)));
        }
        case Family::amh: return std::log1p(-g.theta * (1.0 - u)) - std::log(u);
        case Family::tilted_outer_power:
            return std::pow(g.tilt + base_psi_inv(g, u), g.theta) - top_big_c(g);
    }
    throw argument_error("unknown family");
}

double log_abs_psi_deriv(const GeneratorSpec& g, int k, double t, Cancellation* cancel) {
    if (k < 1) throw argument_error("derivative order must be >= 1");
    if (!(t > 0.0)) throw boundary_error("generator derivative needs t > 0");
    if (k > default_tables().nmax())
        throw argument_error("derivative order exceeds table cap " +
                             std::to_string(default_tables().nmax()));
    switch (g.family) {
        case Family::clayton:
            /* (-1)^k psi^{(k)}(t) = prod_{i<k}(1/theta + i) * (1+t)^{-(k + 1/theta)} */
            return falling_factorial_sl(-1.0 / g.theta, k).logmag -
                   (k + 1.0 / g.theta) * std::log1p(t);
        case Family::gumbel: {
            if (g.theta == 1.0) return -t;  // exp(-t)
            /* (psi(t)/t^k) sum_j |s_{kj}(1/theta)| t^{j/theta} */
            const double a = 1.0 / g.theta, lt = std::log(t);
            LogSumAcc acc;
            for (int j = 1; j <= k; ++j) {
                const SignedLog s = s_poly(k, j, a, cancel);
                if (!s.is_zero()) acc.add_log(s.logmag + j * a * lt);
            }
            return -std::pow(t, a) - k * lt + acc.total_log();
        }
        case Family::frank:
            return -std::log(g.theta) + polylog_neg(k - 1, -std::expm1(-g.theta) * std::exp(-t));
        case Family::joe: {
            /* ((1-e^{-t})^{1/theta} / theta) * sum_l S(k,l) (l-1-1/theta)_{l-1} x^l,
             * x = e^{-t}/(1-e^{-t}); all terms >= 0 for theta >= 1 */
            const double l1me = log1m_exp_neg(t);
            const double lx = -t - l1me;
            LogSumAcc acc;
            for (int l = 1; l <= k; ++l) {
                const SignedLog ff = falling_factorial_sl(l - 1.0 - 1.0 / g.theta, l - 1);
                if (ff.is_zero()) continue;
                acc.add_log(signedlog_from_bigint(default_tables().stirling2(k, l)).logmag +
                            ff.logmag + l * lx);
            }
            return l1me / g.theta - std::log(g.theta) + acc.total_log();
        }
        case Family::amh:
            return std::log1p(-g.theta) - std::log(g.theta) +
                   polylog_neg(k, g.theta * std::exp(-t));
        case Family::tilted_outer_power: {
            /* sum_j psi_base^{(j)}(y) (C+t)^{j/theta - k} s_{kj}(1/theta), all terms
             * carry sign (-1)^k for a completely monotone base */
            const double C = top_big_c(g);
            const double y = std::pow(C + t, 1.0 / g.theta) - g.tilt;
            const double lCt = std::log(C + t);
            SignedLogAcc acc;
            for (int j = 1; j <= k; ++j) {
                const SignedLog s = s_poly(k, j, 1.0 / g.theta, cancel);
                if (s.is_zero()) continue;
                acc.add(base_deriv(g, j, y) * s *
                        SignedLog::from_log(1, (j / g.theta - k) * lCt));
            }
            return acc.result(cancel).logmag;
        }
    }
    throw argument_error("unknown family");
}

double log_neg_psi_inv_prime(const GeneratorSpec& g, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw boundary_error("inverse-generator derivative needs u in (0,1)");
    switch (g.family) {
        case Family::clayton: return std::log(g.theta) - (g.theta + 1.0) * std::log(u);
        case Family::gumbel:
            return std::log(g.theta) + (g.theta - 1.0) * std::log(-std::log(u)) - std::log(u);
        case Family::frank: return std::log(g.theta) - log_expm1(g.theta * u);
        case Family::joe:
            return std::log(g.theta) + (g.theta - 1.0) * std::log1p(-u) -
                   std::log(-std::expm1(g.theta * std::log1p(-u)));
        case Family::amh:
            return std::log1p(-g.theta) - std::log(u) - std::log1p(-g.theta * (1.0 - u));
        case Family::tilted_outer_power: {
            const double binv = base_psi_inv(g, u);
            double lbase;  // log( -(base^{-1})'(u) )
            if (g.custom) {
                /* (psi^{-1})'(u) = 1 / psi'(psi^{-1}(u)) */
                lbase = -g.custom->deriv(1, binv).logmag;
            } else if (g.base == TopBase::exp_neg) {
                lbase = -std::log(u);
            } else {
                lbase = -2.0 * std::log(u);
            }
            return std::log(g.theta) + lbase + (g.theta - 1.0) * std::log(g.tilt + binv);
        }
    }
    throw argument_error("unknown family");
}

double polylog_neg(int n, double z) {
    if (!(z > 0.0 && z < 1.0)) throw argument_error("polylog_neg needs z in (0,1)");
    if (n < 0) throw argument_error("polylog_neg needs n >= 0");
    const double l1mz = std::log1p(-z);
    if (n == 0) return std::log(z) - l1mz;  // Li_0(z) = z/(1-z)
    if (n > default_tables().nmax()) throw argument_error("polylog order exceeds table cap");
    const double lz = std::log(z);
    LogSumAcc acc;
    for (int k = 0; k <= n - 1; ++k)
        acc.add_log(default_tables().eulerian_log(n, k) + (n - k) * lz);
    return acc.total_log() - (n + 1.0) * l1mz;
}

double tau_to_theta(Family f, double tau) {
    switch (f) {
        case Family::gumbel:
            if (!(tau >= 0.0 && tau < 1.0)) throw argument_error("Gumbel tau needs [0,1)");
            return 1.0 / (1.0 - tau);
        case Family::clayton:
            if (!(tau > 0.0 && tau < 1.0)) throw argument_error("Clayton tau needs (0,1)");
            return 2.0 * tau / (1.0 - tau);
        default: throw argument_error("no closed-form tau mapping for this family");
    }
}

double theta_to_tau(Family f, double theta) {
    switch (f) {
        case Family::gumbel: return 1.0 - 1.0 / theta;
        case Family::clayton: return theta / (theta + 2.0);
        default: throw argument_error("no closed-form tau mapping for this family");
    }
}

double theta_lower_bound(Family f) {
    switch (f) {
        case Family::clayton:
        case Family::frank: return 0.0;
        case Family::gumbel:
        case Family::joe:
        case Family::tilted_outer_power: return 1.0;
        case Family::amh: return 0.0;
    }
    return 0.0;
}

}  // namespace nac
