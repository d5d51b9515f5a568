#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nacdens/generators.hpp"
#include "nacdens/oracle.hpp"

using namespace nac;

namespace {

double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}

std::vector<GeneratorSpec> sample_specs() {
    return {
        GeneratorSpec::make(Family::clayton, 2.0),
        GeneratorSpec::make(Family::clayton, 0.5),
        GeneratorSpec::make(Family::gumbel, 1.0),
        GeneratorSpec::make(Family::gumbel, 1.7),
        GeneratorSpec::make(Family::frank, 3.0),
        GeneratorSpec::make(Family::joe, 2.5),
        GeneratorSpec::make(Family::amh, 0.4),
        GeneratorSpec::top(1.5, 0.3, TopBase::exp_neg),
        GeneratorSpec::top(2.0, 0.7, TopBase::reciprocal),
    };
}

std::shared_ptr<const TopCustomBase> exp_base_callbacks() {
    auto b = std::make_shared<TopCustomBase>();
    b->psi = [](double x) { return std::exp(-x); };
    b->psi_inv = [](double u) { return -std::log(u); };
    b->deriv = [](int k, double x) { return SignedLog::from_log(k % 2 ? -1 : 1, -x); };
    return b;
}

}  // namespace

TEST_CASE("generator basics: psi(0) = 1, monotone decay, inverse round trips") {
    for (const auto& g : sample_specs()) {
        validate(g);
        CHECK(psi(g, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        double prev = 1.0;
        for (double t : {0.25, 1.0, 4.0, 16.0, 64.0}) {
            const double v = psi(g, t);
            CHECK(v < prev);
            CHECK(v > 0.0);
            prev = v;
        }
        for (double t : {0.1, 1.0, 5.0})
            CHECK(psi_inv(g, psi(g, t)) == doctest::Approx(t).epsilon(1e-9));
        for (double u : {0.05, 0.3, 0.9})
            CHECK(psi(g, psi_inv(g, u)) == doctest::Approx(u).epsilon(1e-11));
        CHECK(psi_inv(g, 1.0) == 0.0);
        CHECK(std::isinf(psi_inv(g, 0.0)));
    }
}

TEST_CASE("generator pinned values") {
    const auto cl = GeneratorSpec::make(Family::clayton, 1.0);
    CHECK(psi(cl, 1.0) == doctest::Approx(0.5));
    CHECK(psi_inv(cl, 0.5) == doctest::Approx(1.0));
    const auto gu = GeneratorSpec::make(Family::gumbel, 2.0);
    CHECK(psi(gu, 4.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(psi_inv(gu, std::exp(-1.0)) == doctest::Approx(1.0));
    const auto am = GeneratorSpec::make(Family::amh, 0.5);
    /* (1-theta) e^{-t} / (1 - theta e^{-t}) at t = log 2: 0.25 / 0.75 */
    CHECK(psi(am, std::log(2.0)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("generator derivatives match finite differences in sign and size") {
    for (const auto& g : sample_specs()) {
        auto f = [&](double t) { return psi(g, t); };
        for (double t : {0.5, 1.5, 3.0}) {
            for (int k = 1; k <= 5; ++k) {
                /* truncation vs roundoff trade off differently per case; accept
                 * the best step from a small sweep */
                double best = 1e300;
                const double got = std::exp(log_abs_psi_deriv(g, k, t));
                const double want_sign = k % 2 ? -1.0 : 1.0;
                for (double h : {0.005, 0.01, 0.02, 0.04}) {
                    const double fd = verify::fd_derivative(f, t, k, h);
                    CHECK(fd * want_sign > 0.0);
                    best = std::min(best, rel_err(got, std::fabs(fd)));
                }
                CHECK(best < 1e-4);
            }
        }
    }
}

TEST_CASE("first-derivative special case: Gumbel theta = 1 is exp(-t)") {
    const auto g = GeneratorSpec::make(Family::gumbel, 1.0);
    for (int k = 1; k <= 4; ++k)
        CHECK(log_abs_psi_deriv(g, k, 2.3) == doctest::Approx(-2.3).epsilon(1e-14));
}

TEST_CASE("high-order derivatives stay finite far into the tail") {
    for (const auto& g : sample_specs())
        for (int k : {10, 25, 40})
            CHECK(std::isfinite(log_abs_psi_deriv(g, k, 0.8)));
}

TEST_CASE("inverse-generator derivative: closed form vs finite differences and reciprocal rule") {
    for (const auto& g : sample_specs()) {
        auto finv = [&](double u) { return psi_inv(g, u); };
        for (double u : {0.15, 0.5, 0.85}) {
            const double got = std::exp(log_neg_psi_inv_prime(g, u));
            const double fd = verify::fd_derivative(finv, u, 1, 1e-5);
            CHECK(fd < 0.0);
            CHECK(rel_err(got, -fd) < 1e-6);
            /* (psi^{-1})'(u) = 1 / psi'(psi^{-1}(u)) */
            const double t = psi_inv(g, u);
            CHECK(log_neg_psi_inv_prime(g, u) ==
                  doctest::Approx(-log_abs_psi_deriv(g, 1, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("tilted outer power with zero tilt reduces to Gumbel") {
    const auto top = GeneratorSpec::top(1.7, 0.0, TopBase::exp_neg);
    const auto gum = GeneratorSpec::make(Family::gumbel, 1.7);
    for (double t : {0.3, 1.0, 4.0}) {
        CHECK(psi(top, t) == doctest::Approx(psi(gum, t)).epsilon(1e-13));
        for (int k = 1; k <= 6; ++k)
            CHECK(log_abs_psi_deriv(top, k, t) ==
                  doctest::Approx(log_abs_psi_deriv(gum, k, t)).epsilon(1e-11));
    }
    for (double u : {0.2, 0.7})
        CHECK(log_neg_psi_inv_prime(top, u) ==
              doctest::Approx(log_neg_psi_inv_prime(gum, u)).epsilon(1e-12));
}

TEST_CASE("tilted outer power with unit tilt on the reciprocal base reduces to Clayton") {
    const auto top = GeneratorSpec::top(2.0, 1.0, TopBase::reciprocal);
    const auto cl = GeneratorSpec::make(Family::clayton, 2.0);
    for (double t : {0.3, 1.0, 4.0}) {
        CHECK(psi(top, t) == doctest::Approx(psi(cl, t)).epsilon(1e-13));
        for (int k = 1; k <= 6; ++k)
            CHECK(log_abs_psi_deriv(top, k, t) ==
                  doctest::Approx(log_abs_psi_deriv(cl, k, t)).epsilon(1e-10));
    }
}

TEST_CASE("custom base callbacks reproduce the built-in base exactly") {
    auto with = GeneratorSpec::top(1.5, 0.3, TopBase::exp_neg);
    auto custom = with;
    custom.custom = exp_base_callbacks();
    validate(custom);
    for (double t : {0.4, 2.0}) {
        CHECK(psi(custom, t) == doctest::Approx(psi(with, t)).epsilon(1e-14));
        for (int k = 1; k <= 6; ++k)
            CHECK(log_abs_psi_deriv(custom, k, t) ==
                  doctest::Approx(log_abs_psi_deriv(with, k, t)).epsilon(1e-13));
    }
    for (double u : {0.2, 0.8}) {
        CHECK(psi_inv(custom, u) == doctest::Approx(psi_inv(with, u)).epsilon(1e-13));
        CHECK(log_neg_psi_inv_prime(custom, u) ==
              doctest::Approx(log_neg_psi_inv_prime(with, u)).epsilon(1e-13));
    }
}

TEST_CASE("negative-order polylog: pinned values and series cross-check") {
    CHECK(std::exp(polylog_neg(0, 0.5)) == doctest::Approx(1.0));
    CHECK(std::exp(polylog_neg(1, 0.5)) == doctest::Approx(2.0));
    CHECK(std::exp(polylog_neg(2, 0.5)) == doctest::Approx(6.0));
    for (int n = 0; n <= 8; ++n)
        for (double z : {0.05, 0.3, 0.6, 0.9})
            CHECK(polylog_neg(n, z) ==
                  doctest::Approx(verify::polylog_neg_series(n, z)).epsilon(1e-12));
}

TEST_CASE("tau conversions where closed forms exist") {
    CHECK(theta_to_tau(Family::gumbel, 2.0) == doctest::Approx(0.5));
    CHECK(tau_to_theta(Family::gumbel, 0.5) == doctest::Approx(2.0));
    CHECK(theta_to_tau(Family::clayton, 2.0) == doctest::Approx(0.5));
    CHECK(tau_to_theta(Family::clayton, 0.5) == doctest::Approx(2.0));
    for (double tau : {0.1, 0.25, 0.7}) {
        CHECK(theta_to_tau(Family::gumbel, tau_to_theta(Family::gumbel, tau)) ==
              doctest::Approx(tau).epsilon(1e-13));
        CHECK(theta_to_tau(Family::clayton, tau_to_theta(Family::clayton, tau)) ==
              doctest::Approx(tau).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)tau_to_theta(Family::frank, 0.5), argument_error);
    CHECK_THROWS_AS((void)theta_to_tau(Family::joe, 2.0), argument_error);
}

TEST_CASE("parameter validation per family") {
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::clayton, 0.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::clayton, -1.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::gumbel, 0.9)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::frank, 0.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::joe, 0.99)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::amh, 0.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::make(Family::amh, 1.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::top(0.5, 0.0)), config_error);
    CHECK_THROWS_AS(validate(GeneratorSpec::top(1.5, -0.1)), config_error);
    CHECK_NOTHROW(validate(GeneratorSpec::make(Family::gumbel, 1.0)));
    CHECK_NOTHROW(validate(GeneratorSpec::make(Family::joe, 1.0)));
    auto incomplete = GeneratorSpec::top(1.5, 0.2);
    auto cb = std::make_shared<TopCustomBase>();
    cb->psi = [](double x) { return std::exp(-x); };
    incomplete.custom = cb;  // missing psi_inv and deriv
    CHECK_THROWS_AS(validate(incomplete), config_error);
}

TEST_CASE("argument and boundary errors") {
    const auto g = GeneratorSpec::make(Family::gumbel, 2.0);
    CHECK_THROWS_AS((void)psi(g, -1.0), argument_error);
    CHECK_THROWS_AS((void)psi_inv(g, 1.2), argument_error);
    CHECK_THROWS_AS((void)log_abs_psi_deriv(g, 0, 1.0), argument_error);
    CHECK_THROWS_AS((void)log_abs_psi_deriv(g, 65, 1.0), argument_error);
    CHECK_THROWS_AS((void)log_abs_psi_deriv(g, 2, 0.0), boundary_error);
    CHECK_THROWS_AS((void)log_neg_psi_inv_prime(g, 0.0), boundary_error);
    CHECK_THROWS_AS((void)log_neg_psi_inv_prime(g, 1.0), boundary_error);
    CHECK_THROWS_AS((void)polylog_neg(2, 1.5), argument_error);
}
