#include "nacdens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nacdens/density.hpp"
#include "nacdens/mle.hpp"

namespace nac::verify {

BigRational s_poly_rational(int n, int k, const BigRational& x, const CombTables& tables) {
    if (n < 0 || k < 0) throw argument_error("s_poly_rational needs n, k >= 0");
    if (k > n) return BigRational(0);
    BigRational acc(0);
    BigRational xl(1);
    for (int i = 0; i < k; ++i) xl *= x;
    for (int l = k; l <= n; ++l) {
        acc += BigRational(tables.stirling1(n, l) * tables.stirling2(l, k)) * xl;
        xl *= x;
    }
    return acc;
}

BigRational s_poly_rev_rational(int n, int k, const BigRational& x, const CombTables& tables) {
    if (n < 0 || k < 0) throw argument_error("s_poly_rev_rational needs n, k >= 0");
    if (k > n) return BigRational(0);
    BigRational acc(0);
    BigRational xl(1);
    for (int i = 0; i < k; ++i) xl *= x;
    for (int l = k; l <= n; ++l) {
        acc += BigRational(tables.stirling2(n, l) * tables.stirling1(l, k)) * xl;
        xl *= x;
    }
    return acc;
}

BigInt composition_count_gf(const std::vector<int>& d_vec, int k) {
    /* coefficient of x^k in prod_s (x + x^2 + ... + x^{d_s}) */
    std::vector<BigInt> poly{BigInt(1)};  // constant 1, degree offset tracked implicitly
    int offset = 0;                       // every factor contributes at least x^1
    for (int d : d_vec) {
        if (d < 1) throw argument_error("composition counts need d_s >= 1");
        std::vector<BigInt> next(poly.size() + d - 1, BigInt(0));
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (int j = 0; j < d; ++j) next[i + j] += poly[i];
        poly = std::move(next);
        offset += 1;
    }
    const int idx = k - offset;
    if (idx < 0 || idx >= static_cast<int>(poly.size())) return BigInt(0);
    return poly[idx];
}

namespace {

/* plain central stencil of order k, accuracy O(h^2) */
double central_stencil(const std::function<double(double)>& f, double t, int k, double h) {
    double acc = 0.0;
    double sign = 1.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
        acc += sign * binom * f(t + (k / 2.0 - i) * h);
        sign = -sign;
        binom = binom * (k - i) / (i + 1.0);
    }
    return acc / std::pow(h, k);
}

}  // namespace

double fd_derivative(const std::function<double(double)>& f, double t, int k, double h) {
    if (k < 1 || k > 6) throw argument_error("fd_derivative supports orders 1..6");
    if (!(h > 0.0)) throw argument_error("fd_derivative needs h > 0");
    const double d1 = central_stencil(f, t, k, h);
    const double d2 = central_stencil(f, t, k, h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

namespace {

double mixed_corners(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> u, std::span<const double> h) {
    const int d = static_cast<int>(u.size());
    std::vector<double> x(u.begin(), u.end());
    double acc = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        int parity = 0;
        for (int i = 0; i < d; ++i) {
            const bool neg = mask & (1u << i);
            x[i] = u[i] + (neg ? -h[i] : h[i]);
            parity ^= neg ? 1 : 0;
        }
        acc += (parity ? -1.0 : 1.0) * f(x);
    }
    double denom = 1.0;
    for (int i = 0; i < d; ++i) denom *= 2.0 * h[i];
    return acc / denom;
}

}  // namespace

double fd_mixed_partial(const std::function<double(std::span<const double>)>& f,
                        std::span<const double> u, std::span<const double> h) {
    const int d = static_cast<int>(u.size());
    if (d < 1 || d > 5) throw argument_error("fd_mixed_partial supports 1 <= d <= 5");
    if (h.size() != u.size()) throw argument_error("fd_mixed_partial needs one step per axis");
    for (double s : h)
        if (!(s > 0.0)) throw argument_error("fd_mixed_partial needs positive steps");
    std::vector<double> h2(h.begin(), h.end());
    for (double& s : h2) s *= 0.5;
    const double d1 = mixed_corners(f, u, h);
    const double d2 = mixed_corners(f, u, std::span<const double>(h2));
    return (4.0 * d2 - d1) / 3.0;
}

double polylog_neg_series(int n, double z) {
    if (!(z > 0.0 && z < 1.0)) throw argument_error("polylog series needs z in (0,1)");
    if (n < 0) throw argument_error("polylog series needs n >= 0");
    double acc = 0.0;
    for (long j = 1;; ++j) {
        const double term = std::pow(static_cast<double>(j), n) * std::pow(z, static_cast<double>(j));
        acc += term;
        if (term < 1e-18 * acc && j > n + 2) break;
        if (j > 100000000L) throw argument_error("polylog series failed to converge");
    }
    return std::log(acc);
}

namespace {

struct CheckLog {
    std::FILE* out;
    int failed = 0;
    void operator()(bool ok, const char* name) {
        if (!ok) ++failed;
        if (out) std::fprintf(out, "%s  %s\n", ok ? "ok" : "FAIL", name);
    }
};

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

double kendall_tau(const SampleMatrix& m, int a, int b) {
    long conc = 0;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) {
            const double s = (m.at(i, a) - m.at(j, a)) * (m.at(i, b) - m.at(j, b));
            conc += s > 0.0 ? 1 : -1;
        }
    return 2.0 * static_cast<double>(conc) / (static_cast<double>(m.n) * (m.n - 1));
}

/* best relative gap between pdf and the mixed finite difference of cdf over a
 * small step sweep (the sweep absorbs the h-dependence of truncation error) */
double density_fd_gap(const NacTree& tree, std::span<const double> u) {
    const double want = pdf(tree, u);
    double best = std::numeric_limits<double>::infinity();
    for (double h : {0.01, 0.02, 0.04}) {
        std::vector<double> hs(u.size(), h);
        const double fd = fd_mixed_partial(
            [&](std::span<const double> x) { return cdf(tree, x); }, u, hs);
        best = std::min(best, rel_err(fd, want));
    }
    return best;
}

}  // namespace

int run_selftest(std::FILE* out) {
    CheckLog check{out};
    const CombTables& tb = default_tables();

    {
        BigInt sum = 0, fact = 1;
        for (int k = 0; k <= 25; ++k) {
            const BigInt& v = tb.stirling1(25, k);
            sum += v < 0 ? -v : v;
        }
        for (int i = 1; i <= 25; ++i) fact *= i;
        check(sum == fact, "first-kind stirling row 25 sums in magnitude to 25!");
    }
    {
        BigInt bell = 0;
        for (int k = 0; k <= 20; ++k) bell += tb.stirling2(20, k);
        check(bell == BigInt("51724158235372"), "second-kind stirling row 20 sums to the Bell number");
    }
    {
        const int n = 8;
        const double x = 0.6;
        double acc = 0.0, kfact = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) kfact *= k;
            acc += (k % 2 ? -1.0 : 1.0) * kfact * s_poly(n, k, x).to_real();
        }
        check(rel_err(acc, falling_factorial(-x, n)) < 1e-10,
              "alternating mixed-stirling sum collapses to a falling factorial");
    }

    {
        const std::pair<GeneratorSpec, const char*> gens[] = {
            {GeneratorSpec::make(Family::clayton, 1.5),
             "clayton second derivative matches finite differences"},
            {GeneratorSpec::make(Family::gumbel, 2.0),
             "gumbel second derivative matches finite differences"},
            {GeneratorSpec::make(Family::frank, 3.0),
             "frank second derivative matches finite differences"},
            {GeneratorSpec::make(Family::joe, 2.5),
             "joe second derivative matches finite differences"},
            {GeneratorSpec::make(Family::amh, 0.6),
             "ali-mikhail-haq second derivative matches finite differences"},
            {GeneratorSpec::top(1.7, 0.4), "tilted outer power second derivative matches finite differences"},
        };
        for (const auto& [g, name] : gens) {
            const double fd =
                fd_derivative([&, g = g](double x) { return psi(g, x); }, 0.9, 2, 0.02);
            check(fd > 0.0 && rel_err(fd, std::exp(log_abs_psi_deriv(g, 2, 0.9))) < 1e-6, name);
        }
    }

    {
        const std::pair<NodePair, const char*> pairs[] = {
            {{GeneratorSpec::make(Family::gumbel, 1.3), GeneratorSpec::make(Family::gumbel, 2.6)},
             "inner coefficient expansion matches finite differences (gumbel pair)"},
            {{GeneratorSpec::make(Family::amh, 0.35), GeneratorSpec::make(Family::clayton, 1.8)},
             "inner coefficient expansion matches finite differences (amh over clayton)"},
        };
        const double t = 1.1, v = 0.8;
        for (const auto& [p, name] : pairs) {
            const double want = fd_derivative(
                [&, p = p](double x) { return std::exp(-v * node_value(p, x)); }, t, 3, 0.04);
            const CoeffTable a = a_coeff_table(p, 3, t);
            double poly = 0.0;
            for (int k = 1; k <= 3; ++k) poly += a.at(k).to_real() * std::pow(-v, k);
            check(rel_err(want, std::exp(-v * node_value(p, t)) * poly) < 1e-4, name);
        }
    }

    {
        const NacTree tree = parse_structure("C(0.8; 1, C(2.0; 2, 3))");
        const double u[] = {0.3, 0.55, 0.7};
        check(density_fd_gap(tree, u) < 2e-3, "density matches the mixed finite difference of the cdf");
    }
    {
        const double u[] = {0.25, 0.45, 0.65};
        for (const auto& [text, name] :
             {std::pair{"G(1.3; 1, G(2.6; 2, 3))",
                        "log-space and direct-space evaluations agree (gumbel)"},
              std::pair{"A(0.35; 1, C(1.8; 2, 3))",
                        "log-space and direct-space evaluations agree (amh over clayton)"}}) {
            const NacTree tree = parse_structure(text);
            check(rel_err(std::exp(logpdf(tree, u)), pdf_two_level_direct(tree, u)) < 1e-9, name);
        }
    }
    {
        const NacTree nested = parse_structure("G(2; 1, G(2; 2, 3, 4), 5)");
        const NacTree flat = parse_structure("G(2; 1, 2, 3, 4, 5)");
        const double u[] = {0.2, 0.35, 0.5, 0.65, 0.8};
        check(rel_err(logpdf(nested, u), logpdf(flat, u)) < 1e-10,
              "nested density with equal strengths collapses to the plain archimedean one");
    }
    {
        const NacTree deep = parse_structure("G(1.4; 1, G(1.4; 2, G(2.8; 3, 4)))");
        const NacTree spliced = parse_structure("G(1.4; 1, 2, G(2.8; 3, 4))");
        const double u[] = {0.3, 0.45, 0.6, 0.75};
        check(rel_err(logpdf(deep, u), logpdf(spliced, u)) < 1e-9,
              "three-level density splices away a repeated strength");
    }

    {
        Rng rng(608);
        const int n = 30000;
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = std::exp(-rng.positive_stable(0.6));
            acc += e;
            acc2 += e * e;
        }
        const double mean = acc / n;
        const double se = std::sqrt((acc2 / n - mean * mean) / n);
        check(std::fabs(mean - std::exp(-1.0)) < 3.0 * se + 2e-3,
              "positive stable draws reproduce their laplace transform");
    }
    {
        Rng rng(609);
        const int n = 20000;
        const double alpha = 0.5, v = 2.0, t = 1.0;
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = std::exp(-t * rng.tilted_positive_stable(alpha, v));
            acc += e;
            acc2 += e * e;
        }
        const double mean = acc / n;
        const double se = std::sqrt((acc2 / n - mean * mean) / n);
        const double target = std::exp(-v * (std::pow(1.0 + t, alpha) - 1.0));
        check(std::fabs(mean - target) < 3.0 * se + 2e-3,
              "tilted stable draws reproduce their laplace transform");
    }
    {
        Rng rng(610);
        const int n = 30000;
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = std::exp(-rng.gamma(2.5));
            acc += e;
            acc2 += e * e;
        }
        const double mean = acc / n;
        const double se = std::sqrt((acc2 / n - mean * mean) / n);
        check(std::fabs(mean - std::pow(2.0, -2.5)) < 3.0 * se + 2e-3,
              "gamma draws reproduce their laplace transform");
    }
    {
        const SampleMatrix m = sample(parse_structure("G(2; 1, 2)"), 1500, 99);
        const double band = 3.0 * std::sqrt(2.0 * (2.0 * m.n + 5.0) / (9.0 * m.n * (m.n - 1.0)));
        check(std::fabs(kendall_tau(m, 0, 1) - 0.5) < band,
              "gumbel sample hits its kendall tau target");
    }

    {
        const NacTree skeleton = parse_structure("G(1.5; 1, G(2.5; 2, 3))");
        const SampleMatrix data =
            sample(parse_structure("G(1.3333333333333333; 1, G(2; 2, 3))"), 150, 7);
        const auto cells = grid_scan(skeleton, data, {1.1, 1.9, 3}, {1.5, 3.0, 3});
        bool ok = cells.size() == 9;
        for (const GridCell& c : cells) {
            const bool feasible = c.theta0 <= c.theta1;
            if (feasible != std::isfinite(c.nll)) ok = false;
            if (feasible &&
                rel_err(c.nll, nll(instantiate_two_param(skeleton, c.theta0, c.theta1), data)) >
                    1e-12)
                ok = false;
        }
        check(ok, "likelihood grid scan matches pointwise re-evaluation");

        const Fit2Result fit = fit2(skeleton, data, 1.2, 1.8);
        check(fit.converged && std::isfinite(fit.nll) && fit.theta0 > 1.0 && fit.theta0 < 3.0 &&
                  fit.theta1 >= fit.theta0 - 1e-9 && fit.theta1 < 5.0,
              "two-parameter fit converges on a sampled surface");
    }

    if (out) std::fprintf(out, "%d check(s) failed\n", check.failed);
    return check.failed;
}

}  // namespace nac::verify
