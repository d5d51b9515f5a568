#include "nacdens.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "nacdens/density.hpp"
#include "nacdens/mle.hpp"
#include "nacdens/oracle.hpp"

struct nacd_tree {
    nac::NacTree tree;
};

namespace {

thread_local std::string g_last_error;

nacd_status fail(nacd_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

/* every entry point funnels its body through here: exceptions become status
 * codes, success clears the thread's message */
template <typename Fn>
nacd_status guard(Fn&& fn, long* bad_row = nullptr) {
    try {
        fn();
        g_last_error.clear();
        return NACD_OK;
    } catch (const nac::parse_error& e) {
        g_last_error = e.what();
        return NACD_ERR_PARSE;
    } catch (const nac::boundary_error& e) {
        g_last_error = e.what();
        if (bad_row) *bad_row = e.row;
        return NACD_ERR_BOUNDARY;
    } catch (const nac::unsupported_error& e) {
        g_last_error = e.what();
        return NACD_ERR_UNSUPPORTED;
    } catch (const nac::config_error& e) {
        g_last_error = e.what();
        return NACD_ERR_CONFIG;
    } catch (const nac::data_error& e) {
        g_last_error = e.what();
        return NACD_ERR_DATA;
    } catch (const nac::argument_error& e) {
        g_last_error = e.what();
        return NACD_ERR_ARGUMENT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return NACD_ERR_NOMEM;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NACD_ERR_INTERNAL;
    }
}

nac::SampleMatrix wrap_rows(const nacd_tree* tree, const double* data, int n) {
    const int d = tree->tree.dim;
    nac::SampleMatrix m;
    m.n = n;
    m.d = d;
    m.data.assign(data, data + static_cast<std::size_t>(n) * d);
    return m;
}

}  // namespace

extern "C" {

const char* nacd_last_error(void) { return g_last_error.c_str(); }

nacd_status nacd_parse(const char* text, nacd_tree** out) {
    if (!text || !out) return fail(NACD_ERR_ARGUMENT, "nacd_parse: null argument");
    *out = nullptr;
    return guard([&] { *out = new nacd_tree{nac::parse_structure(text)}; });
}

void nacd_free(nacd_tree* tree) { delete tree; }

nacd_status nacd_format(const nacd_tree* tree, char* buf, size_t cap, size_t* needed) {
    if (!tree) return fail(NACD_ERR_ARGUMENT, "nacd_format: null tree");
    return guard([&] {
        const std::string s = nac::format_structure(tree->tree);
        if (needed) *needed = s.size() + 1;
        if (!buf) return;  // size query
        if (cap < s.size() + 1) throw nac::argument_error("nacd_format: buffer too small");
        std::memcpy(buf, s.c_str(), s.size() + 1);
    });
}

int nacd_dim(const nacd_tree* tree) { return tree ? tree->tree.dim : -1; }

int nacd_depth(const nacd_tree* tree) { return tree ? tree->tree.depth : -1; }

nacd_status nacd_cdf(const nacd_tree* tree, const double* u, int d, double* out) {
    if (!tree || !u || !out) return fail(NACD_ERR_ARGUMENT, "nacd_cdf: null argument");
    return guard([&] { *out = nac::cdf(tree->tree, std::span<const double>(u, d)); });
}

nacd_status nacd_logpdf(const nacd_tree* tree, const double* u, int d, double* out,
                        double* out_cancel_worst) {
    if (!tree || !u || !out) return fail(NACD_ERR_ARGUMENT, "nacd_logpdf: null argument");
    return guard([&] {
        nac::Cancellation cancel;
        *out = nac::logpdf(tree->tree, std::span<const double>(u, d), &cancel);
        if (out_cancel_worst) *out_cancel_worst = cancel.worst;
    });
}

nacd_status nacd_sample(const nacd_tree* tree, int n, uint64_t seed, double* out) {
    if (!tree || !out) return fail(NACD_ERR_ARGUMENT, "nacd_sample: null argument");
    return guard([&] {
        const nac::SampleMatrix m = nac::sample(tree->tree, n, seed);
        std::memcpy(out, m.data.data(), m.data.size() * sizeof(double));
    });
}

nacd_status nacd_nll(const nacd_tree* tree, const double* data, int n, double* out_nll,
                     long* out_bad_row) {
    if (!tree || !data || !out_nll || n < 0)
        return fail(NACD_ERR_ARGUMENT, "nacd_nll: null argument or negative row count");
    return guard([&] { *out_nll = nac::nll(tree->tree, wrap_rows(tree, data, n)); },
                 out_bad_row);
}

nacd_status nacd_fit2(const nacd_tree* skeleton, const double* data, int n, double init0,
                      double init1, nacd_fit2_result* out) {
    if (!skeleton || !data || !out || n < 0)
        return fail(NACD_ERR_ARGUMENT, "nacd_fit2: null argument or negative row count");
    return guard([&] {
        const nac::Fit2Result r =
            nac::fit2(skeleton->tree, wrap_rows(skeleton, data, n), init0, init1);
        *out = {r.theta0, r.theta1, r.nll, r.iterations, r.converged ? 1 : 0,
                r.constraint_active ? 1 : 0};
    });
}

nacd_status nacd_grid_scan(const nacd_tree* skeleton, const double* data, int n, double lo0,
                           double hi0, int steps0, double lo1, double hi1, int steps1,
                           int threads, double* out) {
    if (!skeleton || !data || !out || n < 0)
        return fail(NACD_ERR_ARGUMENT, "nacd_grid_scan: null argument or negative row count");
    return guard([&] {
        const auto cells =
            nac::grid_scan(skeleton->tree, wrap_rows(skeleton, data, n),
                           {lo0, hi0, steps0}, {lo1, hi1, steps1}, threads);
        double* p = out;
        for (const nac::GridCell& c : cells) {
            *p++ = c.theta0;
            *p++ = c.theta1;
            *p++ = c.nll;
        }
    });
}

int nacd_selftest(int quiet) { return nac::verify::run_selftest(quiet ? nullptr : stdout); }

}  // extern "C"
