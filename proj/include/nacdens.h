#ifndef NACDENS_H
#define NACDENS_H

/* C interface to the nested Archimedean copula library.  Structures are held
 * behind opaque handles; every entry point reports through status codes and
 * nacd_last_error(), never by throwing across the boundary. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nacd_tree nacd_tree;

typedef enum nacd_status {
    NACD_OK = 0,
    NACD_ERR_ARGUMENT = 1,    /* bad call arguments (null pointers, wrong sizes) */
    NACD_ERR_PARSE = 2,       /* malformed structure text */
    NACD_ERR_BOUNDARY = 3,    /* data point on or outside the open unit cube */
    NACD_ERR_UNSUPPORTED = 4, /* structure outside what the evaluator supports */
    NACD_ERR_CONFIG = 5,      /* generator parameters outside their admissible range */
    NACD_ERR_DATA = 6,        /* malformed or inconsistent numeric data */
    NACD_ERR_NOMEM = 7,
    NACD_ERR_INTERNAL = 8
} nacd_status;

/* Message for the calling thread's most recent failure; empty after success.
 * The pointer stays valid until the next nacdens call on the same thread. */
const char* nacd_last_error(void);

/* Parses a structure expression like "G(1.3333; 1, G(2; 2, 3))" (C Clayton,
 * G Gumbel, F Frank, J Joe, A Ali-Mikhail-Haq, T tilted outer power with
 * parameters theta, tilt, E|R).  On success *out owns the tree; release it
 * with nacd_free. */
nacd_status nacd_parse(const char* text, nacd_tree** out);
void nacd_free(nacd_tree* tree);

/* Canonical text form.  *needed (nullable) receives the byte count including
 * the terminator; buf == NULL makes this a pure size query.  With a buffer,
 * cap must cover the full string. */
nacd_status nacd_format(const nacd_tree* tree, char* buf, size_t cap, size_t* needed);

/* number of coordinates / generator levels; -1 on a null handle */
int nacd_dim(const nacd_tree* tree);
int nacd_depth(const nacd_tree* tree);

nacd_status nacd_cdf(const nacd_tree* tree, const double* u, int d, double* out);

/* Log density at an interior point.  *out_cancel_worst (nullable) receives the
 * worst relative residual seen across the sign-separated accumulations
 * (1 = no cancellation anywhere). */
nacd_status nacd_logpdf(const nacd_tree* tree, const double* u, int d, double* out,
                        double* out_cancel_worst);

/* n observations, row-major into out (n * dim doubles).  Gumbel and Clayton
 * structures only.  Row i depends on (seed, i) alone, never on n. */
nacd_status nacd_sample(const nacd_tree* tree, int n, uint64_t seed, double* out);

/* Negative log likelihood over n row-major rows of tree-dimension width.  On
 * NACD_ERR_BOUNDARY, *out_bad_row (nullable) names the offending 0-based row. */
nacd_status nacd_nll(const nacd_tree* tree, const double* data, int n, double* out_nll,
                     long* out_bad_row);

typedef struct nacd_fit2_result {
    double theta0, theta1, nll;
    int iterations;
    int converged;
    int constraint_active; /* the theta1 >= theta0 ordering pinched to its boundary */
} nacd_fit2_result;

/* Two-parameter maximum likelihood fit on the skeleton's shape: the root
 * keeps theta0, every nested generator gets theta1.  Requires
 * lower-bound < init0 < init1. */
nacd_status nacd_fit2(const nacd_tree* skeleton, const double* data, int n, double init0,
                      double init1, nacd_fit2_result* out);

/* Dense scan of the two-parameter likelihood surface over the inclusive grid
 * lo0..hi0 x lo1..hi1, row-major theta0 then theta1.  out needs
 * steps0 * steps1 * 3 doubles: (theta0, theta1, nll) per cell, +inf marking
 * infeasible pairs.  threads > 1 splits the cells. */
nacd_status nacd_grid_scan(const nacd_tree* skeleton, const double* data, int n, double lo0,
                           double hi0, int steps0, double lo1, double hi1, int steps1,
                           int threads, double* out);

/* Curated cross-checks over every layer of the library; prints one line per
 * check to stdout unless quiet.  Returns the number of failed checks. */
int nacd_selftest(int quiet);

#ifdef __cplusplus
}
#endif

#endif
