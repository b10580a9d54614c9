#ifndef BIKMEANS_H
#define BIKMEANS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all fallible functions.
typedef enum BkStatus {
  BK_STATUS_OK = 0,
  BK_STATUS_NULL_POINTER = 1,
  BK_STATUS_INVALID_ARGUMENT = 2,
  BK_STATUS_DOMAIN = 3,
  BK_STATUS_SIZE_LIMIT = 4,
  BK_STATUS_LP_FAILURE = 5,
  BK_STATUS_NUMERIC = 6,
  BK_STATUS_IO = 7,
  BK_STATUS_PANIC = 8,
} BkStatus;

// A discrete k-median instance.
typedef struct BkInstance BkInstance;

// A normalized fractional LP solution.
typedef struct BkLpSolution BkLpSolution;

// A set of points in ℝ^dim.
typedef struct BkPoints BkPoints;

// Summary of repeated randomized rounding.
typedef struct BkRoundStats {
  size_t trials;
  double lp_value;
  double mean_cost;
  double mean_ratio;
  double std;
  double min_ratio;
  double max_ratio;
} BkRoundStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *bk_last_error(void);

// Library version as a static NUL-terminated string.
const char *bk_version(void);

// Copies `n * dim` row-major coordinates into a new point set.
//
// # Safety
// `coords` must point to `n * dim` readable doubles; `out` must be writable.
enum BkStatus bk_points_new(const double *coords, size_t n, size_t dim, struct BkPoints **out);

// # Safety
// `p` must be null or a handle from `bk_points_new` not yet freed.
void bk_points_free(struct BkPoints *p);

// # Safety
// `p` must be null or a live handle.
size_t bk_points_len(const struct BkPoints *p);

// # Safety
// `p` must be null or a live handle.
size_t bk_points_dim(const struct BkPoints *p);

// Squared-Euclidean instance over explicit demands and candidate centers.
//
// # Safety
// Handles must be live; `out` must be writable.
enum BkStatus bk_instance_new(const struct BkPoints *demands,
                              const struct BkPoints *centers,
                              struct BkInstance **out);

// Reduces a k-means input to a k-median instance with distortion `1 + epsilon`.
//
// # Safety
// `points` must be live; `out` must be writable.
enum BkStatus bk_reduce(const struct BkPoints *points,
                        double epsilon,
                        uint64_t seed,
                        struct BkInstance **out);

// # Safety
// `p` must be null or a handle not yet freed.
void bk_instance_free(struct BkInstance *p);

// # Safety
// `p` must be null or a live handle.
size_t bk_instance_num_demands(const struct BkInstance *p);

// # Safety
// `p` must be null or a live handle.
size_t bk_instance_num_centers(const struct BkInstance *p);

// Writes the demand index of each input point into `psi` (length = number of
// input points). Fails with `InvalidArgument` for instances not built by
// `bk_reduce`.
//
// # Safety
// `psi` must have room for `len` values.
enum BkStatus bk_instance_psi(const struct BkInstance *p, size_t *psi, size_t len);

// Solves the LP relaxation with `k` centers and normalizes the result.
//
// # Safety
// `inst` must be live; `out` must be writable.
enum BkStatus bk_lp_solve(const struct BkInstance *inst, size_t k, struct BkLpSolution **out);

// LP objective value, or NaN for a null handle.
//
// # Safety
// `sol` must be null or a live handle.
double bk_lp_value(const struct BkLpSolution *sol);

// # Safety
// `p` must be null or a handle not yet freed.
void bk_lp_free(struct BkLpSolution *p);

// Rounds `sol` onto `m` centers `trials` times and reports the statistics.
//
// # Safety
// Handles must be live and come from the same instance; `out` must be writable.
enum BkStatus bk_round(const struct BkInstance *inst,
                       const struct BkLpSolution *sol,
                       size_t m,
                       size_t trials,
                       uint64_t seed,
                       size_t jobs,
                       struct BkRoundStats *out);

// Local search with greedy start; writes the `m` opened centers (ascending)
// and the final cost.
//
// # Safety
// `opened` must have room for `m` values; `cost` must be writable.
enum BkStatus bk_local_search(const struct BkInstance *inst,
                              size_t m,
                              size_t p,
                              double delta,
                              size_t *opened,
                              double *cost);

// Exact k-means optimum by partition enumeration (small inputs only).
//
// # Safety
// `points` must be live; `out` must be writable.
enum BkStatus bk_oracle_kmeans(const struct BkPoints *points, size_t k, double *out);

// Exact discrete k-median optimum by subset enumeration (small inputs only).
//
// # Safety
// `inst` must be live; `out` must be writable.
enum BkStatus bk_oracle_kmedian(const struct BkInstance *inst, size_t k, double *out);

// Guarantee of LP rounding onto `beta * k` centers.
//
// # Safety
// `out` must be writable.
enum BkStatus bk_alpha_lp_tight(double beta, double *out);

// Guarantee of local search with swaps of size `p`.
//
// # Safety
// `out` must be writable.
enum BkStatus bk_alpha_local(double beta, uint64_t p, double eps, double *out);

// Guarantee of pipage rounding.
//
// # Safety
// `out` must be writable.
enum BkStatus bk_alpha_pipage(double beta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIKMEANS_H */
