#ifndef DICKE_PHASE_H
#define DICKE_PHASE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DpStatus {
  DP_STATUS_OK = 0,
  DP_STATUS_NULL_POINTER = 1,
  DP_STATUS_INVALID_ARGUMENT = 2,
  DP_STATUS_NUMERICAL = 3,
  DP_STATUS_CUTOFF_UNCONVERGED = 4,
  DP_STATUS_MEMORY_BUDGET = 5,
  DP_STATUS_PANIC = 6,
} DpStatus;

typedef enum DpParameter {
  DP_PARAMETER_LAMBDA = 0,
  DP_PARAMETER_SPIN_COUPLING = 1,
  DP_PARAMETER_EPSILON = 2,
  DP_PARAMETER_BETA = 3,
} DpParameter;

typedef enum DpOrder {
  DP_ORDER_FIRST = 1,
  DP_ORDER_SECOND = 2,
} DpOrder;

/**
 * Local maxima of one landscape, highest first.
 */
typedef struct DpMaxima DpMaxima;

/**
 * Validated model parameters.
 */
typedef struct DpModel DpModel;

/**
 * A completed sweep and its classified transitions.
 */
typedef struct DpSweep DpSweep;

typedef struct DpParams {
  double lambda;
  double spin_coupling;
  double epsilon;
  double beta;
} DpParams;

typedef struct DpPoint {
  double x;
  double omega;
  bool is_global;
} DpPoint;

typedef struct DpSweepRecord {
  double value;
  double x_star;
  double omega_star;
  double theta;
  bool tie;
  /**
   * -1 when the step was not fully scanned.
   */
  int64_t n_maxima;
} DpSweepRecord;

typedef struct DpTransition {
  double critical_value;
  double bracket_lo;
  double bracket_hi;
  enum DpOrder order;
  double jump;
  double coexistence_width;
} DpTransition;

typedef struct DpOracleReport {
  double log_z_exact;
  double log_z_predicted;
  double photons_exact;
  double photons_predicted;
  double cutoff_relative_change;
  double x_star;
} DpOracleReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *dp_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call on this thread.
 */
const char *dp_last_error_message(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum DpStatus dp_model_new(struct DpParams params, struct DpModel **out);

/**
 * # Safety
 * `model` must come from `dp_model_new` and not be used afterwards. NULL is ignored.
 */
void dp_model_free(struct DpModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_params(const struct DpModel *model, struct DpParams *out);

/**
 * Ω(x).
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_omega(const struct DpModel *model, double x, double *out);

/**
 * I(x), the k-averaged log cosh of the quasiparticle energies.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_landscape_i(const struct DpModel *model, double x, double *out);

/**
 * g(x); fails with `InvalidArgument` at zero spin coupling.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_effective_field_g(const struct DpModel *model, double x, double *out);

/**
 * ξ_k(x); fails with `InvalidArgument` at zero spin coupling.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_quasiparticle_energy(const struct DpModel *model,
                                            double x,
                                            double k,
                                            double *out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_global_maximizer(const struct DpModel *model, struct DpPoint *out);

/**
 * Θ = x*² + 1/(2β).
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_order_parameter(const struct DpModel *model, double *out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_model_find_maxima(const struct DpModel *model, struct DpMaxima **out);

/**
 * # Safety
 * `maxima` must be a live handle or NULL (returns 0).
 */
size_t dp_maxima_len(const struct DpMaxima *maxima);

/**
 * Ω(top) − Ω(second), +inf with a single maximum.
 *
 * # Safety
 * `maxima` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_maxima_coexistence_gap(const struct DpMaxima *maxima, double *out);

/**
 * # Safety
 * `maxima` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_maxima_get(const struct DpMaxima *maxima, size_t index, struct DpPoint *out);

/**
 * # Safety
 * `maxima` must come from `dp_model_find_maxima`. NULL is ignored.
 */
void dp_maxima_free(struct DpMaxima *maxima);

/**
 * Sweep one parameter of `model` and classify the transitions found.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_sweep_run(const struct DpModel *model,
                           enum DpParameter swept,
                           double start,
                           double stop,
                           size_t steps,
                           struct DpSweep **out);

/**
 * # Safety
 * `sweep` must be a live handle or NULL (returns 0).
 */
size_t dp_sweep_len(const struct DpSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_sweep_get(const struct DpSweep *sweep, size_t index, struct DpSweepRecord *out);

/**
 * # Safety
 * `sweep` must be a live handle or NULL (returns 0).
 */
size_t dp_sweep_transition_count(const struct DpSweep *sweep);

/**
 * # Safety
 * `sweep` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_sweep_transition_get(const struct DpSweep *sweep,
                                      size_t index,
                                      struct DpTransition *out);

/**
 * # Safety
 * `sweep` must come from `dp_sweep_run`. NULL is ignored.
 */
void dp_sweep_free(struct DpSweep *sweep);

/**
 * Exact `(1/N) log Z` of the spin chain at field amplitude `x`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_chain_log_z_exact(const struct DpModel *model,
                                   double x,
                                   size_t sites,
                                   double *out);

/**
 * Free-fermion product formula for the same quantity.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_chain_log_z_product(const struct DpModel *model,
                                     double x,
                                     size_t sites,
                                     double *out);

/**
 * Exact diagonalization of the full spin-boson model.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum DpStatus dp_full_ed(const struct DpModel *model,
                         size_t sites,
                         size_t cutoff,
                         struct DpOracleReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DICKE_PHASE_H */
