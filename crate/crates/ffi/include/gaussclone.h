#ifndef GAUSSCLONE_H
#define GAUSSCLONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of an FFI call.
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_RANGE = 2,
  GC_STATUS_DIMENSION = 3,
  GC_STATUS_INDEX = 4,
  GC_STATUS_SINGULAR_MATRIX = 5,
  GC_STATUS_SHAPE = 6,
  GC_STATUS_UNPHYSICAL = 7,
  GC_STATUS_TRUNCATION = 8,
  GC_STATUS_BUDGET = 9,
  GC_STATUS_PARSE = 10,
  GC_STATUS_PANIC = 11,
} GcStatus;

// Which input the cloner should copy.
typedef enum GcCloneTarget {
  GC_CLONE_TARGET_FIRST = 1,
  GC_CLONE_TARGET_SECOND = 2,
} GcCloneTarget;

// Estimator for the average communication error.
typedef enum GcMethod {
  GC_METHOD_QUADRATURE = 0,
  GC_METHOD_MONTE_CARLO = 1,
} GcMethod;

// Opaque Gaussian state handle.
typedef struct GcState GcState;

// Cloner settings. The measurement is heterodyne with efficiency `eta`.
typedef struct GcClonerParams {
  double tau1;
  double tau2;
  double gain;
  double eta;
} GcClonerParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *gc_last_error_message(void);

// Single-mode vacuum.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum GcStatus gc_state_vacuum(struct GcState **out);

// Coherent state with amplitude `re + i im`.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum GcStatus gc_state_coherent(double re, double im, struct GcState **out);

// Squeezed coherent state `D(α)S(r)|0⟩`.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum GcStatus gc_state_squeezed(double re, double im, double r, struct GcState **out);

// Zero-mean squeezed thermal state.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum GcStatus gc_state_squeezed_thermal(double n_thermal, double s, struct GcState **out);

// State from a mean of length `2 n_modes` and a row-major covariance of
// `(2 n_modes)²` entries.
//
// # Safety
// `mean` and `cov` must point to arrays of the stated lengths.
enum GcStatus gc_state_from_moments(uintptr_t n_modes,
                                    const double *mean,
                                    const double *cov,
                                    struct GcState **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `state` must come from this library and not be used afterwards.
void gc_state_free(struct GcState *state);

// Number of modes of `state`.
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_state_n_modes(const struct GcState *state, uintptr_t *out);

// Copies the mean vector (`2 n_modes` entries) into `buf`.
//
// # Safety
// `buf` must hold `len` doubles.
enum GcStatus gc_state_mean(const struct GcState *state, double *buf, uintptr_t len);

// Copies the covariance matrix, row-major, into `buf`.
//
// # Safety
// `buf` must hold `len` doubles.
enum GcStatus gc_state_cov(const struct GcState *state, double *buf, uintptr_t len);

// JSON form of a state; release with [`gc_string_free`].
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_state_to_json(const struct GcState *state, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void gc_string_free(char *s);

// Outcome-averaged clones. A null `ancilla` means vacuum.
//
// # Safety
// Pointers other than `ancilla` must be valid.
enum GcStatus gc_run_averaged(const struct GcState *rho1,
                              const struct GcState *rho2,
                              const struct GcClonerParams *params,
                              const struct GcState *ancilla,
                              struct GcState **out_clone1,
                              struct GcState **out_clone2);

// Clones conditioned on heterodyne outcome `z = z_re + i z_im`, with the
// outcome density written to `out_density`.
//
// # Safety
// Pointers other than `ancilla` must be valid.
enum GcStatus gc_run_single_shot(const struct GcState *rho1,
                                 const struct GcState *rho2,
                                 const struct GcClonerParams *params,
                                 const struct GcState *ancilla,
                                 double z_re,
                                 double z_im,
                                 struct GcState **out_clone1,
                                 struct GcState **out_clone2,
                                 double *out_density);

// Gain that makes the machine copy `target` at transmissivity `tau1`.
//
// # Safety
// `out` must be valid.
enum GcStatus gc_gain_select(enum GcCloneTarget target, double tau1, double *out);

// Fidelity between two single-mode Gaussian states.
//
// # Safety
// Pointers must be valid.
enum GcStatus gc_gaussian_fidelity(const struct GcState *a, const struct GcState *b, double *out);

// Symmetric cloning fidelity from three row-major 2×2 covariances.
//
// # Safety
// Each matrix pointer must hold 4 doubles; `out` must be valid.
enum GcStatus gc_symmetric_cloning_fidelity(const double *sigma_k,
                                            const double *sigma_3,
                                            const double *sigma_m,
                                            double *out);

// Closed-form optimal ancilla squeezing for diagonal covariances.
//
// # Safety
// Each matrix pointer must hold 4 doubles; `out` must be valid.
enum GcStatus gc_optimal_ancilla_squeezing(const double *sigma_k,
                                           const double *sigma_m,
                                           double *out);

// Relative fidelity gain of the optimal ancilla for squeezing `r`.
//
// # Safety
// `out` must be valid.
enum GcStatus gc_enhancement(double r, double eta, double *out);

// Average error probability of the binary protocol. `budget` is the
// quadrature order or the Monte Carlo sample count.
//
// # Safety
// Output pointers must be valid.
enum GcStatus gc_average_error_probability(double alpha,
                                           double eta,
                                           double epsilon,
                                           enum GcMethod method,
                                           uintptr_t budget,
                                           uint64_t seed,
                                           double *out_value,
                                           double *out_abs_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSCLONE_H */
