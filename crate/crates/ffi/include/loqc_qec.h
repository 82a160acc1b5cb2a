#ifndef LOQC_QEC_H
#define LOQC_QEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LqStatus {
  LQ_STATUS_OK = 0,
  LQ_STATUS_NULL_POINTER = 1,
  LQ_STATUS_VALIDATION = 2,
  LQ_STATUS_CONFIGURATION = 3,
  LQ_STATUS_STRUCTURAL = 4,
  LQ_STATUS_USAGE = 5,
  LQ_STATUS_FIT = 6,
  LQ_STATUS_UNDEFINED = 7,
  LQ_STATUS_OUT_OF_RANGE = 8,
  LQ_STATUS_PANIC = 9,
} LqStatus;

typedef enum LqWiring {
  // Fibers A→C and B→D.
  LQ_WIRING_AC_BD = 0,
  // Fibers A→D and B→C.
  LQ_WIRING_AD_BC = 1,
} LqWiring;

// Opaque experiment configuration.
typedef struct LqConfig LqConfig;

// Opaque result of one sweep.
typedef struct LqSweep LqSweep;

// One analyzer angle. Counts are valid only when `has_counts` is set.
typedef struct LqRow {
  double theta_deg;
  double p_d1_d2;
  double p_d1_d3;
  bool has_counts;
  uint64_t counts_d1_d2;
  uint64_t counts_d1_d3;
} LqRow;

// Fit parameters. `visibility` is NaN when the offset is not positive.
typedef struct LqFit {
  double offset;
  double amplitude;
  double phase_deg;
  double visibility;
} LqFit;

typedef struct LqCurveSummary {
  struct LqFit fit;
  double fidelity_45;
  double fidelity_fit;
  // Fit of the sampled counts; NaN fields when the sweep was analytic.
  struct LqFit counts_fit;
} LqCurveSummary;

typedef struct LqSummary {
  uint64_t seed;
  double success_probability;
  double discarded_probability;
  double fidelity_45;
  double herald_d2;
  double herald_d3;
  struct LqCurveSummary d1_d2;
  struct LqCurveSummary d1_d3;
} LqSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *lq_version(void);

// Message of the last failing call on this thread, or null if none.
// The pointer stays valid until the next failing call on this thread.
const char *lq_last_error(void);

// New configuration with defaults: qubit HWP at 22.5° (input |0⟩), full
// indistinguishability, no imperfection, Pockels cell on, 19 analyzer
// angles from −90° to 90°, 20 pairs/s for 60 s, seed 0.
struct LqConfig *lq_config_new(void);

// # Safety
// `cfg` must be null or a handle from [`lq_config_new`] not yet freed.
void lq_config_free(struct LqConfig *cfg);

// HWP1 fast-axis angle in degrees; the qubit is linear at twice this.
//
// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_qubit_hwp_angle(struct LqConfig *cfg, double value);

// Two-photon indistinguishability in [0, 1].
//
// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_overlap(struct LqConfig *cfg, double value);

// Flat-background admixture ε in [0, 1].
//
// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_imperfection(struct LqConfig *cfg, double value);

// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_pc_enabled(struct LqConfig *cfg, bool value);

// Photon pairs per second.
//
// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_pair_rate(struct LqConfig *cfg, double value);

// Counting time per analyzer angle, seconds.
//
// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_duration(struct LqConfig *cfg, double value);

// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_seed(struct LqConfig *cfg, uint64_t value);

// # Safety
// `cfg` must be a live handle from [`lq_config_new`].
enum LqStatus lq_config_set_wiring(struct LqConfig *cfg, enum LqWiring value);

// Replaces the analyzer angles, in degrees.
//
// # Safety
// `cfg` must be a live handle; `thetas` must point to `len` doubles.
enum LqStatus lq_config_set_thetas(struct LqConfig *cfg, const double *thetas, size_t len);

// Checks the configuration without running it.
//
// # Safety
// `cfg` must be a live handle.
enum LqStatus lq_config_validate(const struct LqConfig *cfg);

// Exact probabilities only. On success `*out` receives a new handle.
//
// # Safety
// `cfg` must be a live handle and `out` writable.
enum LqStatus lq_run_analytic(const struct LqConfig *cfg, struct LqSweep **out);

// Probabilities plus seeded Poisson counts.
//
// # Safety
// `cfg` must be a live handle and `out` writable.
enum LqStatus lq_run_sweep(const struct LqConfig *cfg, struct LqSweep **out);

// # Safety
// `sweep` must be null or a handle not yet freed.
void lq_sweep_free(struct LqSweep *sweep);

// Number of analyzer angles, or 0 for a null handle.
//
// # Safety
// `sweep` must be null or a live handle.
size_t lq_sweep_len(const struct LqSweep *sweep);

// # Safety
// `sweep` must be a live handle and `row` writable.
enum LqStatus lq_sweep_row(const struct LqSweep *sweep, size_t index, struct LqRow *row);

// # Safety
// `sweep` must be a live handle and `out` writable.
enum LqStatus lq_sweep_summary(const struct LqSweep *sweep, struct LqSummary *out);

// Coincidence probability behind a 50/50 beam splitter for each delay.
// Writes `len` values to `p_coincidence`.
//
// # Safety
// `delays_s` must point to `len` doubles and `p_coincidence` to room for
// `len` doubles.
enum LqStatus lq_hom_scan(const double *delays_s,
                          size_t len,
                          double sigma_s,
                          double *p_coincidence);

// Least-squares fit of `values` to `offset + amplitude·cos 2(θ − phase)`.
//
// # Safety
// `thetas` and `values` must point to `len` doubles; `out` must be writable.
enum LqStatus lq_fit_malus(const double *thetas,
                           const double *values,
                           size_t len,
                           struct LqFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOQC_QEC_H */
