#ifndef IBI_H
#define IBI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every call.
typedef enum IbiStatus {
  IBI_STATUS_OK = 0,
  IBI_STATUS_NULL_POINTER = 1,
  IBI_STATUS_INVALID_ARGUMENT = 2,
  IBI_STATUS_IO = 3,
  IBI_STATUS_DATA = 4,
  IBI_STATUS_GEOMETRY = 5,
  IBI_STATUS_INFERENCE = 6,
  // `gamma` is undefined for the triangle.
  IBI_STATUS_UNDEFINED = 7,
  IBI_STATUS_PANIC = 8,
} IbiStatus;

typedef enum IbiStandardize {
  IBI_STANDARDIZE_NONE = 0,
  IBI_STANDARDIZE_FEATURE = 1,
  IBI_STANDARDIZE_WHITEN = 2,
} IbiStandardize;

// Opaque grouped dataset.
typedef struct IbiDataset IbiDataset;

// Opaque bootstrap ensemble.
typedef struct IbiEnsemble IbiEnsemble;

typedef struct IbiShapePoint {
  double r;
  double phi;
  double u;
  double v;
} IbiShapePoint;

// Shape summary of one triangle. `gamma` is NaN when `gamma_defined` is false.
typedef struct IbiStatistics {
  double tau;
  double gamma;
  bool gamma_defined;
  double r;
  double phi;
  double u;
  double v;
  double a2;
  double b2;
  double c2;
} IbiStatistics;

typedef struct IbiInterval {
  double lo;
  double hi;
} IbiInterval;

typedef struct IbiRegionSummary {
  double level;
  double depth_threshold;
  uintptr_t members;
  double area;
  struct IbiStatistics median;
  struct IbiStatistics max_tau;
  struct IbiStatistics min_tau;
} IbiRegionSummary;

typedef struct IbiPermutation {
  uintptr_t k;
  double p_tau;
  // NaN when `p_gamma_defined` is false.
  double p_gamma;
  bool p_gamma_defined;
} IbiPermutation;

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call on the same thread.
const char *ibi_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ibi_version(void);

// Shape coordinates of the triangle with vertices `a`, `b`, `c`, each
// holding `p` coordinates.
//
// # Safety
// `a`, `b`, `c` must point to `p` readable doubles; `out` must be writable.
enum IbiStatus ibi_shape_point(const double *a,
                               const double *b,
                               const double *c,
                               uintptr_t p,
                               struct IbiShapePoint *out);

// Both indices and the shape coordinates of a triangle.
//
// # Safety
// As for [`ibi_shape_point`].
enum IbiStatus ibi_statistics(const double *a,
                              const double *b,
                              const double *c,
                              uintptr_t p,
                              struct IbiStatistics *out);

// Statistics of the disk point `(r, phi)`.
//
// # Safety
// `out` must be writable.
enum IbiStatus ibi_statistics_from_polar(double r, double phi, struct IbiStatistics *out);

// Riemannian shape distance between two disk points, in `[0, pi/2]`.
//
// # Safety
// `out` must be writable.
enum IbiStatus ibi_shape_distance(double r1, double phi1, double r2, double phi2, double *out);

// Builds a dataset from row-major observations: `counts[0]` rows of group
// `A`, then `counts[1]` of `B`, then `counts[2]` of `C`, each row `p` wide.
//
// # Safety
// `data` must hold `p * (counts[0] + counts[1] + counts[2])` doubles,
// `counts` three sizes; `out` must be writable.
enum IbiStatus ibi_dataset_new(const double *data,
                               uintptr_t p,
                               const uintptr_t *counts,
                               struct IbiDataset **out);

// Loads a headed CSV file. `groups` maps labels as `A=x,B=y,C=z`;
// `features` is a comma-separated column list or null for all others.
//
// # Safety
// String arguments must be NUL-terminated (or null where allowed);
// `out` must be writable.
enum IbiStatus ibi_dataset_load_csv(const char *path,
                                    const char *group_col,
                                    const char *groups,
                                    const char *features,
                                    struct IbiDataset **out);

// Standardized copy of a dataset.
//
// # Safety
// `ds` must be a live handle; `out` must be writable.
enum IbiStatus ibi_dataset_standardize(const struct IbiDataset *ds,
                                       enum IbiStandardize mode,
                                       struct IbiDataset **out);

// Feature count of a dataset, or 0 for a null handle.
//
// # Safety
// `ds` must be null or a live handle.
uintptr_t ibi_dataset_dim(const struct IbiDataset *ds);

// Rows in group `group` (0 = A, 1 = B, 2 = C), or 0.
//
// # Safety
// `ds` must be null or a live handle.
uintptr_t ibi_dataset_group_size(const struct IbiDataset *ds, uintptr_t group);

// # Safety
// `ds` must be null or a handle not yet freed.
void ibi_dataset_free(struct IbiDataset *ds);

// Statistics of the centroid triangle.
//
// # Safety
// `ds` must be a live handle; `out` must be writable.
enum IbiStatus ibi_observed(const struct IbiDataset *ds, struct IbiStatistics *out);

// Stratified bootstrap with `k` replicates.
//
// # Safety
// `ds` must be a live handle; `out` must be writable.
enum IbiStatus ibi_bootstrap(const struct IbiDataset *ds,
                             uintptr_t k,
                             uint64_t seed,
                             struct IbiEnsemble **out);

// Replicates with a defined shape, or 0 for a null handle.
//
// # Safety
// `ens` must be null or a live handle.
uintptr_t ibi_ensemble_valid_count(const struct IbiEnsemble *ens);

// Replicate `i` in generation order; [`IbiStatus::Geometry`] if its
// centroids coincided.
//
// # Safety
// `ens` must be a live handle; `out` must be writable.
enum IbiStatus ibi_ensemble_replicate(const struct IbiEnsemble *ens,
                                      uintptr_t i,
                                      struct IbiStatistics *out);

// Percentile interval for `tau`.
//
// # Safety
// `ens` must be a live handle; `out` must be writable.
enum IbiStatus ibi_ensemble_tau_ci(const struct IbiEnsemble *ens,
                                   double level,
                                   struct IbiInterval *out);

// Percentile interval for `gamma` over replicates where it is defined.
//
// # Safety
// `ens` must be a live handle; `out` must be writable.
enum IbiStatus ibi_ensemble_gamma_ci(const struct IbiEnsemble *ens,
                                     double level,
                                     struct IbiInterval *out);

// Tukey-depth confidence region at `level`, summarized.
//
// # Safety
// `ens` must be a live handle; `out` must be writable.
enum IbiStatus ibi_ensemble_region(const struct IbiEnsemble *ens,
                                   double level,
                                   struct IbiRegionSummary *out);

// # Safety
// `ens` must be null or a handle not yet freed.
void ibi_ensemble_free(struct IbiEnsemble *ens);

// Label-permutation p-values for `tau` and `gamma`.
//
// # Safety
// `ds` must be a live handle; `out` must be writable.
enum IbiStatus ibi_permutation_test(const struct IbiDataset *ds,
                                    uintptr_t k,
                                    uint64_t seed,
                                    struct IbiPermutation *out);

#endif  /* IBI_H */
