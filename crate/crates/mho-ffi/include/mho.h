/* C interface for the mho rate-region library.
 *
 * Hand-maintained to mirror crates/mho-ffi/src/lib.rs; cbindgen.toml in
 * the crate root holds the settings for regenerating it with cbindgen
 * when the tool is available.
 *
 * Conventions: outputs go through pointers, the return value is always
 * an MhoStatus, and on any non-OK status mho_last_error_message()
 * describes the failure. No pointer argument is retained past a call
 * except the region handle, which the caller owns until
 * mho_region_free(). */

#ifndef MHO_H
#define MHO_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Result code for every call. */
typedef enum MhoStatus {
  /* The call succeeded and every output was written. */
  MHO_STATUS_OK = 0,
  /* A required pointer argument was null. */
  MHO_STATUS_NULL_ARGUMENT = 1,
  /* A value was outside its documented domain. */
  MHO_STATUS_INVALID_ARGUMENT = 2,
  /* The request was valid but exceeds a built-in size cap. */
  MHO_STATUS_UNSUPPORTED = 3,
  /* The queried helper rates admit no finite bound; the output is set
   * to positive infinity. */
  MHO_STATUS_INFEASIBLE = 4,
} MhoStatus;

/* Region kind selector for mho_region_build. */
typedef enum MhoRegionKind {
  /* Achievable bound under per-helper distortion caps. */
  MHO_REGION_KIND_INNER = 0,
  /* Converse bound under per-helper distortion caps. */
  MHO_REGION_KIND_OUTER = 1,
  /* Exact region with no distortion constraints. */
  MHO_REGION_KIND_WEAK = 2,
} MhoRegionKind;

/* Opaque rate region handle. Created by mho_region_build, released by
 * mho_region_free. */
typedef struct MhoRegion MhoRegion;

/* Binary entropy in bits of a probability in [0, 1]. */
MhoStatus mho_binary_entropy(double p, double *out);

/* Inverse binary entropy: the unique preimage in [0, 0.5] of a value in
 * [0, 1]. */
MhoStatus mho_binary_entropy_inv(double y, double *out);

/* Crossover of the cascade of two binary symmetric channels. */
MhoStatus mho_binary_convolution(double a, double b, double *out);

/* Rate-distortion function of a helper observed through crossover p
 * when the decoder already holds the primary source, at Hamming
 * distortion d in [0, p]. */
MhoStatus mho_wz_rate(double p, double d, double *out);

/* Distortion where the helper rate curve leaves its convex envelope and
 * the tangent through (p, 0) takes over. */
MhoStatus mho_critical_distortion(double p, double *out);

/* Closed-form conditional entropy of the primary bit given len helper
 * descriptions, each helper contributing an interleaved (crossover,
 * test-channel noise) pair: pairs = [p_1, d_1, p_2, d_2, ...].
 * Exact for up to two helpers; an upper bound beyond that. */
MhoStatus mho_phi(const double *pairs, size_t len, double *out);

/* Builds a rate region for n binary sources (one primary plus n - 1
 * helpers with conditionally independent observation noise).
 *
 * kind is one of MhoRegionKind. crossovers holds the n - 1 helper
 * crossovers in (0, 0.5]. For the inner and outer kinds, caps holds
 * n - 1 distortion caps in [0, p_i]; for the weak kind caps must be
 * NULL. grid_step controls the inner bound's distortion sweep; pass 0
 * or a negative value for the default of 1e-3. On success *out owns the
 * handle. */
MhoStatus mho_region_build(int kind,
                           size_t n,
                           const double *crossovers,
                           const double *caps,
                           double grid_step,
                           MhoRegion **out);

/* Least achievable primary rate over len helper rates, written to out.
 * Returns MHO_STATUS_INFEASIBLE (with *out set to +inf) when a helper
 * rate sits below its floor so no primary rate suffices. */
MhoStatus mho_region_min_rate1(const MhoRegion *region,
                               const double *helper_rates,
                               size_t len,
                               double *out);

/* Membership of a full rate tuple (primary rate first) at tolerance
 * tol, written to out as 1 or 0. */
MhoStatus mho_region_contains(const MhoRegion *region,
                              const double *rates,
                              size_t len,
                              double tol,
                              int *out);

/* Releases a region handle. NULL is a no-op. */
void mho_region_free(MhoRegion *region);

/* Description of the last failure on this thread, NUL-terminated. The
 * pointer stays valid until the next failing call on the same thread. */
const char *mho_last_error_message(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MHO_H */
