#ifndef SUDDEN_OTTO_H
#define SUDDEN_OTTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SoStatus {
  SO_STATUS_OK = 0,
  SO_STATUS_NULL_POINTER = 1,
  SO_STATUS_INVALID_ARGUMENT = 2,
  SO_STATUS_NON_CONTRACTIVE = 3,
  SO_STATUS_SINGULAR_SOLVE = 4,
  SO_STATUS_NON_CONVERGENT = 5,
  SO_STATUS_PARSE_ERROR = 6,
  SO_STATUS_PANIC = 7,
} SoStatus;

typedef enum SoRateKind {
  SO_RATE_KIND_DIRECT = 0,
  SO_RATE_KIND_RESONATOR = 1,
} SoRateKind;

typedef enum SoProtocol {
  SO_PROTOCOL_COHERENT_SUDDEN = 0,
  SO_PROTOCOL_INCOHERENT_SCALED = 1,
  SO_PROTOCOL_CLASSICAL = 2,
} SoProtocol;

typedef enum SoThermalization {
  SO_THERMALIZATION_EXACT = 0,
  SO_THERMALIZATION_LINEAR_ORDER = 1,
} SoThermalization;

/*
 Opaque cycle specification.
 */
typedef struct SoCycleSpec SoCycleSpec;

/*
 Operating point of H = E₀(q σ_z + Δ σ_x).
 */
typedef struct SoQubit {
  double e0;
  double delta;
  double q;
} SoQubit;

/*
 Bath description. `gamma_down` is read for direct baths; `kappa`,
 `quality` and `omega_res` for resonator baths.
 */
typedef struct SoBath {
  double beta;
  enum SoRateKind kind;
  double gamma_down;
  double kappa;
  double quality;
  double omega_res;
} SoBath;

typedef struct SoSpecParams {
  struct SoQubit qubit_low;
  struct SoQubit qubit_high;
  struct SoBath cold;
  struct SoBath hot;
  double dt;
  enum SoProtocol protocol;
  enum SoThermalization thermalization;
} SoSpecParams;

/*
 Bloch components (𝒟, ℛ, ℐ) of one corner.
 */
typedef struct SoState {
  double d;
  double r;
  double i;
} SoState;

typedef struct SoLimitCycle {
  struct SoState a;
  struct SoState b;
  struct SoState c;
  struct SoState d;
  double q_cold;
  double q_hot;
  double w_compress;
  double w_expand;
  double p_cold;
  double p_hot;
  /*
   Valid only when `has_cop` is non-zero.
   */
  double cop;
  int32_t has_cop;
  double spectral_radius;
  double first_law_residual;
} SoLimitCycle;

typedef struct SoPowers {
  double p_cold;
  double p_hot;
} SoPowers;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds a cycle specification. On success `*out` receives a handle that
 must be released with [`so_spec_free`].

 # Safety
 `params` must point to a valid `SoSpecParams`; `out` must be writable.
 */
enum SoStatus so_spec_new(const struct SoSpecParams *params, struct SoCycleSpec **out);

/*
 Builds a cycle specification from a JSON run configuration (the CLI's
 `--config` format; sweep and output fields are accepted and ignored).

 # Safety
 `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum SoStatus so_spec_from_json(const char *json, struct SoCycleSpec **out);

/*
 Copy of `spec` with a different half-period δt.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum SoStatus so_spec_with_dt(const struct SoCycleSpec *spec, double dt, struct SoCycleSpec **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `spec` must be null or a handle not yet freed.
 */
void so_spec_free(struct SoCycleSpec *spec);

/*
 Level splittings ΔE_C and ΔE_H of the two operating points.

 # Safety
 `spec` must be a live handle; outputs must be writable.
 */
enum SoStatus so_spec_splittings(const struct SoCycleSpec *spec, double *de_cold, double *de_hot);

/*
 Solves the periodic steady state.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum SoStatus so_solve_limit_cycle(const struct SoCycleSpec *spec, struct SoLimitCycle *out);

/*
 Powers extrapolated to δt → 0 from solves at the spec's δt, δt/2, δt/4.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum SoStatus so_sudden_limit(const struct SoCycleSpec *spec, struct SoPowers *out);

/*
 Closed-form coherent sudden-limit powers at η_M → 1 and their first-order
 coefficients in Δ/q_M, evaluated with the spec's rates.

 # Safety
 `spec` must be a live handle; `leading` and `slope` must be writable.
 */
enum SoStatus so_coherent_closed_form(const struct SoCycleSpec *spec,
                                      struct SoPowers *leading,
                                      struct SoPowers *slope);

/*
 Closed-form classical sudden-limit powers with the spec's rates.

 # Safety
 `spec` must be a live handle; `out` must be writable.
 */
enum SoStatus so_classical_closed_form(const struct SoCycleSpec *spec, struct SoPowers *out);

/*
 Ideal Otto coefficient of performance ΔE_C/(ΔE_H − ΔE_C).

 # Safety
 `out` must be writable.
 */
enum SoStatus so_otto_cop(double de_cold, double de_hot, double *out);

/*
 Copies the last error message of this thread into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length excluding the NUL.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
uintptr_t so_last_error(char *buf, uintptr_t len);

/*
 Library version as a static NUL-terminated string.
 */
const char *so_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUDDEN_OTTO_H */
