#ifndef JC_CONTROL_H
#define JC_CONTROL_H

/* Auto-generated by cbindgen from jc-control-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Equation family that produced a singular coupling value.
 */
typedef enum {
  /**
   * g = 0.
   */
  JCC_FAMILY_ZERO = 0,
  /**
   * Eigenvalue crossing with the next (n+1, −) level.
   */
  JCC_FAMILY_CRIT_EIG = 1,
  /**
   * 2ω = f_{m+1} + f_m − f_{n+1} + f_n.
   */
  JCC_FAMILY_ONE_PLUS_C = 2,
  /**
   * 2ω = f_{m+1} − f_m − f_{n+1} + f_n.
   */
  JCC_FAMILY_ONE_D = 3,
  /**
   * 2ω = f_{m+1} + f_m − f_{n+1} − f_n.
   */
  JCC_FAMILY_TWO_C = 4,
} JccFamily;

/**
 * Status code returned by every FFI function.
 */
typedef enum {
  /**
   * Success; all out parameters are valid.
   */
  JCC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  JCC_STATUS_NULL_POINTER = 1,
  /**
   * Model parameters out of range (e.g. ω ≤ 0 or Ω ≤ 0).
   */
  JCC_STATUS_INVALID_PARAMS = 2,
  /**
   * Level index out of range (n < −1, or ν invalid for the level).
   */
  JCC_STATUS_INVALID_LEVEL = 3,
  /**
   * Argument outside the domain of the requested computation.
   */
  JCC_STATUS_DOMAIN = 4,
  /**
   * A computation produced a non-finite value.
   */
  JCC_STATUS_NON_FINITE = 5,
  /**
   * The caller-provided buffer was too small; nothing was written.
   */
  JCC_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * An internal panic was caught at the FFI boundary.
   */
  JCC_STATUS_PANIC = 7,
} JccStatus;

/**
 * Verdict of chain certification.
 */
typedef enum {
  /**
   * Connected chain, no frequency coincidences, no coupled degeneracies.
   */
  JCC_VERDICT_CERTIFIED_NON_RESONANT = 0,
  /**
   * Some chain transition frequency coincides with another coupled one.
   */
  JCC_VERDICT_RESONANCE_FOUND = 1,
  /**
   * Chain disconnected, dead edge, or coupled degenerate levels.
   */
  JCC_VERDICT_COUPLING_BROKEN = 2,
} JccVerdict;

/**
 * Opaque handle to a validated (ω, Ω, g) parameter set.
 */
typedef struct JccParams JccParams;

/**
 * Opaque handle to an enumeration of the singular coupling set.
 */
typedef struct JccSingularList JccSingularList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocates a parameter handle for mode frequency `omega`, qubit frequency
 * `capital_omega`, and coupling `g`. On success writes the handle to `out`;
 * release it with `jcc_params_free`.
 */
JccStatus jcc_params_new(double omega, double capital_omega, double g, JccParams **out);

/**
 * Releases a handle from `jcc_params_new`. Null is a no-op.
 */
void jcc_params_free(JccParams *params);

/**
 * Writes the detuning Δ = Ω − ω.
 */
JccStatus jcc_detuning(const JccParams *params, double *out);

/**
 * Writes the half-gap frequency f_n = √(Δ² + 4g²(n+1)) / 2, n ≥ −1.
 */
JccStatus jcc_f(const JccParams *params, int n, double *out);

/**
 * Writes the dressed energy of level (n, ν). `nu` is +1 or −1; it is
 * ignored for the spurious level n = −1.
 */
JccStatus jcc_energy(const JccParams *params, int n, int nu, double *out);

/**
 * Writes the mixing angle θ_n and its cosine/sine halves (c_n, s_n).
 * Any of the three out pointers may be null to skip that value.
 */
JccStatus jcc_mixing(const JccParams *params, int n, double *theta, double *c, double *s);

/**
 * Writes the dressed-basis matrix element of the first control (X⊗1)
 * between levels (na, nua) and (nb, nub).
 */
JccStatus jcc_h1_element(const JccParams *params, int na, int nua, int nb, int nub, double *out);

/**
 * Writes the complex matrix element of the second control (P⊗1) as
 * (re, im). It is purely imaginary: i times the first control's element,
 * oriented toward the higher block.
 */
JccStatus jcc_h2_element(const JccParams *params,
                         int na,
                         int nua,
                         int nb,
                         int nub,
                         double *re,
                         double *im);

/**
 * First-order crossing point of level (n, ν) with (n+1, −). Writes
 * `found` = true and the non-negative root to `g_star` when the levels
 * cross; `found` = false (g_star untouched) otherwise.
 */
JccStatus jcc_g1_crossing(const JccParams *params, int n, int nu, bool *found, double *g_star);

/**
 * Second-order crossing point of level (n, ν) with (n+2, −); same contract
 * as `jcc_g1_crossing`. These crossings are benign (the coupling between
 * the crossing levels vanishes identically).
 */
JccStatus jcc_g2_crossing(const JccParams *params, int n, int nu, bool *found, double *g_star);

/**
 * Solves the resonance equation of `family` for indices (m, n), writing up
 * to `cap` non-negative roots (ascending) into `roots` and the total count
 * into `written`. Returns `JCC_STATUS_BUFFER_TOO_SMALL` (with `written` set
 * to the required count) when `cap` is insufficient.
 */
JccStatus jcc_solve_s2(double omega,
                       double capital_omega,
                       JccFamily family,
                       int m,
                       int n,
                       double *roots,
                       size_t cap,
                       size_t *written);

/**
 * Enumerates the singular coupling set on [0, g_max] with all level and
 * family indices capped at `n_cap`. Release the handle with
 * `jcc_singular_free`.
 */
JccStatus jcc_singular_enumerate(double omega,
                                 double capital_omega,
                                 double g_max,
                                 int n_cap,
                                 JccSingularList **out);

/**
 * Writes the number of distinct singular points in the list.
 */
JccStatus jcc_singular_len(const JccSingularList *list, size_t *out);

/**
 * Writes the `idx`-th singular point (ascending in g): its location
 * `g_star`, the equation family of its first witness, and how many
 * witnesses it has. `family` and `tag_count` may be null to skip them.
 */
JccStatus jcc_singular_get(const JccSingularList *list,
                           size_t idx,
                           double *g_star,
                           JccFamily *family,
                           size_t *tag_count);

/**
 * Writes whether the index cap provably truncated the enumeration (larger
 * indices would contribute further points inside [0, g_max]).
 */
JccStatus jcc_singular_may_truncate(const JccSingularList *list, bool *out);

/**
 * Releases a handle from `jcc_singular_enumerate`. Null is a no-op.
 */
void jcc_singular_free(JccSingularList *list);

/**
 * Certifies the transition chain at the handle's coupling, truncated at
 * `n_max`: connectivity, frequency coincidences within `tol`, and coupled
 * degeneracies. Edge amplitudes at or below `threshold` count as broken;
 * pass a negative `threshold` for the library default.
 */
JccStatus jcc_certify(const JccParams *params,
                      int n_max,
                      double tol,
                      double threshold,
                      JccVerdict *verdict);

/**
 * Like `jcc_certify`, but writes the full report as a NUL-terminated JSON
 * string (same schema as the `jcctl certify` command). Release the string
 * with `jcc_string_free`.
 */
JccStatus jcc_certify_json(const JccParams *params,
                           int n_max,
                           double tol,
                           double threshold,
                           char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 */
void jcc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JC_CONTROL_H */
