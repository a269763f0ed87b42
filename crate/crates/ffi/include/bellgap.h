/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef BELLGAP_H
#define BELLGAP_H

#include <stddef.h>
#include <stdint.h>

typedef enum BgStatus {
  BG_STATUS_OK = 0,
  BG_STATUS_NULL_POINTER = 1,
  BG_STATUS_INVALID_ARGUMENT = 2,
  BG_STATUS_UNSUPPORTED = 3,
  BG_STATUS_BUDGET = 4,
  BG_STATUS_IO = 5,
  BG_STATUS_FORMAT = 6,
  BG_STATUS_INTERNAL = 7,
  BG_STATUS_PANIC = 8,
} BgStatus;

typedef enum BgClass {
  BG_CLASS_LOCAL = 0,
  BG_CLASS_BILOCAL_GENERAL = 1,
  BG_CLASS_BILOCAL_NS = 2,
  BG_CLASS_NS = 3,
  BG_CLASS_QUANTUM_LOWER = 4,
  BG_CLASS_LOCAL_COR = 5,
  BG_CLASS_BILOCAL_COR = 6,
  BG_CLASS_NS_COR = 7,
} BgClass;

/**
 * Opaque handle to a Bell functional or game.
 */
typedef struct BgFunctional BgFunctional;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *bg_last_error(void);

/**
 * Library version as a static string.
 */
const char *bg_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BgStatus bg_chsh_game(struct BgFunctional **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum BgStatus bg_chsh_correlation(struct BgFunctional **out);

/**
 * Khot-Vishnoi game with `2^l` answers. A NaN `eta` selects `1/2 - 1/l`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum BgStatus bg_kv_game(uint32_t l, double eta, struct BgFunctional **out);

/**
 * Tripartite Hadamard correlation functional with `n` inputs per party.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum BgStatus bg_hadamard_correlation(uintptr_t n, struct BgFunctional **out);

/**
 * # Safety
 * Handles must be live; `out` must be valid for writes.
 */
enum BgStatus bg_tensor(const struct BgFunctional *left,
                        const struct BgFunctional *right,
                        struct BgFunctional **out);

/**
 * # Safety
 * `base` must be live; `out` must be valid for writes.
 */
enum BgStatus bg_hat(const struct BgFunctional *base, struct BgFunctional **out);

/**
 * # Safety
 * `base` must be live; `out` must be valid for writes.
 */
enum BgStatus bg_tilde(const struct BgFunctional *base, struct BgFunctional **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum BgStatus bg_functional_load(const char *path, struct BgFunctional **out);

/**
 * # Safety
 * `f` must be live; `path` must be a NUL-terminated string.
 */
enum BgStatus bg_functional_save(const struct BgFunctional *f, const char *path);

/**
 * Game-file JSON; release with `bg_string_free`.
 *
 * # Safety
 * `f` must be live; `out` must be valid for writes.
 */
enum BgStatus bg_functional_to_json(const struct BgFunctional *f, char **out);

/**
 * Number of parties, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or live.
 */
uintptr_t bg_functional_parties(const struct BgFunctional *f);

/**
 * Number of dense coefficients, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or live.
 */
uintptr_t bg_functional_len(const struct BgFunctional *f);

/**
 * Copies the dense coefficients into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `f` must be live; `buf` must be valid for `len` writes.
 */
enum BgStatus bg_functional_coeffs(const struct BgFunctional *f, double *buf, uintptr_t len);

/**
 * Value over `class`. `budget` 0 selects the default budget. Quantum lower
 * bounds use the constructed strategy of games built here, and see-saw
 * with qubits and `seeds` starts for correlation functionals.
 *
 * # Safety
 * `f` must be live; `out` must be valid for writes.
 */
enum BgStatus bg_value(const struct BgFunctional *f,
                       enum BgClass class_,
                       uint64_t budget,
                       uint64_t seeds,
                       double *out);

/**
 * See-saw lower bound for a correlation functional at the given local dimensions.
 *
 * # Safety
 * `f` must be live; `dims` must be valid for `ndims` reads; `out` for a write.
 */
enum BgStatus bg_seesaw(const struct BgFunctional *f,
                        const uintptr_t *dims,
                        uintptr_t ndims,
                        uint64_t seeds,
                        double *out);

/**
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void bg_functional_free(struct BgFunctional *f);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void bg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BELLGAP_H */
