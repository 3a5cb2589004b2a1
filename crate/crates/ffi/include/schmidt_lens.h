#ifndef SCHMIDT_LENS_H
#define SCHMIDT_LENS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Status codes returned by every function.
typedef enum sl_status {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_DIMENSION_MISMATCH = 3,
  SL_STATUS_NUMERICAL = 4,
  SL_STATUS_PARSE = 5,
  SL_STATUS_BUFFER_TOO_SMALL = 6,
  SL_STATUS_PANIC = 7,
} sl_status;

typedef enum sl_verdict {
  SL_VERDICT_CERTIFIED_ABOVE = 0,
  SL_VERDICT_CONSISTENT_WITH_AT_MOST = 1,
  SL_VERDICT_INCONCLUSIVE = 2,
} sl_verdict;

typedef enum sl_family {
  SL_FAMILY_DEPOLARIZING = 0,
  SL_FAMILY_DEPHASING = 1,
} sl_family;

// Opaque channel handle.
typedef struct sl_channel sl_channel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sl_version(void);

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next call into the library on the same thread.
const char *sl_last_error_message(void);

// Depolarizing channel `ρ ↦ p ρ + (1 − p) I/d`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum sl_status sl_channel_depolarizing(size_t d, double p, struct sl_channel **out);

// Dephasing channel `ρ ↦ v ρ + (1 − v) diag(ρ)`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum sl_status sl_channel_dephasing(size_t d, double v, struct sl_channel **out);

// # Safety
// `out` must be valid for writing one pointer.
enum sl_status sl_channel_identity(size_t d, struct sl_channel **out);

// Parses the JSON Kraus format `{d_in, d_out, kraus}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum sl_status sl_channel_from_json(const char *json, struct sl_channel **out);

// Releases a handle; NULL is ignored.
//
// # Safety
// `ch` must come from this library and not be used afterwards.
void sl_channel_free(struct sl_channel *ch);

// # Safety
// `ch` must be a live handle; the out-pointers must be writable.
enum sl_status sl_channel_dims(const struct sl_channel *ch, size_t *d_in, size_t *d_out);

// # Safety
// `ch` must be a live handle; `n` must be writable.
enum sl_status sl_channel_num_kraus(const struct sl_channel *ch, size_t *n);

// Writes the normalized Choi matrix (`d² × d²`, interleaved) into `buf`.
// `required` receives the number of doubles needed; pass `buf = NULL` to
// query it.
//
// # Safety
// `buf` must hold `len` doubles when non-NULL; `required` may be NULL.
enum sl_status sl_channel_choi(const struct sl_channel *ch,
                               double *buf,
                               size_t len,
                               size_t *required);

// `Tr(W_r C)` for the channel's Choi state `C`.
//
// # Safety
// `ch` must be a live handle; `value` must be writable.
enum sl_status sl_choi_witness_value(const struct sl_channel *ch, size_t r, double *value);

// `Tr(W_r ρ)` for a `d ⊗ d` state given as a `d² × d²` interleaved matrix.
//
// # Safety
// `rho` must hold `2 d⁴` doubles; `value` must be writable.
enum sl_status sl_witness_value(size_t d, size_t r, const double *rho, double *value);

// One-sided test for Schmidt number above `r` (witness and `Λ_{1/r}`).
//
// # Safety
// `rho` must hold `2 d⁴` doubles; the out-pointers must be writable.
enum sl_status sl_certify_sn_above(size_t d,
                                   const double *rho,
                                   size_t r,
                                   double tol,
                                   enum sl_verdict *verdict,
                                   double *evidence);

// `(r d − 1)/(d² − 1)`.
//
// # Safety
// `out` must be writable.
enum sl_status sl_isotropic_sn_threshold(size_t d, size_t r, double *out);

// `(r − 1)/(d − 1)`.
//
// # Safety
// `out` must be writable.
enum sl_status sl_dephasing_sn_threshold(size_t d, size_t r, double *out);

// `1/(d + 1)`.
//
// # Safety
// `out` must be writable.
enum sl_status sl_eb_threshold(size_t d, double *out);

// Bisected witness crossing of a named family on `[0, 1]`.
//
// # Safety
// `out` must be writable.
enum sl_status sl_witness_threshold(enum sl_family family,
                                    size_t d,
                                    size_t r,
                                    double tol,
                                    double *out);

// Minimum eigenvalue of `(id ⊗ Λ_k)((Φ ⊗ Φ)(|ψ_q⟩⟨ψ_q|))` with
// `|ψ_q⟩ = Σ_j √q_j |jj⟩`.
//
// # Safety
// `ch` must be a live handle, `q` must hold `q_len` doubles and `out` must
// be writable.
enum sl_status sl_snac_min_eig(const struct sl_channel *ch,
                               const double *q,
                               size_t q_len,
                               double k,
                               double *out);

// Largest canonical Kraus rank: an upper bound on the Schmidt number of the
// Choi state.
//
// # Safety
// `ch` must be a live handle; `out` must be writable.
enum sl_status sl_sn_upper_bound(const struct sl_channel *ch, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHMIDT_LENS_H */
