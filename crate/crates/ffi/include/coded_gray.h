#ifndef CODED_GRAY_H
#define CODED_GRAY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_ARGUMENT = 2,
  CG_STATUS_OUT_OF_RANGE = 3,
  CG_STATUS_LENGTH_MISMATCH = 4,
  CG_STATUS_BUFFER_TOO_SMALL = 5,
  CG_STATUS_CONSTRUCTION_FAILED = 6,
  CG_STATUS_PANIC = 7,
} CgStatus;

/**
 * Scheme selector for `cg_scheme_new`.
 */
typedef enum CgSchemeKind {
  CG_SCHEME_KIND_LP4 = 0,
  CG_SCHEME_KIND_FW = 1,
  CG_SCHEME_KIND_CODED_GRAY = 2,
} CgSchemeKind;

/**
 * Opaque scheme handle.
 */
typedef struct CgScheme CgScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Bytes needed to hold a packed word of `bits` bits.
 */
size_t cg_word_bytes(size_t bits);

/**
 * Static description of a status code. Never returns NULL.
 */
const char *cg_status_str(enum CgStatus status);

/**
 * Builds a scheme over an `[nb, kb]` inner code with `s` staircase block-rows.
 * `kind` is a `CgSchemeKind` value. On success `*out` owns a new handle.
 *
 * # Safety
 * `out` must be NULL or valid for writing one pointer.
 */
enum CgStatus cg_scheme_new(uint32_t kind,
                            size_t kb,
                            size_t nb,
                            size_t s,
                            uint64_t inner_seed,
                            struct CgScheme **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `scheme` must be NULL or a handle from `cg_scheme_new` not yet freed.
 */
void cg_scheme_free(struct CgScheme *scheme);

/**
 * Word length N in bits.
 *
 * # Safety
 * `scheme` must be a live handle; `out` must be valid for writing.
 */
enum CgStatus cg_scheme_word_len(const struct CgScheme *scheme, size_t *out);

/**
 * Number of encodable integers m; valid inputs are `1..=m`.
 *
 * # Safety
 * `scheme` must be a live handle; `out` must be valid for writing.
 */
enum CgStatus cg_scheme_size(const struct CgScheme *scheme, uint64_t *out);

/**
 * Distance M between consecutive milestones.
 *
 * # Safety
 * `scheme` must be a live handle; `out` must be valid for writing.
 */
enum CgStatus cg_scheme_step(const struct CgScheme *scheme, uint64_t *out);

/**
 * Encodes `x` into `buf`, which must hold at least `cg_word_bytes(N)` bytes.
 *
 * # Safety
 * `scheme` must be a live handle; `buf` must be valid for `buf_len` bytes.
 */
enum CgStatus cg_scheme_encode(const struct CgScheme *scheme,
                               uint64_t x,
                               uint8_t *buf,
                               size_t buf_len);

/**
 * Decodes a packed, possibly noisy word into `*out_x`.
 *
 * # Safety
 * `scheme` must be a live handle; `buf` must be valid for `buf_len` bytes;
 * `out_x` must be valid for writing.
 */
enum CgStatus cg_scheme_decode(const struct CgScheme *scheme,
                               const uint8_t *buf,
                               size_t buf_len,
                               uint64_t *out_x);

/**
 * Passes a packed `bits`-bit word through a binary symmetric channel with
 * crossover `p`. The noise is a pure function of `(seed, index)`. `input`
 * and `output` may alias.
 *
 * # Safety
 * `input` must be valid for `cg_word_bytes(bits)` bytes and `output` for
 * `out_len` bytes.
 */
enum CgStatus cg_bsc_transmit(double p,
                              uint64_t seed,
                              uint64_t index,
                              const uint8_t *input,
                              size_t bits,
                              uint8_t *output,
                              size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CODED_GRAY_H */
