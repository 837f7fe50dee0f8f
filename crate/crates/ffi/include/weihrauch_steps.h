#ifndef WEIHRAUCH_STEPS_H
#define WEIHRAUCH_STEPS_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_UTF8 = 2,
  WS_STATUS_PARSE = 3,
  WS_STATUS_REFUSED = 4,
  WS_STATUS_INTERNAL = 5,
  WS_STATUS_PANIC = 6,
} WsStatus;

typedef enum WsVerdict {
  WS_VERDICT_PASS = 0,
  WS_VERDICT_FAIL = 1,
  WS_VERDICT_UNDETERMINED = 2,
} WsVerdict;

// Opaque truth table.
typedef struct WsTable WsTable;

// Opaque compiled witness with its certificate.
typedef struct WsWitness WsWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a table in file form (`n=2` then `0111`) or inline form (`2:0111`).
//
// # Safety
// `text` must be a valid C string and `out` a valid pointer.
enum WsStatus ws_table_parse(const char *text, struct WsTable **out);

// # Safety
// `table` must come from `ws_table_parse` and not be used afterwards.
void ws_table_free(struct WsTable *table);

// # Safety
// `table` must be a live handle and `out` a valid pointer.
enum WsStatus ws_table_dim(const struct WsTable *table, uintptr_t *out);

// Writes `l(F)`, the longest alternation along an increasing chain.
//
// # Safety
// `table` must be a live handle and `out` a valid pointer.
enum WsStatus ws_table_alternation_length(const struct WsTable *table, uintptr_t *out);

// Compiles a witness for `s^F_α ≤ s^G_α`; refused with `REFUSED` when
// `l(F) > l(G)`.
//
// # Safety
// `source` and `target` must be live handles, `alpha` a valid C string and
// `out` a valid pointer.
enum WsStatus ws_compile(const struct WsTable *source,
                         const struct WsTable *target,
                         const char *alpha,
                         struct WsWitness **out);

// Parses certificate text into a witness handle.
//
// # Safety
// `text` must be a valid C string and `out` a valid pointer.
enum WsStatus ws_witness_parse(const char *text, struct WsWitness **out);

// # Safety
// `witness` must come from this library and not be used afterwards.
void ws_witness_free(struct WsWitness *witness);

// Certificate text; release it with `ws_string_free`.
//
// # Safety
// `witness` must be a live handle and `out` a valid pointer.
enum WsStatus ws_witness_certificate(const struct WsWitness *witness, char **out);

// Checks the witness on `samples` seeded sample tuples around the source
// thresholds.
//
// # Safety
// `witness` must be a live handle and `verdict` a valid pointer.
enum WsStatus ws_witness_verify(const struct WsWitness *witness,
                                uintptr_t samples,
                                uint64_t seed,
                                enum WsVerdict *verdict);

// # Safety
// `s` must come from this library and not be used afterwards.
void ws_string_free(char *s);

// Length in bytes of the last error message on this thread, excluding the
// terminating nul; 0 when there is none.
uintptr_t ws_last_error_length(void);

// Copies the last error message into `buf` (nul-terminated, truncated to
// `len - 1` bytes). Returns the number of bytes copied, excluding the nul.
//
// # Safety
// `buf` must point to at least `len` writable bytes.
uintptr_t ws_last_error_message(char *buf, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEIHRAUCH_STEPS_H */
