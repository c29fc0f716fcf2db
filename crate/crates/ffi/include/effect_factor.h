#ifndef EFFECT_FACTOR_H
#define EFFECT_FACTOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum EfStatus {
  EF_STATUS_OK = 0,
  // The call completed and at least one check failed.
  EF_STATUS_CHECK_FAILED = 1,
  EF_STATUS_INVALID_CONFIG = 2,
  EF_STATUS_INSTANCE_TOO_LARGE = 3,
  EF_STATUS_NULL_POINTER = 4,
  EF_STATUS_INVALID_ARGUMENT = 5,
  // A bug: the library panicked.
  EF_STATUS_INTERNAL = 6,
} EfStatus;

// A monad factored through the image of its free monad on a signature.
typedef struct EfFactored EfFactored;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or an empty string. Valid until the
// next failing call on the same thread.
const char *ef_last_error(void);

// Library version as a static string.
const char *ef_version(void);

// Builds a handle for a built-in preset with `|S|` or `|A|` equal to `param`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum EfStatus ef_factored_from_preset(const char *name, size_t param, struct EfFactored **out);

// Builds a handle from the monad, operations and limits of a TOML run
// configuration.
//
// # Safety
// `config` must be a NUL-terminated string and `out` a valid pointer.
enum EfStatus ef_factored_from_config(const char *config, struct EfFactored **out);

// # Safety
// `h` must come from an `ef_factored_from_*` call and not be used again.
void ef_factored_free(struct EfFactored *h);

// Saturates `R X` for `|X| = x` and stores `|R X|`.
//
// # Safety
// `h` must be a live handle and `size` a valid pointer.
enum EfStatus ef_factored_saturate(struct EfFactored *h, size_t x, size_t *size);

// Stores `|T X|`.
//
// # Safety
// `h` must be a live handle and `size` a valid pointer.
enum EfStatus ef_factored_carrier_size(struct EfFactored *h, size_t x, size_t *size);

// Copies the table of `n_X : R X → T X` into `buf`. `len` receives the
// table length even when `cap` is too small.
//
// # Safety
// `h` must be a live handle, `len` a valid pointer and `buf` valid for
// `cap` elements.
enum EfStatus ef_factored_n_table(struct EfFactored *h,
                                  size_t x,
                                  size_t *buf,
                                  size_t cap,
                                  size_t *len);

// Copies the saturation layer trace at `X`, as for [`ef_factored_n_table`].
//
// # Safety
// As for [`ef_factored_n_table`].
enum EfStatus ef_factored_layer_trace(struct EfFactored *h,
                                      size_t x,
                                      size_t *buf,
                                      size_t cap,
                                      size_t *len);

// Runs the factored-monad checks at objects `(x, y, z)` and the
// stabilization check at `x`. `failures` receives the number of failed
// checks; the status is `EF_STATUS_CHECK_FAILED` when it is nonzero.
//
// # Safety
// `h` must be a live handle and `failures` a valid pointer.
enum EfStatus ef_factored_verify(struct EfFactored *h,
                                 size_t x,
                                 size_t y,
                                 size_t z,
                                 uint64_t budget,
                                 uint64_t seed,
                                 size_t *failures);

// Runs a subcommand (`factor`, `laws`, `theory`, `stability`, `modularity`,
// `presets`) on a TOML configuration, which may be null for `presets`. The
// rendered report (`machine` nonzero for TOML) is stored in `report` for
// both `EF_STATUS_OK` and `EF_STATUS_CHECK_FAILED`.
//
// # Safety
// String arguments must be NUL-terminated; `report` must be a valid pointer.
enum EfStatus ef_run_config(const char *subcommand,
                            const char *config,
                            int32_t machine,
                            char **report);

// # Safety
// `s` must come from this library and not be used again.
void ef_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EFFECT_FACTOR_H */
