#ifndef ORBINV_H
#define ORBINV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum OrbinvStatus {
  ORBINV_STATUS_OK = 0,
  ORBINV_STATUS_NULL_POINTER = 1,
  ORBINV_STATUS_INVALID_ARGUMENT = 2,
  ORBINV_STATUS_DIMENSION_MISMATCH = 3,
  ORBINV_STATUS_DOMAIN = 4,
  ORBINV_STATUS_GROUP_TOO_LARGE = 5,
  ORBINV_STATUS_INVARIANT = 6,
  ORBINV_STATUS_BUFFER_TOO_SMALL = 7,
  ORBINV_STATUS_PANIC = 8,
} OrbinvStatus;

typedef enum OrbinvTransformKind {
  ORBINV_TRANSFORM_KIND_F = 0,
  ORBINV_TRANSFORM_KIND_THETA = 1,
  ORBINV_TRANSFORM_KIND_PHI_F = 2,
  ORBINV_TRANSFORM_KIND_PHI = 3,
} OrbinvTransformKind;

typedef enum OrbinvPhiMode {
  ORBINV_PHI_MODE_REPAIRED = 0,
  ORBINV_PHI_MODE_AS_WRITTEN = 1,
} OrbinvPhiMode;

// A group action in character form.
typedef struct OrbinvGroup OrbinvGroup;

// Hermite multiplier data and the rational invariants built on it.
typedef struct OrbinvHermite OrbinvHermite;

// Minimal invariant monomials of a group.
typedef struct OrbinvTable OrbinvTable;

// A configured `F`, `Θ`, `Φ_F` or `Φ`.
typedef struct OrbinvTransform OrbinvTransform;

typedef struct OrbinvComplex {
  double re;
  double im;
} OrbinvComplex;

// Library version as a static NUL-terminated string.
const char *orbinv_version(void);

// Message for the last failed call on this thread, or NULL. Valid until the
// next call into the library on the same thread.
const char *orbinv_last_error(void);

// Releases a string returned by a `*_to_json` function.
//
// # Safety
// `s` must come from this library and not have been freed.
void orbinv_string_free(char *s);

// Builds a group from `num_generators` orders and a row-major
// `num_generators × dim` exponent matrix.
//
// # Safety
// `orders` and `exponents` must point to arrays of the stated sizes.
enum OrbinvStatus orbinv_group_new(const uint64_t *orders,
                                   size_t num_generators,
                                   const int64_t *exponents,
                                   size_t dim,
                                   struct OrbinvGroup **out);

// Circular shifts of `n × m` images in Fourier coordinates.
//
// # Safety
// `out` must be a valid pointer.
enum OrbinvStatus orbinv_group_shift(size_t n, size_t m, struct OrbinvGroup **out);

// # Safety
// `group` must come from this library and not have been freed.
void orbinv_group_free(struct OrbinvGroup *group);

// Signal dimension `N`, or 0 for NULL.
//
// # Safety
// `group` must be NULL or a live handle.
size_t orbinv_group_dim(const struct OrbinvGroup *group);

// Number of generators `s`, or 0 for NULL.
//
// # Safety
// `group` must be NULL or a live handle.
size_t orbinv_group_num_generators(const struct OrbinvGroup *group);

// Writes `g·x` to `out`.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_group_act(const struct OrbinvGroup *group,
                                   const uint64_t *powers,
                                   size_t num_powers,
                                   const struct OrbinvComplex *x,
                                   size_t len,
                                   struct OrbinvComplex *out,
                                   size_t out_len);

// `d_G([x], [y])` with a witness `g` such that `x ≈ g·y`; the witness buffer
// needs one entry per generator.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_orbit_distance(const struct OrbinvGroup *group,
                                        const struct OrbinvComplex *x,
                                        const struct OrbinvComplex *y,
                                        size_t len,
                                        double *distance,
                                        uint64_t *witness,
                                        size_t witness_len);

// Exponent table with tuples up to `max_tuple_size` (1, 2 or 3).
//
// # Safety
// `group` must be a live handle and `out` a valid pointer.
enum OrbinvStatus orbinv_table_new(const struct OrbinvGroup *group,
                                   size_t max_tuple_size,
                                   struct OrbinvTable **out);

// # Safety
// `table` must come from this library and not have been freed.
void orbinv_table_free(struct OrbinvTable *table);

// Number of monomials `s`, or 0 for NULL.
//
// # Safety
// `table` must be NULL or a live handle.
size_t orbinv_table_total_dim(const struct OrbinvTable *table);

// JSON rendering of the table, or NULL on failure.
//
// # Safety
// `table` must be NULL or a live handle.
char *orbinv_table_to_json(const struct OrbinvTable *table);

// Transform over the group's full exponent table with uniform `β`; `Φ`
// draws a `(2N + 1) × s` reduction from `seed`.
//
// # Safety
// `group` must be a live handle and `out` a valid pointer.
enum OrbinvStatus orbinv_transform_new(const struct OrbinvGroup *group,
                                       enum OrbinvTransformKind kind,
                                       enum OrbinvPhiMode mode,
                                       uint64_t seed,
                                       struct OrbinvTransform **out);

// # Safety
// `transform` must come from this library and not have been freed.
void orbinv_transform_free(struct OrbinvTransform *transform);

// Length of the transform's output, or 0 for NULL.
//
// # Safety
// `transform` must be NULL or a live handle.
size_t orbinv_transform_output_dim(const struct OrbinvTransform *transform);

// Evaluates the transform at `x`.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_transform_eval(const struct OrbinvTransform *transform,
                                        const struct OrbinvComplex *x,
                                        size_t len,
                                        struct OrbinvComplex *out,
                                        size_t out_len);

// Hermite multiplier of `[A −P]` for the group.
//
// # Safety
// `group` must be a live handle and `out` a valid pointer.
enum OrbinvStatus orbinv_hermite_new(const struct OrbinvGroup *group, struct OrbinvHermite **out);

// # Safety
// `hermite` must come from this library and not have been freed.
void orbinv_hermite_free(struct OrbinvHermite *hermite);

// JSON with exact integer and rational strings, or NULL on failure.
//
// # Safety
// `hermite` must be NULL or a live handle.
char *orbinv_hermite_to_json(const struct OrbinvHermite *hermite);

// Writes the `N` components of `z^{V_n}`. A zero coordinate under a
// negative exponent sets `*domain_ok = 0` and leaves `out` untouched.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_hermite_eval(const struct OrbinvHermite *hermite,
                                      const struct OrbinvComplex *z,
                                      size_t len,
                                      struct OrbinvComplex *out,
                                      size_t out_len,
                                      bool *domain_ok);

// `Q(x) = Σ sign(c_k)|x_k|²`.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_hermite_q(const struct OrbinvHermite *hermite,
                                   const struct OrbinvComplex *x,
                                   size_t len,
                                   double *q);

// `𝒢(x)`: writes the sign of `Q` to `sign` and `N` values to `out`.
//
// # Safety
// Pointers must reference arrays of the stated lengths.
enum OrbinvStatus orbinv_hermite_g(const struct OrbinvHermite *hermite,
                                   const struct OrbinvComplex *x,
                                   size_t len,
                                   int8_t *sign,
                                   struct OrbinvComplex *out,
                                   size_t out_len);

#endif  /* ORBINV_H */
