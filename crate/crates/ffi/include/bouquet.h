#ifndef BOUQUET_H
#define BOUQUET_H

#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

// Result code of every fallible call.
typedef enum BouquetStatus {
  BOUQUET_STATUS_OK = 0,
  BOUQUET_STATUS_NULL_POINTER = 1,
  BOUQUET_STATUS_INVALID_UTF8 = 2,
  BOUQUET_STATUS_PANIC = 3,
  BOUQUET_STATUS_OVERFLOW = 10,
  BOUQUET_STATUS_OUT_OF_H = 11,
  BOUQUET_STATUS_NO_CONVERGENCE = 12,
  BOUQUET_STATUS_MODEL_MISMATCH = 13,
  BOUQUET_STATUS_NOT_IN_TRACT = 14,
  BOUQUET_STATUS_INFEASIBLE_MODEL = 15,
  BOUQUET_STATUS_PARSE = 16,
  BOUQUET_STATUS_EQUAL_INPUTS = 17,
  BOUQUET_STATUS_UNSUPPORTED_ALPHABET = 18,
  BOUQUET_STATUS_BAD_SPEC = 19,
  BOUQUET_STATUS_NOT_IN_JULIA = 20,
  BOUQUET_STATUS_LEFT_H = 21,
  BOUQUET_STATUS_EMPTY = 22,
  BOUQUET_STATUS_NO_ENDPOINT_FOUND = 23,
  BOUQUET_STATUS_BAD_PHI = 24,
  BOUQUET_STATUS_ADDRESS_MISMATCH = 25,
  BOUQUET_STATUS_EMPTY_INPUT = 26,
  BOUQUET_STATUS_NOT_ON_HAIR = 27,
  BOUQUET_STATUS_INVALID_ARGUMENT = 28,
} BouquetStatus;

// Opaque external address.
typedef struct BouquetAddress BouquetAddress;

// Opaque logarithmic model.
typedef struct BouquetModel BouquetModel;

// A complex number, `re + i·im`.
typedef struct BouquetComplex {
  double re;
  double im;
} BouquetComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a
// successful call. Valid until the next call on this thread.
const char *bouquet_last_error(void);

// The exponential family `λe^w` with tract radius `r_f`, rejected unless
// it is of disjoint type.
enum BouquetStatus bouquet_model_exp(struct BouquetComplex lambda,
                                     double r_f,
                                     struct BouquetModel **out);

// The sine family `λ sin w` with tract radius `r_f`.
enum BouquetStatus bouquet_model_sine(double lambda, double r_f, struct BouquetModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from a `bouquet_model_*` constructor and not be used
// afterwards.
void bouquet_model_free(struct BouquetModel *model);

// Whether the model's tract closures avoid the half-plane boundary.
//
// # Safety
// `model` must be a live handle or null.
enum BouquetStatus bouquet_model_is_disjoint(const struct BouquetModel *model, bool *out);

// The logarithmic transform `F(z)`.
//
// # Safety
// `model` must be a live handle; `out` must be writable.
enum BouquetStatus bouquet_model_eval(const struct BouquetModel *model,
                                      struct BouquetComplex z,
                                      struct BouquetComplex *out);

// The branch of `F^{-1}` onto the tract with index `tract_index`.
//
// # Safety
// `model` must be a live handle; `out` must be writable.
enum BouquetStatus bouquet_model_inverse(const struct BouquetModel *model,
                                         int64_t tract_index,
                                         struct BouquetComplex w,
                                         struct BouquetComplex *out);

// Index of the tract containing `z`. `*in_tract` is false, and `*index`
// untouched, when `z` lies in no tract.
//
// # Safety
// `model` must be a live handle; `in_tract` and `index` must be writable.
enum BouquetStatus bouquet_model_classify(const struct BouquetModel *model,
                                          struct BouquetComplex z,
                                          bool *in_tract,
                                          int64_t *index);

// Parses an address such as `"1 -1;0"` (preperiod, `;`, period).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum BouquetStatus bouquet_address_parse(const char *text_, struct BouquetAddress **out);

// Releases an address. Null is ignored.
//
// # Safety
// `address` must come from [`bouquet_address_parse`] and not be used
// afterwards.
void bouquet_address_free(struct BouquetAddress *address);

// Canonical text of an address, to be released with
// [`bouquet_string_free`].
//
// # Safety
// `address` must be a live handle; `out` must be writable.
enum BouquetStatus bouquet_address_to_string(const struct BouquetAddress *address, char **out);

// Lexicographic comparison: `*out` is -1, 0 or 1.
//
// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum BouquetStatus bouquet_address_compare(const struct BouquetAddress *a,
                                           const struct BouquetAddress *b,
                                           int32_t *out);

// Order-preserving ordinate of the address in `(0, 1)`.
//
// # Safety
// `address` must be a live handle; `out` must be writable.
enum BouquetStatus bouquet_address_ordinate(const struct BouquetAddress *address, double *out);

// The point of potential `t` on the hair with the given address.
//
// # Safety
// Handles must be live; `out` must be writable.
enum BouquetStatus bouquet_trace(const struct BouquetModel *model,
                                 const struct BouquetAddress *address,
                                 double t,
                                 struct BouquetComplex *out);

// Traces `len` potentials from `ts` into `out`, which must hold `len`
// values. Stops at the first failing potential.
//
// # Safety
// Handles must be live; `ts` and `out` must point to `len` elements.
enum BouquetStatus bouquet_trace_many(const struct BouquetModel *model,
                                      const struct BouquetAddress *address,
                                      const double *ts,
                                      uintptr_t len,
                                      struct BouquetComplex *out);

// Endpoint of a hair: its potential `*t` and position `*z`.
//
// # Safety
// Handles must be live; `t` and `z` must be writable.
enum BouquetStatus bouquet_endpoint(const struct BouquetModel *model,
                                    const struct BouquetAddress *address,
                                    double *t,
                                    struct BouquetComplex *z);

// Builds the brush of `n_addresses` hairs sampled on `t_grid` and returns
// it as JSON, to be released with [`bouquet_string_free`].
//
// # Safety
// Handles must be live; arrays must hold the stated number of elements.
enum BouquetStatus bouquet_brush_json(const struct BouquetModel *model,
                                      const struct BouquetAddress *const *addresses,
                                      uintptr_t n_addresses,
                                      const double *t_grid,
                                      uintptr_t n_t,
                                      char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void bouquet_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOUQUET_H */
