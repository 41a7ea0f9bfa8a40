#ifndef BALLOTOPE_H
#define BALLOTOPE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
/* Strings returned through `char **` out-parameters are owned by the caller
   and must be released with ballotope_string_free. */

typedef enum BallotopeStatus {
  BALLOTOPE_STATUS_OK = 0,
  BALLOTOPE_STATUS_NULL_POINTER = 1,
  BALLOTOPE_STATUS_INVALID_UTF8 = 2,
  BALLOTOPE_STATUS_PARSE = 3,
  BALLOTOPE_STATUS_PRECONDITION = 4,
  BALLOTOPE_STATUS_CAP_EXCEEDED = 5,
  BALLOTOPE_STATUS_OUT_OF_RANGE = 6,
  BALLOTOPE_STATUS_PANIC = 7,
} BallotopeStatus;

// Opaque gap vector.
typedef struct BallotopeGapVector BallotopeGapVector;

// Opaque list of polytope vertices.
typedef struct BallotopeVertexSet BallotopeVertexSet;

typedef struct BallotopeMembership {
  bool in_cone;
  bool in_polytope;
  bool in_cone_interior;
} BallotopeMembership;

typedef struct BallotopeCut {
  // Smallest left-rotation that lands in the cone.
  size_t canonical;
  // Number of rotations in the cone.
  size_t cut_count;
  bool unique;
  bool generic;
} BallotopeCut;

typedef struct BallotopeVolume {
  double estimate;
  double std_error;
  uint64_t hits;
} BallotopeVolume;

typedef struct BallotopeUnimodularity {
  size_t submatrices_tested;
  size_t invertible_count;
  bool all_unimodular;
  bool all_flat;
} BallotopeUnimodularity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ballotope_version(void);

// Message for the last failed call on this thread, or "" after a success.
// Valid until the next ballotope call on the same thread.
const char *ballotope_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void ballotope_string_free(char *s);

// Whether `bits` (a string of '0'/'1') is a bidirectional ballot sequence.
//
// # Safety
// `bits` must be a NUL-terminated string; `out` must be writable.
enum BallotopeStatus ballotope_is_bbs(const char *bits, bool *out);

// Number of bidirectional ballot sequences of length `n`, as a decimal string.
//
// # Safety
// `out` must be writable; free the result with `ballotope_string_free`.
enum BallotopeStatus ballotope_count_bbs(size_t n, char **out);

// Parses a comma-separated list of rationals ("3/4", "1.78", "2") of odd length.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum BallotopeStatus ballotope_gap_vector_parse(const char *text, struct BallotopeGapVector **out);

// # Safety
// `v` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_gap_vector_len(const struct BallotopeGapVector *v, size_t *out);

// Entries formatted as "[p/q,...]".
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_gap_vector_to_string(const struct BallotopeGapVector *v, char **out);

// # Safety
// `v` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_gap_vector_membership(const struct BallotopeGapVector *v,
                                                     struct BallotopeMembership *out);

// Rotations of a non-negative necklace that land in the ballot cone.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_gap_vector_cut(const struct BallotopeGapVector *v,
                                              struct BallotopeCut *out);

// # Safety
// `v` must be null or a handle from `ballotope_gap_vector_parse`, not yet freed.
void ballotope_gap_vector_free(struct BallotopeGapVector *v);

// All vertices of the polytope in dimension `2n-1`, sorted lexicographically.
// Fails with `CAP_EXCEEDED` for `n > 10`.
//
// # Safety
// `out` must be writable.
enum BallotopeStatus ballotope_vertex_set_enumerate(size_t n, struct BallotopeVertexSet **out);

// # Safety
// `set` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_vertex_set_len(const struct BallotopeVertexSet *set, size_t *out);

// Coordinates per vertex, `2n-1`.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_vertex_set_dim(const struct BallotopeVertexSet *set, size_t *out);

// Copies vertex `index` into `buf` (0/1 bytes). `buf_len` must be at least the dimension.
//
// # Safety
// `set` must be a live handle; `buf` must have room for `buf_len` bytes.
enum BallotopeStatus ballotope_vertex_set_get(const struct BallotopeVertexSet *set,
                                              size_t index,
                                              uint8_t *buf,
                                              size_t buf_len);

// Whether vertex `index` lies in the interior of the cone.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_vertex_set_is_interior(const struct BallotopeVertexSet *set,
                                                      size_t index,
                                                      bool *out);

// Ballot sequence of vertex `index`: length `2n+3`, or `2n-1` with `interior`
// (which requires an interior vertex and `n >= 2`).
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum BallotopeStatus ballotope_vertex_set_to_bbs(const struct BallotopeVertexSet *set,
                                                 size_t index,
                                                 bool interior,
                                                 char **out);

// # Safety
// `set` must be null or a handle from `ballotope_vertex_set_enumerate`, not yet freed.
void ballotope_vertex_set_free(struct BallotopeVertexSet *set);

// Monte Carlo volume of the polytope; deterministic in `(n, samples, seed)`.
//
// # Safety
// `out` must be writable.
enum BallotopeStatus ballotope_mc_volume(size_t n,
                                         uint64_t samples,
                                         uint64_t seed,
                                         struct BallotopeVolume *out);

// Flat elimination over every square row subset of the constraint matrix (`n <= 4`).
//
// # Safety
// `out` must be writable.
enum BallotopeStatus ballotope_verify_unimodularity(size_t n, struct BallotopeUnimodularity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLOTOPE_H */
