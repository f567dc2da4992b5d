#ifndef SO3COVER_H
#define SO3COVER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum So3Status {
  SO3_STATUS_OK = 0,
  SO3_STATUS_NULL_POINTER = 1,
  SO3_STATUS_INVALID_ARGUMENT = 2,
  SO3_STATUS_INVALID_COUNT = 3,
  SO3_STATUS_UNKNOWN_GROUP = 4,
  SO3_STATUS_PARSE = 5,
  SO3_STATUS_IO = 6,
  SO3_STATUS_GEOMETRY = 7,
  SO3_STATUS_BUFFER_TOO_SMALL = 8,
  SO3_STATUS_PANIC = 9,
} So3Status;

// Opaque orientation set.
typedef struct So3Set So3Set;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *so3_version(void);

// Message of the last failing call on this thread; empty if none. Valid
// until the next failing call on the same thread.
const char *so3_last_error(void);

// Runs the optimization pipeline for `n` points on S³ (`n / 2` rotations)
// with symmetry `group` (e.g. "C1", "O", "2I").
//
// # Safety
// `group` must be a NUL-terminated string and `out` a valid pointer.
enum So3Status so3_generate(size_t n,
                            const char *group,
                            uint32_t restarts,
                            uint64_t seed,
                            struct So3Set **out);

// Expands `count` basis quaternions (`4 * count` doubles, normalized on
// input) under `group`.
//
// # Safety
// `quats` must point to `4 * count` doubles, `group` must be a
// NUL-terminated string and `out` a valid pointer.
enum So3Status so3_from_basis(const double *quats,
                              size_t count,
                              const char *group,
                              struct So3Set **out);

// Loads a `.qset` file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum So3Status so3_load(const char *path, struct So3Set **out);

// Writes a `.qset` file: the basis, or every rotation if `expanded`.
//
// # Safety
// `set` must come from this library and `path` must be a NUL-terminated string.
enum So3Status so3_save(const struct So3Set *set, const char *path, bool expanded);

// Number of points on S³ (twice the rotation count).
//
// # Safety
// `set` must be null or come from this library.
size_t so3_set_len(const struct So3Set *set);

// Copies the points into `buf` as `4 * so3_set_len` doubles.
//
// # Safety
// `set` must come from this library and `buf` must hold `capacity` doubles.
enum So3Status so3_set_points(const struct So3Set *set, double *buf, size_t capacity);

// Covering radius in radians, from the Delaunay triangulation.
//
// # Safety
// `set` must come from this library and `out` must be a valid pointer.
enum So3Status so3_covering_radius(const struct So3Set *set, double *out);

// Conjectured lower bound on the covering radius of `n` points, in radians.
//
// # Safety
// `out` must be a valid pointer.
enum So3Status so3_lower_bound_radius(size_t n, double *out);

// Misorientation histogram over `[0, 2θ]` in `bins` bins. `counts` receives
// `bins` values; `max_deg` and `mean_deg` may be null.
//
// # Safety
// `set` must come from this library, `counts` must hold `bins` values and
// the optional outputs must be null or valid.
enum So3Status so3_error_histogram(const struct So3Set *set,
                                   size_t samples,
                                   size_t bins,
                                   uint64_t seed,
                                   uint64_t *counts,
                                   double *max_deg,
                                   double *mean_deg);

// Releases a set. Null is ignored.
//
// # Safety
// `set` must be null or come from this library and not be used afterwards.
void so3_set_free(struct So3Set *set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SO3COVER_H */
