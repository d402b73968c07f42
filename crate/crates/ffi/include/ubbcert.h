#ifndef UBBCERT_H
#define UBBCERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define UBB_SET_TOPB 0

#define UBB_SET_UPB 1

#define UBB_SET_UBB_SYM 2

#define UBB_SET_UBB_ASYM 3

// Bipartition `A|BC`.
#define UBB_CUT_A 0

// Bipartition `AC|B`.
#define UBB_CUT_B 1

// Bipartition `AB|C`.
#define UBB_CUT_C 2

// No cut (every set except the asymmetric UBB).
#define UBB_CUT_NONE 255

#define UBB_COMPLETION_INDEX 0

#define UBB_COMPLETION_REVERSED 1

typedef enum UbbStatus {
  UBB_STATUS_OK = 0,
  UBB_STATUS_NULL_POINTER = 1,
  UBB_STATUS_INVALID_DIMENSION = 2,
  UBB_STATUS_INVALID_ARGUMENT = 3,
  UBB_STATUS_OUT_OF_RANGE = 4,
  // A coefficient does not fit in 64-bit numerator/denominator.
  UBB_STATUS_OVERFLOW = 5,
  UBB_STATUS_INTERNAL = 6,
  UBB_STATUS_PANIC = 7,
} UbbStatus;

// Opaque basis handle.
typedef struct UbbBasis UbbBasis;

// Opaque complement-projector handle.
typedef struct UbbProjector UbbProjector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Free with
// [`ubb_string_free`].
char *ubb_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void ubb_string_free(char *s);

// Builds a basis of the `UBB_SET_*` kind on the `d x d x d` cube.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum UbbStatus ubb_basis_build(size_t d,
                               uint32_t set,
                               uint32_t cut,
                               uint32_t completion,
                               struct UbbBasis **out);

// # Safety
// `b` must be NULL or a handle from [`ubb_basis_build`], not yet freed.
void ubb_basis_free(struct UbbBasis *b);

// Number of states in the basis.
//
// # Safety
// `b` must be a live handle and `out` writable.
enum UbbStatus ubb_basis_len(const struct UbbBasis *b, size_t *out);

// Dimension of the orthogonal complement, `d^3 - len`.
//
// # Safety
// `b` must be a live handle and `out` writable.
enum UbbStatus ubb_basis_complement_dim(const struct UbbBasis *b, size_t *out);

// Exact coefficients of state `index` as `d^3` numerator/denominator pairs.
//
// # Safety
// `b` must be a live handle; `num` and `den` must each hold `len` values.
enum UbbStatus ubb_basis_coefficients(const struct UbbBasis *b,
                                      size_t index,
                                      int64_t *num,
                                      int64_t *den,
                                      size_t len);

// The basis in the state-set text format.
//
// # Safety
// `b` must be a live handle and `out` writable.
enum UbbStatus ubb_basis_export(const struct UbbBasis *b, char **out);

// Projector onto the orthogonal complement of the basis.
//
// # Safety
// `b` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_new(const struct UbbBasis *b, struct UbbProjector **out);

// # Safety
// `p` must be NULL or a handle from [`ubb_projector_new`], not yet freed.
void ubb_projector_free(struct UbbProjector *p);

// # Safety
// `p` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_rank(const struct UbbProjector *p, size_t *out);

// Exact test that the partial transpose across `cut` is positive
// semidefinite.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_is_ppt(const struct UbbProjector *p, uint32_t cut, bool *out);

// Rank of the two-party marginal on the pair side of `cut`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_bimarginal_rank(const struct UbbProjector *p,
                                             uint32_t cut,
                                             size_t *out);

// Marginal-rank criterion across `cut`: true when the projector rank is
// below the larger marginal rank.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_lemma1(const struct UbbProjector *p, uint32_t cut, bool *out);

// The projector in the `rmat` text format.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum UbbStatus ubb_projector_export(const struct UbbProjector *p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UBBCERT_H */
