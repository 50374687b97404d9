/*
 * libtra: finite transposition set algebras behind a C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a tra_status; on
 * failure the thread-local message from tra_last_error() describes it.
 * Strings returned through char** are heap-allocated and must be released
 * with tra_string_free().
 *
 * Sequences are passed as arrays of n uint32_t entries; lists of sequences
 * are row-major (count * n entries). Permutations are image arrays of
 * length n: f[i] is the image of coordinate i.
 */
#ifndef TRA_TRA_H
#define TRA_TRA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TRA_BUILDING_LIBRARY)
#    define TRA_API __declspec(dllexport)
#  else
#    define TRA_API __declspec(dllimport)
#  endif
#else
#  define TRA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tra_status {
  TRA_OK = 0,
  TRA_ERR_INVALID_ARGUMENT = 1,
  TRA_ERR_OUT_OF_RANGE = 2,
  TRA_ERR_DIMENSION_MISMATCH = 3,
  TRA_ERR_CARRIER_MISMATCH = 4,
  TRA_ERR_NOT_A_PERMUTATION = 5,
  TRA_ERR_NOT_PERMUTABLE = 6,
  TRA_ERR_NOT_SUBCARRIER = 7,
  TRA_ERR_BUDGET_EXCEEDED = 8,
  TRA_ERR_PARSE = 9,
  TRA_ERR_NULL_ARGUMENT = 10,
  TRA_ERR_INTERNAL = 11
} tra_status;

typedef struct tra_carrier tra_carrier;
typedef struct tra_elem tra_elem;
/* An equation or quasi-equation. */
typedef struct tra_formula tra_formula;

typedef enum tra_mode {
  TRA_MODE_EXHAUSTIVE = 0,
  TRA_MODE_SAMPLED = 1
} tra_mode;

typedef struct tra_options {
  tra_mode mode;
  uint64_t trials;             /* sampled mode only */
  uint64_t seed;               /* sampled mode and fallbacks */
  uint32_t workers;            /* >= 1 */
  uint64_t enumeration_budget; /* max assignments enumerated exhaustively */
} tra_options;

/* Exhaustive, 10000 trials, default seed, 1 worker, default budget. */
TRA_API void tra_options_init(tra_options* options);

TRA_API const char* tra_version(void);
TRA_API const char* tra_status_name(tra_status status);
TRA_API const char* tra_last_error(void);
/* 1-based position of the last TRA_ERR_PARSE, 0 otherwise. */
TRA_API size_t tra_last_error_line(void);
TRA_API size_t tra_last_error_column(void);
TRA_API void tra_string_free(char* s);

/* ---- carriers ---------------------------------------------------------- */

TRA_API tra_status tra_carrier_full(uint32_t n, uint32_t k, tra_carrier** out);
TRA_API tra_status tra_carrier_from_seqs(uint32_t n, uint32_t u,
                                         const uint32_t* entries, size_t count,
                                         tra_carrier** out);
/* Parses the text of an .alg document. */
TRA_API tra_status tra_carrier_from_spec(const char* text, tra_carrier** out);
TRA_API tra_status tra_carrier_to_spec(const tra_carrier* c, char** out);
TRA_API tra_status tra_carrier_to_json(const tra_carrier* c, char** out);
TRA_API void tra_carrier_free(tra_carrier* c);

TRA_API uint32_t tra_carrier_dim(const tra_carrier* c);
TRA_API uint32_t tra_carrier_base(const tra_carrier* c);
TRA_API size_t tra_carrier_size(const tra_carrier* c);
/* Writes the n entries of member `pos` into `entries`. */
TRA_API tra_status tra_carrier_member(const tra_carrier* c, size_t pos,
                                      uint32_t* entries);
TRA_API tra_status tra_carrier_is_permutable(const tra_carrier* c,
                                             int* permutable);
TRA_API tra_status tra_carrier_permutable_closure(const tra_carrier* c,
                                                  tra_carrier** out);

/* ---- elements ---------------------------------------------------------- */

TRA_API tra_status tra_elem_zero(const tra_carrier* c, tra_elem** out);
TRA_API tra_status tra_elem_one(const tra_carrier* c, tra_elem** out);
TRA_API tra_status tra_elem_atom(const tra_carrier* c, const uint32_t* seq,
                                 tra_elem** out);
TRA_API tra_status tra_elem_from_seqs(const tra_carrier* c,
                                      const uint32_t* entries, size_t count,
                                      tra_elem** out);
TRA_API void tra_elem_free(tra_elem* x);

TRA_API tra_status tra_elem_meet(const tra_elem* x, const tra_elem* y,
                                 tra_elem** out);
TRA_API tra_status tra_elem_join(const tra_elem* x, const tra_elem* y,
                                 tra_elem** out);
TRA_API tra_status tra_elem_complement(const tra_elem* x, tra_elem** out);
/* S_f(x) for the permutation with image list f[0..n-1]. */
TRA_API tra_status tra_elem_subst(const uint32_t* f, size_t n,
                                  const tra_elem* x, tra_elem** out);
/* x ∩ G as an element of ℘(G). */
TRA_API tra_status tra_elem_relativize(const tra_elem* x, const tra_carrier* g,
                                       tra_elem** out);
TRA_API tra_status tra_elem_is_zero(const tra_elem* x, int* result);
TRA_API tra_status tra_elem_leq(const tra_elem* x, const tra_elem* y,
                                int* result);
TRA_API tra_status tra_elem_equal(const tra_elem* x, const tra_elem* y,
                                  int* result);
TRA_API tra_status tra_elem_contains(const tra_elem* x, const uint32_t* seq,
                                     int* result);
TRA_API size_t tra_elem_count(const tra_elem* x);
TRA_API tra_status tra_elem_to_json(const tra_elem* x, char** out);

/* ---- formulas ---------------------------------------------------------- */

/* Accepts `eq` or `eq, ..., eq => eq`. */
TRA_API tra_status tra_formula_parse(const char* text, tra_formula** out);
/* s_f x | s_g x = ~x => 0 = 1 */
TRA_API tra_status tra_formula_sigma(uint32_t n, const uint32_t* f,
                                     const uint32_t* g, tra_formula** out);
TRA_API tra_status tra_formula_print(const tra_formula* q, char** out);
TRA_API void tra_formula_free(tra_formula* q);

/* Evaluates a term under variables names[i] := values[i]. */
TRA_API tra_status tra_eval(const tra_carrier* c, const char* term,
                            const char* const* names,
                            const tra_elem* const* values, size_t count,
                            tra_elem** out);

/* Decides the formula on ℘(c). *holds is 1 or 0; the verdict document
 * carries the witness when it fails. */
TRA_API tra_status tra_check(const tra_carrier* c, const tra_formula* q,
                             const tra_options* options, int* holds,
                             char** verdict_json);
/* Re-evaluates a witness object ({"x": [[...], ...], ...}) independently;
 * *violated is 1 iff it satisfies every hypothesis but not the
 * conclusion. */
TRA_API tra_status tra_revalidate_witness(const tra_carrier* c,
                                          const tra_formula* q,
                                          const char* witness_json,
                                          int* violated);

/* ---- verifiers --------------------------------------------------------- */
/* Each writes a JSON report and sets *passed to 1 when every checked
 * property holds. */

TRA_API tra_status tra_verify_relativization(const tra_carrier* big,
                                             const tra_carrier* sub,
                                             const tra_options* options,
                                             int* passed, char** report);
TRA_API tra_status tra_decompose(uint32_t n, uint32_t k,
                                 const tra_options* options, int* passed,
                                 char** report);
/* f and g both NULL: every pair of permutations. */
TRA_API tra_status tra_sigma_small(uint32_t n, uint32_t k, const uint32_t* f,
                                   const uint32_t* g,
                                   const tra_options* options, int* holds,
                                   char** report);
TRA_API tra_status tra_counterexample(uint32_t n, const tra_options* options,
                                      int* passed, char** report);
TRA_API tra_status tra_h_escape(uint32_t n, const tra_options* options,
                                int* passed, char** report);
TRA_API tra_status tra_ultraproduct(const tra_carrier* const* factors,
                                    size_t count, size_t index,
                                    const tra_options* options, int* passed,
                                    char** report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRA_TRA_H */
