/*
 * roommates: exact solvability probabilities for random stable roommates
 * instances.
 *
 * C interface to the engine. All objects are opaque handles created and
 * destroyed through this API. Functions return an rm_status; on failure a
 * thread-local message is available from rm_last_error(). Strings returned
 * through `const char*` are owned by the handle they came from and stay valid
 * until that handle is destroyed. Strings returned through `char**` are owned
 * by the caller and released with rm_string_free().
 */
#ifndef ROOMMATES_ROOMMATES_H
#define ROOMMATES_ROOMMATES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ROOMMATES_BUILD)
#    define RM_API __declspec(dllexport)
#  else
#    define RM_API __declspec(dllimport)
#  endif
#else
#  define RM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rm_status {
  RM_OK = 0,
  RM_ERR_INTERNAL = 1,
  RM_ERR_INVALID_ARGUMENT = 2,
  RM_ERR_RESOURCE_LIMIT = 3,
  RM_ERR_CONTRADICTION = 4,
  RM_ERR_IO = 5
} rm_status;

typedef enum rm_route { RM_ROUTE_DIRECT = 0, RM_ROUTE_COMPLEMENT = 1, RM_ROUTE_BOTH = 2 } rm_route;

typedef enum rm_strategy { RM_STRATEGY_EARLY = 0, RM_STRATEGY_COEFFWISE = 1, RM_STRATEGY_AUTO = 2 } rm_strategy;

typedef enum rm_family {
  RM_FAMILY_ALL = 0,        /* every cycle type of size n */
  RM_FAMILY_EVEN = 1,       /* even cycles only (even n) */
  RM_FAMILY_ODD = 2,        /* at most one fixed point, some odd cycle (even n) */
  RM_FAMILY_FIXED_EVEN = 3, /* one fixed point, other cycles even (odd n) */
  RM_FAMILY_ODD3 = 4        /* some odd cycle of length >= 3 (odd n) */
} rm_family;

typedef struct rm_engine rm_engine;
typedef struct rm_report rm_report;
typedef struct rm_type_list rm_type_list;

/* One row of a report: a cycle type and its integral. */
typedef struct rm_report_row {
  const char* cycle_type;  /* canonical "k^a,..." */
  const char* probability; /* exact fraction "num/den" */
  const char* count;       /* c(a), decimal integer */
  int sign;                /* (-1)^e(a) */
  int factor_count;        /* f(a) */
  double elapsed_s;
  const char* strategy; /* "early", "coeffwise" or "zero" */
  uint64_t peak_terms;
  int cache_hit;
  int in_complement; /* row belongs to the complement sum */
} rm_report_row;

typedef struct rm_type_entry {
  const char* cycle_type;
  const char* count; /* c(a) */
  int sign_exponent; /* e(a) */
  int factor_count;  /* f(a) */
} rm_type_entry;

typedef struct rm_mc_result {
  double estimate;
  double standard_error;
  uint64_t successes;
  uint64_t samples;
} rm_mc_result;

RM_API const char* rm_version(void);
RM_API const char* rm_last_error(void);
RM_API void rm_string_free(char* s);

/* ---- engine ---------------------------------------------------------- */

RM_API rm_status rm_engine_create(rm_engine** out);
RM_API void rm_engine_destroy(rm_engine* engine);
RM_API rm_status rm_engine_set_threads(rm_engine* engine, int threads);
RM_API rm_status rm_engine_set_strategy(rm_engine* engine, rm_strategy strategy);
RM_API rm_status rm_engine_set_term_limit(rm_engine* engine, uint64_t max_terms);
/* NULL or "" disables the persistent cache. */
RM_API rm_status rm_engine_set_cache_dir(rm_engine* engine, const char* directory);
/* Largest n accepted by rm_compute_probability (default 12, hard cap 16). */
RM_API rm_status rm_engine_set_max_n(rm_engine* engine, int max_n);

/* p_n as an exact fraction. On RM_ERR_RESOURCE_LIMIT or
 * RM_ERR_CONTRADICTION, *out may still receive a report holding the rows that
 * completed; the caller destroys it either way. */
RM_API rm_status rm_compute_probability(rm_engine* engine, int n, rm_route route, rm_report** out);
/* P(a) for one cycle type; the report holds exactly one row. */
RM_API rm_status rm_compute_integral(rm_engine* engine, const char* cycle_type, rm_report** out);

RM_API void rm_report_destroy(rm_report* report);
RM_API int rm_report_n(const rm_report* report);
RM_API const char* rm_report_value(const rm_report* report);
RM_API const char* rm_report_complement(const rm_report* report);
RM_API size_t rm_report_row_count(const rm_report* report);
RM_API rm_status rm_report_get_row(const rm_report* report, size_t index, rm_report_row* out);

/* ---- cycle types ------------------------------------------------------ */

RM_API rm_status rm_enumerate(int n, rm_family family, rm_type_list** out);
RM_API void rm_type_list_destroy(rm_type_list* list);
RM_API size_t rm_type_list_size(const rm_type_list* list);
RM_API rm_status rm_type_list_entry(const rm_type_list* list, size_t index, rm_type_entry* out);
/* Size implied by partition numbers alone. */
RM_API uint64_t rm_type_list_predicted_size(const rm_type_list* list);
RM_API uint64_t rm_partition_number(int n);

/* ---- oracles ---------------------------------------------------------- */

/* Solvable fraction over all preference tables, n in {2,3,4}. */
RM_API rm_status rm_exhaustive_probability(int n, char** fraction_out);
RM_API rm_status rm_mc_estimate(int n, uint64_t samples, uint64_t seed, int threads, rm_mc_result* out);
/* Preference table in the 1-based text format; returns 1/0 via *solvable. */
RM_API rm_status rm_table_is_solvable(const char* table_text, int* solvable);

/* ---- fractions -------------------------------------------------------- */

RM_API rm_status rm_fraction_to_decimal(const char* fraction, int digits, char** out);
RM_API rm_status rm_fraction_to_double(const char* fraction, double* out);

#ifdef __cplusplus
}
#endif

#endif /* ROOMMATES_ROOMMATES_H */
