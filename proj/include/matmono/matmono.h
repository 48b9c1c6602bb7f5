#ifndef MATMONO_MATMONO_H
#define MATMONO_MATMONO_H

#include <stddef.h>

#if defined(MATMONO_BUILDING_LIBRARY)
#define MM_API __attribute__((visibility("default")))
#else
#define MM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mm_status {
  MM_OK = 0,
  MM_ERR_INVALID_ARGUMENT = 1,
  MM_ERR_PARSE = 2,
  MM_ERR_DOMAIN = 3,
  MM_ERR_NON_HERMITIAN = 4,
  MM_ERR_DIMENSION_MISMATCH = 5,
  MM_ERR_UNSUPPORTED_ORDER = 6,
  MM_ERR_NO_ANTIDERIVATIVE = 7,
  MM_ERR_SAMPLER_EXHAUSTED = 8,
  MM_ERR_SCHEMA = 9,
  MM_ERR_IO = 10,
  MM_ERR_BUFFER_TOO_SMALL = 11,
  MM_ERR_INTERNAL = 99
} mm_status;

typedef struct mm_function mm_function;
typedef struct mm_report mm_report;

MM_API const char* mm_version(void);

/* Message of the last failed call on this thread; "" after a success. */
MM_API const char* mm_last_error(void);

/* Function mini-language, e.g. "poly:0,1,2", "sqrt", "compose(sqrt;moebius:1,0,-1,1)". */
MM_API mm_status mm_function_parse(const char* text, mm_function** out);
MM_API void mm_function_free(mm_function* f);
MM_API mm_status mm_function_eval(const mm_function* f, double t, double* out);
MM_API mm_status mm_function_derivative(const mm_function* f, double t, int k, double* out);

/* String outputs: writes at most cap bytes including the terminator and
   stores the full length (without terminator) in *needed when non-null. */
MM_API mm_status mm_function_text(const mm_function* f, char* buf, size_t cap, size_t* needed);

/* [t_1, ..., t_count]_f; coincident nodes use derivatives. */
MM_API mm_status mm_divided_difference(const mm_function* f, const double* nodes, size_t count, double* out);

/* config_json: {"command": "classify"|"jensen"|"cn"|"suite"|"gap", "function": ..., ...} */
MM_API mm_status mm_run(const char* config_json, mm_report** out);
/* format: "json", "csv" or "text". */
MM_API mm_status mm_report_render(const mm_report* r, const char* format, char* buf, size_t cap, size_t* needed);
/* 0 completed, 1 discrepancy recorded. */
MM_API int mm_report_exit_code(const mm_report* r);
MM_API void mm_report_free(mm_report* r);

/* Recomputes margins of a certificate, wrapped certificate or report document.
   *confirmed is 1 when every certificate reproduces its stored verdict. */
MM_API mm_status mm_recheck(const char* document_json, int* confirmed, int* checked);

#ifdef __cplusplus
}
#endif

#endif
