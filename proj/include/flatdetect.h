#ifndef FLATDETECT_H
#define FLATDETECT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(FLATDETECT_BUILDING)
#define FD_API __attribute__((visibility("default")))
#else
#define FD_API
#endif

/* Status codes double as the command-line exit codes. */
typedef enum fd_status {
  FD_OK = 0,
  FD_ERR_INTERNAL = 1,
  FD_ERR_USAGE = 2,           /* invalid argument or precondition */
  FD_ERR_PARSE = 3,           /* malformed input text */
  FD_ERR_NONCONVERGENCE = 4,  /* solver stopped above tolerance */
  FD_ERR_VERIFICATION = 5     /* obstruction or failed check */
} fd_status;

typedef struct fd_presentation fd_presentation;
typedef struct fd_family fd_family;

FD_API const char* fd_version(void);

/* Message of the last failing call on this thread; empty after success. */
FD_API const char* fd_last_error(void);

/* Frees any string returned through a char** out parameter. */
FD_API void fd_string_free(char* s);

/* Presentations */
FD_API fd_status fd_presentation_parse(const char* text, fd_presentation** out);
FD_API fd_status fd_presentation_load(const char* path, fd_presentation** out);
/* Group expression such as zn(2), surface(2), klein(), or a presentation file path. */
FD_API fd_status fd_group_build(const char* expr, const char* base_dir, fd_presentation** out);
FD_API fd_status fd_presentation_format(const fd_presentation* p, char** out_text);
FD_API size_t fd_presentation_generator_count(const fd_presentation* p);
FD_API void fd_presentation_free(fd_presentation* p);

/* Representation search in U(dim). The JSON result is written even when the solver does not
   converge; the status is then FD_ERR_NONCONVERGENCE. */
FD_API fd_status fd_rep_solve(const fd_presentation* p, int dim, unsigned long long seed, double tol, int max_iter,
                              char** out_json);

/* Families */
FD_API fd_status fd_family_build(const char* expr, const char* base_dir, fd_family** out);
FD_API fd_status fd_family_load(const char* path, fd_family** out);
/* Summary with Chern data and a sampled homomorphism check at tol. FD_ERR_VERIFICATION when
   the check fails; the JSON is still written. */
FD_API fd_status fd_family_describe(const fd_family* f, double tol, char** out_json);
FD_API void fd_family_free(fd_family* f);

/* Characteristic forms */
FD_API fd_status fd_forms_eval(const char* text, char** out_json);
/* f == NULL: the Poincare connection on a resolution x resolution grid. Otherwise the family's
   exact Chern data next to numerically integrated first Chern numbers; FD_ERR_VERIFICATION on
   disagreement. */
FD_API fd_status fd_forms_chern(const fd_family* f, int resolution, char** out_json);

/* Detection */
FD_API fd_status fd_detect_run(const char* descriptor, const char* base_dir, const fd_family* const* families,
                               size_t count, int numeric, char** out_json);
FD_API fd_status fd_report_render(const char* report_json, char** out_text);
FD_API fd_status fd_transfer_check(const fd_family* f, const char* cover, const char* base_dir, char** out_json);
FD_API fd_status fd_bm_obstruction(long long f, long long index, char** out_json);
FD_API fd_status fd_betti_inequality(int m, int n, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
