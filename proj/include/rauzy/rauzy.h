#ifndef RAUZY_RAUZY_H
#define RAUZY_RAUZY_H

#include <stddef.h>
#include <stdint.h>

#if defined(RAUZY_BUILDING_LIBRARY)
#define RAUZY_API __attribute__((visibility("default")))
#else
#define RAUZY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rauzy_status {
  RAUZY_OK = 0,
  RAUZY_INVALID_ARGUMENT = 1, /* null handle, bad index, malformed options */
  RAUZY_VALIDATION = 2,       /* rejected input (parse errors, non-primitive, incompatible) */
  RAUZY_NUMERIC = 3,          /* non-Pisot, reducible, failed convergence */
  RAUZY_LIMIT = 4,            /* a point or word cap was hit */
  RAUZY_IO = 5,
  RAUZY_INTERNAL = 6
} rauzy_status;

typedef struct rauzy_substitution rauzy_substitution;
typedef struct rauzy_model rauzy_model;
typedef struct rauzy_cloud rauzy_cloud;
typedef struct rauzy_family rauzy_family;

/* Message of the last failed call on this thread ("" if none). */
RAUZY_API const char* rauzy_last_error(void);
RAUZY_API const char* rauzy_version(void);
/* Frees strings returned through char** out-parameters. */
RAUZY_API void rauzy_string_free(char* s);

/* Substitution files. Parametric weights ("p", "1-p") are fixed by *p;
   pass NULL for a non-parametric file. */
RAUZY_API rauzy_status rauzy_substitution_parse(const char* text, const double* p, rauzy_substitution** out);
RAUZY_API rauzy_status rauzy_substitution_load(const char* path, const double* p, rauzy_substitution** out);
RAUZY_API void rauzy_substitution_free(rauzy_substitution* s);
RAUZY_API size_t rauzy_substitution_letters(const rauzy_substitution* s);
RAUZY_API int rauzy_substitution_is_parametric(const rauzy_substitution* s);

/* Spectral data, chart, lattice and prefix-suffix graph. */
RAUZY_API rauzy_status rauzy_model_build(const rauzy_substitution* s, rauzy_model** out);
RAUZY_API void rauzy_model_free(rauzy_model* m);
RAUZY_API size_t rauzy_model_dim(const rauzy_model* m);
RAUZY_API double rauzy_model_lambda(const rauzy_model* m);
/* Copies the right Perron vector (length = letters). */
RAUZY_API rauzy_status rauzy_model_right(const rauzy_model* m, double* out, size_t len);
RAUZY_API rauzy_status rauzy_model_info_json(const rauzy_model* m, char** json);

/* Point clouds. Letters are 0-based in this API. */
RAUZY_API rauzy_status rauzy_cloud_markov(const rauzy_model* m, unsigned letter, unsigned level, uint64_t seed,
                                          unsigned workers, rauzy_cloud** out);
RAUZY_API rauzy_status rauzy_cloud_enumerate(const rauzy_model* m, unsigned depth, rauzy_cloud** out);
RAUZY_API rauzy_status rauzy_cloud_gifs_sets(const rauzy_model* m, unsigned depth, double dedup, rauzy_cloud** out);
RAUZY_API rauzy_status rauzy_cloud_chaos(const rauzy_model* m, size_t steps, size_t burn_in, uint64_t seed,
                                         rauzy_cloud** out);
RAUZY_API void rauzy_cloud_free(rauzy_cloud* c);
RAUZY_API size_t rauzy_cloud_dim(const rauzy_cloud* c);
RAUZY_API size_t rauzy_cloud_letters(const rauzy_cloud* c);
RAUZY_API size_t rauzy_cloud_count(const rauzy_cloud* c, unsigned letter);
/* Copies point i of a bucket (dim doubles). */
RAUZY_API rauzy_status rauzy_cloud_point(const rauzy_cloud* c, unsigned letter, size_t i, double* out);
/* Weighted mass of a bucket over the total. */
RAUZY_API double rauzy_cloud_mass(const rauzy_cloud* c, unsigned letter);
RAUZY_API rauzy_status rauzy_cloud_write_csv(const rauzy_cloud* c, const rauzy_model* m, const char* path);
/* 1-D charts only: MK distance between the normalised tiles of one letter. */
RAUZY_API rauzy_status rauzy_cloud_mk_distance(const rauzy_cloud* a, const rauzy_cloud* b, unsigned letter,
                                               double* out);

RAUZY_API rauzy_status rauzy_family_load(const char* path, rauzy_family** out);
RAUZY_API void rauzy_family_free(rauzy_family* f);

/* Pipelines. options is a JSON object (NULL or "" for defaults); the
   summary JSON is returned in *summary and every artifact is written to
   out_dir. The artifact list is returned as a JSON array in *artifacts
   when that pointer is non-NULL. */
RAUZY_API rauzy_status rauzy_run_info(const rauzy_model* m, const char* out_dir, char** summary, char** artifacts);
RAUZY_API rauzy_status rauzy_run_cloud(const rauzy_model* m, const char* options, const char* out_dir, char** summary,
                                       char** artifacts);
RAUZY_API rauzy_status rauzy_run_gifs(const rauzy_model* m, const char* options, const char* out_dir, char** summary,
                                      char** artifacts);
RAUZY_API rauzy_status rauzy_run_measure(const rauzy_model* m, const char* options, const char* out_dir,
                                         char** summary, char** artifacts);
RAUZY_API rauzy_status rauzy_run_covering(const rauzy_model* m, const char* options, const char* out_dir,
                                          char** summary, char** artifacts);
/* Takes the substitution before p is fixed; options["p"] is the grid. */
RAUZY_API rauzy_status rauzy_run_sweep(const char* spec_path, const char* options, const char* out_dir,
                                       char** summary, char** artifacts);
RAUZY_API rauzy_status rauzy_run_sadic(const rauzy_family* f, const char* options, const char* out_dir,
                                       char** summary, char** artifacts);
/* svg_path is the output file. */
RAUZY_API rauzy_status rauzy_run_render(const char* csv_path, const char* options, const char* svg_path,
                                        char** summary, char** artifacts);

#ifdef __cplusplus
}
#endif

#endif
