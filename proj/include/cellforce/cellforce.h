/* C interface to the cellforce library. All handles are opaque; every function
 * that can fail returns a cf_status and leaves a message for cf_last_error(). */
#ifndef CELLFORCE_H
#define CELLFORCE_H

#include <stddef.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_ERR_CONFIG = 1,
    CF_ERR_GEOMETRY = 2,
    CF_ERR_LOCATION = 3,
    CF_ERR_ASSEMBLY = 4,
    CF_ERR_SOLVER = 5,
    CF_ERR_SPD_VIOLATION = 6,
    CF_ERR_DOMAIN = 7,
    CF_ERR_IO = 8,
    CF_ERR_INVALID_ARGUMENT = 9,
    CF_ERR_INTERNAL = 10
} cf_status;

typedef struct cf_config cf_config;
typedef struct cf_result cf_result;
typedef struct cf_mesh cf_mesh;

CF_API const char* cf_version(void);
CF_API const char* cf_status_string(cf_status status);
/* Message of the most recent failure on the calling thread; "" if none. */
CF_API const char* cf_last_error(void);

/* Configuration ------------------------------------------------------------ */

CF_API cf_status cf_config_create(cf_config** out);
CF_API void cf_config_destroy(cf_config* config);
/* Reads an INI file ([section] headers, key = value lines). */
CF_API cf_status cf_config_load_file(cf_config* config, const char* path);
/* Sets "section.key" to a textual value. */
CF_API cf_status cf_config_set(cf_config* config, const char* key, const char* value);

/* Experiments -------------------------------------------------------------- */

CF_API size_t cf_preset_count(void);
CF_API const char* cf_preset_name(size_t index);

/* Runs a preset. On CF_OK *out owns the result even when invariants failed;
 * check cf_result_ok. */
CF_API cf_status cf_run(const char* preset, const cf_config* config, cf_result** out);
CF_API void cf_result_destroy(cf_result* result);
/* 1 when every invariant held. */
CF_API int cf_result_ok(const cf_result* result);
/* "key = value" lines. Owned by the result. */
CF_API const char* cf_result_summary(const cf_result* result);
CF_API const char* cf_result_csv(const cf_result* result);
/* Value of one summary key, or NULL. Owned by the result. */
CF_API const char* cf_result_get(const cf_result* result, const char* key);
CF_API size_t cf_result_warning_count(const cf_result* result);
CF_API const char* cf_result_warning(const cf_result* result, size_t index);

/* Meshes ------------------------------------------------------------------- */

/* Structured mesh of [0, width] x [0, height] with a square cell of side
 * `cell_side` centered at (cx, cy). exclude_cell != 0 removes the cell interior. */
CF_API cf_status cf_mesh_generate(double width, double height, double h, double cx, double cy, double cell_side,
                                  int exclude_cell, cf_mesh** out);
CF_API cf_status cf_mesh_refine(const cf_mesh* mesh, cf_mesh** out);
CF_API void cf_mesh_destroy(cf_mesh* mesh);
CF_API size_t cf_mesh_num_nodes(const cf_mesh* mesh);
CF_API size_t cf_mesh_num_triangles(const cf_mesh* mesh);
CF_API size_t cf_mesh_num_cell_triangles(const cf_mesh* mesh);
/* Triangle containing (x, y) and its barycentric coordinates (bary may be NULL). */
CF_API cf_status cf_mesh_locate(const cf_mesh* mesh, double x, double y, size_t* triangle, double bary[3]);
CF_API cf_status cf_mesh_write(const cf_mesh* mesh, const char* path);

/* Numerics ----------------------------------------------------------------- */

/* log2(|a - b| / |b - c|). */
CF_API cf_status cf_estimate_order(double a, double b, double c, double* order);
/* Gaussian regularized delta in n = 1, 2 or 3 dimensions. */
CF_API cf_status cf_gaussian_delta(const double* x, const double* x_prime, int n, double eps, double* value);
/* Largest nodal error of the 1D cell problem on `nodes` nodes. */
CF_API cf_status cf_verify1d(double length, double center, double cell, size_t nodes, int align, double* max_error);

#ifdef __cplusplus
}
#endif

#endif
