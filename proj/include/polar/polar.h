/* C interface to the reachability library. All functions are thread-safe
 * with respect to distinct handles. On failure a function returns a nonzero
 * polar_status and polar_last_error() describes the problem for the calling
 * thread until the next failing call. */
#ifndef POLAR_POLAR_H
#define POLAR_POLAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define POLAR_API __declspec(dllexport)
#else
#define POLAR_API __attribute__((visibility("default")))
#endif

typedef enum polar_status {
  POLAR_OK = 0,
  POLAR_ERR_INVALID_ARGUMENT = 1,
  POLAR_ERR_IO = 2,
  POLAR_ERR_PARSE = 3,
  POLAR_ERR_DIMENSION = 4,
  POLAR_ERR_CONTRACTION = 5,
  POLAR_ERR_SIMULATION = 6,
  POLAR_ERR_INTERNAL = 7
} polar_status;

typedef enum polar_verdict { POLAR_PROVED = 0, POLAR_DISPROVED = 1, POLAR_UNKNOWN = 2 } polar_verdict;

typedef enum polar_remainder_mode { POLAR_REMAINDER_SAMPLED = 0, POLAR_REMAINDER_RIGOROUS = 1 } polar_remainder_mode;

typedef enum polar_format { POLAR_FORMAT_CSV = 0, POLAR_FORMAT_JSON = 1, POLAR_FORMAT_SVG = 2 } polar_format;

typedef struct polar_model polar_model;
typedef struct polar_config polar_config;
typedef struct polar_result polar_result;
typedef struct polar_simulation polar_simulation;

POLAR_API const char* polar_version(void);
POLAR_API const char* polar_last_error(void);
POLAR_API const char* polar_status_string(polar_status status);

/* Model: parsed model file with its network loaded. */
POLAR_API polar_status polar_model_load(const char* path, polar_model** out);
POLAR_API void polar_model_free(polar_model* model);
POLAR_API size_t polar_model_num_states(const polar_model* model);
POLAR_API size_t polar_model_num_controls(const polar_model* model);
/* Returned string lives as long as the model; NULL when out of range. */
POLAR_API const char* polar_model_state_name(const polar_model* model, size_t index);
POLAR_API int polar_model_has_property(const polar_model* model);
/* Canonical text of the model. Writes at most cap bytes including the
 * terminator; *needed receives the full size including the terminator. */
POLAR_API polar_status polar_model_print(const polar_model* model, char* buf, size_t cap, size_t* needed);

/* Configuration with library defaults. */
POLAR_API polar_config* polar_config_new(void);
POLAR_API void polar_config_free(polar_config* cfg);
POLAR_API polar_status polar_config_set_order(polar_config* cfg, unsigned order);
POLAR_API polar_status polar_config_set_bernstein_order(polar_config* cfg, unsigned order);
POLAR_API polar_status polar_config_set_samples(polar_config* cfg, unsigned samples);
POLAR_API polar_status polar_config_set_flowsteps(polar_config* cfg, unsigned steps);
POLAR_API polar_status polar_config_set_symbolic(polar_config* cfg, int enabled);
POLAR_API polar_status polar_config_set_remainder_mode(polar_config* cfg, polar_remainder_mode mode);

/* Reachability over `steps` control steps. */
POLAR_API polar_status polar_run(const polar_model* model, unsigned steps, const polar_config* cfg,
                                 polar_result** out);
POLAR_API void polar_result_free(polar_result* result);
POLAR_API polar_verdict polar_result_verdict(const polar_result* result);
POLAR_API size_t polar_result_num_steps(const polar_result* result);
POLAR_API size_t polar_result_num_flowpipes(const polar_result* result);
POLAR_API double polar_result_wall_seconds(const polar_result* result);
POLAR_API polar_status polar_result_step_range(const polar_result* result, size_t step, size_t var, double* lo,
                                               double* hi);
/* Writes flowpipes to `path`. `projections` is "a:b,c:d" over state names
 * and "t", or NULL for time against every state. SVG uses the first
 * projection only. `sims` may be NULL. */
POLAR_API polar_status polar_result_write(const polar_result* result, const polar_model* model, const char* path,
                                          polar_format format, const char* projections,
                                          const polar_simulation* sims);

/* Simulates `count` trajectories from uniform initial states and checks
 * each against the result's flowpipes. */
POLAR_API polar_status polar_simulate(const polar_model* model, const polar_result* result, size_t count,
                                      uint64_t seed, polar_simulation** out);
POLAR_API void polar_simulation_free(polar_simulation* sims);
POLAR_API size_t polar_simulation_count(const polar_simulation* sims);
POLAR_API size_t polar_simulation_violations(const polar_simulation* sims);
POLAR_API polar_status polar_simulation_write_csv(const polar_simulation* sims, const polar_model* model,
                                                  const char* path);

#ifdef __cplusplus
}
#endif

#endif
