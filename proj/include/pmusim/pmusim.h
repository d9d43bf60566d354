/* SPDX-License-Identifier: Apache-2.0 */
#ifndef PMUSIM_H
#define PMUSIM_H

/*
 * C interface to the pmusim shared library. Objects are opaque handles owned
 * by the caller and released with the matching *_free function (NULL is
 * accepted). Every fallible call returns a pmusim_status; on failure the
 * message is available from pmusim_last_error() on the calling thread until
 * the next failing call.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(PMUSIM_BUILDING)
#define PMUSIM_API __declspec(dllexport)
#else
#define PMUSIM_API __declspec(dllimport)
#endif
#else
#define PMUSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmusim_status {
  PMUSIM_OK = 0,
  PMUSIM_INVALID_ARGUMENT = 1, /* NULL handle, out-of-range index */
  PMUSIM_CONFIG = 2,           /* malformed scenario or grid file */
  PMUSIM_RUNTIME = 3,          /* simulation failure */
  PMUSIM_DOMAIN = 4,           /* parameter outside a model's domain */
  PMUSIM_IO = 5,               /* file could not be read or written */
  PMUSIM_TIMEOUT = 6           /* mission exceeded its tick budget */
} pmusim_status;

typedef struct pmusim_scenario pmusim_scenario;
typedef struct pmusim_grid pmusim_grid;
typedef struct pmusim_frontier pmusim_frontier;
typedef struct pmusim_mission pmusim_mission;
typedef struct pmusim_comparison pmusim_comparison;

typedef struct pmusim_energy_report {
  double e_total_j;
  double e_motor_j;
  double e_cpu_j;
  double duration_s;
  double distance_m;
  double j_per_m;
  double min_throughput;
  double mean_throughput;
} pmusim_energy_report;

PMUSIM_API const char *pmusim_version(void);
PMUSIM_API const char *pmusim_last_error(void);
PMUSIM_API const char *pmusim_status_name(pmusim_status status);

/* Scenarios */
PMUSIM_API pmusim_status pmusim_scenario_load(const char *path, pmusim_scenario **out);
PMUSIM_API pmusim_status pmusim_scenario_parse(const char *text, size_t length,
                                               pmusim_scenario **out);
/* Bundled scenario by name: "low", "medium", "high", "suite" or "mixed". */
PMUSIM_API pmusim_status pmusim_scenario_default(const char *name, pmusim_scenario **out);
PMUSIM_API pmusim_status pmusim_scenario_write(const pmusim_scenario *scenario, const char *path);
/* NULL arguments keep the current selection. */
PMUSIM_API pmusim_status pmusim_scenario_select(pmusim_scenario *scenario, const char *app,
                                                const char *environment);
/* "controlled", "hs", "as", "as-star" or "fixed:I,J". */
PMUSIM_API pmusim_status pmusim_scenario_set_mode(pmusim_scenario *scenario, const char *mode);
PMUSIM_API pmusim_status pmusim_scenario_set_dt(pmusim_scenario *scenario, double dt_s);
PMUSIM_API void pmusim_scenario_free(pmusim_scenario *scenario);

/* Steady-state sweep of the selected app over the full grid. Without an
 * override the first segment's entropy of the selected environment is used;
 * the trip length is the environment's total length. */
PMUSIM_API pmusim_status pmusim_sweep(const pmusim_scenario *scenario,
                                      const double *entropy_override, pmusim_grid **out);
PMUSIM_API pmusim_status pmusim_grid_load_csv(const char *path, pmusim_grid **out);
PMUSIM_API pmusim_status pmusim_grid_write_csv(const pmusim_grid *grid, const char *path);
PMUSIM_API pmusim_status pmusim_grid_write_svg(const pmusim_grid *grid, const char *path);
PMUSIM_API size_t pmusim_grid_cells(const pmusim_grid *grid);
PMUSIM_API void pmusim_grid_free(pmusim_grid *grid);

PMUSIM_API pmusim_status pmusim_frontier_compute(const pmusim_grid *grid, pmusim_frontier **out);
PMUSIM_API size_t pmusim_frontier_size(const pmusim_frontier *frontier);
PMUSIM_API pmusim_status pmusim_frontier_point(const pmusim_frontier *frontier, size_t index,
                                               double *speed_mps, double *frequency_hz,
                                               double *j_per_m);
/* Index of the lowest J/m point, or -1 for an empty frontier. */
PMUSIM_API long pmusim_frontier_argmin(const pmusim_frontier *frontier);
PMUSIM_API pmusim_status pmusim_frontier_write_csv(const pmusim_frontier *frontier,
                                                   const char *path);
PMUSIM_API void pmusim_frontier_free(pmusim_frontier *frontier);

/* Runs the selected app and environment in the scenario's mode. On
 * PMUSIM_TIMEOUT *out still receives the partial mission. */
PMUSIM_API pmusim_status pmusim_mission_run(const pmusim_scenario *scenario, pmusim_mission **out);
PMUSIM_API pmusim_status pmusim_mission_report(const pmusim_mission *mission,
                                               pmusim_energy_report *out);
PMUSIM_API size_t pmusim_mission_trace_size(const pmusim_mission *mission);
PMUSIM_API size_t pmusim_mission_decision_count(const pmusim_mission *mission);
PMUSIM_API pmusim_status pmusim_mission_write_trace(const pmusim_mission *mission,
                                                    const char *path);
PMUSIM_API pmusim_status pmusim_mission_write_decisions(const pmusim_mission *mission,
                                                        const char *path);
PMUSIM_API pmusim_status pmusim_mission_write_report(const pmusim_mission *mission,
                                                     const char *path);
PMUSIM_API void pmusim_mission_free(pmusim_mission *mission);

/* Controller and the three fixed baselines over every environment and app
 * of the scenario. threads == 0 picks the hardware concurrency. */
PMUSIM_API pmusim_status pmusim_compare_run(const pmusim_scenario *scenario, unsigned threads,
                                            pmusim_comparison **out);
PMUSIM_API size_t pmusim_comparison_rows(const pmusim_comparison *comparison);
PMUSIM_API pmusim_status pmusim_comparison_write_csv(const pmusim_comparison *comparison,
                                                     const char *path);
PMUSIM_API void pmusim_comparison_free(pmusim_comparison *comparison);

#ifdef __cplusplus
}
#endif

#endif /* PMUSIM_H */
