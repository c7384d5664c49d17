/*
 * C interface of the holdover library: worst-case clock-misalignment bounds
 * for real-time-clock oscillators, maximum holdover (reset) periods for a
 * loose-synchronization threshold, and deterministic clock-error simulation.
 *
 * All handles are opaque; every function returns HO_OK or an error code, and
 * ho_last_error() carries a human-readable message for the calling thread.
 * Strings returned through char** are owned by the caller; release them with
 * ho_text_free().
 *
 * Units at this boundary: seconds, hertz, degrees Celsius, and dimensionless
 * fractions for accuracies (1 ppm = 1e-6).
 */

#ifndef HOLDOVER_H
#define HOLDOVER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HO_API __declspec(dllexport)
#else
#define HO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ho_status {
    HO_OK = 0,
    HO_ERR_INVALID_ARGUMENT = 1,
    HO_ERR_PARSE = 2,
    HO_ERR_OUT_OF_RANGE = 3,
    HO_ERR_NOT_FOUND = 4,
    HO_ERR_IO = 5,
    HO_ERR_INSUFFICIENT_DATA = 6,
    HO_ERR_INTERNAL = 7
} ho_status;

typedef enum ho_format {
    HO_FORMAT_CSV = 0,
    HO_FORMAT_MARKDOWN = 1
} ho_format;

/* A set of oscillator specs; embedded entries also carry published figures. */
typedef struct ho_catalog ho_catalog;
/* Bound evaluation results: one device x several thresholds. */
typedef struct ho_evaluation ho_evaluation;
/* A simulated clock-error trajectory. */
typedef struct ho_trajectory ho_trajectory;

HO_API const char* ho_version(void);
HO_API const char* ho_status_str(ho_status status);
/* Message of the last failure on this thread; empty string if none. */
HO_API const char* ho_last_error(void);
HO_API void ho_text_free(char* text);

/* Durations accept unit-suffixed values: "2y", "90d", "36 h", "15 min",
 * "3600s"; one year is 365 days. */
HO_API ho_status ho_parse_duration(const char* text, double* seconds);
/* Same grammar, negative values allowed. */
HO_API ho_status ho_parse_signed_duration(const char* text, double* seconds);
/* "0.5 ppm" or "250 ppb" -> dimensionless fraction. */
HO_API ho_status ho_parse_accuracy(const char* text, double* fraction);
/* "110.38 s" / "17.08 min" / "115.74 days" / "2.62 years" / "unbounded". */
HO_API ho_status ho_format_duration(double seconds, char** text);

/* --- catalogs ---------------------------------------------------------- */

/* table: 2 = TCXO survey, 3 = CMOS RTC survey, 0 = both. */
HO_API ho_status ho_catalog_embedded(int table, ho_catalog** out);
HO_API ho_status ho_catalog_from_text(const char* text, ho_catalog** out);
HO_API ho_status ho_catalog_from_file(const char* path, ho_catalog** out);
/* Entries whose model (or model@gradeppm name) equals `device`. */
HO_API ho_status ho_catalog_select(const ho_catalog* catalog, const char* device,
                                   ho_catalog** out);
HO_API void ho_catalog_free(ho_catalog* catalog);
HO_API size_t ho_catalog_count(const ho_catalog* catalog);
HO_API ho_status ho_catalog_device_name(const ho_catalog* catalog, size_t index, char** name);
/* Render back to the spec-file grammar; re-parsing reproduces the specs. */
HO_API ho_status ho_catalog_render(const ho_catalog* catalog, char** text);

/* --- bound evaluation --------------------------------------------------- */

HO_API ho_status ho_evaluate(const ho_catalog* catalog, double t_reset_s,
                             const double* t_loose_s, size_t n_t_loose, ho_evaluation** out);
HO_API void ho_evaluation_free(ho_evaluation* evaluation);
HO_API size_t ho_evaluation_count(const ho_evaluation* evaluation);
/* Worst-case misalignment over the holdover period, seconds. */
HO_API ho_status ho_evaluation_bound(const ho_evaluation* evaluation, size_t device,
                                     double* bound_s);
HO_API ho_status ho_evaluation_breakdown(const ho_evaluation* evaluation, size_t device,
                                         double* temperature_s, double* aging_s, double* minor_s);
/* Longest holdover meeting threshold `tl_index`; +infinity when unbounded. */
HO_API ho_status ho_evaluation_max_reset(const ho_evaluation* evaluation, size_t device,
                                         size_t tl_index, double* t_r_max_s);
HO_API ho_status ho_evaluation_suitable(const ho_evaluation* evaluation, size_t device,
                                        size_t tl_index, int* suitable);
HO_API ho_status ho_evaluation_render(const ho_evaluation* evaluation, ho_format format,
                                      char** text);

/* Direct single-device helpers (device indexes into the catalog). */
HO_API ho_status ho_bound(const ho_catalog* catalog, size_t device, double t_reset_s,
                          double* bound_s);
HO_API ho_status ho_max_reset_period(const ho_catalog* catalog, size_t device, double t_loose_s,
                                     double* t_r_max_s);

/* --- published-table reproduction --------------------------------------- */

/* Recomputes embedded table 2 or 3 and compares against the published
 * figures; all_pass may be NULL. */
HO_API ho_status ho_table_report(int table, ho_format format, char** text, int* all_pass);

/* --- simulation ---------------------------------------------------------- */

HO_API ho_status ho_simulate_text(const char* scenario_text, double duration_s,
                                  ho_trajectory** out);
HO_API ho_status ho_simulate_file(const char* scenario_path, double duration_s,
                                  ho_trajectory** out);
HO_API void ho_trajectory_free(ho_trajectory* trajectory);
HO_API size_t ho_trajectory_count(const ho_trajectory* trajectory);
/* active_secondary and violating may be NULL. */
HO_API ho_status ho_trajectory_sample(const ho_trajectory* trajectory, size_t index, double* t_s,
                                      double* y_fraction, double* delta_t_s, int* active_secondary,
                                      int* violating);
/* first_violation_s is negative when no violation occurred; bound_margin_s
 * is the smallest distance between the worst-case bound envelope and the
 * simulated |misalignment|. */
HO_API ho_status ho_trajectory_summary(const ho_trajectory* trajectory, double* max_abs_delta_t_s,
                                       double* first_violation_s, int* reset_count,
                                       double* bound_margin_s);
/* CSV: t_s,y_frac,delta_t_s,active_clock,violation */
HO_API ho_status ho_trajectory_csv(const ho_trajectory* trajectory, char** text);

/* --- aging-fit comparison ------------------------------------------------ */

/* CSV of the anchored linear fit, anchored logarithmic fit and the
 * prudential aging bound over [0, horizon]:
 * t_s,y_lin_frac,y_log_frac,bound_frac */
HO_API ho_status ho_fit_compare_csv(double y_age_fraction, double t_data_s, double horizon_s,
                                    double step_s, char** text);

/* --- loose-sync check ---------------------------------------------------- */

/* 1 iff |delta_t| <= t_loose. */
HO_API int ho_sync_ok(double delta_t_s, double t_loose_s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HOLDOVER_H */
