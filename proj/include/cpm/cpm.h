#ifndef CPM_CPM_H
#define CPM_CPM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CPM_API __declspec(dllexport)
#else
#define CPM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. CPM_ORACLE_FAIL and CPM_CONFIG_ERROR equal the CLI exit codes. */
typedef enum cpm_status {
    CPM_OK = 0,
    CPM_ORACLE_FAIL = 1,
    CPM_CONFIG_ERROR = 2,
    CPM_ARGUMENT_ERROR = 3,
    CPM_RUNTIME_ERROR = 4,
    CPM_INTERNAL_ERROR = 5
} cpm_status;

typedef struct cpm_config cpm_config;
typedef struct cpm_report cpm_report;
typedef struct cpm_sweep cpm_sweep;

/* Message of the last failed call on this thread; never NULL. */
CPM_API const char* cpm_last_error(void);
CPM_API const char* cpm_version(void);

/* Workload configs: key = value lines or one JSON object. */
CPM_API cpm_status cpm_config_parse(const char* text, cpm_config** out);
CPM_API cpm_status cpm_config_load(const char* path, cpm_config** out);
CPM_API cpm_status cpm_config_set(cpm_config* config, const char* key, const char* value);
CPM_API void cpm_config_free(cpm_config* config);

/* Run options. seed < 0 and oracle < 0 keep the config's values; timing 0
   reports wall_time_ms as null so reruns stay byte identical. */
typedef struct cpm_run_options {
    int64_t seed;
    int oracle;
    int timing;
} cpm_run_options;

CPM_API cpm_run_options cpm_run_options_default(void);

/* Returns CPM_OK, or CPM_ORACLE_FAIL with a valid report. */
CPM_API cpm_status cpm_run(const cpm_config* config, const cpm_run_options* options, cpm_report** out);
CPM_API const char* cpm_report_json(const cpm_report* report);
CPM_API uint64_t cpm_report_macro_cycles(const cpm_report* report);
CPM_API uint64_t cpm_report_micro_cycles(const cpm_report* report);
CPM_API uint64_t cpm_report_exclusive_ops(const cpm_report* report);
CPM_API int cpm_report_oracle_failed(const cpm_report* report);
CPM_API void cpm_report_free(cpm_report* report);

/* One run per value of `param`; `fit` adds a log-log exponent fit. Returns
   CPM_ORACLE_FAIL with a valid sweep when any row fails its oracle. */
CPM_API cpm_status cpm_sweep_run(const cpm_config* config, const char* param, const char* const* values,
                                 size_t count, int fit, const cpm_run_options* options, cpm_sweep** out);
CPM_API const char* cpm_sweep_json(const cpm_sweep* sweep);
CPM_API const char* cpm_sweep_csv(const cpm_sweep* sweep);
CPM_API cpm_status cpm_sweep_exponent(const cpm_sweep* sweep, double* exponent);
CPM_API void cpm_sweep_free(cpm_sweep* sweep);

/* Routing delay in seconds for a layer of size L over oxide D and copper T
   (meters), and the largest L meeting a delay budget. */
CPM_API cpm_status cpm_feasibility(double length, double oxide, double copper, double* seconds);
CPM_API cpm_status cpm_feasibility_max_length(double budget, double oxide, double copper, double* length);

#ifdef __cplusplus
}
#endif

#endif
