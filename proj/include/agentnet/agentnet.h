/* SPDX-License-Identifier: Apache-2.0 */
#ifndef AGENTNET_AGENTNET_H
#define AGENTNET_AGENTNET_H

#include <stddef.h>

#if defined(AGENTNET_BUILDING)
#define AGENTNET_API __attribute__((visibility("default")))
#else
#define AGENTNET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agentnet_status {
    AGENTNET_OK = 0,
    AGENTNET_ERR_CONFIG = 1,
    AGENTNET_ERR_DATASET = 2,
    AGENTNET_ERR_BACKEND = 3,
    AGENTNET_ERR_IO = 4,
    AGENTNET_ERR_ARGUMENT = 5,
    AGENTNET_ERR_INTERNAL = 6
} agentnet_status;

typedef struct agentnet_config agentnet_config;
typedef struct agentnet_report agentnet_report;

AGENTNET_API const char* agentnet_version(void);

/* Message of the last failed call on this thread; "" when none. */
AGENTNET_API const char* agentnet_last_error(void);

/* Strings returned through char** are owned by the caller. */
AGENTNET_API void agentnet_string_free(char* s);

AGENTNET_API agentnet_status agentnet_config_load(const char* path, agentnet_config** out);
/* Relative paths inside `json` resolve against `base_dir` (may be NULL). */
AGENTNET_API agentnet_status agentnet_config_parse(const char* json, const char* base_dir, agentnet_config** out);
/* Keys: agents alpha beta theta-w k cmax backend script dataset heuristics
   phase ablation seed out state-in, and sweep-agents / sweep-cmax taking
   comma-separated lists. */
AGENTNET_API agentnet_status agentnet_config_set(agentnet_config* config, const char* key, const char* value);
AGENTNET_API agentnet_status agentnet_config_validate(const agentnet_config* config);
AGENTNET_API agentnet_status agentnet_config_to_json(const agentnet_config* config, char** out);
AGENTNET_API void agentnet_config_free(agentnet_config* config);

/* Runs the configured phases; exports to the configured output directory. */
AGENTNET_API agentnet_status agentnet_run(const agentnet_config* config, agentnet_report** out);
/* Accuracy and task count of the last phase run. */
AGENTNET_API double agentnet_report_accuracy(const agentnet_report* report);
AGENTNET_API size_t agentnet_report_task_count(const agentnet_report* report);
AGENTNET_API agentnet_status agentnet_report_summary(const agentnet_report* report, char** out);
AGENTNET_API agentnet_status agentnet_report_final_snapshot(const agentnet_report* report, char** out);
AGENTNET_API agentnet_status agentnet_report_export(const agentnet_report* report, const char* dir);
AGENTNET_API void agentnet_report_free(agentnet_report* report);

/* One run per (agents, cmax) pair of the config's sweep grid; CSV rows. */
AGENTNET_API agentnet_status agentnet_sweep(const agentnet_config* config, char** csv_out);

AGENTNET_API agentnet_status agentnet_snapshot_to_dot(const char* snapshot_json, int include_pruned, char** out);

/* kind: "bbh", "math" or "api-bank". */
AGENTNET_API agentnet_status agentnet_evaluate(const char* kind, const char* answer, const char* gold, int* score);

#ifdef __cplusplus
}
#endif

#endif
