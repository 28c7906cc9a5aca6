// Copyright 2026 The logorec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LOGOREC_LOGOREC_H_
#define LOGOREC_LOGOREC_H_

#include <stddef.h>

#if defined(_WIN32)
#define LR_API __declspec(dllexport)
#else
#define LR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lr_status {
  LR_OK = 0,
  LR_ERR_USAGE = 1,             /* unknown key, bad flag value, unknown preset */
  LR_ERR_INVALID_ARGUMENT = 2,  /* violated precondition */
  LR_ERR_IO = 3,                /* unreadable or unwritable path */
  LR_ERR_DATA = 4,              /* malformed dataset or annotations */
  LR_ERR_FORMAT = 5,            /* model file: bad magic or header */
  LR_ERR_VERSION = 6,           /* model file: unsupported version */
  LR_ERR_TRUNCATED = 7,         /* model file: payload too short */
  LR_ERR_SHAPE = 8,             /* model file: inconsistent shapes */
  LR_ERR_INTERNAL = 9
} lr_status;

/* Receives one line of output (no trailing newline). */
typedef void (*lr_line_fn)(void* user, const char* line);

typedef struct lr_config lr_config;
typedef struct lr_model lr_model;

LR_API const char* lr_version(void);
LR_API const char* lr_status_name(lr_status status);
/* Message of the last failed call on this thread; "" if none. */
LR_API const char* lr_last_error(void);

/* Routes progress and warnings; NULL restores the stderr default. */
LR_API void lr_set_log_callback(lr_line_fn fn, void* user);

/* ---- configuration: flat key = value settings ------------------------- */

LR_API lr_status lr_config_create(lr_config** out);
LR_API void lr_config_destroy(lr_config* config);
LR_API lr_status lr_config_set(lr_config* config, const char* key, const char* value);
LR_API lr_status lr_config_apply_preset(lr_config* config, const char* preset);
LR_API lr_status lr_config_load_file(lr_config* config, const char* path);
/* Emits every resolved setting as "key = value". */
LR_API lr_status lr_config_dump(const lr_config* config, lr_line_fn fn, void* user);

LR_API size_t lr_setting_count(void);
LR_API const char* lr_setting_key(size_t index);
LR_API const char* lr_setting_help(size_t index);
LR_API size_t lr_preset_count(void);
LR_API const char* lr_preset_name(size_t index);

/* ---- models ------------------------------------------------------------ */

LR_API lr_status lr_model_load(const char* path, lr_model** out);
LR_API lr_status lr_model_save(const lr_model* model, const char* path);
LR_API void lr_model_destroy(lr_model* model);
LR_API size_t lr_model_class_count(const lr_model* model); /* logo classes, background excluded */
LR_API const char* lr_model_class_name(const lr_model* model, size_t index);
LR_API double lr_model_threshold(const lr_model* model);
LR_API size_t lr_model_parameter_count(const lr_model* model);

/* ---- workflows ----------------------------------------------------------
 * Inputs named "paths" may be image files or directories (searched
 * recursively, sorted). Result lines go to fn; progress goes to the log. */

/* Writes a synthetic dataset to out_dir and emits per-split counts. */
LR_API lr_status lr_synth(const lr_config* config, const char* out_dir, lr_line_fn fn, void* user);

/* "path x y w h score" per proposal. */
LR_API lr_status lr_propose(const lr_config* config, const char* const* paths, size_t count, lr_line_fn fn,
                            void* user);

/* Trains on data_dir under the configured toggles; emits the report. */
LR_API lr_status lr_train(const lr_config* config, const char* data_dir, lr_model** out, lr_line_fn fn,
                          void* user);

/* Re-chooses the threshold on the train + val images of data_dir. */
LR_API lr_status lr_calibrate(const lr_config* config, lr_model* model, const char* data_dir, lr_line_fn fn,
                              void* user);

/* "path predicted_class confidence n_proposals" per image; failed images emit
 * "path ERROR message" and make the call return LR_ERR_DATA after the batch. */
LR_API lr_status lr_predict(const lr_config* config, const lr_model* model, const char* const* paths,
                            size_t count, lr_line_fn fn, void* user);

/* Precision, recall, F1, accuracy, counts and confusion matrix on a split. */
LR_API lr_status lr_evaluate(const lr_config* config, const lr_model* model, const char* data_dir,
                             const char* split, lr_line_fn fn, void* user);

/* presets and seeds are comma-separated. Emits the aligned table; writes the
 * CSV form to csv_path when it is not NULL. */
LR_API lr_status lr_ablate(const lr_config* config, const char* data_dir, const char* presets,
                           const char* seeds, const char* csv_path, lr_line_fn fn, void* user);

/* Exact duplicates ("path_a path_b ssim") between query and reference sets,
 * or within the query set when reference is NULL. With a model, also emits
 * near-duplicate candidates ("query neighbor rank distance"). */
LR_API lr_status lr_dedup(const lr_config* config, const char* const* query, size_t query_count,
                          const char* const* reference, size_t reference_count, const lr_model* model,
                          lr_line_fn fn, void* user);

/* Times the pipeline over the first bench.runs images; emits the stage table. */
LR_API lr_status lr_bench(const lr_config* config, const lr_model* model, const char* const* paths, size_t count,
                          const char* csv_path, lr_line_fn fn, void* user);

#ifdef __cplusplus
}
#endif

#endif  // LOGOREC_LOGOREC_H_
