/*
 * Copyright 2026 The nodaldiv Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#ifndef NODALDIV_H
#define NODALDIV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ND_API __declspec(dllexport)
#elif defined(__GNUC__)
#define ND_API __attribute__((visibility("default")))
#else
#define ND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nd_status {
    ND_OK = 0,
    ND_ERR_INVALID_ARGUMENT = 1,
    ND_ERR_PARSE = 2,
    ND_ERR_INVALID_MESH = 3,
    ND_ERR_INVALID_SPEC = 4,
    ND_ERR_SOLVER = 5,
    ND_ERR_CONSTRUCTION = 6,
    ND_ERR_IO = 7,
    ND_ERR_INTERNAL = 8
} nd_status;

typedef struct nd_mesh nd_mesh;
typedef struct nd_result nd_result;
typedef struct nd_report nd_report;

/* Message of the last failing call on this thread; never NULL. */
ND_API const char* nd_last_error(void);
ND_API const char* nd_version(void);

/* ---- meshes ---- */

ND_API nd_status nd_mesh_generate_preset(const char* preset, int level, int collar_rings, nd_mesh** out);
/* Surface description text or file (collar_rings, refinement_level, circle, minus, plus). */
ND_API nd_status nd_mesh_from_spec_text(const char* text, nd_mesh** out);
ND_API nd_status nd_mesh_from_spec_file(const char* path, nd_mesh** out);
ND_API nd_status nd_mesh_load(const char* path, nd_mesh** out);
ND_API nd_status nd_mesh_save(const nd_mesh* mesh, const char* path);
ND_API void nd_mesh_free(nd_mesh* mesh);

typedef struct nd_mesh_info {
    int vertices;
    int edges;
    int faces;
    int euler;
    int euler_minus;
    int euler_plus;
    int circles;
    int gamma_vertices;
    int level;
} nd_mesh_info;

ND_API nd_status nd_mesh_get_info(const nd_mesh* mesh, nd_mesh_info* info);
/* Number of preset names; nd_preset_name returns NULL past the end. */
ND_API int nd_preset_count(void);
ND_API const char* nd_preset_name(int index);

/* ---- construction ---- */

typedef struct nd_construct_options {
    double rho0;
    double margin;
    int smoothing;
    int max_retries;
    double blend_width;
} nd_construct_options;

ND_API void nd_construct_options_init(nd_construct_options* options);
ND_API nd_status nd_construct(const nd_mesh* mesh, const nd_construct_options* options, nd_result** out);
ND_API nd_status nd_result_save(const nd_result* result, const char* dir);
ND_API nd_status nd_result_load(const nd_mesh* mesh, const char* dir, nd_result** out);
ND_API void nd_result_free(nd_result* result);

/*
 * Field access by name: "F", "u" (per vertex), "omega", "Omega" (per face), "lapF" (per vertex).
 * With values == NULL only *count is filled.
 */
ND_API nd_status nd_result_get_field(const nd_result* result, const char* name, double* values, size_t capacity, size_t* count);
ND_API nd_status nd_result_set_field(nd_result* result, const char* name, const double* values, size_t count);
/* Scalar parameters: "C", "epsilon", "sigma", "rho0", "rho0_requested", "margin", "retries". */
ND_API nd_status nd_result_get_param(const nd_result* result, const char* name, double* value);
/* Construction log lines; NULL past the end. */
ND_API const char* nd_result_log_line(const nd_result* result, size_t index);

/* ---- verification ---- */

typedef struct nd_verify_options {
    int sample_count;
    uint32_t seed;
    double eigen_tol; /* negative: level schedule 0.2 * 2^-level */
} nd_verify_options;

typedef enum nd_element { ND_ELEMENT_NONE = 0, ND_ELEMENT_VERTEX = 1, ND_ELEMENT_FACE = 2 } nd_element;

typedef struct nd_check {
    const char* name; /* owned by the report */
    int pass;
    double value;
    double tol;
    int worst;
    nd_element element;
    const char* detail;
} nd_check;

typedef struct nd_summary {
    double eigen_residual;
    double interior_residual;
    double seam_residual;
    double seam_worst;
    double min_omega;
    double min_contact;
    double interior_order; /* sweeps only, else 0 */
    int all_pass;
} nd_summary;

ND_API void nd_verify_options_init(nd_verify_options* options);
ND_API nd_status nd_verify(const nd_mesh* mesh, const nd_result* result, const nd_verify_options* options, nd_report** out);

/*
 * Full pipeline over levels [level_lo, level_hi] of a preset. The report holds the
 * verification of the finest level plus one sweep row per level and the "convergence" check.
 */
ND_API nd_status nd_sweep(
    const char* preset,
    int level_lo,
    int level_hi,
    int collar_rings,
    const nd_construct_options* construct_options,
    const nd_verify_options* verify_options,
    nd_report** out);

ND_API size_t nd_report_check_count(const nd_report* report);
ND_API nd_status nd_report_get_check(const nd_report* report, size_t index, nd_check* check);
ND_API nd_status nd_report_get_summary(const nd_report* report, nd_summary* summary);
ND_API size_t nd_report_sweep_rows(const nd_report* report);
ND_API nd_status nd_report_write(const nd_report* report, const char* path);
ND_API nd_status nd_report_write_csv(const nd_report* report, const char* path);
/* Report text; the pointer stays valid until the report is freed. */
ND_API const char* nd_report_text(const nd_report* report);
ND_API void nd_report_free(nd_report* report);

#ifdef __cplusplus
}
#endif

#endif /* NODALDIV_H */
