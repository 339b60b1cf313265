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
#pragma once

#include <nodaldiv/construct.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nodaldiv {

enum class Element : uint8_t { None, Vertex, Face };

struct CheckRecord
{
    std::string name;
    bool pass = false;
    double value = 0.0; ///< measured quantity
    double tol = 0.0; ///< threshold it is compared against
    int worst = -1; ///< offending (or extremal) element
    Element element = Element::None;
    std::string detail;
};

struct SweepRow
{
    int level = 0;
    double h = 0.0;
    double residual = 0.0;
    double min_omega = 0.0;
    double min_contact = 0.0;
    double seam_worst = 0.0;
    double interior_residual = 0.0;
};

struct VerifyOptions
{
    int sample_count = 256;
    uint32_t seed = 7;
    double eigen_tol = -1.0; ///< negative: use eigen_tolerance(level)
};

struct VerificationReport
{
    int level = 0;
    int sample_count = 0;
    uint32_t seed = 0;
    std::vector<CheckRecord> checks;
    double eigen_residual = 0.0;
    double interior_residual = 0.0;
    double seam_residual = 0.0;
    double seam_worst = 0.0;
    double min_omega = 0.0;
    double min_contact = 0.0;
    ConstructionParams params;
    std::vector<SweepRow> sweep;
    double interior_order = 0.0; ///< finest pair of sweep levels
    std::vector<double> residual_field; ///< per-vertex residual density

    bool all_pass() const;
    const CheckRecord* find(const std::string& name) const;
};

/// 0.2 * 4^(-level/2).
double eigen_tolerance(int level);

/// Vertices within graph distance 2 of the s = -1 and s = +1 rings.
std::vector<char> seam_strip_mask(const LabeledSurfaceMesh& mesh);

CheckRecord check_nodal_set(const LabeledSurfaceMesh& mesh, const ConstructionResult& r);
CheckRecord check_positivity(const LabeledSurfaceMesh& mesh, const ConstructionResult& r);
CheckRecord check_contact_condition(const LabeledSurfaceMesh& mesh, const ConstructionResult& r);

struct EigenDiagnostics
{
    double residual = 0.0;
    double interior_residual = 0.0;
    double seam_residual = 0.0;
    double seam_worst = 0.0;
    std::vector<double> density;
};
CheckRecord check_eigen_identity(
    const LabeledSurfaceMesh& mesh,
    const ConstructionResult& r,
    double tol,
    EigenDiagnostics* diagnostics = nullptr);

/// Records lemma_main.i .. lemma_main.v.
std::vector<CheckRecord> check_lemma_main(const LabeledSurfaceMesh& mesh, const ConstructionResult& r);

///
/// Per sampled face: metric g = dt^2 + Omega(., j.) in the chart (t, x, y), alpha = u dt + du o j,
/// and the metric star of alpha compared with d alpha component by component.
///
CheckRecord check_adaptedness_reduction(
    const LabeledSurfaceMesh& mesh,
    const ConstructionResult& r,
    int sample_count = 256,
    uint32_t seed = 7);

/// Faces drawn by the adaptedness check, in order.
std::vector<int> sample_faces(int num_faces, int sample_count, uint32_t seed);

VerificationReport verify(
    const LabeledSurfaceMesh& mesh,
    const ConstructionResult& r,
    const VerifyOptions& options = {});

struct SweepResult
{
    std::vector<SweepRow> rows;
    CheckRecord monotone; ///< "convergence"
    double interior_order = 0.0; ///< observed order over the finest pair of levels
};

/// Full pipeline per level of a preset.
SweepResult convergence_sweep(
    const std::string& preset,
    const std::vector<int>& levels,
    const ConstructOptions& construct_options = {},
    const VerifyOptions& verify_options = {},
    int collar_rings = 8);

/// Judge a set of rows (strictly decreasing residual, floors bounded away from zero).
SweepResult summarize_sweep(std::vector<SweepRow> rows);

void write_report(std::ostream& out, const VerificationReport& report);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Minimal perturbations, one per check.
namespace fault {
void flip_sign(ConstructionResult& r, int vertex);
void zero_omega(ConstructionResult& r, int face);
void zero_u_ring(const LabeledSurfaceMesh& mesh, ConstructionResult& r, int vertex);
void constant_u(ConstructionResult& r);
void scale_F(ConstructionResult& r, double factor);
/// Plus-side collar uses the translated profile sigma (1 + G(s - 1)) instead of the mirrored one.
void remove_mirroring(const LabeledSurfaceMesh& mesh, ConstructionResult& r);
/// Negates Omega on the first face the adaptedness check samples; returns that face.
int negate_sampled_omega(ConstructionResult& r, int sample_count = 256, uint32_t seed = 7);
} // namespace fault

} // namespace nodaldiv
