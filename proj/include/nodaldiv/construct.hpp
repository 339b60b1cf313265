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

#include <nodaldiv/dec.hpp>
#include <nodaldiv/mesh.hpp>
#include <nodaldiv/mesh_io.hpp>
#include <nodaldiv/profile.hpp>

#include <string>
#include <vector>

namespace nodaldiv {

struct CircleParams
{
    std::string name;
    double A_minus = 0.0;
    double A_plus = 0.0;
    double center_minus = 0.0, width_minus = 0.0;
    double center_plus = 0.0, width_plus = 0.0;
};

struct ConstructionParams
{
    double C = 0.0; ///< collar slope of F near Gamma
    double epsilon = 0.0; ///< F = C s exactly for |s| <= epsilon
    double sigma = 0.0; ///< global scale applied to the unscaled F
    double rho0 = 0.0; ///< source amplitude actually used
    double rho0_requested = 0.0;
    double margin = 0.05;
    int level = 0;
    int retries = 0;
    bool smoothing = false;
    std::vector<CircleParams> circles;

    KeyValues to_key_values() const;
    static ConstructionParams from_key_values(const KeyValues& kv);
};

struct ConstructionResult
{
    Cochain F; ///< 0-cochain
    Cochain u; ///< 0-cochain, sin(F)
    Cochain omega_ref; ///< 2-cochain, reference face areas
    Cochain Omega; ///< 2-cochain
    Cochain lapF; ///< dual 2-cochain: Delta F density per dual cell
    ConstructionParams params;
    std::vector<std::string> log;
};

struct ConstructOptions
{
    double rho0 = 0.2;
    double margin = 0.05;
    bool smoothing = false;
    int max_retries = 8;
    double safety = 1.25;
    double blend_width = 0.3; ///< initial profile blend half-width
};

///
/// Strictly subharmonic Dirichlet solve: f = -1 on the boundary and
/// (K f)_v = -rho0 (M_ref)_v at interior vertices. Every component must touch the boundary.
///
Cochain solve_subharmonic(const TriMesh& piece, double rho0);

///
/// Discrete outward normal derivative at boundary vertex v from the flux balance of its
/// dual cell: ((K f)_v + rho0 A_v) / l_v, l_v half the incident boundary edge lengths.
///
double boundary_normal_derivative(const TriMesh& piece, const Cochain& f, double rho0, int v);

/// safety * e * max over `circle` (piece vertex indices) of the normal derivative.
double derive_slope(
    const TriMesh& piece,
    const Cochain& f,
    double rho0,
    const std::vector<int>& circle,
    double safety = 1.25);

/// F, omega_ref, lapF and params; u and Omega are left empty.
ConstructionResult assemble_F(const LabeledSurfaceMesh& mesh, const ConstructOptions& options = {});

/// Fills u = sin F and Omega; throws Construction on a nonpositive face value.
void compute_u_omega(const LabeledSurfaceMesh& mesh, ConstructionResult& result);

/// assemble_F followed by compute_u_omega.
ConstructionResult construct(const LabeledSurfaceMesh& mesh, const ConstructOptions& options = {});

/// Per-vertex Delta F density -(K F)_v / A_v (before the collar zeroing).
std::vector<double> laplacian_density(const TriMesh& mesh, const Cochain& F);

/// |dF|^2 and cot(Fbar) * DeltaFbar per face, the two terms of the Omega density.
struct OmegaTerms
{
    std::vector<double> grad_sq;
    std::vector<double> cot_term;
};
OmegaTerms omega_terms(const LabeledSurfaceMesh& mesh, const ConstructionResult& result);

/// Files F.txt, u.txt, omega.txt, Omega.txt, lapF.txt and params.txt in `dir`.
void save_result(const ConstructionResult& result, const std::string& dir);
ConstructionResult load_result(const LabeledSurfaceMesh& mesh, const std::string& dir);

} // namespace nodaldiv
