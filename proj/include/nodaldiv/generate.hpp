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

#include <nodaldiv/mesh.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace nodaldiv {

struct PieceSpec
{
    int genus = 0;
    std::vector<std::string> circles; ///< boundary circle ids
};

struct CircleSpec
{
    std::string name;
    int vertex_count = 32; ///< at refinement level 0
};

///
/// Topological description of S = S- u [-1,1] x Gamma u S+.
///
/// Every circle bounds exactly one Minus piece and exactly one Plus piece.
///
struct SurfaceSpec
{
    std::vector<PieceSpec> minus;
    std::vector<PieceSpec> plus;
    std::vector<CircleSpec> circles;
    int collar_rings = 8; ///< rings per half collar at level 0
    int refinement_level = 0;

    /// Throws Error(InvalidSpec) naming the offending circle or piece.
    void validate() const;
};

///
/// Parse the plain-text surface description:
///
///     collar_rings = 8
///     refinement_level = 0
///     circle c1 = 32
///     minus = 0 : c1 c2
///     plus = 1 : c1
///
/// `#` starts a comment. Each `minus`/`plus` line adds one piece (genus : circles).
///
SurfaceSpec parse_surface_spec(std::istream& in);
SurfaceSpec load_surface_spec(const std::string& path);

LabeledSurfaceMesh build_from_spec(const SurfaceSpec& spec);

const std::vector<std::string>& preset_names();
SurfaceSpec preset_spec(const std::string& name, int level, int collar_rings = 8);
LabeledSurfaceMesh generate_preset(const std::string& name, int level, int collar_rings = 8);

// Fixtures with closed-form reference solutions.

/// Flat disk of radius `radius` with n boundary vertices (log-polar rings, centre fan).
/// Self-similar under doubling n; region pieces use a uniform-density disk instead.
TriMesh flat_disk(int n, double radius = 1.0);
/// Latitude-longitude sphere with its poles on the x axis (2 * bands meridians).
TriMesh round_sphere(double radius, int latitude_bands);
/// Unit square flat torus, `n` x `n` grid split along one diagonal.
TriMesh flat_torus(int n);

} // namespace nodaldiv
