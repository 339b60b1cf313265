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

#include <nodaldiv/error.hpp>

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace nodaldiv {

using Vec3 = std::array<double, 3>;
using Tri = std::array<int, 3>;

///
/// Intrinsic triangle mesh: combinatorics plus one positive length per edge.
///
/// Edges are stored once with canonical orientation `lo -> hi`. A face traverses its
/// k-th edge (corner k to corner k+1) either along (+1) or against (-1) that orientation.
/// Positions are carried for visualization only; no geometric quantity reads them.
///
class TriMesh
{
public:
    TriMesh() = default;

    ///
    /// Build from faces and per-edge lengths.
    ///
    /// @param[in] positions     Visualization positions, one per vertex.
    /// @param[in] faces         Oriented triangles.
    /// @param[in] length_of     Callable (a, b) -> length, symmetric in its arguments.
    ///
    template <typename LengthFn>
    TriMesh(std::vector<Vec3> positions, std::vector<Tri> faces, LengthFn&& length_of)
        : m_positions(std::move(positions))
        , m_faces(std::move(faces))
    {
        build_connectivity();
        m_edge_lengths.resize(m_edges.size());
        for (size_t e = 0; e < m_edges.size(); ++e) {
            m_edge_lengths[e] = length_of(m_edges[e][0], m_edges[e][1]);
        }
        finish_geometry();
    }

    /// Build with edge lengths taken from the Euclidean distance between positions.
    static TriMesh from_positions(std::vector<Vec3> positions, std::vector<Tri> faces);

    int num_vertices() const { return static_cast<int>(m_positions.size()); }
    int num_edges() const { return static_cast<int>(m_edges.size()); }
    int num_faces() const { return static_cast<int>(m_faces.size()); }

    const std::vector<Vec3>& positions() const { return m_positions; }
    const std::vector<Tri>& faces() const { return m_faces; }
    const std::vector<std::array<int, 2>>& edges() const { return m_edges; }
    const std::vector<double>& edge_lengths() const { return m_edge_lengths; }

    /// Edge index of the k-th side of face f (corner k to corner k+1).
    int face_edge(int f, int k) const { return m_face_edges[f][k]; }
    /// +1 if face f traverses its k-th side along the canonical edge orientation.
    int face_edge_sign(int f, int k) const { return m_face_edge_signs[f][k]; }
    /// Incident faces of an edge; the second entry is -1 on a boundary edge.
    const std::array<int, 2>& edge_faces(int e) const { return m_edge_faces[e]; }
    /// Length of the side of face f opposite to corner k.
    double opposite_length(int f, int k) const;

    bool is_boundary_edge(int e) const { return m_edge_faces[e][1] < 0; }
    bool is_boundary_vertex(int v) const { return m_boundary_vertex[v] != 0; }
    bool has_boundary() const;

    /// Edge index joining a and b, or -1.
    int find_edge(int a, int b) const;
    /// Sorted neighbour lists.
    const std::vector<std::vector<int>>& vertex_neighbors() const { return m_neighbors; }
    const std::vector<std::vector<int>>& vertex_faces() const { return m_vertex_faces; }

    /// Heron area of face f from its edge lengths.
    double face_area(int f) const { return m_face_areas[f]; }
    const std::vector<double>& face_areas() const { return m_face_areas; }
    /// Cotangent of the interior angle at corner k of face f.
    double corner_cot(int f, int k) const { return m_corner_cots[f][k]; }

    int euler_characteristic() const
    {
        return num_vertices() - num_edges() + num_faces();
    }

    /// Number of connected components (through edges).
    int count_components() const;

    ///
    /// Boundary loops, each traversed with the mesh on its left (induced orientation).
    /// Loops start at their lowest vertex index.
    ///
    std::vector<std::vector<int>> boundary_loops() const;

    ///
    /// Full manifold validation. Throws Error(InvalidMesh) naming the first violation.
    ///
    /// @param[in] require_closed  Reject boundary edges with "not a closed manifold".
    ///
    void validate(bool require_closed) const;

    /// Replace the visualization positions (lengths are untouched).
    void set_positions(std::vector<Vec3> positions);

private:
    void build_connectivity();
    void finish_geometry();

    std::vector<Vec3> m_positions;
    std::vector<Tri> m_faces;
    std::vector<std::array<int, 2>> m_edges;
    std::vector<double> m_edge_lengths;
    std::vector<std::array<int, 3>> m_face_edges;
    std::vector<std::array<int8_t, 3>> m_face_edge_signs;
    std::vector<std::array<int, 2>> m_edge_faces;
    std::vector<uint8_t> m_boundary_vertex;
    std::vector<std::vector<int>> m_neighbors;
    std::vector<std::vector<int>> m_vertex_faces;
    std::vector<std::vector<std::pair<int, int>>> m_vertex_edges; // (neighbor, edge)
    std::vector<double> m_face_areas;
    std::vector<std::array<double, 3>> m_corner_cots;
    int m_edge_anomaly = -1; // first edge with more than two incident faces
    int m_orientation_anomaly = -1; // first edge traversed twice in the same direction
};

enum class Region : uint8_t { Minus, Collar, Plus };

struct FaceLabel
{
    Region region = Region::Minus;
    int circle = -1; ///< Collar circle index, -1 for region faces.

    bool operator==(const FaceLabel&) const = default;
};

///
/// Structure of one collar [-1, 1] x circle, recovered from labels and collar_s.
///
struct CollarInfo
{
    int circle = -1;
    /// rings[r][k]: vertex at ring r (increasing s) and angular slot k (increasing t).
    std::vector<std::vector<int>> rings;
    std::vector<double> ring_s;
    /// Unfolded circumferential coordinate t of rings[r][k], unwrapped (not reduced mod the period).
    std::vector<std::vector<double>> ring_t;
    double h_s = 0.0; ///< ring spacing in s
    double h_t = 0.0; ///< circumferential spacing
    std::vector<int> faces;

    int n() const { return rings.empty() ? 0 : static_cast<int>(rings.front().size()); }
    int half_rings() const { return static_cast<int>(rings.size() / 2); }
    double circumference() const { return h_t * n(); }
};

///
/// Closed surface S = S- u [-1,1] x Gamma u S+ with its decomposition data.
///
/// Construction runs the full validation; a constructed instance is immutable.
///
class LabeledSurfaceMesh
{
public:
    static constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

    LabeledSurfaceMesh(
        TriMesh mesh,
        std::vector<FaceLabel> labels,
        std::vector<std::string> circle_names,
        std::vector<double> collar_s,
        std::vector<int> gamma_vertices,
        int level = 0);

    const TriMesh& mesh() const { return m_mesh; }
    const std::vector<FaceLabel>& labels() const { return m_labels; }
    const std::vector<std::string>& circle_names() const { return m_circle_names; }
    /// Per-vertex collar coordinate; NaN away from the collars.
    const std::vector<double>& collar_s() const { return m_collar_s; }
    bool has_collar_s(int v) const { return m_collar_s[v] == m_collar_s[v]; }
    const std::vector<int>& gamma_vertices() const { return m_gamma; }
    const std::vector<CollarInfo>& collars() const { return m_collars; }
    /// -1 on S- and collar s < 0, 0 on Gamma, +1 on collar s > 0 and S+.
    int vertex_side(int v) const { return m_vertex_side[v]; }
    /// Collar circle of a collar vertex, else -1.
    int vertex_circle(int v) const { return m_vertex_circle[v]; }
    int level() const { return m_level; }
    int collar_rings() const;

    int euler_minus() const { return m_euler_minus; }
    int euler_plus() const { return m_euler_plus; }
    int minus_components() const { return m_minus_components; }
    int plus_components() const { return m_plus_components; }

    int find_circle(const std::string& name) const;

private:
    void analyze();
    void analyze_collar(int circle);

    TriMesh m_mesh;
    std::vector<FaceLabel> m_labels;
    std::vector<std::string> m_circle_names;
    std::vector<double> m_collar_s;
    std::vector<int> m_gamma;
    int m_level = 0;

    std::vector<CollarInfo> m_collars;
    std::vector<int8_t> m_vertex_side;
    std::vector<int> m_vertex_circle;
    int m_euler_minus = 0;
    int m_euler_plus = 0;
    int m_minus_components = 0;
    int m_plus_components = 0;
};

///
/// A region of a labeled mesh extracted as a standalone mesh with boundary.
///
struct SubMesh
{
    TriMesh mesh;
    std::vector<int> to_global; ///< local vertex -> global vertex
    std::vector<int> global_faces; ///< local face -> global face
};

/// Extract all faces with the given region label.
SubMesh extract_region(const LabeledSurfaceMesh& mesh, Region region);

/// Relabel Minus <-> Plus and negate collar_s (the mirror decomposition of the same surface).
LabeledSurfaceMesh swap_sides(const LabeledSurfaceMesh& mesh);

/// Euler characteristic of the sub-complex spanned by a face subset.
int sub_euler_characteristic(const TriMesh& mesh, const std::vector<int>& faces);

} // namespace nodaldiv
