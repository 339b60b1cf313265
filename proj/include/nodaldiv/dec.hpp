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

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace nodaldiv {

using SparseMatrix = Eigen::SparseMatrix<double>;

///
/// Discrete k-form. Primal cochains live on vertices, edges (canonical lo -> hi
/// orientation) or faces. Dual cochains live on dual edges (indexed by the primal edge
/// they cross; the dual edge points along j applied to the primal edge) or dual cells
/// (indexed by vertex, counter-clockwise boundary).
///
struct Cochain
{
    int degree = 0;
    bool dual = false;
    std::vector<double> values;

    static Cochain zeros(const TriMesh& mesh, int degree, bool dual = false);
    /// Number of mesh elements a cochain of this degree/kind indexes.
    static int element_count(const TriMesh& mesh, int degree, bool dual);
};

/// Reference area form: intrinsic face areas.
Cochain reference_area(const TriMesh& mesh);

/// Signed incidence: d0 is |E| x |V| (-1 at the tail, +1 at the head), d1 is |F| x |E|.
SparseMatrix d0_matrix(const TriMesh& mesh);
SparseMatrix d1_matrix(const TriMesh& mesh);

///
/// Exterior derivative. Primal 0 -> 1 -> 2; dual 1 -> 2 (dual d = -d0^T).
/// Throws InvalidArgument on degree 2 input or a size mismatch.
///
Cochain d(const TriMesh& mesh, const Cochain& c);

/// Diagonal cotangent Hodge star on primal 1-cochains: (cot a + cot b) / 2 per edge.
std::vector<double> hodge1(const TriMesh& mesh);

///
/// c o j as a dual 1-cochain: -hodge1 * c. With this convention ds o j = -dt and
/// dt o j = ds on a flat collar, and d(rotate_j(d u)) = K u.
///
Cochain rotate_j(const TriMesh& mesh, const Cochain& c);

/// K = d0^T hodge1 d0.
SparseMatrix stiffness(const TriMesh& mesh);

/// Lumped barycentric vertex masses: one third of each incident face value.
Eigen::VectorXd lumped_mass(const TriMesh& mesh, const Cochain& area);

/// Barycentric dual-cell areas of the reference metric.
std::vector<double> dual_areas(const TriMesh& mesh);

struct Pencil
{
    SparseMatrix K;
    Eigen::VectorXd M; ///< diagonal
};

/// Throws InvalidArgument naming the first face with a nonpositive area value.
Pencil assemble_pencil(const TriMesh& mesh, const Cochain& area);

///
/// || K u - lambda M u || / || M u || with both dual quantities measured in the
/// M^-1-weighted norm. Throws InvalidArgument on zero u.
///
double eigen_residual(
    const SparseMatrix& K,
    const Eigen::VectorXd& M,
    const Eigen::VectorXd& u,
    double lambda);

/// Per-vertex residual density (K u - lambda M u)_v / M_v.
Eigen::VectorXd eigen_residual_density(
    const SparseMatrix& K,
    const Eigen::VectorXd& M,
    const Eigen::VectorXd& u,
    double lambda);

///
/// |du|^2 per face in the metric conformal to the reference one with area form `area`.
///
Cochain grad_norm_sq(const TriMesh& mesh, const Cochain& u, const Cochain& area);

Eigen::VectorXd to_vector(const Cochain& c);

} // namespace nodaldiv
