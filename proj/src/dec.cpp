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

#include <nodaldiv/dec.hpp>

#include <cmath>
#include <string>

namespace nodaldiv {

namespace {

[[noreturn]] void bad(const std::string& msg)
{
    throw Error(ErrorKind::InvalidArgument, msg);
}

void require_size(const TriMesh& mesh, const Cochain& c)
{
    if (c.degree < 0 || c.degree > 2) bad("cochain degree must be 0, 1 or 2");
    if (static_cast<int>(c.values.size()) != Cochain::element_count(mesh, c.degree, c.dual)) {
        bad("cochain size does not match the mesh");
    }
}

void require_positive_area(const TriMesh& mesh, const Cochain& area)
{
    if (area.degree != 2 || area.dual) bad("area must be a primal 2-cochain");
    require_size(mesh, area);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        if (!(area.values[f] > 0.0)) {
            bad("nonpositive area value " + std::to_string(area.values[f]) + " at face " +
                std::to_string(f));
        }
    }
}

} // namespace

int Cochain::element_count(const TriMesh& mesh, int degree, bool dual)
{
    if (!dual) {
        switch (degree) {
        case 0: return mesh.num_vertices();
        case 1: return mesh.num_edges();
        case 2: return mesh.num_faces();
        }
    } else {
        switch (degree) {
        case 0: return mesh.num_faces();
        case 1: return mesh.num_edges();
        case 2: return mesh.num_vertices();
        }
    }
    bad("cochain degree must be 0, 1 or 2");
}

Cochain Cochain::zeros(const TriMesh& mesh, int degree, bool dual)
{
    return Cochain{degree, dual, std::vector<double>(element_count(mesh, degree, dual), 0.0)};
}

Cochain reference_area(const TriMesh& mesh)
{
    return Cochain{2, false, mesh.face_areas()};
}

SparseMatrix d0_matrix(const TriMesh& mesh)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        t.emplace_back(e, mesh.edges()[e][0], -1.0);
        t.emplace_back(e, mesh.edges()[e][1], 1.0);
    }
    SparseMatrix m(mesh.num_edges(), mesh.num_vertices());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseMatrix d1_matrix(const TriMesh& mesh)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) t.emplace_back(f, mesh.face_edge(f, k), mesh.face_edge_sign(f, k));
    }
    SparseMatrix m(mesh.num_faces(), mesh.num_edges());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Cochain d(const TriMesh& mesh, const Cochain& c)
{
    require_size(mesh, c);
    if (c.degree == 2) bad("exterior derivative of a 2-cochain");
    if (c.dual) {
        if (c.degree != 1) bad("dual exterior derivative is defined on dual 1-cochains");
        Cochain out = Cochain::zeros(mesh, 2, true);
        for (int e = 0; e < mesh.num_edges(); ++e) {
            out.values[mesh.edges()[e][0]] += c.values[e];
            out.values[mesh.edges()[e][1]] -= c.values[e];
        }
        return out;
    }
    if (c.degree == 0) {
        Cochain out = Cochain::zeros(mesh, 1);
        for (int e = 0; e < mesh.num_edges(); ++e) {
            out.values[e] = c.values[mesh.edges()[e][1]] - c.values[mesh.edges()[e][0]];
        }
        return out;
    }
    Cochain out = Cochain::zeros(mesh, 2);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += mesh.face_edge_sign(f, k) * c.values[mesh.face_edge(f, k)];
        out.values[f] = s;
    }
    return out;
}

std::vector<double> hodge1(const TriMesh& mesh)
{
    std::vector<double> w(mesh.num_edges(), 0.0);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) w[mesh.face_edge(f, (k + 1) % 3)] += 0.5 * mesh.corner_cot(f, k);
    }
    return w;
}

Cochain rotate_j(const TriMesh& mesh, const Cochain& c)
{
    require_size(mesh, c);
    if (c.degree != 1 || c.dual) bad("rotate_j takes a primal 1-cochain");
    for (int f = 0; f < mesh.num_faces(); ++f) {
        if (!(mesh.face_area(f) > 0.0)) bad("degenerate face " + std::to_string(f));
    }
    const auto w = hodge1(mesh);
    Cochain out = Cochain::zeros(mesh, 1, true);
    for (int e = 0; e < mesh.num_edges(); ++e) out.values[e] = -w[e] * c.values[e];
    return out;
}

SparseMatrix stiffness(const TriMesh& mesh)
{
    const auto w = hodge1(mesh);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(4 * mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const int a = mesh.edges()[e][0], b = mesh.edges()[e][1];
        t.emplace_back(a, a, w[e]);
        t.emplace_back(b, b, w[e]);
        t.emplace_back(a, b, -w[e]);
        t.emplace_back(b, a, -w[e]);
    }
    SparseMatrix K(mesh.num_vertices(), mesh.num_vertices());
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

Eigen::VectorXd lumped_mass(const TriMesh& mesh, const Cochain& area)
{
    require_size(mesh, area);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) m[mesh.faces()[f][k]] += area.values[f] / 3.0;
    }
    return m;
}

std::vector<double> dual_areas(const TriMesh& mesh)
{
    const Eigen::VectorXd m = lumped_mass(mesh, reference_area(mesh));
    return {m.data(), m.data() + m.size()};
}

Pencil assemble_pencil(const TriMesh& mesh, const Cochain& area)
{
    require_positive_area(mesh, area);
    return Pencil{stiffness(mesh), lumped_mass(mesh, area)};
}

Eigen::VectorXd eigen_residual_density(
    const SparseMatrix& K,
    const Eigen::VectorXd& M,
    const Eigen::VectorXd& u,
    double lambda)
{
    if (K.rows() != u.size() || M.size() != u.size()) bad("pencil and vector sizes differ");
    Eigen::VectorXd r = K * u - lambda * M.cwiseProduct(u);
    return r.cwiseQuotient(M);
}

double eigen_residual(
    const SparseMatrix& K,
    const Eigen::VectorXd& M,
    const Eigen::VectorXd& u,
    double lambda)
{
    if (K.rows() != u.size() || M.size() != u.size()) bad("pencil and vector sizes differ");
    if (u.cwiseAbs().maxCoeff() == 0.0) bad("eigen residual of the zero vector");
    const Eigen::VectorXd r = K * u - lambda * M.cwiseProduct(u);
    const double num = r.cwiseProduct(r).cwiseQuotient(M).sum();
    const double den = M.cwiseProduct(u).cwiseProduct(u).sum();
    return std::sqrt(num / den);
}

Cochain grad_norm_sq(const TriMesh& mesh, const Cochain& u, const Cochain& area)
{
    require_size(mesh, u);
    if (u.degree != 0 || u.dual) bad("grad_norm_sq takes a primal 0-cochain");
    require_positive_area(mesh, area);
    Cochain out = Cochain::zeros(mesh, 2);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Tri& t = mesh.faces()[f];
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double du = u.values[t[(k + 2) % 3]] - u.values[t[(k + 1) % 3]];
            s += mesh.corner_cot(f, k) * du * du;
        }
        out.values[f] = 0.5 * s / area.values[f];
    }
    return out;
}

Eigen::VectorXd to_vector(const Cochain& c)
{
    return Eigen::Map<const Eigen::VectorXd>(c.values.data(), static_cast<Eigen::Index>(c.values.size()));
}

} // namespace nodaldiv
