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
#include <doctest.h>

#include <nodaldiv/dec.hpp>
#include <nodaldiv/generate.hpp>

#include <array>
#include <cmath>
#include <numbers>

using namespace nodaldiv;

namespace {

constexpr double kPi = std::numbers::pi;

Cochain vertex_function(const TriMesh& mesh, int coordinate)
{
    Cochain u = Cochain::zeros(mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) u.values[v] = mesh.positions()[v][coordinate];
    return u;
}

/// Grid coordinates of a flat_torus(n) vertex (vertex index i * n + j).
std::array<double, 2> torus_xy(int v, int n)
{
    return {double(v / n) / n, double(v % n) / n};
}

double sphere_residual(int level)
{
    const TriMesh mesh = round_sphere(std::sqrt(2.0), 16 << level);
    const Pencil P = assemble_pencil(mesh, reference_area(mesh));
    return eigen_residual(P.K, P.M, to_vector(vertex_function(mesh, 2)), 1.0);
}

} // namespace

TEST_CASE("d composed with d vanishes")
{
    const TriMesh mesh = generate_preset("torus-two-meridians", 0).mesh();
    Cochain u = Cochain::zeros(mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) u.values[v] = std::sin(0.37 * v) + 0.01 * v;
    const Cochain ddu = d(mesh, d(mesh, u));
    CHECK(ddu.degree == 2);
    for (double x : ddu.values) CHECK(std::abs(x) < 1e-12);

    const SparseMatrix D = d1_matrix(mesh) * d0_matrix(mesh);
    CHECK(D.norm() == 0.0);
}

TEST_CASE("stiffness is d0^T W d0, symmetric, and kills constants")
{
    const TriMesh mesh = generate_preset("sphere-equator", 0).mesh();
    const SparseMatrix K = stiffness(mesh);
    const SparseMatrix D0 = d0_matrix(mesh);
    const auto w = hodge1(mesh);
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    const SparseMatrix ref = SparseMatrix(D0.transpose()) * wv.asDiagonal() * D0;
    CHECK((K - ref).norm() < 1e-12 * K.norm());
    CHECK((K - SparseMatrix(K.transpose())).norm() < 1e-14 * K.norm());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_vertices());
    CHECK((K * ones).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("dual d of rotate_j(du) equals K u")
{
    const TriMesh mesh = generate_preset("genus2-separating", 0).mesh();
    Cochain u = Cochain::zeros(mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) u.values[v] = std::cos(0.11 * v);
    const Cochain rot = rotate_j(mesh, d(mesh, u));
    CHECK(rot.dual);
    CHECK(rot.degree == 1);
    const Cochain lhs = d(mesh, rot);
    CHECK(lhs.dual);
    CHECK(lhs.degree == 2);
    const Eigen::VectorXd rhs = stiffness(mesh) * to_vector(u);
    for (int v = 0; v < mesh.num_vertices(); ++v) CHECK(lhs.values[v] == doctest::Approx(rhs[v]).epsilon(1e-12));
}

TEST_CASE("rotate_j on a flat collar: ds o j = -dt and dt o j = ds")
{
    // Unit grid torus: x plays s, y plays t. An edge along x has dual edge along +y.
    const int n = 8;
    const TriMesh mesh = flat_torus(n);
    Cochain s = Cochain::zeros(mesh, 1), t = Cochain::zeros(mesh, 1);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto [a, b] = mesh.edges()[e];
        auto delta = [&](int k) {
            const double x = torus_xy(b, n)[k] - torus_xy(a, n)[k];
            return x - std::round(x); // unwrap across the identification
        };
        s.values[e] = delta(0);
        t.values[e] = delta(1);
    }
    // The dual edge of e is w_e times the quarter turn of e: (dx, dy) -> w (-dy, dx).
    const Cochain sj = rotate_j(mesh, s), tj = rotate_j(mesh, t);
    const auto w = hodge1(mesh);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const double ds_dual = -w[e] * t.values[e];
        const double dt_dual = w[e] * s.values[e];
        CHECK(sj.values[e] == doctest::Approx(-dt_dual));
        CHECK(tj.values[e] == doctest::Approx(ds_dual));
    }
}

TEST_CASE("lumped mass sums to total area and dual areas agree")
{
    const TriMesh mesh = generate_preset("sphere-two-circles", 0).mesh();
    const Cochain area = reference_area(mesh);
    const Eigen::VectorXd M = lumped_mass(mesh, area);
    double total = 0.0;
    for (double a : area.values) total += a;
    CHECK(M.sum() == doctest::Approx(total).epsilon(1e-13));
    const auto A = dual_areas(mesh);
    for (int v = 0; v < mesh.num_vertices(); ++v) CHECK(M[v] == doctest::Approx(A[v]).epsilon(1e-13));
}

TEST_CASE("flat torus Rayleigh quotient matches the discrete closed form")
{
    for (int n : {16, 32}) {
        const TriMesh mesh = flat_torus(n);
        const Pencil P = assemble_pencil(mesh, reference_area(mesh));
        Eigen::VectorXd u(mesh.num_vertices());
        for (int v = 0; v < mesh.num_vertices(); ++v) u[v] = std::sin(2.0 * kPi * torus_xy(v, n)[0]);
        const double rq = u.dot(P.K * u) / u.dot(P.M.asDiagonal() * u);
        const double expect = std::pow(2.0 * n * std::sin(kPi / n), 2);
        CHECK(rq == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(rq - 4.0 * kPi * kPi) / (4.0 * kPi * kPi) < 2.0 * std::pow(kPi / n, 2) / 3.0);
        // sin(2 pi x) is an exact discrete eigenvector.
        CHECK(eigen_residual(P.K, P.M, u, expect) < 1e-12);
    }
}

TEST_CASE("round sphere of radius sqrt 2: height function residual converges at second order")
{
    const double r0 = sphere_residual(0), r1 = sphere_residual(1), r2 = sphere_residual(2);
    const double rate01 = std::log2(r0 / r1), rate12 = std::log2(r1 / r2);
    MESSAGE("sphere residuals " << r0 << " " << r1 << " " << r2 << " rates " << rate01 << " " << rate12);
    CHECK(r0 == doctest::Approx(0.00950784).epsilon(1e-5));
    CHECK(rate01 >= 1.7);
    CHECK(rate01 <= 2.3);
    CHECK(rate12 >= 1.7);
    CHECK(rate12 <= 2.3);
}

TEST_CASE("grad_norm_sq scales inversely with the conformal factor")
{
    const TriMesh mesh = flat_torus(8);
    Cochain u = Cochain::zeros(mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) u.values[v] = std::cos(2.0 * kPi * torus_xy(v, 8)[1]);
    Cochain area = reference_area(mesh);
    const Cochain g1 = grad_norm_sq(mesh, u, area);
    for (double& a : area.values) a *= 4.0;
    const Cochain g4 = grad_norm_sq(mesh, u, area);
    for (int f = 0; f < mesh.num_faces(); ++f) CHECK(g4.values[f] == doctest::Approx(0.25 * g1.values[f]));
}

TEST_CASE("error paths")
{
    const TriMesh mesh = flat_torus(4);
    Cochain area = reference_area(mesh);
    area.values[5] = 0.0;
    try {
        assemble_pencil(mesh, area);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
        CHECK(std::string(e.what()).find("face 5") != std::string::npos);
    }
    const Pencil P = assemble_pencil(mesh, reference_area(mesh));
    CHECK_THROWS_AS(eigen_residual(P.K, P.M, Eigen::VectorXd::Zero(mesh.num_vertices()), 1.0), Error);
    Cochain f2 = Cochain::zeros(mesh, 2);
    CHECK_THROWS_AS(d(mesh, f2), Error);
    Cochain wrong = Cochain::zeros(mesh, 0);
    wrong.values.pop_back();
    CHECK_THROWS_AS(d(mesh, wrong), Error);
}
