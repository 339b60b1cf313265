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

#include <nodaldiv/construct.hpp>
#include <nodaldiv/dec.hpp>
#include <nodaldiv/generate.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

using namespace nodaldiv;

namespace {

constexpr double kRho0 = 0.2;

struct DiskSolve
{
    double max_error = 0.0;
    double slope = 0.0;
};

DiskSolve disk_solve(int n)
{
    const TriMesh disk = flat_disk(n);
    const Cochain f = solve_subharmonic(disk, kRho0);
    DiskSolve out;
    std::vector<int> rim;
    for (int v = 0; v < disk.num_vertices(); ++v) {
        const auto& p = disk.positions()[v];
        const double r2 = p[0] * p[0] + p[1] * p[1];
        const double exact = -1.0 - kRho0 * (1.0 - r2) / 4.0;
        out.max_error = std::max(out.max_error, std::abs(f.values[v] - exact));
        if (disk.is_boundary_vertex(v)) rim.push_back(v);
    }
    out.slope = derive_slope(disk, f, kRho0, rim);
    return out;
}

bool exact_band(const LabeledSurfaceMesh& m, int v, double eps)
{
    return m.has_collar_s(v) && std::abs(m.collar_s()[v]) <= eps;
}

} // namespace

TEST_CASE("disk Poisson solve converges at second order")
{
    const DiskSolve a = disk_solve(64), b = disk_solve(128), c = disk_solve(256);
    CHECK(a.max_error == doctest::Approx(8.68e-5).epsilon(0.02));
    const double r1 = a.max_error / b.max_error, r2 = b.max_error / c.max_error;
    CHECK(r1 >= 3.0);
    CHECK(r1 <= 5.0);
    CHECK(r2 >= 3.0);
    CHECK(r2 <= 5.0);
    // normal derivative rho0 / 2 at r = 1
    CHECK(c.slope == doctest::Approx(1.25 * std::numbers::e * 0.1).epsilon(1e-3));
}

TEST_CASE("subharmonic solve: residual and errors")
{
    const TriMesh disk = flat_disk(32);
    const Cochain f = solve_subharmonic(disk, kRho0);
    const Eigen::VectorXd Kf = stiffness(disk) * to_vector(f);
    const auto area = dual_areas(disk);
    for (int v = 0; v < disk.num_vertices(); ++v) {
        if (disk.is_boundary_vertex(v)) CHECK(f.values[v] == -1.0);
        else CHECK(std::abs(Kf[v] + kRho0 * area[v]) < 1e-10);
    }
    CHECK_THROWS_AS(solve_subharmonic(disk, -1.0), Error);
    const TriMesh closed = round_sphere(1.0, 8);
    try {
        solve_subharmonic(closed, kRho0);
        FAIL("expected a solver error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Solver);
        CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
}

TEST_CASE("construction parameters on the presets")
{
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const auto m = generate_preset(name, 0);
        const auto r = construct(m);
        const auto& p = r.params;
        CHECK(p.C > 0.0);
        CHECK(p.C == doctest::Approx(2.0 * p.sigma));
        CHECK(p.epsilon > 0.0);
        CHECK(p.rho0 == p.rho0_requested / std::pow(2.0, p.retries));
        REQUIRE(p.circles.size() == m.collars().size());
        for (const auto& c : p.circles) {
            CHECK(c.A_minus > 0.0);
            CHECK(c.A_minus < 0.5);
            CHECK(c.A_plus > 0.0);
            CHECK(c.A_plus < 0.5);
        }
        double max_abs = 0.0;
        for (double x : r.F.values) max_abs = std::max(max_abs, std::abs(x));
        CHECK(max_abs == doctest::Approx(0.95 * std::numbers::pi / 2).epsilon(1e-12));
        for (int v = 0; v < m.mesh().num_vertices(); ++v) {
            CHECK(r.u.values[v] == std::sin(r.F.values[v]));
        }
        for (double x : r.Omega.values) CHECK(x > 0.0);
    }
}

TEST_CASE("retry halves rho0 until the slope is admissible")
{
    const auto m = generate_preset("sphere-equator", 0);
    ConstructOptions opt;
    opt.rho0 = 50.0;
    const auto r = construct(m, opt);
    CHECK(r.params.retries > 0);
    CHECK(r.params.rho0 == doctest::Approx(50.0 / std::pow(2.0, r.params.retries)));
    CHECK(r.params.rho0_requested == 50.0);
    REQUIRE(r.log.size() == static_cast<size_t>(r.params.retries));
    CHECK(r.log.front().rfind("retry 1:", 0) == 0);
    for (const auto& c : r.params.circles) CHECK(std::max(c.A_minus, c.A_plus) < 0.5);

    opt.max_retries = 1;
    try {
        construct(m, opt);
        FAIL("expected a construction error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Construction);
        CHECK(std::string(e.what()).find("retry exhausted") != std::string::npos);
    }

    opt = {};
    opt.rho0 = 0.0;
    CHECK_THROWS_AS(construct(m, opt), Error);
    opt = {};
    opt.margin = 1.0;
    CHECK_THROWS_AS(construct(m, opt), Error);
}

TEST_CASE("collar band: closed form")
{
    for (int level = 0; level <= 1; ++level) {
        CAPTURE(level);
        const auto m = generate_preset("genus2-separating", level);
        const auto r = construct(m);
        const double C = r.params.C, eps = r.params.epsilon;
        for (int v = 0; v < m.mesh().num_vertices(); ++v) {
            if (!exact_band(m, v, eps)) continue;
            const double s = m.collar_s()[v];
            CHECK(std::abs(r.F.values[v] - C * s) < 1e-12);
            CHECK(std::abs(r.u.values[v] - std::sin(C * s)) < 1e-12);
            CHECK(r.lapF.values[v] == 0.0);
        }
        for (int f = 0; f < m.mesh().num_faces(); ++f) {
            const auto& t = m.mesh().faces()[f];
            if (!std::all_of(t.begin(), t.end(), [&](int v) { return exact_band(m, v, eps); })) continue;
            CHECK(std::abs(r.Omega.values[f] / r.omega_ref.values[f] - C * C) < 1e-12 * C * C);
        }
    }
}

TEST_CASE("F is antisymmetric under swapping the sides")
{
    const auto m = generate_preset("sphere-two-circles", 0);
    const auto r = construct(m);
    const auto rs = construct(swap_sides(m));
    double worst = 0.0;
    for (int v = 0; v < m.mesh().num_vertices(); ++v) {
        worst = std::max(worst, std::abs(rs.u.values[v] + r.u.values[v]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("omega terms reproduce Omega")
{
    const auto m = generate_preset("torus-two-meridians", 0);
    const auto r = construct(m);
    const auto t = omega_terms(m, r);
    for (int f = 0; f < m.mesh().num_faces(); ++f) {
        const double density = t.grad_sq[f] - t.cot_term[f];
        CHECK(r.Omega.values[f] == doctest::Approx(density * r.omega_ref.values[f]).epsilon(1e-12));
    }
}

TEST_CASE("seam smoothing keeps the band and the sign pattern")
{
    const auto m = generate_preset("sphere-equator", 0);
    ConstructOptions opt;
    opt.smoothing = true;
    const auto r = construct(m, opt);
    CHECK(r.params.smoothing);
    CHECK(r.log.back().rfind("seam smoothing", 0) == 0);
    for (int v = 0; v < m.mesh().num_vertices(); ++v) {
        const int side = m.vertex_side(v);
        if (side != 0) CHECK(side * r.F.values[v] > 0.0);
    }
}

TEST_CASE("result files round trip")
{
    const auto m = generate_preset("sphere-equator", 0);
    const auto r = construct(m);
    const auto dir = std::filesystem::temp_directory_path() / "nodaldiv_test_construct";
    std::filesystem::remove_all(dir);
    save_result(r, dir.string());
    const auto back = load_result(m, dir.string());
    CHECK(back.F.values == r.F.values);
    CHECK(back.u.values == r.u.values);
    CHECK(back.Omega.values == r.Omega.values);
    CHECK(back.lapF.values == r.lapF.values);
    CHECK(back.params.C == r.params.C);
    CHECK(back.params.epsilon == r.params.epsilon);
    CHECK(back.params.circles.size() == r.params.circles.size());
    CHECK(back.params.to_key_values() == r.params.to_key_values());

    const auto other = generate_preset("sphere-equator", 1);
    try {
        load_result(other, dir.string());
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
    }
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_result(m, dir.string()), Error);
}
