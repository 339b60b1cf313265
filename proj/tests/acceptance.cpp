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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <nodaldiv/construct.hpp>
#include <nodaldiv/dec.hpp>
#include <nodaldiv/generate.hpp>
#include <nodaldiv/profile.hpp>
#include <nodaldiv/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace nodaldiv;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

bool band(const LabeledSurfaceMesh& m, int v, double eps, bool closed)
{
    if (!m.has_collar_s(v)) return false;
    const double s = std::abs(m.collar_s()[v]);
    return closed ? s <= eps : s < eps;
}

const char* const kLevelOnePresets[] = {"sphere-equator", "torus-two-meridians", "genus2-separating"};

Outcome invariant_suite()
{
    Outcome out{true, ""};
    for (const char* name : kLevelOnePresets) {
        const auto start = std::chrono::steady_clock::now();
        const auto mesh = generate_preset(name, 1);
        const auto r = construct(mesh);
        const auto rep = verify(mesh, r);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string failed;
        for (const auto& c : rep.checks) {
            if (!c.pass) failed += " " + c.name;
        }
        const bool ok = failed.empty() && seconds < 60.0;
        out.pass = out.pass && ok;
        out.detail += std::string(out.detail.empty() ? "" : "; ") + name + " " +
                      std::to_string(mesh.mesh().num_vertices()) + "v " + fmt("%.2fs", seconds) +
                      (failed.empty() ? "" : " failing:" + failed);
    }
    return out;
}

Outcome eigen_convergence()
{
    const SweepResult s = convergence_sweep("sphere-equator", {0, 1, 2});
    bool decreasing = true, interior_decreasing = true;
    for (size_t i = 1; i < s.rows.size(); ++i) {
        decreasing = decreasing && s.rows[i].residual < s.rows[i - 1].residual;
        interior_decreasing = interior_decreasing && s.rows[i].interior_residual < s.rows[i - 1].interior_residual;
    }
    const double last = s.rows.back().residual;
    const bool ok = decreasing && interior_decreasing && last <= 0.05 && s.interior_order >= 1.5;
    return {ok, fmt("residual %.4g %.4g %.4g, interior order %.3f", s.rows[0].residual, s.rows[1].residual, last,
                    s.interior_order)};
}

Outcome sphere_oracle()
{
    std::vector<double> r;
    for (int level = 0; level <= 2; ++level) {
        const TriMesh mesh = round_sphere(std::sqrt(2.0), 16 << level);
        Cochain u = Cochain::zeros(mesh, 0);
        for (int v = 0; v < mesh.num_vertices(); ++v) u.values[v] = mesh.positions()[v][2];
        const Pencil P = assemble_pencil(mesh, reference_area(mesh));
        r.push_back(eigen_residual(P.K, P.M, to_vector(u), 1.0));
    }
    const double a = std::log2(r[0] / r[1]), b = std::log2(r[1] / r[2]);
    const bool ok = a >= 1.7 && a <= 2.3 && b >= 1.7 && b <= 2.3;
    return {ok, fmt("residual %.4g %.4g %.4g, rates %.3f", r[0], r[1], r[2], a) + fmt(" %.3f", b)};
}

Outcome disk_oracle()
{
    const double rho0 = 0.2;
    std::vector<double> err;
    for (int n : {64, 128, 256}) {
        const TriMesh disk = flat_disk(n);
        const Cochain f = solve_subharmonic(disk, rho0);
        double e = 0.0;
        for (int v = 0; v < disk.num_vertices(); ++v) {
            const auto& p = disk.positions()[v];
            e = std::max(e, std::abs(f.values[v] + 1.0 + rho0 * (1.0 - p[0] * p[0] - p[1] * p[1]) / 4.0));
        }
        err.push_back(e);
    }
    const double a = err[0] / err[1], b = err[1] / err[2];
    const bool ok = a >= 3.0 && a <= 5.0 && b >= 3.0 && b <= 5.0;
    return {ok, fmt("Linf %.4g %.4g %.4g, ratios %.3f", err[0], err[1], err[2], a) + fmt(" %.3f", b)};
}

Outcome profile_certification()
{
    double endpoint = 0.0, min_d1 = INFINITY, min_d2 = INFINITY, tail = 0.0;
    for (double A : {0.1, 0.25, 0.49}) {
        const ConvexProfile G = ConvexProfile::build(A, 0.3);
        endpoint = std::max({endpoint, std::abs(G.value(-1.0) + 1.0), std::abs(G.value(0.0))});
        const auto& nodes = G.nodes();
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double s = nodes[i];
            const double g = G.value_samples()[i], d1 = G.derivative_samples()[i];
            min_d1 = std::min(min_d1, d1);
            min_d2 = std::min(min_d2, G.second_derivative_samples()[i]);
            if (s <= G.exponential_end()) {
                tail = std::max({tail, std::abs(g - (A * (std::exp(s) - std::exp(-1.0)) - 1.0)),
                                 std::abs(d1 - A * std::exp(s))});
            }
            if (s >= G.linear_start()) tail = std::max({tail, std::abs(g - 2.0 * s), std::abs(d1 - 2.0)});
        }
    }
    const bool ok = endpoint <= 1e-10 && min_d1 > 0.0 && min_d2 >= -1e-12 && tail <= 1e-12;
    return {ok, fmt("endpoint %.2g, min G' %.4g, min G'' %.2g, tail %.2g", endpoint, min_d1, min_d2, tail)};
}

Outcome collar_closed_form()
{
    double u_err = 0.0, omega_err = 0.0, formula_dev = 0.0;
    std::vector<double> ratio;
    std::vector<double> h;
    for (int level = 0; level <= 2; ++level) {
        const auto m = generate_preset("sphere-equator", level);
        const auto r = construct(m);
        const double C = r.params.C, eps = r.params.epsilon;
        for (int v = 0; v < m.mesh().num_vertices(); ++v) {
            if (band(m, v, eps, true)) u_err = std::max(u_err, std::abs(r.u.values[v] - std::sin(C * m.collar_s()[v])));
        }
        for (int f = 0; f < m.mesh().num_faces(); ++f) {
            const auto& t = m.mesh().faces()[f];
            if (std::all_of(t.begin(), t.end(), [&](int v) { return band(m, v, eps, true); })) {
                omega_err = std::max(omega_err, std::abs(r.Omega.values[f] / (C * C * r.omega_ref.values[f]) - 1.0));
            }
        }
        // Cells with s inside the band see only exactly linear neighbours: the residual is the
        // three-point truncation error of sin(Cs).
        const double hs = m.collars().front().h_s;
        const double closed = (2.0 - 2.0 * std::cos(C * hs)) / (C * C * hs * hs) - 1.0;
        const Pencil P = assemble_pencil(m.mesh(), r.Omega);
        const Eigen::VectorXd u = to_vector(r.u);
        const Eigen::VectorXd e = eigen_residual_density(P.K, P.M, u, 1.0);
        double worst = 0.0;
        for (int v = 0; v < m.mesh().num_vertices(); ++v) {
            if (!band(m, v, eps, false) || std::abs(u[v]) < 1e-12) continue;
            worst = std::max(worst, std::abs(e[v] / u[v]));
            formula_dev = std::max(formula_dev, std::abs(e[v] - closed * u[v]));
        }
        if (level > 0) {
            ratio.push_back(worst);
            h.push_back(hs);
        }
    }
    const double rate = std::log(ratio[0] / ratio[1]) / std::log(h[0] / h[1]);
    const bool ok = u_err <= 1e-12 && omega_err <= 1e-12 && formula_dev <= 1e-12 && rate >= 1.7 && rate <= 2.3;
    return {ok, fmt("u %.2g, Omega rel %.2g, band residual/u %.4g %.4g", u_err, omega_err, ratio[0], ratio[1]) +
                    fmt(" rate %.3f, closed-form dev %.2g", rate, formula_dev)};
}

Outcome weak_subharmonicity()
{
    Outcome out{true, ""};
    for (const char* name : kLevelOnePresets) {
        const auto m = generate_preset(name, 1);
        const auto r = construct(m);
        const TriMesh& mesh = m.mesh();
        const Cochain lap = d(mesh, rotate_j(mesh, d(mesh, r.F)));
        double seam_minus = INFINITY, seam_plus = INFINITY, int_minus = INFINITY, int_plus = INFINITY;
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            const double x = -lap.values[v] / r.params.sigma;
            const int side = m.vertex_side(v);
            if (side <= 0) seam_minus = std::min(seam_minus, x);
            if (side >= 0) seam_plus = std::min(seam_plus, -x);
            if (m.has_collar_s(v)) continue;
            if (side < 0) int_minus = std::min(int_minus, x);
            else int_plus = std::min(int_plus, -x);
        }
        const bool ok = seam_minus >= -1e-12 && seam_plus >= -1e-12 && int_minus > 0.0 && int_plus > 0.0;
        out.pass = out.pass && ok;
        out.detail += std::string(out.detail.empty() ? "" : "; ") + name +
                      fmt(" min %.2g/%.2g, interior %.3g/%.3g", seam_minus, seam_plus, int_minus, int_plus);
    }
    return out;
}

Outcome antisymmetry()
{
    const auto m = generate_preset("sphere-equator", 1);
    const auto r = construct(m);
    const auto rs = construct(swap_sides(m));
    double worst = 0.0;
    for (int v = 0; v < m.mesh().num_vertices(); ++v) worst = std::max(worst, std::abs(rs.u.values[v] + r.u.values[v]));
    return {worst <= 1e-9, fmt("max |u' + u| %.2g", worst)};
}

Outcome fault_injection()
{
    const auto m = generate_preset("sphere-equator", 0);
    const auto base = construct(m);
    const int v = 100;
    Outcome out{true, ""};
    auto expect = [&](const char* fault_name, const ConstructionResult& r, const std::string& check,
                      const std::function<bool(const CheckRecord&)>& located) {
        const auto rep = verify(m, r);
        const CheckRecord* c = rep.find(check);
        const bool ok = c && !c->pass && c->element != Element::None && located(*c);
        out.pass = out.pass && ok;
        if (!ok) out.detail += std::string(out.detail.empty() ? "" : "; ") + fault_name + " not caught by " + check;
    };
    auto at = [](int element) { return [element](const CheckRecord& c) { return c.worst == element; }; };
    auto on_plus_collar = [&](const CheckRecord& c) {
        auto nonneg = [&](int w) { return m.has_collar_s(w) && m.collar_s()[w] >= 0.0; };
        if (c.element == Element::Vertex) return nonneg(c.worst);
        const auto& t = m.mesh().faces()[c.worst];
        return std::all_of(t.begin(), t.end(), nonneg);
    };

    ConstructionResult r = base;
    fault::flip_sign(r, v);
    expect("sign flip", r, "nodal_set", at(v));
    expect("sign flip", r, "eigen_identity", at(v));

    r = base;
    fault::zero_omega(r, v);
    expect("zero Omega", r, "positivity", at(v));

    r = base;
    fault::zero_u_ring(m, r, v);
    expect("zero u ring", r, "contact_condition", at(v));

    r = base;
    fault::scale_F(r, 1.5);
    expect("scaled F", r, "lemma_main.i", [&](const CheckRecord& c) {
        return std::abs(r.F.values[c.worst]) >= std::numbers::pi / 2;
    });

    r = base;
    fault::remove_mirroring(m, r);
    for (const char* n : {"lemma_main.ii", "lemma_main.iii", "lemma_main.iv", "lemma_main.v"}) {
        expect("unmirrored collar", r, n, on_plus_collar);
    }

    r = base;
    const int face = fault::negate_sampled_omega(r);
    expect("negative sampled Omega", r, "adaptedness_reduction", at(face));

    if (out.pass) out.detail = "every check failed at the perturbed element";
    return out;
}

} // namespace

int main()
{
    struct Criterion
    {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"full-pipeline invariants at level 1", invariant_suite},
        {"eigen-identity convergence on sphere-equator", eigen_convergence},
        {"round sphere height function oracle", sphere_oracle},
        {"flat disk Poisson oracle", disk_oracle},
        {"profile certification", profile_certification},
        {"collar closed form", collar_closed_form},
        {"weak subharmonicity", weak_subharmonicity},
        {"antisymmetry under side swap", antisymmetry},
        {"fault injection", fault_injection},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
    }
    std::printf("%d of %d criteria passed\n", index - 1 - failures, index - 1);
    return failures == 0 ? 0 : 1;
}
