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

#include <nodaldiv/construct.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace nodaldiv {

namespace {

constexpr double kSolverTolerance = 1e-11;

[[noreturn]] void construction_error(const std::string& msg)
{
    throw Error(ErrorKind::Construction, msg);
}

std::string num(double x)
{
    return format_double(x);
}

/// Component id per vertex (through edges).
std::vector<int> vertex_components(const TriMesh& mesh, int& count)
{
    std::vector<int> comp(mesh.num_vertices(), -1);
    count = 0;
    for (int seed = 0; seed < mesh.num_vertices(); ++seed) {
        if (comp[seed] >= 0) continue;
        std::queue<int> q;
        q.push(seed);
        comp[seed] = count;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int w : mesh.vertex_neighbors()[v]) {
                if (comp[w] < 0) {
                    comp[w] = count;
                    q.push(w);
                }
            }
        }
        ++count;
    }
    return comp;
}

std::vector<int> inverse_map(const std::vector<int>& to_global, int n)
{
    std::vector<int> local(n, -1);
    for (size_t i = 0; i < to_global.size(); ++i) local[to_global[i]] = static_cast<int>(i);
    return local;
}

std::vector<int> localize(const std::vector<int>& global, const std::vector<int>& to_local)
{
    std::vector<int> out;
    out.reserve(global.size());
    for (int g : global) {
        if (to_local[g] < 0) construction_error("seam vertex missing from its region");
        out.push_back(to_local[g]);
    }
    return out;
}

/// Vertices within graph distance `radius` of the seam rings s = -1 and s = +1.
std::vector<int> seam_strip(const LabeledSurfaceMesh& mesh, int radius)
{
    const TriMesh& m = mesh.mesh();
    std::vector<int> dist(m.num_vertices(), -1);
    std::queue<int> q;
    for (const auto& collar : mesh.collars()) {
        for (const auto* ring : {&collar.rings.front(), &collar.rings.back()}) {
            for (int v : *ring) {
                if (dist[v] < 0) {
                    dist[v] = 0;
                    q.push(v);
                }
            }
        }
    }
    std::vector<int> out;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        out.push_back(v);
        if (dist[v] == radius) continue;
        for (int w : m.vertex_neighbors()[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

// --- params ----------------------------------------------------------------------------

KeyValues ConstructionParams::to_key_values() const
{
    KeyValues kv{
        {"param.C", num(C)},
        {"param.epsilon", num(epsilon)},
        {"param.sigma", num(sigma)},
        {"param.rho0", num(rho0)},
        {"param.rho0_requested", num(rho0_requested)},
        {"param.margin", num(margin)},
        {"param.level", std::to_string(level)},
        {"param.retries", std::to_string(retries)},
        {"param.smoothing", smoothing ? "on" : "off"},
    };
    for (const auto& c : circles) {
        const std::string p = "param.circle." + c.name + ".";
        kv.emplace_back(p + "A_minus", num(c.A_minus));
        kv.emplace_back(p + "A_plus", num(c.A_plus));
        kv.emplace_back(p + "m_minus", num(c.center_minus));
        kv.emplace_back(p + "w_minus", num(c.width_minus));
        kv.emplace_back(p + "m_plus", num(c.center_plus));
        kv.emplace_back(p + "w_plus", num(c.width_plus));
    }
    return kv;
}

ConstructionParams ConstructionParams::from_key_values(const KeyValues& kv)
{
    ConstructionParams p;
    auto to_double = [](const std::string& key, const std::string& v) {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (v.empty() || *end != '\0') throw Error(ErrorKind::Parse, "bad value for " + key + ": '" + v + "'");
        return x;
    };
    std::map<std::string, size_t> circle_index;
    for (const auto& [key, value] : kv) {
        if (key == "param.C") p.C = to_double(key, value);
        else if (key == "param.epsilon") p.epsilon = to_double(key, value);
        else if (key == "param.sigma") p.sigma = to_double(key, value);
        else if (key == "param.rho0") p.rho0 = to_double(key, value);
        else if (key == "param.rho0_requested") p.rho0_requested = to_double(key, value);
        else if (key == "param.margin") p.margin = to_double(key, value);
        else if (key == "param.level") p.level = static_cast<int>(to_double(key, value));
        else if (key == "param.retries") p.retries = static_cast<int>(to_double(key, value));
        else if (key == "param.smoothing") p.smoothing = value == "on";
        else if (key.rfind("param.circle.", 0) == 0) {
            const std::string rest = key.substr(13);
            const auto dot = rest.rfind('.');
            if (dot == std::string::npos) throw Error(ErrorKind::Parse, "bad key " + key);
            const std::string name = rest.substr(0, dot), field = rest.substr(dot + 1);
            auto [it, inserted] = circle_index.try_emplace(name, p.circles.size());
            if (inserted) p.circles.push_back({name});
            CircleParams& c = p.circles[it->second];
            const double x = to_double(key, value);
            if (field == "A_minus") c.A_minus = x;
            else if (field == "A_plus") c.A_plus = x;
            else if (field == "m_minus") c.center_minus = x;
            else if (field == "w_minus") c.width_minus = x;
            else if (field == "m_plus") c.center_plus = x;
            else if (field == "w_plus") c.width_plus = x;
            else throw Error(ErrorKind::Parse, "unknown key " + key);
        }
    }
    return p;
}

// --- Dirichlet piece -------------------------------------------------------------------

Cochain solve_subharmonic(const TriMesh& piece, double rho0)
{
    if (!(rho0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rho0 must be nonnegative");
    if (!piece.has_boundary()) throw Error(ErrorKind::Solver, "singular system: piece has no boundary");
    int ncomp = 0;
    const auto comp = vertex_components(piece, ncomp);
    std::vector<char> touches(ncomp, 0);
    for (int v = 0; v < piece.num_vertices(); ++v) {
        if (piece.is_boundary_vertex(v)) touches[comp[v]] = 1;
    }
    if (std::find(touches.begin(), touches.end(), 0) != touches.end()) {
        throw Error(ErrorKind::Solver, "singular system: a component has no boundary");
    }

    const int n = piece.num_vertices();
    std::vector<int> interior(n, -1);
    int ni = 0;
    for (int v = 0; v < n; ++v) {
        if (!piece.is_boundary_vertex(v)) interior[v] = ni++;
    }
    Cochain f{0, false, std::vector<double>(n, -1.0)};
    if (ni == 0) return f;

    const SparseMatrix K = stiffness(piece);
    const Eigen::VectorXd M = lumped_mass(piece, reference_area(piece));
    std::vector<Eigen::Triplet<double>> t;
    Eigen::VectorXd rhs(ni);
    for (int v = 0; v < n; ++v) {
        if (interior[v] >= 0) rhs[interior[v]] = -rho0 * M[v];
    }
    for (int col = 0; col < K.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (interior[r] < 0) continue;
            if (interior[c] >= 0) {
                t.emplace_back(interior[r], interior[c], it.value());
            } else {
                rhs[interior[r]] += it.value(); // boundary value -1 moved to the right side
            }
        }
    }
    SparseMatrix Kii(ni, ni);
    Kii.setFromTriplets(t.begin(), t.end());
    Eigen::SimplicialLDLT<SparseMatrix> solver(Kii);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Solver, "factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);
    const double scale = std::max(rhs.norm(), 1e-300);
    double residual = (Kii * x - rhs).norm() / scale;
    if (residual > kSolverTolerance) {
        x += solver.solve(rhs - Kii * x);
        residual = (Kii * x - rhs).norm() / scale;
    }
    if (!(residual <= kSolverTolerance) && rhs.norm() > 0.0) {
        throw Error(ErrorKind::Solver, "solver tolerance not reached (relative residual " + num(residual) + ")");
    }
    for (int v = 0; v < n; ++v) {
        if (interior[v] >= 0) f.values[v] = x[interior[v]];
    }
    return f;
}

double boundary_normal_derivative(const TriMesh& piece, const Cochain& f, double rho0, int v)
{
    if (v < 0 || v >= piece.num_vertices() || !piece.is_boundary_vertex(v)) {
        throw Error(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " is not on the piece boundary");
    }
    const auto w = hodge1(piece);
    double Kf = 0.0;
    double ell = 0.0;
    double area = 0.0;
    for (int fi : piece.vertex_faces()[v]) area += piece.face_area(fi) / 3.0;
    for (int u : piece.vertex_neighbors()[v]) {
        const int e = piece.find_edge(v, u);
        Kf += w[e] * (f.values[v] - f.values[u]);
        if (piece.is_boundary_edge(e)) ell += 0.5 * piece.edge_lengths()[e];
    }
    return (Kf + rho0 * area) / ell;
}

double derive_slope(
    const TriMesh& piece,
    const Cochain& f,
    double rho0,
    const std::vector<int>& circle,
    double safety)
{
    if (circle.empty()) throw Error(ErrorKind::InvalidArgument, "empty circle");
    double best = -std::numeric_limits<double>::infinity();
    for (int v : circle) best = std::max(best, boundary_normal_derivative(piece, f, rho0, v));
    return safety * std::numbers::e * best;
}

// --- F ---------------------------------------------------------------------------------

std::vector<double> laplacian_density(const TriMesh& mesh, const Cochain& F)
{
    const Eigen::VectorXd KF = stiffness(mesh) * to_vector(F);
    const auto area = dual_areas(mesh);
    std::vector<double> out(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) out[v] = -KF[v] / area[v];
    return out;
}

ConstructionResult assemble_F(const LabeledSurfaceMesh& lm, const ConstructOptions& opt)
{
    if (!(opt.rho0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "rho0 must be positive");
    if (!(opt.margin > 0.0 && opt.margin < 1.0)) throw Error(ErrorKind::InvalidArgument, "margin must lie in (0, 1)");
    if (opt.max_retries < 0) throw Error(ErrorKind::InvalidArgument, "max_retries must be nonnegative");

    const TriMesh& mesh = lm.mesh();
    const int nv = mesh.num_vertices();
    const int ncircles = static_cast<int>(lm.collars().size());
    const SubMesh minus = extract_region(lm, Region::Minus);
    const SubMesh plus = extract_region(lm, Region::Plus);
    const auto minus_local = inverse_map(minus.to_global, nv);
    const auto plus_local = inverse_map(plus.to_global, nv);
    std::vector<std::vector<int>> minus_seam, plus_seam;
    for (const auto& collar : lm.collars()) {
        minus_seam.push_back(localize(collar.rings.front(), minus_local));
        plus_seam.push_back(localize(collar.rings.back(), plus_local));
    }

    ConstructionResult result;
    result.params.rho0_requested = opt.rho0;
    result.params.margin = opt.margin;
    result.params.level = lm.level();
    result.params.smoothing = opt.smoothing;

    double rho = opt.rho0;
    Cochain fm, fp;
    std::vector<double> A_minus(ncircles), A_plus(ncircles);
    for (int attempt = 0;; ++attempt) {
        fm = solve_subharmonic(minus.mesh, rho);
        fp = solve_subharmonic(plus.mesh, rho);
        double worst = 0.0;
        for (int c = 0; c < ncircles; ++c) {
            A_minus[c] = derive_slope(minus.mesh, fm, rho, minus_seam[c], opt.safety);
            A_plus[c] = derive_slope(plus.mesh, fp, rho, plus_seam[c], opt.safety);
            worst = std::max({worst, A_minus[c], A_plus[c]});
        }
        if (worst < 0.5) break;
        if (attempt == opt.max_retries) {
            construction_error(
                "slope retry exhausted: A = " + num(worst) + " >= 1/2 after " +
                std::to_string(attempt) + " halvings of rho0");
        }
        result.log.push_back(
            "retry " + std::to_string(attempt + 1) + ": max A = " + num(worst) + " >= 1/2, rho0 " +
            num(rho) + " -> " + num(rho / 2));
        rho /= 2.0;
        result.params.retries = attempt + 1;
    }
    result.params.rho0 = rho;

    std::vector<ConvexProfile> prof_minus, prof_plus;
    for (int c = 0; c < ncircles; ++c) {
        prof_minus.push_back(ConvexProfile::build(A_minus[c], opt.blend_width));
        prof_plus.push_back(ConvexProfile::build(A_plus[c], opt.blend_width));
        result.params.circles.push_back(
            {lm.circle_names()[c], A_minus[c], A_plus[c], prof_minus[c].center(),
             prof_minus[c].width(), prof_plus[c].center(), prof_plus[c].width()});
    }

    std::vector<double> F(nv, 0.0);
    for (size_t i = 0; i < minus.to_global.size(); ++i) F[minus.to_global[i]] = fm.values[i];
    for (size_t i = 0; i < plus.to_global.size(); ++i) F[plus.to_global[i]] = -fp.values[i];
    for (int c = 0; c < ncircles; ++c) {
        const CollarInfo& collar = lm.collars()[c];
        for (size_t r = 0; r < collar.rings.size(); ++r) {
            const double s = collar.ring_s[r];
            double value = 0.0;
            if (s < 0.0) value = prof_minus[c].value(s);
            else if (s > 0.0) value = -prof_plus[c].value(-s);
            for (int v : collar.rings[r]) F[v] = value;
        }
    }

    double bound = std::numeric_limits<double>::infinity();
    for (int c = 0; c < ncircles; ++c) {
        bound = std::min({bound, -prof_minus[c].linear_start(), -prof_plus[c].linear_start()});
    }
    double epsilon = 0.0;
    for (double s : lm.collars().front().ring_s) {
        if (s > 0.0 && s <= bound) epsilon = std::max(epsilon, s);
    }
    if (!(epsilon > 0.0)) construction_error("collar too coarse: no ring inside the exact-linear band");

    if (opt.smoothing) {
        const auto strip = seam_strip(lm, 3);
        const auto area = dual_areas(mesh);
        for (int round = 0; round < 3; ++round) {
            std::vector<double> next = F;
            for (int v : strip) {
                if (lm.has_collar_s(v) && std::abs(lm.collar_s()[v]) <= epsilon + lm.collars().front().h_s) continue;
                double num_sum = area[v] * F[v], den = area[v];
                for (int w : mesh.vertex_neighbors()[v]) {
                    num_sum += area[w] * F[w];
                    den += area[w];
                }
                next[v] = num_sum / den;
            }
            F = std::move(next);
        }
        for (int v = 0; v < nv; ++v) {
            const int side = lm.vertex_side(v);
            if ((side < 0 && !(F[v] < 0.0)) || (side > 0 && !(F[v] > 0.0))) {
                construction_error("seam smoothing broke the sign pattern at vertex " + std::to_string(v));
            }
        }
        result.log.push_back("seam smoothing: 3 rounds on " + std::to_string(strip.size()) + " vertices");
    }

    double max_abs = 0.0;
    for (double x : F) max_abs = std::max(max_abs, std::abs(x));
    const double sigma = 0.5 * std::numbers::pi * (1.0 - opt.margin) / max_abs;
    for (double& x : F) x *= sigma;

    result.params.sigma = sigma;
    result.params.C = 2.0 * sigma;
    result.params.epsilon = epsilon;
    result.F = Cochain{0, false, std::move(F)};
    result.omega_ref = reference_area(mesh);
    result.lapF = Cochain{2, true, laplacian_density(mesh, result.F)};
    for (int v = 0; v < nv; ++v) {
        if (lm.has_collar_s(v) && std::abs(lm.collar_s()[v]) <= epsilon) result.lapF.values[v] = 0.0;
    }
    return result;
}

OmegaTerms omega_terms(const LabeledSurfaceMesh& lm, const ConstructionResult& result)
{
    const TriMesh& mesh = lm.mesh();
    const auto area = dual_areas(mesh);
    OmegaTerms terms;
    terms.grad_sq = grad_norm_sq(mesh, result.F, result.omega_ref).values;
    terms.cot_term.assign(mesh.num_faces(), 0.0);
    const double cutoff = 0.5 * result.params.C * result.params.epsilon;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Tri& t = mesh.faces()[f];
        double Fbar = 0.0, lap = 0.0, wsum = 0.0;
        for (int v : t) {
            Fbar += result.F.values[v];
            lap += area[v] * result.lapF.values[v];
            wsum += area[v];
        }
        Fbar /= 3.0;
        lap /= wsum;
        if (std::abs(Fbar) >= cutoff) terms.cot_term[f] = std::cos(Fbar) / std::sin(Fbar) * lap;
    }
    return terms;
}

void compute_u_omega(const LabeledSurfaceMesh& lm, ConstructionResult& result)
{
    const TriMesh& mesh = lm.mesh();
    result.u = Cochain::zeros(mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) result.u.values[v] = std::sin(result.F.values[v]);
    const OmegaTerms terms = omega_terms(lm, result);
    result.Omega = Cochain::zeros(mesh, 2);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const double density = terms.grad_sq[f] - terms.cot_term[f];
        if (!(density > 0.0)) {
            construction_error(
                "nonpositive Omega at face " + std::to_string(f) + " (|dF|^2 = " +
                num(terms.grad_sq[f]) + ", cot(F)*lapF = " + num(terms.cot_term[f]) + ")");
        }
        result.Omega.values[f] = density * result.omega_ref.values[f];
    }
}

ConstructionResult construct(const LabeledSurfaceMesh& mesh, const ConstructOptions& options)
{
    ConstructionResult result = assemble_F(mesh, options);
    compute_u_omega(mesh, result);
    return result;
}

// --- files -----------------------------------------------------------------------------

void save_result(const ConstructionResult& result, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
    const fs::path d(dir);
    save_field({false, result.F.values}, (d / "F.txt").string());
    save_field({false, result.u.values}, (d / "u.txt").string());
    save_field({true, result.omega_ref.values}, (d / "omega.txt").string());
    save_field({true, result.Omega.values}, (d / "Omega.txt").string());
    save_field({false, result.lapF.values}, (d / "lapF.txt").string());
    std::ofstream out(d / "params.txt");
    if (!out) throw Error(ErrorKind::Io, "cannot write params in " + dir);
    write_key_values(out, result.params.to_key_values());
}

ConstructionResult load_result(const LabeledSurfaceMesh& mesh, const std::string& dir)
{
    namespace fs = std::filesystem;
    const fs::path d(dir);
    auto field = [&](const char* name, bool faces) {
        Field f = load_field((d / name).string());
        const int expect = faces ? mesh.mesh().num_faces() : mesh.mesh().num_vertices();
        if (f.on_faces != faces || static_cast<int>(f.values.size()) != expect) {
            throw Error(ErrorKind::Parse, std::string(name) + " does not match the mesh");
        }
        return f.values;
    };
    ConstructionResult r;
    r.F = Cochain{0, false, field("F.txt", false)};
    r.u = Cochain{0, false, field("u.txt", false)};
    r.omega_ref = Cochain{2, false, field("omega.txt", true)};
    r.Omega = Cochain{2, false, field("Omega.txt", true)};
    r.lapF = Cochain{2, true, field("lapF.txt", false)};
    std::ifstream in(d / "params.txt");
    if (!in) throw Error(ErrorKind::Io, "cannot open params in " + dir);
    r.params = ConstructionParams::from_key_values(read_key_values(in));
    return r;
}

} // namespace nodaldiv
