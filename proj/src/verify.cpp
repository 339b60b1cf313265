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

#include <nodaldiv/verify.hpp>

#include <nodaldiv/generate.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>
#include <set>

namespace nodaldiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckRecord record(std::string name)
{
    CheckRecord r;
    r.name = std::move(name);
    return r;
}

void set_worst(CheckRecord& r, int index, Element element)
{
    r.worst = index;
    r.element = index < 0 ? Element::None : element;
}

/// (K x)_v for all v.
std::vector<double> apply_stiffness(const TriMesh& mesh, const std::vector<double>& x)
{
    const SparseMatrix K = stiffness(mesh);
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd y = K * xv;
    return {y.data(), y.data() + y.size()};
}

/// |s| <= epsilon on the collar.
bool in_band(const LabeledSurfaceMesh& lm, int v, double epsilon)
{
    return lm.has_collar_s(v) && std::abs(lm.collar_s()[v]) <= epsilon;
}

/// Region (non-collar) vertex: every incident face lies in `region`.
bool region_interior(const LabeledSurfaceMesh& lm, int v, Region region)
{
    if (lm.has_collar_s(v)) return false;
    for (int f : lm.mesh().vertex_faces()[v]) {
        if (lm.labels()[f].region != region) return false;
    }
    return true;
}

/// Corners of face f laid out in the plane: p0 = 0, p1 on the x axis, p2 above it.
std::array<Eigen::Vector2d, 3> face_chart(const TriMesh& mesh, int f)
{
    const double a = mesh.edge_lengths()[mesh.face_edge(f, 0)]; // p0 p1
    const double b = mesh.edge_lengths()[mesh.face_edge(f, 1)]; // p1 p2
    const double c = mesh.edge_lengths()[mesh.face_edge(f, 2)]; // p2 p0
    const double x = (a * a + c * c - b * b) / (2.0 * a);
    const double y = 2.0 * mesh.face_area(f) / a;
    return {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(a, 0.0), Eigen::Vector2d(x, y)};
}

/// Gradient (du/dx, du/dy) of the linear interpolant in the face chart.
Eigen::Vector2d face_gradient(const std::array<Eigen::Vector2d, 3>& p, const std::array<double, 3>& u)
{
    Eigen::Matrix2d E;
    E.col(0) = p[1] - p[0];
    E.col(1) = p[2] - p[0];
    const Eigen::Vector2d du(u[1] - u[0], u[2] - u[0]);
    return E.transpose().inverse() * du;
}

} // namespace

bool VerificationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

double eigen_tolerance(int level)
{
    return 0.2 * std::pow(2.0, -level);
}

std::vector<char> seam_strip_mask(const LabeledSurfaceMesh& lm)
{
    const TriMesh& mesh = lm.mesh();
    std::vector<int> dist(mesh.num_vertices(), -1);
    std::queue<int> q;
    for (const auto& collar : lm.collars()) {
        for (const auto* ring : {&collar.rings.front(), &collar.rings.back()}) {
            for (int v : *ring) {
                if (dist[v] < 0) {
                    dist[v] = 0;
                    q.push(v);
                }
            }
        }
    }
    std::vector<char> mask(mesh.num_vertices(), 0);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        mask[v] = 1;
        if (dist[v] == 2) continue;
        for (int w : mesh.vertex_neighbors()[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return mask;
}

// --- nodal set -------------------------------------------------------------------------

CheckRecord check_nodal_set(const LabeledSurfaceMesh& lm, const ConstructionResult& r)
{
    CheckRecord rec = record("nodal_set");
    const TriMesh& mesh = lm.mesh();
    const auto& u = r.u.values;
    double margin = kInf;
    int worst = -1;
    int gamma_bad = -1;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const int side = lm.vertex_side(v);
        if (side == 0) {
            if (u[v] != 0.0 && gamma_bad < 0) gamma_bad = v;
            continue;
        }
        const double m = side * u[v];
        if (m < margin) {
            margin = m;
            worst = v;
        }
    }
    int crossing = -1;
    for (int e = 0; e < mesh.num_edges() && crossing < 0; ++e) {
        const auto& ab = mesh.edges()[e];
        if (u[ab[0]] * u[ab[1]] < 0.0) crossing = e;
    }
    rec.value = margin;
    rec.tol = 0.0;
    if (gamma_bad >= 0) {
        set_worst(rec, gamma_bad, Element::Vertex);
        rec.detail = "u != 0 on Gamma at vertex " + std::to_string(gamma_bad);
    } else if (!(margin > 0.0)) {
        set_worst(rec, worst, Element::Vertex);
        rec.detail = "wrong sign of u at vertex " + std::to_string(worst);
    } else if (crossing >= 0) {
        set_worst(rec, mesh.edges()[crossing][0], Element::Vertex);
        rec.detail = "sign change along edge " + std::to_string(crossing) + " away from Gamma";
    } else {
        set_worst(rec, worst, Element::Vertex);
        rec.pass = true;
        rec.detail = "zero set is Gamma";
    }
    return rec;
}

// --- positivity ------------------------------------------------------------------------

CheckRecord check_positivity(const LabeledSurfaceMesh& lm, const ConstructionResult& r)
{
    CheckRecord rec = record("positivity");
    const TriMesh& mesh = lm.mesh();
    double lo = kInf;
    int worst = -1;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const double density = r.Omega.values[f] / r.omega_ref.values[f];
        if (!(density >= lo)) {
            lo = density;
            worst = f;
        }
    }
    rec.value = lo;
    rec.tol = 0.0;
    rec.pass = lo > 0.0;
    set_worst(rec, worst, Element::Face);
    if (worst >= 0 && !r.F.values.empty() && !r.lapF.values.empty()) {
        const OmegaTerms terms = omega_terms(lm, r);
        rec.detail = "min Omega/omega at face " + std::to_string(worst) +
            ": |dF|^2 = " + format_double(terms.grad_sq[worst]) +
            ", cot(F) lapF = " + format_double(terms.cot_term[worst]);
    }
    return rec;
}

// --- contact ---------------------------------------------------------------------------

CheckRecord check_contact_condition(const LabeledSurfaceMesh& lm, const ConstructionResult& r)
{
    CheckRecord rec = record("contact_condition");
    const TriMesh& mesh = lm.mesh();
    const auto grad = grad_norm_sq(mesh, r.u, r.omega_ref).values;
    const double C = r.params.C;
    const double eps = r.params.epsilon;
    const double floor = C * C * std::pow(std::cos(C * eps), 2) * (1.0 - 1e-6);
    double lo = kInf;
    int worst = -1;
    int band_bad = -1;
    double band_lo = kInf;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        double g = 0.0;
        for (int f : mesh.vertex_faces()[v]) g = std::max(g, grad[f]);
        const double q = r.u.values[v] * r.u.values[v] + g;
        if (!(q >= lo)) {
            lo = q;
            worst = v;
        }
        if (in_band(lm, v, eps)) {
            band_lo = std::min(band_lo, q);
            if (!(q >= floor) && band_bad < 0) band_bad = v;
        }
    }
    rec.value = lo;
    rec.tol = 0.0;
    rec.pass = lo > 0.0 && band_bad < 0;
    if (band_bad >= 0) {
        set_worst(rec, band_bad, Element::Vertex);
        rec.detail = "below C^2 cos^2(C eps) near Gamma at vertex " + std::to_string(band_bad);
    } else {
        set_worst(rec, worst, Element::Vertex);
        rec.detail = "near Gamma min " + format_double(band_lo) + " >= " + format_double(floor);
    }
    return rec;
}

// --- eigen identity --------------------------------------------------------------------

CheckRecord check_eigen_identity(
    const LabeledSurfaceMesh& lm,
    const ConstructionResult& r,
    double tol,
    EigenDiagnostics* diagnostics)
{
    CheckRecord rec = record("eigen_identity");
    const TriMesh& mesh = lm.mesh();
    rec.tol = tol;
    const Pencil P = assemble_pencil(mesh, r.Omega);
    const Eigen::VectorXd u = to_vector(r.u);
    const double total = eigen_residual(P.K, P.M, u, 1.0);
    const Eigen::VectorXd e = eigen_residual_density(P.K, P.M, u, 1.0);
    const auto seam = seam_strip_mask(lm);

    double den = 0.0, num_in = 0.0, num_seam = 0.0, seam_worst = 0.0, worst_abs = -1.0;
    int worst = -1;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        den += P.M[v] * u[v] * u[v];
        const double w = P.M[v] * e[v] * e[v];
        if (seam[v]) {
            num_seam += w;
            seam_worst = std::max(seam_worst, std::abs(e[v]));
        } else {
            num_in += w;
        }
        if (std::abs(e[v]) > worst_abs) {
            worst_abs = std::abs(e[v]);
            worst = v;
        }
    }
    rec.value = total;
    rec.pass = total <= tol;
    set_worst(rec, worst, Element::Vertex);
    const double interior = std::sqrt(num_in / den);
    const double seam_res = std::sqrt(num_seam / den);
    rec.detail = "interior " + format_double(interior) + ", seam strip " + format_double(seam_res);
    if (diagnostics) {
        diagnostics->residual = total;
        diagnostics->interior_residual = interior;
        diagnostics->seam_residual = seam_res;
        diagnostics->seam_worst = seam_worst;
        diagnostics->density.assign(e.data(), e.data() + e.size());
    }
    return rec;
}

// --- lemma -----------------------------------------------------------------------------

std::vector<CheckRecord> check_lemma_main(const LabeledSurfaceMesh& lm, const ConstructionResult& r)
{
    const TriMesh& mesh = lm.mesh();
    const auto& F = r.F.values;
    const double sigma = r.params.sigma;
    const double C = r.params.C;
    const double eps = r.params.epsilon;
    std::vector<CheckRecord> out;

    {
        CheckRecord rec = record("lemma_main.i");
        double hi = 0.0;
        int worst = -1;
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            if (std::abs(F[v]) > hi) {
                hi = std::abs(F[v]);
                worst = v;
            }
        }
        rec.value = hi;
        rec.tol = 0.5 * std::numbers::pi;
        rec.pass = hi < rec.tol;
        set_worst(rec, worst, Element::Vertex);
        rec.detail = "max |F|";
        out.push_back(rec);
    }

    {
        CheckRecord rec = record("lemma_main.ii");
        const auto grad = grad_norm_sq(mesh, r.F, r.omega_ref).values;
        int sign_bad = -1;
        for (int v = 0; v < mesh.num_vertices() && sign_bad < 0; ++v) {
            const int side = lm.vertex_side(v);
            const bool ok = side < 0 ? F[v] < 0.0 : side > 0 ? F[v] > 0.0 : F[v] == 0.0;
            if (!ok) sign_bad = v;
        }
        double lo = kInf;
        int worst = -1, linear_bad = -1;
        for (int f = 0; f < mesh.num_faces(); ++f) {
            if (lm.labels()[f].region != Region::Collar) continue;
            const double ratio = grad[f] / (C * C);
            if (ratio < lo) {
                lo = ratio;
                worst = f;
            }
            const Tri& t = mesh.faces()[f];
            const bool linear = in_band(lm, t[0], eps) && in_band(lm, t[1], eps) && in_band(lm, t[2], eps);
            if (linear && ratio < 1.0 - 1e-9 && linear_bad < 0) linear_bad = f;
        }
        rec.value = lo;
        rec.tol = 0.0;
        if (sign_bad >= 0) {
            set_worst(rec, sign_bad, Element::Vertex);
            rec.detail = "sign of F wrong at vertex " + std::to_string(sign_bad);
        } else if (linear_bad >= 0) {
            set_worst(rec, linear_bad, Element::Face);
            rec.detail = "|dF|^2 < C^2 on exact-linear face " + std::to_string(linear_bad);
        } else if (!(lo > 0.0)) {
            set_worst(rec, worst, Element::Face);
            rec.detail = "dF vanishes on collar face " + std::to_string(worst);
        } else {
            set_worst(rec, worst, Element::Face);
            rec.pass = true;
            rec.detail = "min |dF|^2 / C^2 on the collar";
        }
        out.push_back(rec);
    }

    const auto KF = apply_stiffness(mesh, F);
    for (int pass = 0; pass < 2; ++pass) {
        const bool minus = pass == 0;
        CheckRecord rec = record(minus ? "lemma_main.iii" : "lemma_main.iv");
        const Region region = minus ? Region::Minus : Region::Plus;
        double lo = kInf, lo_interior = kInf;
        int worst = -1, worst_interior = -1;
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            const int side = lm.vertex_side(v);
            if (minus ? side > 0 : side < 0) continue;
            const double x = (minus ? -KF[v] : KF[v]) / sigma;
            if (x < lo) {
                lo = x;
                worst = v;
            }
            if (region_interior(lm, v, region) && x < lo_interior) {
                lo_interior = x;
                worst_interior = v;
            }
        }
        rec.value = lo;
        rec.tol = -1e-12;
        if (!(lo >= rec.tol)) {
            set_worst(rec, worst, Element::Vertex);
            rec.detail = std::string(minus ? "-K F" : "K F") + " / sigma negative at vertex " + std::to_string(worst);
        } else if (!(lo_interior > 0.0)) {
            set_worst(rec, worst_interior, Element::Vertex);
            rec.detail = "not strict inside the region at vertex " + std::to_string(worst_interior);
        } else {
            set_worst(rec, worst, Element::Vertex);
            rec.pass = true;
            rec.detail = "region interior min " + format_double(lo_interior);
        }
        out.push_back(rec);
    }

    {
        CheckRecord rec = record("lemma_main.v");
        double slope = 0.0;
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            if (in_band(lm, v, eps) && lm.collar_s()[v] != 0.0) {
                slope = F[v] / lm.collar_s()[v];
                break;
            }
        }
        double dev = 0.0;
        int worst = -1;
        std::string what = "F - k s";
        auto bump = [&](double x, int v, const char* label) {
            if (x > dev) {
                dev = x;
                worst = v;
                what = label;
            }
        };
        const double scale = std::max(std::abs(slope), 1e-300);
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            if (!in_band(lm, v, eps)) continue;
            const double s = lm.collar_s()[v];
            bump(std::abs(F[v] - slope * s) / scale, v, "F - k s");
            if (std::abs(s) < eps) {
                bump(std::abs(KF[v]) / scale, v, "K F");
                bump(r.lapF.values[v] != 0.0 ? 1.0 : 0.0, v, "stored lapF");
            }
        }
        // Collar edges against the product metric ds^2 + dt^2.
        double flat = 0.0;
        int flat_worst = -1;
        for (const auto& collar : lm.collars()) {
            std::map<int, std::pair<double, double>> st;
            for (size_t i = 0; i < collar.rings.size(); ++i) {
                for (size_t k = 0; k < collar.rings[i].size(); ++k) {
                    st[collar.rings[i][k]] = {collar.ring_s[i], collar.ring_t[i][k]};
                }
            }
            const double period = collar.circumference();
            for (int f : collar.faces) {
                for (int k = 0; k < 3; ++k) {
                    const int e = mesh.face_edge(f, k);
                    const auto [a, b] = mesh.edges()[e];
                    const auto pa = st.at(a), pb = st.at(b);
                    double dt = std::fmod(std::abs(pa.second - pb.second), period);
                    dt = std::min(dt, period - dt);
                    const double expect = std::hypot(pa.first - pb.first, dt);
                    const double d = std::abs(mesh.edge_lengths()[e] - expect) / expect;
                    if (d > flat) {
                        flat = d;
                        flat_worst = f;
                    }
                }
            }
        }
        rec.value = std::max(dev, flat);
        rec.tol = 1e-12;
        rec.pass = rec.value <= rec.tol;
        if (flat > dev) {
            set_worst(rec, flat_worst, Element::Face);
            rec.detail = "collar face not flat";
        } else {
            set_worst(rec, worst, Element::Vertex);
            rec.detail = "max deviation in " + what + ", slope " + format_double(slope);
        }
        out.push_back(rec);
    }
    return out;
}

// --- adaptedness -----------------------------------------------------------------------

std::vector<int> sample_faces(int num_faces, int sample_count, uint32_t seed)
{
    std::vector<int> out;
    if (num_faces <= 0 || sample_count <= 0) return out;
    if (sample_count >= num_faces) {
        out.resize(num_faces);
        for (int f = 0; f < num_faces; ++f) out[f] = f;
        return out;
    }
    std::mt19937 rng(seed);
    std::set<int> seen;
    while (static_cast<int>(out.size()) < sample_count) {
        const int f = static_cast<int>(rng() % static_cast<uint32_t>(num_faces));
        if (seen.insert(f).second) out.push_back(f);
    }
    return out;
}

CheckRecord check_adaptedness_reduction(
    const LabeledSurfaceMesh& lm,
    const ConstructionResult& r,
    int sample_count,
    uint32_t seed)
{
    CheckRecord rec = record("adaptedness_reduction");
    const TriMesh& mesh = lm.mesh();
    const auto area = dual_areas(mesh);
    const Pencil P = assemble_pencil(mesh, r.omega_ref);
    const Eigen::VectorXd Ku = P.K * to_vector(r.u);
    const auto faces = sample_faces(mesh.num_faces(), sample_count, seed);

    double worst_match = 0.0, worst_r2 = 0.0;
    int worst = -1;
    for (int f : faces) {
        const auto chart = face_chart(mesh, f);
        const Tri& t = mesh.faces()[f];
        const std::array<double, 3> uf = {r.u.values[t[0]], r.u.values[t[1]], r.u.values[t[2]]};
        const Eigen::Vector2d du = face_gradient(chart, uf);
        const double ubar = (uf[0] + uf[1] + uf[2]) / 3.0;
        // d(du o j) as a reference density, averaged over the face corners.
        double kappa = 0.0, wsum = 0.0;
        for (int v : t) {
            kappa += Ku[v];
            wsum += area[v];
        }
        kappa /= wsum;
        const double rho = r.Omega.values[f] / r.omega_ref.values[f];

        // Surface metric Omega(X, jY) on the chart basis; j is the quarter turn (x, y) -> (-y, x).
        auto omega_form = [&](const Eigen::Vector2d& X, const Eigen::Vector2d& Y) {
            return rho * (X.x() * Y.y() - X.y() * Y.x());
        };
        auto j = [](const Eigen::Vector2d& X) { return Eigen::Vector2d(-X.y(), X.x()); };
        Eigen::Matrix2d G;
        const Eigen::Vector2d ex(1.0, 0.0), ey(0.0, 1.0);
        G << omega_form(ex, j(ex)), omega_form(ex, j(ey)), omega_form(ey, j(ex)), omega_form(ey, j(ey));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > 0.0)) {
            rec.value = es.eigenvalues().minCoeff();
            rec.tol = 0.0;
            set_worst(rec, f, Element::Face);
            rec.detail = "Omega(., j.) not positive definite at face " + std::to_string(f);
            return rec;
        }

        // Chart (t, x, y), g = dt^2 + G.
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        g(0, 0) = 1.0;
        g.block<2, 2>(1, 1) = G;
        const Eigen::Matrix3d ginv = g.inverse();
        const double vol = std::sqrt(g.determinant());

        // du o j (X) = du(jX): coefficients on dx, dy.
        const double ax = du.dot(j(ex)), ay = du.dot(j(ey));
        const Eigen::Vector3d alpha(ubar, ax, ay);
        const Eigen::Vector3d V = vol * (ginv * alpha);
        // 2-forms as (dt^dx, dt^dy, dx^dy) coefficients.
        const Eigen::Vector3d star(V[2], -V[1], V[0]);
        const Eigen::Vector3d dalpha(-du.x(), -du.y(), kappa);

        const double scale = 1.0 + du.norm();
        const double m1 = std::abs(star[0] - dalpha[0]) / scale;
        const double m2 = std::abs(star[1] - dalpha[1]) / scale;
        const double r3 = std::abs(star[2] - dalpha[2]);
        const double r2 = std::abs(kappa - ubar * rho);
        const double m3 = std::abs(r3 - r2) / (1.0 + r2);
        const double match = std::max({m1 / 1e-12, m2 / 1e-12, m3 / 1e-9});
        if (match > worst_match) {
            worst_match = match;
            worst = f;
        }
        worst_r2 = std::max(worst_r2, r2);
    }
    rec.value = worst_match;
    rec.tol = 1.0;
    rec.pass = worst_match <= 1.0;
    set_worst(rec, worst, Element::Face);
    rec.detail = std::to_string(faces.size()) + " faces, seed " + std::to_string(seed) +
        ", max face defect " + format_double(worst_r2);
    return rec;
}

// --- driver ----------------------------------------------------------------------------

VerificationReport verify(const LabeledSurfaceMesh& lm, const ConstructionResult& r, const VerifyOptions& options)
{
    VerificationReport rep;
    rep.level = lm.level();
    rep.sample_count = options.sample_count;
    rep.seed = options.seed;
    rep.params = r.params;

    rep.checks.push_back(check_nodal_set(lm, r));
    rep.checks.push_back(check_positivity(lm, r));
    rep.checks.push_back(check_contact_condition(lm, r));
    rep.min_omega = rep.checks[1].value;
    rep.min_contact = rep.checks[2].value;

    const double tol = options.eigen_tol >= 0.0 ? options.eigen_tol : eigen_tolerance(lm.level());
    EigenDiagnostics diag;
    if (rep.min_omega > 0.0) {
        rep.checks.push_back(check_eigen_identity(lm, r, tol, &diag));
        rep.eigen_residual = diag.residual;
        rep.interior_residual = diag.interior_residual;
        rep.seam_residual = diag.seam_residual;
        rep.seam_worst = diag.seam_worst;
        rep.residual_field = std::move(diag.density);
    } else {
        CheckRecord rec = record("eigen_identity");
        rec.tol = tol;
        rec.value = kInf;
        rec.detail = "Omega is not an area form";
        rep.checks.push_back(rec);
        rep.eigen_residual = kInf;
    }
    for (auto& c : check_lemma_main(lm, r)) rep.checks.push_back(std::move(c));
    rep.checks.push_back(check_adaptedness_reduction(lm, r, options.sample_count, options.seed));
    return rep;
}

SweepResult summarize_sweep(std::vector<SweepRow> rows)
{
    SweepResult out;
    out.rows = std::move(rows);
    CheckRecord& rec = out.monotone;
    rec.name = "convergence";
    rec.pass = !out.rows.empty();
    double omega_floor = kInf, contact_floor = kInf;
    for (size_t i = 0; i < out.rows.size(); ++i) {
        const SweepRow& row = out.rows[i];
        omega_floor = std::min(omega_floor, row.min_omega);
        contact_floor = std::min(contact_floor, row.min_contact);
        if (i > 0 && !(row.residual < out.rows[i - 1].residual)) {
            rec.pass = false;
            rec.worst = row.level;
            rec.detail = "residual did not decrease at level " + std::to_string(row.level);
        }
    }
    if (!out.rows.empty()) {
        const SweepRow& first = out.rows.front();
        if (!(omega_floor >= 0.5 * first.min_omega && omega_floor > 0.0) ||
            !(contact_floor >= 0.5 * first.min_contact && contact_floor > 0.0)) {
            if (rec.pass) rec.detail = "positivity floors collapse under refinement";
            rec.pass = false;
        }
    }
    if (out.rows.size() >= 2) {
        const SweepRow& a = out.rows[out.rows.size() - 2];
        const SweepRow& b = out.rows.back();
        out.interior_order = std::log(a.interior_residual / b.interior_residual) / std::log(a.h / b.h);
        rec.value = std::log(a.residual / b.residual) / std::log(a.h / b.h);
    }
    if (rec.pass) rec.detail = "strictly decreasing over " + std::to_string(out.rows.size()) + " levels";
    return out;
}

SweepResult convergence_sweep(
    const std::string& preset,
    const std::vector<int>& levels,
    const ConstructOptions& construct_options,
    const VerifyOptions& verify_options,
    int collar_rings)
{
    std::vector<SweepRow> rows;
    for (int level : levels) {
        const LabeledSurfaceMesh mesh = generate_preset(preset, level, collar_rings);
        const ConstructionResult result = construct(mesh, construct_options);
        const VerificationReport rep = verify(mesh, result, verify_options);
        SweepRow row;
        row.level = level;
        row.h = mesh.collars().front().h_s;
        row.residual = rep.eigen_residual;
        row.min_omega = rep.min_omega;
        row.min_contact = rep.min_contact;
        row.seam_worst = rep.seam_worst;
        row.interior_residual = rep.interior_residual;
        rows.push_back(row);
    }
    return summarize_sweep(std::move(rows));
}

// --- output ----------------------------------------------------------------------------

namespace {

const char* element_name(Element e)
{
    switch (e) {
    case Element::Vertex: return "vertex";
    case Element::Face: return "face";
    case Element::None: break;
    }
    return "none";
}

std::string row_text(const SweepRow& row)
{
    return std::to_string(row.level) + " " + format_double(row.h) + " " + format_double(row.residual) + " " +
        format_double(row.min_omega) + " " + format_double(row.min_contact) + " " + format_double(row.seam_worst);
}

} // namespace

void write_report(std::ostream& out, const VerificationReport& report)
{
    KeyValues kv;
    kv.emplace_back("report.level", std::to_string(report.level));
    kv.emplace_back("report.seed", std::to_string(report.seed));
    kv.emplace_back("report.sample_count", std::to_string(report.sample_count));
    for (const auto& c : report.checks) {
        const std::string p = "check." + c.name;
        kv.emplace_back(p + ".pass", c.pass ? "true" : "false");
        kv.emplace_back(p + ".value", format_double(c.value));
        kv.emplace_back(p + ".tol", format_double(c.tol));
        kv.emplace_back(p + ".worst", std::to_string(c.worst));
        kv.emplace_back(p + ".element", element_name(c.element));
        if (!c.detail.empty()) kv.emplace_back(p + ".detail", c.detail);
    }
    kv.emplace_back("summary.eigen_residual", format_double(report.eigen_residual));
    kv.emplace_back("summary.interior_residual", format_double(report.interior_residual));
    kv.emplace_back("summary.seam_residual", format_double(report.seam_residual));
    kv.emplace_back("summary.seam_worst", format_double(report.seam_worst));
    kv.emplace_back("summary.min_Omega", format_double(report.min_omega));
    kv.emplace_back("summary.min_contact", format_double(report.min_contact));
    kv.emplace_back("summary.all_pass", report.all_pass() ? "true" : "false");
    for (auto& p : report.params.to_key_values()) kv.push_back(std::move(p));
    if (report.sweep.size() >= 2) kv.emplace_back("sweep.interior_order", format_double(report.interior_order));
    for (size_t i = 0; i < report.sweep.size(); ++i) {
        kv.emplace_back("sweep.row." + std::to_string(i), row_text(report.sweep[i]));
    }
    write_key_values(out, kv);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << "level,h,residual,min_omega,min_contact,seam_worst,interior_residual\n";
    for (const auto& r : rows) {
        out << r.level << ',' << format_double(r.h) << ',' << format_double(r.residual) << ','
            << format_double(r.min_omega) << ',' << format_double(r.min_contact) << ','
            << format_double(r.seam_worst) << ',' << format_double(r.interior_residual) << '\n';
    }
}

// --- fault injection -------------------------------------------------------------------

namespace fault {

void flip_sign(ConstructionResult& r, int vertex)
{
    r.u.values.at(vertex) = -r.u.values.at(vertex);
}

void zero_omega(ConstructionResult& r, int face)
{
    r.Omega.values.at(face) = 0.0;
}

void zero_u_ring(const LabeledSurfaceMesh& mesh, ConstructionResult& r, int vertex)
{
    r.u.values.at(vertex) = 0.0;
    for (int w : mesh.mesh().vertex_neighbors()[vertex]) r.u.values[w] = 0.0;
}

void constant_u(ConstructionResult& r)
{
    std::fill(r.u.values.begin(), r.u.values.end(), 1.0);
}

void scale_F(ConstructionResult& r, double factor)
{
    for (double& x : r.F.values) x *= factor;
}

void remove_mirroring(const LabeledSurfaceMesh& mesh, ConstructionResult& r)
{
    for (size_t c = 0; c < mesh.collars().size(); ++c) {
        const CollarInfo& collar = mesh.collars()[c];
        const CircleParams& cp = r.params.circles.at(c);
        const ConvexProfile prof = ConvexProfile::build(cp.A_plus, cp.width_plus);
        for (size_t i = 0; i < collar.rings.size(); ++i) {
            const double s = collar.ring_s[i];
            if (!(s > 0.0)) continue;
            for (int v : collar.rings[i]) r.F.values[v] = r.params.sigma * (1.0 + prof.value(s - 1.0));
        }
    }
}

int negate_sampled_omega(ConstructionResult& r, int sample_count, uint32_t seed)
{
    const auto faces = sample_faces(static_cast<int>(r.Omega.values.size()), sample_count, seed);
    const int f = faces.at(0);
    r.Omega.values[f] = -r.Omega.values[f];
    return f;
}

} // namespace fault

} // namespace nodaldiv
