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

#include <nodaldiv/generate.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace nodaldiv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLengthMatch = 1e-9;

uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

double dist(const Vec3& a, const Vec3& b)
{
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

[[noreturn]] void internal(const std::string& msg)
{
    throw Error(ErrorKind::InvalidMesh, "mesh template: " + msg);
}

[[noreturn]] void spec_error(const std::string& msg)
{
    throw Error(ErrorKind::InvalidSpec, msg);
}

struct UnionFind
{
    explicit UnionFind(int n)
        : parent(n)
    {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> parent;
};

///
/// One building block of the glued surface: a triangulated surface with boundary whose
/// edge lengths are fixed, plus its boundary loops in induced orientation.
///
struct Part
{
    std::vector<Vec3> positions;
    std::vector<Tri> faces;
    std::map<uint64_t, double> lengths;
    std::vector<std::vector<int>> loops; ///< one per piece circle, in piece circle order
    std::vector<double> s; ///< collar coordinate (collars only)
    Region region = Region::Minus;
    int circle = -1;
};

///
/// Triangulate the band between two cyclic vertex rings. Angles must be ascending within
/// a 2*pi window. In the parameter plane (angle to the right, lower -> upper upward)
/// every emitted triangle is counter-clockwise.
///
void stitch(
    const std::vector<int>& lower,
    const std::vector<double>& lower_angle,
    const std::vector<int>& upper,
    const std::vector<double>& upper_angle,
    std::vector<Tri>& faces)
{
    const int m = static_cast<int>(lower.size());
    const int p = static_cast<int>(upper.size());
    const double two_pi = 2.0 * kPi;
    auto wrapdist = [&](double a, double b) {
        double d = std::fmod(std::abs(a - b), two_pi);
        return std::min(d, two_pi - d);
    };
    int j0 = 0;
    for (int j = 1; j < p; ++j) {
        if (wrapdist(upper_angle[j], lower_angle[0]) <
            wrapdist(upper_angle[j0], lower_angle[0]) - 1e-12) {
            j0 = j;
        }
    }
    auto A = [&](int i) { return lower_angle[i % m] + two_pi * (i / m); };
    const double b_shift = [&] {
        const double b0 = upper_angle[j0];
        return two_pi * std::round((A(0) - b0) / two_pi);
    }();
    auto B = [&](int j) {
        const int idx = j0 + j;
        return upper_angle[idx % p] + two_pi * (idx / p) + b_shift;
    };
    auto L = [&](int i) { return lower[i % m]; };
    auto U = [&](int j) { return upper[(j0 + j) % p]; };
    int i = 0, j = 0;
    while (i < m || j < p) {
        const bool advance_lower = (j == p) || (i < m && A(i + 1) <= B(j + 1) + 1e-12);
        if (advance_lower) {
            faces.push_back({L(i), L(i + 1), U(j)});
            ++i;
        } else {
            faces.push_back({L(i), U(j + 1), U(j)});
            ++j;
        }
    }
}

///
/// Resolve vertex identifications of a template and fix per-edge lengths from the
/// template positions of each face (identified copies must agree).
///
Part finalize_part(
    const std::vector<Vec3>& positions,
    const std::vector<Tri>& faces,
    const std::vector<std::pair<int, int>>& identify)
{
    const int n = static_cast<int>(positions.size());
    UnionFind uf(n);
    for (const auto& [a, b] : identify) uf.unite(a, b);
    std::vector<int> remap(n, -1);
    Part part;
    for (int v = 0; v < n; ++v) {
        const int root = uf.find(v);
        if (remap[root] < 0) {
            remap[root] = static_cast<int>(part.positions.size());
            part.positions.push_back(positions[root]);
        }
        remap[v] = remap[root];
    }
    for (const Tri& t : faces) {
        const Tri u{remap[t[0]], remap[t[1]], remap[t[2]]};
        if (u[0] == u[1] || u[1] == u[2] || u[0] == u[2]) internal("identification collapses a face");
        part.faces.push_back(u);
        for (int k = 0; k < 3; ++k) {
            const double len = dist(positions[t[k]], positions[t[(k + 1) % 3]]);
            auto [it, inserted] = part.lengths.try_emplace(edge_key(u[k], u[(k + 1) % 3]), len);
            if (!inserted && std::abs(it->second - len) > kLengthMatch * len) {
                internal("identified edges have different lengths");
            }
        }
    }
    return part;
}

TriMesh part_mesh(const Part& part)
{
    return TriMesh(part.positions, part.faces, [&](int a, int b) {
        return part.lengths.at(edge_key(a, b));
    });
}

/// Attach boundary loops to circles: loop i is the one containing markers[i].
void assign_loops(Part& part, const std::vector<int>& markers)
{
    const TriMesh mesh = part_mesh(part);
    mesh.validate(false);
    auto loops = mesh.boundary_loops();
    if (loops.size() != markers.size()) internal("unexpected boundary loop count");
    for (int marker : markers) {
        auto it = std::find_if(loops.begin(), loops.end(), [&](const auto& loop) {
            return std::find(loop.begin(), loop.end(), marker) != loop.end();
        });
        if (it == loops.end()) internal("boundary marker not on a loop");
        part.loops.push_back(*it);
    }
}

void check_planar_orientation(const std::vector<Vec3>& p, const std::vector<Tri>& faces)
{
    for (const Tri& t : faces) {
        const double ax = p[t[1]][0] - p[t[0]][0], ay = p[t[1]][1] - p[t[0]][1];
        const double bx = p[t[2]][0] - p[t[0]][0], by = p[t[2]][1] - p[t[0]][1];
        if (!(ax * by - ay * bx > 0.0)) internal("template face is not counter-clockwise");
    }
}

// --- templates -------------------------------------------------------------------------

struct DiskTemplate
{
    std::vector<Vec3> positions;
    std::vector<Tri> faces;
    std::vector<int> boundary; ///< ring 0, counter-clockwise
};

// Concentric rings with near-uniform spacing: each ring sits one equilateral row height
// inside the previous one and carries about circumference / h vertices, down to a hexagon.
DiskTemplate make_disk(int n, double radius)
{
    DiskTemplate d;
    const double h = 2.0 * radius * std::sin(kPi / n);
    std::vector<double> radii{radius};
    std::vector<int> counts{n};
    while (counts.back() > 6) {
        const double chord = 2.0 * radii.back() * std::sin(kPi / counts.back());
        const double r = radii.back() - 0.5 * std::sqrt(3.0) * chord;
        if (r < 0.75 * h) break;
        const int m = std::clamp(static_cast<int>(std::lround(2.0 * kPi * r / h)), 6, counts.back());
        radii.push_back(r);
        counts.push_back(m);
    }
    std::vector<std::vector<int>> rings;
    std::vector<std::vector<double>> angles;
    for (size_t k = 0; k < radii.size(); ++k) {
        std::vector<int> ring;
        std::vector<double> ang;
        const int m = counts[k];
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * kPi * (j + 0.5 * static_cast<double>(k)) / m;
            ring.push_back(static_cast<int>(d.positions.size()));
            ang.push_back(theta);
            d.positions.push_back({radii[k] * std::cos(theta), radii[k] * std::sin(theta), 0.0});
        }
        rings.push_back(std::move(ring));
        angles.push_back(std::move(ang));
    }
    for (size_t k = 0; k + 1 < rings.size(); ++k) {
        stitch(rings[k], angles[k], rings[k + 1], angles[k + 1], d.faces);
    }
    const int centre = static_cast<int>(d.positions.size());
    d.positions.push_back({0.0, 0.0, 0.0});
    const auto& inner = rings.back();
    const int m = static_cast<int>(inner.size());
    for (int j = 0; j < m; ++j) d.faces.push_back({centre, inner[j], inner[(j + 1) % m]});
    check_planar_orientation(d.positions, d.faces);
    d.boundary = rings.front();
    return d;
}

// Log-polar rings of constant count n (each ring one orbit of the rotation by 2*pi/n),
// shrinking geometrically until the ring radius reaches the boundary spacing, then a fan.
// Self-similar under doubling n, which keeps refinement studies clean.
DiskTemplate log_polar_disk(int n, double radius)
{
    DiskTemplate d;
    const double chord = 2.0 * radius * std::sin(kPi / n);
    const double ratio = 1.0 - std::sqrt(3.0) * std::sin(kPi / n);
    std::vector<double> radii{radius};
    while (radii.back() * ratio >= chord) radii.push_back(radii.back() * ratio);

    std::vector<std::vector<int>> rings;
    std::vector<std::vector<double>> angles;
    for (size_t k = 0; k < radii.size(); ++k) {
        std::vector<int> ring;
        std::vector<double> ang;
        for (int j = 0; j < n; ++j) {
            const double theta = 2.0 * kPi * (j + 0.5 * static_cast<double>(k)) / n;
            ring.push_back(static_cast<int>(d.positions.size()));
            ang.push_back(theta);
            d.positions.push_back({radii[k] * std::cos(theta), radii[k] * std::sin(theta), 0.0});
        }
        rings.push_back(std::move(ring));
        angles.push_back(std::move(ang));
    }
    for (size_t k = 0; k + 1 < rings.size(); ++k) {
        stitch(rings[k], angles[k], rings[k + 1], angles[k + 1], d.faces);
    }
    const int centre = static_cast<int>(d.positions.size());
    d.positions.push_back({0.0, 0.0, 0.0});
    const auto& inner = rings.back();
    for (int j = 0; j < n; ++j) d.faces.push_back({centre, inner[j], inner[(j + 1) % n]});
    check_planar_orientation(d.positions, d.faces);
    d.boundary = rings.front();
    return d;
}

Part disk_piece(int n, double h)
{
    const double radius = h / (2.0 * std::sin(kPi / n));
    DiskTemplate d = make_disk(n, radius);
    Part part = finalize_part(d.positions, d.faces, {});
    assign_loops(part, {d.boundary[0]});
    return part;
}

// Cylinder (equal counts) or frustum between two circles with boundary spacing h.
Part annulus_piece(int n1, int n2, double h)
{
    const double row = 0.5 * std::sqrt(3.0) * h;
    const int nrows = std::max(2, static_cast<int>(std::ceil(1.0 / row - 1e-9)));
    std::vector<Vec3> pos;
    std::vector<Tri> faces;
    std::vector<std::vector<int>> rings;
    std::vector<std::vector<double>> angles;
    for (int k = 0; k <= nrows; ++k) {
        const double lambda = static_cast<double>(k) / nrows;
        const int m = n1 + static_cast<int>(std::lround((n2 - n1) * lambda));
        const double r = h / (2.0 * std::sin(kPi / m));
        const double z = 1.0 * lambda;
        std::vector<int> ring;
        std::vector<double> ang;
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * kPi * (j + 0.5 * (k % 2)) / m;
            ring.push_back(static_cast<int>(pos.size()));
            ang.push_back(theta);
            pos.push_back({r * std::cos(theta), r * std::sin(theta), z});
        }
        rings.push_back(std::move(ring));
        angles.push_back(std::move(ang));
    }
    for (int k = 0; k < nrows; ++k) stitch(rings[k], angles[k], rings[k + 1], angles[k + 1], faces);
    Part part = finalize_part(pos, faces, {});
    assign_loops(part, {rings.front()[0], rings.back()[0]});
    return part;
}

///
/// Genus g with b >= 1 boundary circles from a cyclic polygon with side word
/// a1 b1 a1^-1 b1^-1 ... h2 e2 h2^-1 ... (e_j free sides closing into boundary circles)
/// and the first circle cut out as a central hole. Flat with one cone class per corner class.
///
Part polygon_piece(int genus, const std::vector<int>& counts, double h)
{
    enum class Kind { Paired, Free };
    struct Side
    {
        Kind kind;
        int pair = -1; ///< partner side for Paired
        bool reversed = false;
        int edges = 0;
    };
    const int n_hole = counts.front();
    const int k_side = *std::max_element(counts.begin(), counts.end());
    std::vector<Side> sides;
    for (int g = 0; g < genus; ++g) {
        const int base = static_cast<int>(sides.size());
        sides.push_back({Kind::Paired, base + 2, false, k_side});
        sides.push_back({Kind::Paired, base + 3, false, k_side});
        sides.push_back({Kind::Paired, base, true, k_side});
        sides.push_back({Kind::Paired, base + 1, true, k_side});
    }
    std::vector<int> free_side_of_circle(counts.size(), -1);
    for (size_t c = 1; c < counts.size(); ++c) {
        const int base = static_cast<int>(sides.size());
        sides.push_back({Kind::Paired, base + 2, false, k_side});
        sides.push_back({Kind::Free, -1, false, counts[c]});
        sides.push_back({Kind::Paired, base, true, k_side});
        free_side_of_circle[c] = base + 1;
    }
    const int nsides = static_cast<int>(sides.size());
    if (nsides < 4) internal("polygon template needs at least four sides");

    // Cyclic polygon with the prescribed side lengths.
    std::vector<double> len(nsides);
    for (int i = 0; i < nsides; ++i) len[i] = sides[i].edges * h;
    const double lmax = *std::max_element(len.begin(), len.end());
    auto angle_sum = [&](double R) {
        double s = 0.0;
        for (double l : len) s += 2.0 * std::asin(std::min(1.0, l / (2.0 * R)));
        return s;
    };
    double lo = 0.5 * lmax, hi = lmax * nsides;
    if (angle_sum(lo) < 2.0 * kPi) internal("side lengths admit no cyclic polygon around its centre");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (angle_sum(mid) > 2.0 * kPi ? lo : hi) = mid;
    }
    const double R = 0.5 * (lo + hi);
    std::vector<Vec3> corner(nsides + 1);
    double phi = -0.5 * kPi;
    double apothem = R;
    for (int i = 0; i <= nsides; ++i) {
        corner[i] = {R * std::cos(phi), R * std::sin(phi), 0.0};
        if (i < nsides) {
            const double central = 2.0 * std::asin(std::min(1.0, len[i] / (2.0 * R)));
            apothem = std::min(apothem, R * std::cos(0.5 * central));
            phi += central;
        }
    }
    corner[nsides] = corner[0];

    const double r_hole = h / (2.0 * std::sin(kPi / n_hole));
    if (r_hole > 0.6 * apothem) internal("central hole does not fit the polygon");

    std::vector<Vec3> pos;
    std::vector<Tri> faces;
    // Outer ring: side i contributes points j = 0 .. edges-1 (point 0 is corner i).
    std::vector<int> side_offset(nsides);
    std::vector<int> outer;
    std::vector<double> outer_angle;
    for (int i = 0; i < nsides; ++i) {
        side_offset[i] = static_cast<int>(outer.size());
        for (int j = 0; j < sides[i].edges; ++j) {
            const double t = static_cast<double>(j) / sides[i].edges;
            const Vec3 p{
                corner[i][0] + t * (corner[i + 1][0] - corner[i][0]),
                corner[i][1] + t * (corner[i + 1][1] - corner[i][1]),
                0.0};
            outer.push_back(static_cast<int>(pos.size()));
            double a = std::atan2(p[1], p[0]);
            if (!outer_angle.empty()) {
                while (a < outer_angle.back()) a += 2.0 * kPi;
            }
            outer_angle.push_back(a);
            pos.push_back(p);
        }
    }
    const int m_outer = static_cast<int>(outer.size());
    auto boundary_at = [&](double theta) {
        const double dx = std::cos(theta), dy = std::sin(theta);
        for (int i = 0; i < nsides; ++i) {
            const Vec3& a = corner[i];
            const Vec3& b = corner[i + 1];
            const double ex = b[0] - a[0], ey = b[1] - a[1];
            const double det = dx * (-ey) - dy * (-ex);
            if (std::abs(det) < 1e-300) continue;
            const double t = (a[0] * (-ey) - a[1] * (-ex)) / det; // ray parameter
            const double u = (dx * a[1] - dy * a[0]) / det; // side parameter
            if (t > 0.0 && u >= -1e-12 && u <= 1.0 + 1e-12) return Vec3{t * dx, t * dy, 0.0};
        }
        internal("ray misses the polygon");
    };

    double mean_gap = 0.0;
    for (double a : outer_angle) {
        const Vec3 b = boundary_at(a);
        mean_gap += std::hypot(b[0], b[1]) - r_hole;
    }
    mean_gap /= m_outer;
    const int nrings = std::max(2, static_cast<int>(std::lround(mean_gap / h)));

    std::vector<std::vector<int>> rings(nrings + 1);
    std::vector<std::vector<double>> angles(nrings + 1);
    for (int j = 0; j < nrings; ++j) {
        const double lambda = static_cast<double>(j) / nrings;
        const int m = static_cast<int>(std::lround(n_hole + (m_outer - n_hole) * lambda));
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * kPi * (i + 0.5 * (j % 2)) / m;
            const Vec3 b = boundary_at(theta);
            rings[j].push_back(static_cast<int>(pos.size()));
            angles[j].push_back(theta);
            pos.push_back({
                (1.0 - lambda) * r_hole * std::cos(theta) + lambda * b[0],
                (1.0 - lambda) * r_hole * std::sin(theta) + lambda * b[1],
                0.0});
        }
    }
    rings[nrings] = outer;
    angles[nrings] = outer_angle;
    for (int j = 0; j < nrings; ++j) stitch(rings[j + 1], angles[j + 1], rings[j], angles[j], faces);
    check_planar_orientation(pos, faces);

    // Side pairing: point j of side i ~ point (edges - j) of its partner (reversed).
    auto point = [&](int side, int j) {
        const int idx = side_offset[side] + j;
        return outer[idx % m_outer];
    };
    std::vector<std::pair<int, int>> identify;
    for (int i = 0; i < nsides; ++i) {
        if (sides[i].kind != Kind::Paired || sides[i].reversed) continue;
        const int partner = sides[i].pair;
        for (int j = 0; j <= sides[i].edges; ++j) {
            identify.push_back({point(i, j), point(partner, sides[i].edges - j)});
        }
    }
    Part part = finalize_part(pos, faces, identify);

    // Markers in post-identification numbering.
    auto canonical = [&](int v) {
        UnionFind uf(static_cast<int>(pos.size()));
        for (const auto& [a, b] : identify) uf.unite(a, b);
        std::vector<int> remap(pos.size(), -1);
        int next = 0;
        for (int w = 0; w < static_cast<int>(pos.size()); ++w) {
            const int r = uf.find(w);
            if (remap[r] < 0) remap[r] = next++;
            remap[w] = remap[r];
        }
        return remap[v];
    };
    std::vector<int> markers{canonical(rings[0][0])};
    for (size_t c = 1; c < counts.size(); ++c) markers.push_back(canonical(point(free_side_of_circle[c], 1)));
    assign_loops(part, markers);

    const TriMesh check = part_mesh(part);
    const int expect = 2 - 2 * genus - static_cast<int>(counts.size());
    if (check.euler_characteristic() != expect) internal("polygon template has wrong topology");
    return part;
}

Part collar_part(int circle, int n, int half_rings, double h)
{
    Part part;
    part.region = Region::Collar;
    part.circle = circle;
    const int nrings = 2 * half_rings + 1;
    const double radius = h / (2.0 * std::sin(kPi / n));
    auto id = [&](int r, int k) { return r * n + ((k % n) + n) % n; };
    for (int r = 0; r < nrings; ++r) {
        const double s = static_cast<double>(r - half_rings) / half_rings;
        for (int k = 0; k < n; ++k) {
            const double theta = 2.0 * kPi * k / n;
            part.positions.push_back({s, radius * std::cos(theta), radius * std::sin(theta)});
            part.s.push_back(s);
        }
    }
    const double h_s = 1.0 / half_rings;
    const double diag = std::sqrt(h_s * h_s + h * h);
    for (int r = 0; r + 1 < nrings; ++r) {
        for (int k = 0; k < n; ++k) {
            const int a = id(r, k), b = id(r + 1, k), c = id(r + 1, k + 1), d = id(r, k + 1);
            // Counter-clockwise in the (s, t) plane: ds ^ dt is positive.
            part.faces.push_back({a, b, c});
            part.faces.push_back({a, c, d});
            part.lengths[edge_key(a, b)] = h_s;
            part.lengths[edge_key(a, d)] = h;
            part.lengths[edge_key(b, c)] = h;
            part.lengths[edge_key(a, c)] = diag;
        }
    }
    assign_loops(part, {id(0, 0), id(nrings - 1, 0)});
    return part;
}

Part region_piece(const PieceSpec& piece, const std::vector<int>& counts, double h)
{
    const int b = static_cast<int>(counts.size());
    if (piece.genus == 0 && b == 1) return disk_piece(counts[0], h);
    if (piece.genus == 0 && b == 2) return annulus_piece(counts[0], counts[1], h);
    return polygon_piece(piece.genus, counts, h);
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

// --- SurfaceSpec ---------------------------------------------------------------------------

void SurfaceSpec::validate() const
{
    if (circles.empty()) spec_error("surface has no dividing circle");
    if (minus.empty() || plus.empty()) spec_error("both Minus and Plus sides need a piece");
    if (collar_rings < 4) spec_error("collar_rings must be at least 4");
    if (refinement_level < 0) spec_error("refinement_level must be nonnegative");
    if (refinement_level > 6) spec_error("refinement level too large for memory budget");
    std::map<std::string, int> minus_count, plus_count;
    std::set<std::string> names;
    for (const auto& c : circles) {
        if (!names.insert(c.name).second) spec_error("circle " + c.name + " declared twice");
        if (c.vertex_count < 8) spec_error("circle " + c.name + " needs at least 8 vertices");
        if (c.name.empty() || c.name.find_first_of(" \t:#") != std::string::npos) {
            spec_error("invalid circle id '" + c.name + "'");
        }
    }
    auto count = [&](const std::vector<PieceSpec>& pieces, std::map<std::string, int>& tally,
                     const char* side) {
        for (const auto& p : pieces) {
            if (p.genus < 0) spec_error(std::string(side) + " piece has negative genus");
            if (p.circles.empty()) {
                spec_error(std::string(side) + " piece has no boundary circle");
            }
            for (const auto& c : p.circles) {
                if (!names.count(c)) spec_error("circle " + c + " is not declared");
                ++tally[c];
            }
        }
    };
    count(minus, minus_count, "Minus");
    count(plus, plus_count, "Plus");
    for (const auto& c : circles) {
        if (minus_count[c.name] != 1 || plus_count[c.name] != 1) {
            spec_error(
                "circle " + c.name + " must bound exactly one Minus and one Plus piece (found " +
                std::to_string(minus_count[c.name]) + " Minus, " +
                std::to_string(plus_count[c.name]) + " Plus)");
        }
    }
    // Rough memory budget: vertices per level grow by four.
    double estimate = 0.0;
    for (const auto& c : circles) estimate += c.vertex_count * (2.0 * collar_rings + 1.0) * 3.0;
    estimate *= std::pow(4.0, refinement_level);
    if (estimate > 2e7) spec_error("refinement level too large for memory budget");
}

SurfaceSpec parse_surface_spec(std::istream& in)
{
    SurfaceSpec spec;
    spec.circles.clear();
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        return Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto to_int = [&](const std::string& s) {
            try {
                size_t used = 0;
                const int v = std::stoi(s, &used);
                if (used == s.size()) return v;
            } catch (const std::logic_error&) {
            }
            throw fail("expected an integer, got '" + s + "'");
        };
        if (key == "collar_rings") {
            spec.collar_rings = to_int(value);
        } else if (key == "refinement_level") {
            spec.refinement_level = to_int(value);
        } else if (key.rfind("circle", 0) == 0) {
            const std::string name = trim(key.substr(6));
            if (name.empty()) throw fail("circle needs an id");
            spec.circles.push_back({name, to_int(value)});
        } else if (key == "minus" || key == "plus") {
            const auto colon = value.find(':');
            if (colon == std::string::npos) throw fail("expected 'genus : circle ...'");
            PieceSpec piece;
            piece.genus = to_int(trim(value.substr(0, colon)));
            std::istringstream ids(value.substr(colon + 1));
            for (std::string id; ids >> id;) piece.circles.push_back(id);
            (key == "minus" ? spec.minus : spec.plus).push_back(std::move(piece));
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    return spec;
}

SurfaceSpec load_surface_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open spec file " + path);
    return parse_surface_spec(in);
}

// --- gluing ----------------------------------------------------------------------------

LabeledSurfaceMesh build_from_spec(const SurfaceSpec& spec)
{
    spec.validate();
    const int scale = 1 << spec.refinement_level;
    const int half_rings = spec.collar_rings * scale;
    const double h = 1.0 / half_rings;
    std::map<std::string, int> circle_index;
    std::vector<std::string> names;
    std::vector<int> counts;
    for (const auto& c : spec.circles) {
        circle_index[c.name] = static_cast<int>(names.size());
        names.push_back(c.name);
        counts.push_back(c.vertex_count * scale);
    }

    // Parts in face order: Minus pieces, collars (circle order), Plus pieces.
    std::vector<Part> parts;
    std::vector<std::vector<int>> piece_circles;
    auto add_pieces = [&](const std::vector<PieceSpec>& pieces, Region region) {
        for (const auto& p : pieces) {
            std::vector<int> cs, ns;
            for (const auto& c : p.circles) {
                cs.push_back(circle_index.at(c));
                ns.push_back(counts[circle_index.at(c)]);
            }
            Part part = region_piece(p, ns, h);
            part.region = region;
            parts.push_back(std::move(part));
            piece_circles.push_back(std::move(cs));
        }
    };
    add_pieces(spec.minus, Region::Minus);
    for (int c = 0; c < static_cast<int>(names.size()); ++c) {
        parts.push_back(collar_part(c, counts[c], half_rings, h));
        piece_circles.push_back({});
    }
    add_pieces(spec.plus, Region::Plus);

    // Concatenate with visualization offsets.
    std::vector<int> offset;
    std::vector<Vec3> positions;
    double x_cursor = 0.0;
    for (const Part& part : parts) {
        offset.push_back(static_cast<int>(positions.size()));
        double xmin = 1e300, xmax = -1e300;
        for (const Vec3& p : part.positions) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
        }
        for (const Vec3& p : part.positions) {
            positions.push_back({p[0] - xmin + x_cursor, p[1], p[2]});
        }
        x_cursor += (xmax - xmin) + 0.5;
    }
    const int total = static_cast<int>(positions.size());

    // Glue each circle: Minus loop <-> collar s = -1 loop, collar s = +1 loop <-> Plus loop.
    std::vector<int> minus_part(names.size(), -1), plus_part(names.size(), -1);
    std::vector<int> minus_slot(names.size(), -1), plus_slot(names.size(), -1);
    std::vector<int> collar_part_index(names.size(), -1);
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        if (parts[pi].region == Region::Collar) {
            collar_part_index[parts[pi].circle] = static_cast<int>(pi);
            continue;
        }
        for (size_t slot = 0; slot < piece_circles[pi].size(); ++slot) {
            const int c = piece_circles[pi][slot];
            auto& owner = parts[pi].region == Region::Minus ? minus_part : plus_part;
            auto& owner_slot = parts[pi].region == Region::Minus ? minus_slot : plus_slot;
            owner[c] = static_cast<int>(pi);
            owner_slot[c] = static_cast<int>(slot);
        }
    }
    UnionFind uf(total);
    auto glue = [&](int pa, const std::vector<int>& la, int pb, const std::vector<int>& lb,
                    const std::string& name) {
        if (la.size() != lb.size()) {
            spec_error(
                "vertex-count mismatch at gluing circle " + name + " (" +
                std::to_string(la.size()) + " vs " + std::to_string(lb.size()) + ")");
        }
        auto global_loop = [&](int part, const std::vector<int>& loop) {
            std::vector<int> g;
            for (int v : loop) g.push_back(offset[part] + v);
            std::rotate(g.begin(), std::min_element(g.begin(), g.end()), g.end());
            return g;
        };
        const auto ga = global_loop(pa, la);
        const auto gb = global_loop(pb, lb);
        const size_t n = ga.size();
        // Induced orientations are opposite: walk one loop backwards.
        for (size_t i = 0; i < n; ++i) uf.unite(ga[i], gb[(n - i) % n]);
    };
    for (size_t c = 0; c < names.size(); ++c) {
        const Part& collar = parts[collar_part_index[c]];
        glue(minus_part[c], parts[minus_part[c]].loops[minus_slot[c]],
             collar_part_index[c], collar.loops[0], names[c]);
        glue(collar_part_index[c], collar.loops[1],
             plus_part[c], parts[plus_part[c]].loops[plus_slot[c]], names[c]);
    }

    std::vector<int> remap(total, -1);
    std::vector<Vec3> merged_positions;
    for (int v = 0; v < total; ++v) {
        const int r = uf.find(v);
        if (remap[r] < 0) {
            remap[r] = static_cast<int>(merged_positions.size());
            merged_positions.push_back(positions[r]);
        }
        remap[v] = remap[r];
    }
    const int nv = static_cast<int>(merged_positions.size());

    std::vector<Tri> faces;
    std::vector<FaceLabel> labels;
    std::vector<double> collar_s(nv, LabeledSurfaceMesh::kUndefined);
    std::vector<int> gamma;
    std::map<uint64_t, double> lengths;
    // Collars first so their exact product lengths take precedence on the seams.
    std::vector<size_t> length_order;
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        if (parts[pi].region == Region::Collar) length_order.push_back(pi);
    }
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        if (parts[pi].region != Region::Collar) length_order.push_back(pi);
    }
    for (size_t pi : length_order) {
        const Part& part = parts[pi];
        for (const auto& [key, len] : part.lengths) {
            const int a = remap[offset[pi] + static_cast<int>(key >> 32)];
            const int b = remap[offset[pi] + static_cast<int>(key & 0xffffffffu)];
            auto [it, inserted] = lengths.try_emplace(edge_key(a, b), len);
            if (!inserted && std::abs(it->second - len) > kLengthMatch * len) {
                spec_error("seam edge length mismatch between glued pieces");
            }
        }
    }
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        const Part& part = parts[pi];
        for (const Tri& t : part.faces) {
            faces.push_back({remap[offset[pi] + t[0]], remap[offset[pi] + t[1]],
                             remap[offset[pi] + t[2]]});
            labels.push_back({part.region, part.circle});
        }
        if (part.region == Region::Collar) {
            for (size_t v = 0; v < part.positions.size(); ++v) {
                const int g = remap[offset[pi] + static_cast<int>(v)];
                collar_s[g] = part.s[v];
                if (part.s[v] == 0.0) gamma.push_back(g);
            }
        }
    }

    TriMesh mesh(std::move(merged_positions), std::move(faces), [&](int a, int b) {
        return lengths.at(edge_key(a, b));
    });
    return LabeledSurfaceMesh(
        std::move(mesh), std::move(labels), std::move(names), std::move(collar_s),
        std::move(gamma), spec.refinement_level);
}

// --- presets ---------------------------------------------------------------------------

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{
        "sphere-equator", "sphere-two-circles", "torus-two-meridians", "genus2-separating"};
    return names;
}

SurfaceSpec preset_spec(const std::string& name, int level, int collar_rings)
{
    SurfaceSpec spec;
    spec.collar_rings = collar_rings;
    spec.refinement_level = level;
    if (name == "sphere-equator") {
        spec.circles = {{"g0", 32}};
        spec.minus = {{0, {"g0"}}};
        spec.plus = {{0, {"g0"}}};
    } else if (name == "sphere-two-circles") {
        spec.circles = {{"g0", 32}, {"g1", 32}};
        spec.minus = {{0, {"g0", "g1"}}};
        spec.plus = {{0, {"g0"}}, {0, {"g1"}}};
    } else if (name == "torus-two-meridians") {
        spec.circles = {{"g0", 32}, {"g1", 32}};
        spec.minus = {{0, {"g0", "g1"}}};
        spec.plus = {{0, {"g0", "g1"}}};
    } else if (name == "genus2-separating") {
        spec.circles = {{"g0", 32}};
        spec.minus = {{1, {"g0"}}};
        spec.plus = {{1, {"g0"}}};
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown preset '" + name + "'");
    }
    return spec;
}

LabeledSurfaceMesh generate_preset(const std::string& name, int level, int collar_rings)
{
    if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
    if (level > 6) throw Error(ErrorKind::InvalidArgument, "level too large for memory budget");
    return build_from_spec(preset_spec(name, level, collar_rings));
}

// --- fixtures --------------------------------------------------------------------------

TriMesh flat_disk(int n, double radius)
{
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "disk needs at least 3 boundary vertices");
    DiskTemplate d = log_polar_disk(n, radius);
    return TriMesh::from_positions(std::move(d.positions), std::move(d.faces));
}

TriMesh round_sphere(double radius, int latitude_bands)
{
    if (latitude_bands < 2) throw Error(ErrorKind::InvalidArgument, "sphere needs at least 2 bands");
    const int nlat = latitude_bands;
    const int nlon = 2 * nlat;
    std::vector<Vec3> p;
    p.push_back({radius, 0.0, 0.0});
    for (int i = 1; i < nlat; ++i) {
        const double theta = kPi * i / nlat;
        for (int j = 0; j < nlon; ++j) {
            const double phi = 2.0 * kPi * j / nlon;
            p.push_back({radius * std::cos(theta), radius * std::sin(theta) * std::cos(phi),
                         radius * std::sin(theta) * std::sin(phi)});
        }
    }
    p.push_back({-radius, 0.0, 0.0});
    const int south = static_cast<int>(p.size()) - 1;
    auto id = [nlon](int i, int j) { return 1 + (i - 1) * nlon + ((j % nlon) + nlon) % nlon; };
    std::vector<Tri> f;
    for (int j = 0; j < nlon; ++j) f.push_back({0, id(1, j), id(1, j + 1)});
    for (int i = 1; i + 1 < nlat; ++i) {
        for (int j = 0; j < nlon; ++j) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    for (int j = 0; j < nlon; ++j) f.push_back({south, id(nlat - 1, j + 1), id(nlat - 1, j)});
    return TriMesh::from_positions(std::move(p), std::move(f));
}

TriMesh flat_torus(int n)
{
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "torus grid needs n >= 3");
    const double h = 1.0 / n;
    std::vector<Vec3> pos;
    auto id = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = 2.0 * kPi * i / n, v = 2.0 * kPi * j / n;
            pos.push_back({(2.0 + std::cos(v)) * std::cos(u), (2.0 + std::cos(v)) * std::sin(u),
                           std::sin(v)});
        }
    }
    std::vector<Tri> faces;
    std::map<uint64_t, double> len;
    const double diag = std::sqrt(2.0) * h;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
            len[edge_key(a, b)] = h;
            len[edge_key(a, d)] = h;
            len[edge_key(a, c)] = diag;
        }
    }
    return TriMesh(std::move(pos), std::move(faces), [&](int a, int b) {
        return len.at(edge_key(a, b));
    });
}

} // namespace nodaldiv
