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

#include <nodaldiv/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace nodaldiv {

namespace {

uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

[[noreturn]] void mesh_error(const std::string& msg)
{
    throw Error(ErrorKind::InvalidMesh, msg);
}

// Kahan's stable form of Heron's formula. Returns 0 for violated triangle inequality.
double heron(double a, double b, double c)
{
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return p > 0.0 ? 0.25 * std::sqrt(p) : 0.0;
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

} // namespace

TriMesh TriMesh::from_positions(std::vector<Vec3> positions, std::vector<Tri> faces)
{
    const std::vector<Vec3> p = positions;
    return TriMesh(std::move(positions), std::move(faces), [&p](int a, int b) {
        const double dx = p[a][0] - p[b][0];
        const double dy = p[a][1] - p[b][1];
        const double dz = p[a][2] - p[b][2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    });
}

void TriMesh::build_connectivity()
{
    const int nv = num_vertices();
    std::unordered_map<uint64_t, int> index;
    index.reserve(m_faces.size() * 2);
    m_face_edges.assign(m_faces.size(), {-1, -1, -1});
    m_face_edge_signs.assign(m_faces.size(), {0, 0, 0});
    m_edges.clear();
    m_edge_faces.clear();

    for (int f = 0; f < num_faces(); ++f) {
        const Tri& t = m_faces[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= nv) {
                mesh_error("face " + std::to_string(f) + " references vertex out of range");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            mesh_error("degenerate face " + std::to_string(f) + " (repeated vertex)");
        }
        for (int k = 0; k < 3; ++k) {
            const int a = t[k];
            const int b = t[(k + 1) % 3];
            auto [it, inserted] = index.try_emplace(edge_key(a, b), num_edges());
            if (inserted) {
                m_edges.push_back({std::min(a, b), std::max(a, b)});
                m_edge_faces.push_back({f, -1});
            } else {
                auto& ef = m_edge_faces[it->second];
                if (ef[1] >= 0) {
                    if (m_edge_anomaly < 0) m_edge_anomaly = it->second;
                } else {
                    ef[1] = f;
                }
            }
            const int e = it->second;
            m_face_edges[f][k] = e;
            m_face_edge_signs[f][k] = (a < b) ? 1 : -1;
        }
    }

    // Orientation: the two faces of an interior edge must traverse it oppositely.
    for (int e = 0; e < num_edges(); ++e) {
        const auto& ef = m_edge_faces[e];
        if (ef[1] < 0 || m_orientation_anomaly >= 0) continue;
        int s0 = 0, s1 = 0;
        for (int k = 0; k < 3; ++k) {
            if (m_face_edges[ef[0]][k] == e) s0 = m_face_edge_signs[ef[0]][k];
            if (m_face_edges[ef[1]][k] == e) s1 = m_face_edge_signs[ef[1]][k];
        }
        if (s0 == s1) m_orientation_anomaly = e;
    }

    m_boundary_vertex.assign(nv, 0);
    m_neighbors.assign(nv, {});
    m_vertex_faces.assign(nv, {});
    m_vertex_edges.assign(nv, {});
    for (int e = 0; e < num_edges(); ++e) {
        const auto [a, b] = m_edges[e];
        m_neighbors[a].push_back(b);
        m_neighbors[b].push_back(a);
        m_vertex_edges[a].push_back({b, e});
        m_vertex_edges[b].push_back({a, e});
        if (m_edge_faces[e][1] < 0) {
            m_boundary_vertex[a] = 1;
            m_boundary_vertex[b] = 1;
        }
    }
    for (int v = 0; v < nv; ++v) {
        std::sort(m_neighbors[v].begin(), m_neighbors[v].end());
        std::sort(m_vertex_edges[v].begin(), m_vertex_edges[v].end());
    }
    for (int f = 0; f < num_faces(); ++f) {
        for (int v : m_faces[f]) m_vertex_faces[v].push_back(f);
    }
}

void TriMesh::finish_geometry()
{
    m_face_areas.resize(m_faces.size());
    m_corner_cots.resize(m_faces.size());
    for (int f = 0; f < num_faces(); ++f) {
        const double l0 = opposite_length(f, 0);
        const double l1 = opposite_length(f, 1);
        const double l2 = opposite_length(f, 2);
        const double area = heron(l0, l1, l2);
        m_face_areas[f] = area;
        const std::array<double, 3> l{l0, l1, l2};
        for (int k = 0; k < 3; ++k) {
            const double a = l[(k + 1) % 3];
            const double b = l[(k + 2) % 3];
            const double o = l[k];
            m_corner_cots[f][k] = area > 0.0 ? (a * a + b * b - o * o) / (4.0 * area)
                                             : std::numeric_limits<double>::infinity();
        }
    }
}

double TriMesh::opposite_length(int f, int k) const
{
    return m_edge_lengths[m_face_edges[f][(k + 1) % 3]];
}

bool TriMesh::has_boundary() const
{
    return std::any_of(m_edge_faces.begin(), m_edge_faces.end(), [](const auto& ef) {
        return ef[1] < 0;
    });
}

int TriMesh::find_edge(int a, int b) const
{
    if (a < 0 || a >= num_vertices()) return -1;
    const auto& ve = m_vertex_edges[a];
    auto it = std::lower_bound(ve.begin(), ve.end(), std::pair<int, int>{b, -1});
    return (it != ve.end() && it->first == b) ? it->second : -1;
}

int TriMesh::count_components() const
{
    UnionFind uf(num_vertices());
    for (const auto& e : m_edges) uf.unite(e[0], e[1]);
    int count = 0;
    for (int v = 0; v < num_vertices(); ++v) count += (uf.find(v) == v);
    return count;
}

std::vector<std::vector<int>> TriMesh::boundary_loops() const
{
    std::vector<int> next(num_vertices(), -1);
    for (int f = 0; f < num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int e = m_face_edges[f][k];
            if (m_edge_faces[e][1] >= 0) continue;
            next[m_faces[f][k]] = m_faces[f][(k + 1) % 3];
        }
    }
    std::vector<std::vector<int>> loops;
    std::vector<uint8_t> seen(num_vertices(), 0);
    for (int v = 0; v < num_vertices(); ++v) {
        if (next[v] < 0 || seen[v]) continue;
        std::vector<int> loop;
        int w = v;
        while (w >= 0 && !seen[w]) {
            seen[w] = 1;
            loop.push_back(w);
            w = next[w];
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

void TriMesh::validate(bool require_closed) const
{
    if (num_faces() == 0) mesh_error("mesh has no faces");
    if (m_edge_anomaly >= 0) {
        const auto [a, b] = m_edges[m_edge_anomaly];
        mesh_error(
            "non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) +
            ") has more than two faces");
    }
    if (m_orientation_anomaly >= 0) {
        const auto [a, b] = m_edges[m_orientation_anomaly];
        mesh_error(
            "inconsistent orientation across edge (" + std::to_string(a) + ", " +
            std::to_string(b) + ")");
    }
    if (require_closed) {
        for (int e = 0; e < num_edges(); ++e) {
            if (m_edge_faces[e][1] < 0) {
                mesh_error(
                    "not a closed manifold: boundary edge (" + std::to_string(m_edges[e][0]) +
                    ", " + std::to_string(m_edges[e][1]) + ")");
            }
        }
    }

    // Vertex stars must be single fans (no pinched vertices).
    for (int v = 0; v < num_vertices(); ++v) {
        const auto& vf = m_vertex_faces[v];
        if (vf.empty()) mesh_error("isolated vertex " + std::to_string(v));
        std::map<int, int> slot;
        for (size_t i = 0; i < vf.size(); ++i) slot[vf[i]] = static_cast<int>(i);
        UnionFind uf(static_cast<int>(vf.size()));
        for (const auto& [w, e] : m_vertex_edges[v]) {
            const auto& ef = m_edge_faces[e];
            if (ef[1] >= 0) uf.unite(slot.at(ef[0]), slot.at(ef[1]));
        }
        for (size_t i = 1; i < vf.size(); ++i) {
            if (uf.find(static_cast<int>(i)) != uf.find(0)) {
                mesh_error("non-manifold vertex " + std::to_string(v) + " (pinched star)");
            }
        }
    }

    for (int e = 0; e < num_edges(); ++e) {
        if (!(m_edge_lengths[e] > 0.0) || !std::isfinite(m_edge_lengths[e])) {
            mesh_error("edge " + std::to_string(e) + " has nonpositive length");
        }
    }
    for (int f = 0; f < num_faces(); ++f) {
        const double a = opposite_length(f, 0);
        const double b = opposite_length(f, 1);
        const double c = opposite_length(f, 2);
        if (!(a < b + c && b < a + c && c < a + b) || !(m_face_areas[f] > 0.0)) {
            mesh_error("triangle inequality violated on face " + std::to_string(f));
        }
    }
    if (count_components() != 1) mesh_error("mesh is not connected");
}

void TriMesh::set_positions(std::vector<Vec3> positions)
{
    if (positions.size() != m_positions.size()) {
        throw Error(ErrorKind::InvalidArgument, "position count mismatch");
    }
    m_positions = std::move(positions);
}

// ---------------------------------------------------------------------------------------

LabeledSurfaceMesh::LabeledSurfaceMesh(
    TriMesh mesh,
    std::vector<FaceLabel> labels,
    std::vector<std::string> circle_names,
    std::vector<double> collar_s,
    std::vector<int> gamma_vertices,
    int level)
    : m_mesh(std::move(mesh))
    , m_labels(std::move(labels))
    , m_circle_names(std::move(circle_names))
    , m_collar_s(std::move(collar_s))
    , m_gamma(std::move(gamma_vertices))
    , m_level(level)
{
    analyze();
}

int LabeledSurfaceMesh::collar_rings() const
{
    return m_collars.empty() ? 0 : m_collars.front().half_rings();
}

int LabeledSurfaceMesh::find_circle(const std::string& name) const
{
    auto it = std::find(m_circle_names.begin(), m_circle_names.end(), name);
    return it == m_circle_names.end() ? -1 : static_cast<int>(it - m_circle_names.begin());
}

void LabeledSurfaceMesh::analyze()
{
    const int nv = m_mesh.num_vertices();
    const int nf = m_mesh.num_faces();
    m_mesh.validate(true);
    if (static_cast<int>(m_labels.size()) != nf) mesh_error("label count does not match faces");
    if (static_cast<int>(m_collar_s.size()) != nv) {
        mesh_error("collar_s count does not match vertices");
    }
    if (m_circle_names.empty()) mesh_error("mesh has no dividing circle");
    for (int f = 0; f < nf; ++f) {
        const FaceLabel& l = m_labels[f];
        const bool collar = l.region == Region::Collar;
        if (collar != (l.circle >= 0) ||
            l.circle >= static_cast<int>(m_circle_names.size())) {
            mesh_error("invalid label on face " + std::to_string(f));
        }
    }

    m_vertex_circle.assign(nv, -1);
    for (int f = 0; f < nf; ++f) {
        if (m_labels[f].region != Region::Collar) continue;
        for (int v : m_mesh.faces()[f]) {
            if (m_vertex_circle[v] >= 0 && m_vertex_circle[v] != m_labels[f].circle) {
                mesh_error("vertex " + std::to_string(v) + " belongs to two collars");
            }
            m_vertex_circle[v] = m_labels[f].circle;
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (m_vertex_circle[v] < 0 && has_collar_s(v)) {
            mesh_error("collar coordinate defined off the collars at vertex " + std::to_string(v));
        }
        if (m_vertex_circle[v] >= 0 && !has_collar_s(v)) {
            mesh_error("collar coordinate missing at vertex " + std::to_string(v));
        }
        if (has_collar_s(v) && !(m_collar_s[v] >= -1.0 && m_collar_s[v] <= 1.0)) {
            mesh_error("collar coordinate out of [-1, 1] at vertex " + std::to_string(v));
        }
    }

    m_collars.clear();
    for (int c = 0; c < static_cast<int>(m_circle_names.size()); ++c) analyze_collar(c);
    const int rings0 = m_collars.front().half_rings();
    for (const auto& col : m_collars) {
        if (col.half_rings() != rings0) mesh_error("collars have different ring counts");
    }

    // Gamma is exactly the union of the s = 0 rings.
    std::vector<int> expected;
    for (const auto& col : m_collars) {
        const auto& mid = col.rings[col.half_rings()];
        expected.insert(expected.end(), mid.begin(), mid.end());
    }
    std::sort(expected.begin(), expected.end());
    std::sort(m_gamma.begin(), m_gamma.end());
    if (m_gamma != expected) mesh_error("gamma vertices do not match the s = 0 collar rings");

    // Region faces may only touch the seam ring of their own side.
    for (int f = 0; f < nf; ++f) {
        const Region r = m_labels[f].region;
        if (r == Region::Collar) continue;
        const double seam = (r == Region::Minus) ? -1.0 : 1.0;
        for (int v : m_mesh.faces()[f]) {
            if (has_collar_s(v) && m_collar_s[v] != seam) {
                mesh_error(
                    std::string(r == Region::Minus ? "Minus" : "Plus") + " face " +
                    std::to_string(f) + " touches collar vertex " + std::to_string(v) +
                    " off its seam");
            }
        }
    }

    m_vertex_side.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
        if (has_collar_s(v)) {
            m_vertex_side[v] = m_collar_s[v] < 0.0 ? -1 : (m_collar_s[v] > 0.0 ? 1 : 0);
            continue;
        }
        int side = 0;
        for (int f : m_mesh.vertex_faces()[v]) {
            const int s = m_labels[f].region == Region::Minus ? -1 : 1;
            if (side != 0 && side != s) {
                mesh_error("Minus and Plus regions meet without a collar at vertex " +
                           std::to_string(v));
            }
            side = s;
        }
        m_vertex_side[v] = static_cast<int8_t>(side);
    }

    // Euler characteristic bookkeeping: collars contribute zero.
    std::vector<int> minus_faces, plus_faces;
    for (int f = 0; f < nf; ++f) {
        if (m_labels[f].region == Region::Minus) minus_faces.push_back(f);
        if (m_labels[f].region == Region::Plus) plus_faces.push_back(f);
    }
    if (minus_faces.empty() || plus_faces.empty()) {
        mesh_error("both Minus and Plus regions must be nonempty");
    }
    for (const auto& col : m_collars) {
        if (sub_euler_characteristic(m_mesh, col.faces) != 0) {
            mesh_error("collar " + m_circle_names[col.circle] + " is not a cylinder");
        }
    }
    m_euler_minus = sub_euler_characteristic(m_mesh, minus_faces);
    m_euler_plus = sub_euler_characteristic(m_mesh, plus_faces);
    if (m_mesh.euler_characteristic() != m_euler_minus + m_euler_plus) {
        mesh_error(
            "Euler characteristic additivity fails: chi(S) = " +
            std::to_string(m_mesh.euler_characteristic()) +
            ", chi(S-) + chi(S+) = " + std::to_string(m_euler_minus + m_euler_plus));
    }

    // Region components; each must reach a seam.
    auto count_region_components = [&](Region region) {
        UnionFind uf(nf);
        for (int e = 0; e < m_mesh.num_edges(); ++e) {
            const auto& ef = m_mesh.edge_faces(e);
            if (m_labels[ef[0]].region == region && m_labels[ef[1]].region == region) {
                uf.unite(ef[0], ef[1]);
            }
        }
        std::set<int> roots, seamed;
        for (int f = 0; f < nf; ++f) {
            if (m_labels[f].region != region) continue;
            roots.insert(uf.find(f));
            for (int v : m_mesh.faces()[f]) {
                if (has_collar_s(v)) seamed.insert(uf.find(f));
            }
        }
        if (roots != seamed) {
            mesh_error("a region component has no boundary circle");
        }
        return static_cast<int>(roots.size());
    };
    m_minus_components = count_region_components(Region::Minus);
    m_plus_components = count_region_components(Region::Plus);
}

void LabeledSurfaceMesh::analyze_collar(int circle)
{
    const std::string& name = m_circle_names[circle];
    CollarInfo info;
    info.circle = circle;
    for (int f = 0; f < m_mesh.num_faces(); ++f) {
        if (m_labels[f].region == Region::Collar && m_labels[f].circle == circle) {
            info.faces.push_back(f);
        }
    }
    if (info.faces.empty()) mesh_error("circle " + name + " has no collar faces");

    std::set<int> verts;
    for (int f : info.faces) {
        for (int v : m_mesh.faces()[f]) verts.insert(v);
    }
    std::map<double, std::vector<int>> by_s;
    for (int v : verts) by_s[m_collar_s[v]].push_back(v);
    const int nrings = static_cast<int>(by_s.size());
    if (nrings < 9 || nrings % 2 == 0) {
        mesh_error("collar " + name + " must have 2 * collar_rings + 1 rings with collar_rings >= 4");
    }
    std::map<double, int> ring_of_s;
    for (const auto& [s, vs] : by_s) {
        const int r = static_cast<int>(ring_of_s.size());
        ring_of_s[s] = r;
        info.ring_s.push_back(s);
    }
    if (info.ring_s.front() != -1.0 || info.ring_s.back() != 1.0 ||
        info.ring_s[nrings / 2] != 0.0) {
        mesh_error("collar " + name + " rings must span s = -1, 0, 1 exactly");
    }
    info.h_s = 2.0 / (nrings - 1);
    for (int r = 0; r + 1 < nrings; ++r) {
        if (std::abs(info.ring_s[r + 1] - info.ring_s[r] - info.h_s) > 1e-12) {
            mesh_error("collar " + name + " ring spacing is not uniform");
        }
    }

    auto ring = [&](int v) { return ring_of_s.at(m_collar_s[v]); };
    for (int f : info.faces) {
        const Tri& t = m_mesh.faces()[f];
        const int r0 = ring(t[0]), r1 = ring(t[1]), r2 = ring(t[2]);
        const int lo = std::min({r0, r1, r2});
        const int hi = std::max({r0, r1, r2});
        if (hi - lo != 1) {
            mesh_error(
                "collar coordinate not monotone along collar " + name + " at face " +
                std::to_string(f));
        }
    }

    const size_t n = by_s.begin()->second.size();
    for (const auto& [s, vs] : by_s) {
        if (vs.size() != n || n < 3) {
            mesh_error("collar coordinate not monotone along collar " + name +
                       " (rings have different vertex counts)");
        }
    }
    if (info.faces.size() != 2 * n * (nrings - 1)) {
        mesh_error("collar " + name + " is not a cylinder grid");
    }

    // Ring cycles and the direction of increasing t. In a positively oriented face with
    // side a->b on ring r and apex on ring r+1, t decreases from a to b.
    std::vector<std::map<int, std::vector<int>>> ring_adj(nrings);
    std::vector<std::pair<int, int>> increasing(nrings, {-1, -1});
    for (int f : info.faces) {
        const Tri& t = m_mesh.faces()[f];
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
            if (ring(a) != ring(b)) continue;
            const int r = ring(a);
            ring_adj[r][a].push_back(b);
            ring_adj[r][b].push_back(a);
            if (increasing[r].first < 0) {
                increasing[r] = ring(c) > r ? std::pair{b, a} : std::pair{a, b};
            }
        }
    }
    info.rings.assign(nrings, {});
    for (int r = 0; r < nrings; ++r) {
        for (auto& [v, nb] : ring_adj[r]) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            if (nb.size() != 2) {
                mesh_error("collar " + name + " ring " + std::to_string(r) + " is not a cycle");
            }
        }
        if (ring_adj[r].size() != n || increasing[r].first < 0) {
            mesh_error("collar " + name + " ring " + std::to_string(r) + " is not a cycle");
        }
        // Walk from the lowest index vertex in the direction of increasing t.
        const auto [p, q] = increasing[r];
        int start = ring_adj[r].begin()->first;
        int prev = -1, cur = p, nxt = q;
        // Find the successor of `start` by walking the cycle once from p.
        std::vector<int> order{p};
        while (nxt != p) {
            order.push_back(nxt);
            const auto& nb = ring_adj[r].at(nxt);
            prev = cur;
            cur = nxt;
            nxt = nb[0] == prev ? nb[1] : nb[0];
        }
        if (order.size() != n) {
            mesh_error("collar " + name + " ring " + std::to_string(r) + " is not a cycle");
        }
        auto it = std::find(order.begin(), order.end(), start);
        std::rotate(order.begin(), it, order.end());
        info.rings[r] = std::move(order);
    }

    // Flatness: unfold into (s, t) and compare every edge length with the product metric.
    const auto& len = m_mesh.edge_lengths();
    auto length = [&](int a, int b) { return len[m_mesh.find_edge(a, b)]; };
    info.h_t = length(info.rings[0][0], info.rings[0][1]);
    const double period = info.h_t * static_cast<double>(n);
    std::map<int, double> tcoord;
    for (size_t k = 0; k < n; ++k) tcoord[info.rings[0][k]] = info.h_t * static_cast<double>(k);
    for (int r = 0; r + 1 < nrings; ++r) {
        // Locate a face with a side on ring r and apex on ring r + 1.
        double t_apex = 0.0;
        int apex = -1;
        for (int f : info.faces) {
            const Tri& t = m_mesh.faces()[f];
            for (int k = 0; k < 3 && apex < 0; ++k) {
                const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
                if (ring(a) != r || ring(b) != r || ring(c) != r + 1) continue;
                const double ta = tcoord.at(a);
                double tb = tcoord.at(b);
                double dt = tb - ta;
                dt -= period * std::round(dt / period);
                tb = ta + dt;
                const double ca = length(c, a), cb = length(c, b);
                t_apex = 0.5 * (ta + tb) + (ca * ca - cb * cb) / (2.0 * (tb - ta));
                apex = c;
            }
            if (apex >= 0) break;
        }
        if (apex < 0) mesh_error("collar " + name + " is not a cylinder grid");
        const auto& next_ring = info.rings[r + 1];
        const size_t pos = std::find(next_ring.begin(), next_ring.end(), apex) - next_ring.begin();
        for (size_t k = 0; k < n; ++k) {
            const double offset = static_cast<double>(k) - static_cast<double>(pos);
            tcoord[next_ring[k]] = t_apex + info.h_t * offset;
        }
    }
    for (int f : info.faces) {
        const Tri& t = m_mesh.faces()[f];
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            const double ds = m_collar_s[b] - m_collar_s[a];
            double dt = tcoord.at(b) - tcoord.at(a);
            dt -= period * std::round(dt / period);
            const double expect = std::sqrt(ds * ds + dt * dt);
            const double actual = length(a, b);
            if (std::abs(actual - expect) > 1e-12 * expect) {
                mesh_error(
                    "collar " + name + " is not flat at face " + std::to_string(f) +
                    " (edge length " + std::to_string(actual) + " vs product metric " +
                    std::to_string(expect) + ")");
            }
        }
    }
    info.ring_t.assign(nrings, std::vector<double>(n));
    for (int r = 0; r < nrings; ++r) {
        for (size_t k = 0; k < n; ++k) info.ring_t[r][k] = tcoord.at(info.rings[r][k]);
    }
    m_collars.push_back(std::move(info));
}

// ---------------------------------------------------------------------------------------

int sub_euler_characteristic(const TriMesh& mesh, const std::vector<int>& faces)
{
    std::set<int> verts;
    std::set<int> edges;
    for (int f : faces) {
        for (int k = 0; k < 3; ++k) {
            verts.insert(mesh.faces()[f][k]);
            edges.insert(mesh.face_edge(f, k));
        }
    }
    return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(faces.size());
}

SubMesh extract_region(const LabeledSurfaceMesh& mesh, Region region)
{
    const TriMesh& m = mesh.mesh();
    SubMesh out;
    std::vector<int> local(m.num_vertices(), -1);
    for (int f = 0; f < m.num_faces(); ++f) {
        if (mesh.labels()[f].region != region) continue;
        out.global_faces.push_back(f);
        for (int v : m.faces()[f]) local[v] = 0;
    }
    if (out.global_faces.empty()) {
        throw Error(ErrorKind::InvalidArgument, "region has no faces");
    }
    for (int v = 0; v < m.num_vertices(); ++v) {
        if (local[v] == 0) {
            local[v] = static_cast<int>(out.to_global.size());
            out.to_global.push_back(v);
        }
    }
    std::vector<Vec3> pos;
    pos.reserve(out.to_global.size());
    for (int g : out.to_global) pos.push_back(m.positions()[g]);
    std::vector<Tri> faces;
    faces.reserve(out.global_faces.size());
    for (int f : out.global_faces) {
        const Tri& t = m.faces()[f];
        faces.push_back({local[t[0]], local[t[1]], local[t[2]]});
    }
    const auto& to_global = out.to_global;
    out.mesh = TriMesh(std::move(pos), std::move(faces), [&](int a, int b) {
        return m.edge_lengths()[m.find_edge(to_global[a], to_global[b])];
    });
    return out;
}

LabeledSurfaceMesh swap_sides(const LabeledSurfaceMesh& mesh)
{
    std::vector<FaceLabel> labels = mesh.labels();
    for (auto& l : labels) {
        if (l.region == Region::Minus) {
            l.region = Region::Plus;
        } else if (l.region == Region::Plus) {
            l.region = Region::Minus;
        }
    }
    std::vector<double> s = mesh.collar_s();
    for (double& x : s) {
        if (x == x) x = (x == 0.0) ? 0.0 : -x;
    }
    return LabeledSurfaceMesh(
        mesh.mesh(), std::move(labels), mesh.circle_names(), std::move(s),
        mesh.gamma_vertices(), mesh.level());
}

} // namespace nodaldiv
