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

#include <nodaldiv/generate.hpp>
#include <nodaldiv/mesh_io.hpp>

#include <cmath>
#include <map>
#include <sstream>

using namespace nodaldiv;

namespace {

std::string mesh_text(const LabeledSurfaceMesh& mesh)
{
    std::ostringstream out;
    write_mesh(out, mesh);
    return out.str();
}

LabeledSurfaceMesh from_text(const std::string& text)
{
    std::istringstream in(text);
    return read_mesh(in);
}

/// Message of the error thrown by fn, or "" if none.
template <typename Fn>
std::string error_of(Fn&& fn, ErrorKind* kind = nullptr)
{
    try {
        fn();
    } catch (const Error& e) {
        if (kind) *kind = e.kind();
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

SurfaceSpec spec_of(const std::string& text)
{
    std::istringstream in(text);
    return parse_surface_spec(in);
}

} // namespace

TEST_CASE("presets: topology of the decomposition")
{
    struct Row
    {
        const char* name;
        int level, chi, circles, chi_minus, chi_plus;
    };
    const Row rows[] = {
        {"sphere-equator", 0, 2, 1, 1, 1},
        {"torus-two-meridians", 0, 0, 2, 0, 0},
        {"genus2-separating", 1, -2, 1, -1, -1},
        {"sphere-two-circles", 0, 2, 2, 0, 2},
    };
    for (const Row& r : rows) {
        CAPTURE(r.name);
        const LabeledSurfaceMesh m = generate_preset(r.name, r.level);
        CHECK(m.mesh().euler_characteristic() == r.chi);
        CHECK(m.circle_names().size() == size_t(r.circles));
        CHECK(m.euler_minus() == r.chi_minus);
        CHECK(m.euler_plus() == r.chi_plus);
        CHECK(m.euler_minus() + m.euler_plus() == r.chi);
        CHECK(m.mesh().count_components() == 1);
        CHECK(m.level() == r.level);
        CHECK_NOTHROW(m.mesh().validate(true));
    }
    CHECK(preset_names().size() == 4);
}

TEST_CASE("presets: vertex count grows fourfold per level")
{
    for (const auto& name : preset_names()) {
        const double v0 = generate_preset(name, 0).mesh().num_vertices();
        const double v1 = generate_preset(name, 1).mesh().num_vertices();
        CAPTURE(name);
        CHECK(v1 / v0 > 3.5);
        CHECK(v1 / v0 < 4.5);
    }
}

TEST_CASE("presets: generation is deterministic")
{
    CHECK(mesh_text(generate_preset("genus2-separating", 0)) == mesh_text(generate_preset("genus2-separating", 0)));
}

TEST_CASE("collars are flat cylinders with uniform rings")
{
    const LabeledSurfaceMesh m = generate_preset("torus-two-meridians", 1);
    const TriMesh& mesh = m.mesh();
    REQUIRE(m.collars().size() == 2);
    for (const CollarInfo& c : m.collars()) {
        CHECK(c.rings.size() == size_t(2 * 8 * 2 + 1));
        CHECK(c.n() == 64);
        CHECK(c.ring_s.front() == -1.0);
        CHECK(c.ring_s.back() == 1.0);
        CHECK(c.ring_s[c.half_rings()] == 0.0);
        for (size_t r = 1; r < c.ring_s.size(); ++r) {
            CHECK(c.ring_s[r] - c.ring_s[r - 1] == doctest::Approx(c.h_s).epsilon(1e-14));
        }
        std::map<int, std::pair<double, double>> st;
        for (size_t r = 0; r < c.rings.size(); ++r) {
            for (int k = 0; k < c.n(); ++k) st[c.rings[r][k]] = {c.ring_s[r], c.ring_t[r][k]};
        }
        double worst = 0.0;
        for (int f : c.faces) {
            for (int k = 0; k < 3; ++k) {
                const int e = mesh.face_edge(f, k);
                const auto a = st.at(mesh.edges()[e][0]), b = st.at(mesh.edges()[e][1]);
                double dt = std::fmod(std::abs(a.second - b.second), c.circumference());
                dt = std::min(dt, c.circumference() - dt);
                const double expect = std::hypot(a.first - b.first, dt);
                worst = std::max(worst, std::abs(mesh.edge_lengths()[e] - expect) / expect);
            }
        }
        CHECK(worst < 1e-12);
    }
    for (int v : m.gamma_vertices()) {
        CHECK(m.collar_s()[v] == 0.0);
        CHECK(m.vertex_side(v) == 0);
    }
}

TEST_CASE("surface specs: examples")
{
    const auto sphere2 = build_from_spec(spec_of(
        "circle c1 = 16\ncircle c2 = 16\nminus = 0 : c1 c2\nplus = 0 : c1\nplus = 0 : c2\n"));
    CHECK(sphere2.mesh().euler_characteristic() == 2);
    CHECK(sphere2.euler_minus() == 0);
    CHECK(sphere2.euler_plus() == 2);
    CHECK(sphere2.plus_components() == 2);

    const auto genus2 = build_from_spec(spec_of("collar_rings = 4\ncircle c1 = 24\nminus = 1 : c1\nplus = 1 : c1\n"));
    CHECK(genus2.mesh().euler_characteristic() == -2);

    const auto disk = build_from_spec(spec_of("# comment\ncircle c1 = 8 # trailing\nminus = 0 : c1\nplus = 0 : c1\n"));
    CHECK(disk.mesh().euler_characteristic() == 2);
    CHECK(disk.collars().front().n() == 8);
}

TEST_CASE("surface specs: validation names the problem")
{
    ErrorKind kind{};
    std::string msg = error_of(
        [] { build_from_spec(spec_of("circle a = 16\ncircle b = 16\nminus = 0 : a b\nplus = 0 : a\n")); }, &kind);
    CHECK(kind == ErrorKind::InvalidSpec);
    CHECK(contains(msg, "circle b"));

    msg = error_of([] { spec_of("circle a = 6\nminus = 0 : a\nplus = 0 : a\n").validate(); });
    CHECK(contains(msg, "a"));
    CHECK(contains(msg, "8"));

    msg = error_of([] { spec_of("collar_rings = 3\ncircle a = 16\nminus = 0 : a\nplus = 0 : a\n").validate(); });
    CHECK(contains(msg, "collar_rings"));

    msg = error_of([] { generate_preset("sphere-equator", 7); });
    CHECK(contains(msg, "memory budget"));

    msg = error_of([] { generate_preset("klein-bottle", 0); }, &kind);
    CHECK(kind == ErrorKind::InvalidArgument);
    CHECK(contains(msg, "klein-bottle"));

    msg = error_of([] { spec_of("circle a = 16\nminus 0 : a\n"); }, &kind);
    CHECK(kind == ErrorKind::Parse);
    CHECK(contains(msg, "line 2"));

    msg = error_of([] { spec_of("colour = red\n"); }, &kind);
    CHECK(kind == ErrorKind::Parse);
    CHECK(contains(msg, "line 1"));
}

TEST_CASE("labeled OFF round trip")
{
    const LabeledSurfaceMesh m = generate_preset("sphere-two-circles", 0);
    const std::string text = mesh_text(m);
    const LabeledSurfaceMesh back = from_text(text);
    CHECK(back.mesh().faces() == m.mesh().faces());
    CHECK(back.mesh().edge_lengths() == m.mesh().edge_lengths());
    CHECK(back.labels() == m.labels());
    CHECK(back.circle_names() == m.circle_names());
    CHECK(back.gamma_vertices() == m.gamma_vertices());
    CHECK(back.level() == m.level());
    for (int v = 0; v < m.mesh().num_vertices(); ++v) {
        CHECK(back.mesh().positions()[v] == m.mesh().positions()[v]);
        if (m.has_collar_s(v)) CHECK(back.collar_s()[v] == m.collar_s()[v]);
        else CHECK_FALSE(back.has_collar_s(v));
    }
    CHECK(mesh_text(back) == text);
}

TEST_CASE("labeled OFF validation")
{
    const LabeledSurfaceMesh m = generate_preset("sphere-equator", 0);
    const std::string text = mesh_text(m);

    SUBCASE("boundary edge")
    {
        // Drop the last face from the face block and from #LABELS.
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        int lineno = 0;
        const int nv = m.mesh().num_vertices(), nf = m.mesh().num_faces();
        const int last_face = 2 + nv + nf - 1; // zero-based line index
        bool in_labels = false;
        int label_index = 0;
        while (std::getline(in, line)) {
            if (lineno == 1) line = std::to_string(nv) + " " + std::to_string(nf - 1) + " 0";
            if (line == "#LABELS") in_labels = true;
            else if (!line.empty() && line[0] == '#') in_labels = false;
            else if (in_labels && label_index++ == nf - 1) line.clear();
            if (lineno != last_face && !(in_labels && line.empty())) out << line << '\n';
            ++lineno;
        }
        ErrorKind kind{};
        const std::string msg = error_of([&] { from_text(out.str()); }, &kind);
        CHECK(kind == ErrorKind::InvalidMesh);
        CHECK(contains(msg, "not a closed manifold"));
    }

    SUBCASE("collar coordinate not monotone")
    {
        const CollarInfo& c = m.collars().front();
        std::map<int, double> replace;
        for (int v : c.rings[1]) replace[v] = c.ring_s[2];
        for (int v : c.rings[2]) replace[v] = c.ring_s[1];
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        bool in_s = false;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '#') in_s = line == "#COLLAR_S";
            else if (in_s) {
                std::istringstream ls(line);
                int v;
                double s;
                ls >> v >> s;
                if (replace.count(v)) line = std::to_string(v) + " " + format_double(replace[v]);
            }
            out << line << '\n';
        }
        const std::string msg = error_of([&] { from_text(out.str()); });
        CHECK(contains(msg, "collar coordinate not monotone"));
    }

    SUBCASE("parse errors carry line numbers")
    {
        std::string bad = text;
        const auto pos = bad.find('\n', bad.find('\n') + 1); // end of line 2
        bad.insert(pos + 1, "1.0 oops 2.0\n");
        ErrorKind kind{};
        const std::string msg = error_of([&] { from_text(bad); }, &kind);
        CHECK(kind == ErrorKind::Parse);
        CHECK(contains(msg, "line 3"));

        const std::string unknown = text + "#WHATEVER\n";
        CHECK(contains(error_of([&] { from_text(unknown); }), "WHATEVER"));
    }
}

TEST_CASE("intrinsic triangle inequality is enforced")
{
    const TriMesh bad({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                      {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}},
                      [](int a, int b) { return (a == 0 && b == 1) ? 5.0 : 1.0; });
    const std::string msg = error_of([&] { bad.validate(true); });
    CHECK(contains(msg, "triangle inequality"));
    const TriMesh tet = TriMesh::from_positions(
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}});
    CHECK_NOTHROW(tet.validate(true));
    CHECK(tet.euler_characteristic() == 2);
}

TEST_CASE("swapping sides mirrors the decomposition")
{
    const LabeledSurfaceMesh m = generate_preset("sphere-two-circles", 0);
    const LabeledSurfaceMesh s = swap_sides(m);
    CHECK(s.euler_minus() == m.euler_plus());
    CHECK(s.euler_plus() == m.euler_minus());
    for (int v = 0; v < m.mesh().num_vertices(); ++v) {
        CHECK(s.vertex_side(v) == -m.vertex_side(v));
        if (m.has_collar_s(v)) CHECK(s.collar_s()[v] == -m.collar_s()[v]);
    }
}

TEST_CASE("field files")
{
    Field f{true, {1.0, -2.5, 1.0 / 3.0}};
    std::ostringstream out;
    write_field(out, f);
    CHECK(out.str().rfind("#FACES\n", 0) == 0);
    std::istringstream in(out.str());
    const Field back = read_field(in);
    CHECK(back.on_faces);
    CHECK(back.values == f.values);

    std::istringstream gap("0 1.0\n2 3.0\n");
    CHECK(error_of([&] { read_field(gap); }).size() > 0);
    CHECK(format_double(0.1) == "0.10000000000000001");
}
