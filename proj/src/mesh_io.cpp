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

#include <nodaldiv/mesh_io.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace nodaldiv {

namespace {

uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

class LineReader
{
public:
    explicit LineReader(std::istream& in)
        : m_in(in)
    {}

    /// Next non-blank line, trimmed. Returns false at end of input.
    bool next(std::string& line)
    {
        while (std::getline(m_in, line)) {
            ++m_lineno;
            const auto a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            const auto b = line.find_last_not_of(" \t\r");
            line = line.substr(a, b - a + 1);
            return true;
        }
        return false;
    }

    Error error(const std::string& msg) const
    {
        return Error(ErrorKind::Parse, "line " + std::to_string(m_lineno) + ": " + msg);
    }

private:
    std::istream& m_in;
    int m_lineno = 0;
};

std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

double parse_double(const LineReader& r, const std::string& s)
{
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) throw r.error("bad number '" + s + "'");
    return v;
}

long parse_int(const LineReader& r, const std::string& s)
{
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE) throw r.error("bad integer '" + s + "'");
    return v;
}

int parse_index(const LineReader& r, const std::string& s, int count, const char* what)
{
    const long v = parse_int(r, s);
    if (v < 0 || v >= count) throw r.error(std::string(what) + " index " + s + " out of range");
    return static_cast<int>(v);
}

} // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_mesh(std::ostream& out, const LabeledSurfaceMesh& lm)
{
    const TriMesh& m = lm.mesh();
    out << "OFF\n" << m.num_vertices() << ' ' << m.num_faces() << " 0\n";
    for (const Vec3& p : m.positions()) {
        out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2])
            << '\n';
    }
    for (const Tri& t : m.faces()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "#LABELS\n";
    for (const FaceLabel& l : lm.labels()) {
        switch (l.region) {
        case Region::Minus: out << "M\n"; break;
        case Region::Plus: out << "P\n"; break;
        case Region::Collar: out << "C:" << lm.circle_names()[l.circle] << '\n'; break;
        }
    }
    out << "#COLLAR_S\n";
    for (int v = 0; v < m.num_vertices(); ++v) {
        if (lm.has_collar_s(v)) out << v << ' ' << format_double(lm.collar_s()[v]) << '\n';
    }
    out << "#GAMMA\n";
    for (int v : lm.gamma_vertices()) out << v << '\n';
    out << "#EDGE_LENGTHS\n";
    for (int e = 0; e < m.num_edges(); ++e) {
        out << m.edges()[e][0] << ' ' << m.edges()[e][1] << ' '
            << format_double(m.edge_lengths()[e]) << '\n';
    }
    out << "#LEVEL\n" << lm.level() << '\n';
}

LabeledSurfaceMesh read_mesh(std::istream& in)
{
    LineReader r(in);
    std::string line;
    if (!r.next(line) || line != "OFF") throw r.error("expected OFF header");
    if (!r.next(line)) throw r.error("missing element counts");
    auto counts = tokens(line);
    if (counts.size() < 2) throw r.error("expected vertex and face counts");
    const long nv = parse_int(r, counts[0]);
    const long nf = parse_int(r, counts[1]);
    if (nv <= 0 || nf <= 0) throw r.error("mesh must have vertices and faces");

    std::vector<Vec3> positions(nv);
    for (long v = 0; v < nv; ++v) {
        if (!r.next(line)) throw r.error("unexpected end of vertex block");
        auto t = tokens(line);
        if (t.size() != 3) throw r.error("vertex line needs 3 coordinates");
        for (int k = 0; k < 3; ++k) positions[v][k] = parse_double(r, t[k]);
    }
    const int nvi = static_cast<int>(nv);
    std::vector<Tri> faces(nf);
    for (long f = 0; f < nf; ++f) {
        if (!r.next(line)) throw r.error("unexpected end of face block");
        auto t = tokens(line);
        if (t.size() != 4 || t[0] != "3") throw r.error("only triangles are supported");
        for (int k = 0; k < 3; ++k) faces[f][k] = parse_index(r, t[k + 1], nvi, "vertex");
    }

    std::vector<FaceLabel> labels;
    std::vector<std::string> names;
    std::map<std::string, int> name_index;
    std::vector<double> collar_s(nv, LabeledSurfaceMesh::kUndefined);
    std::vector<int> gamma;
    std::map<uint64_t, double> lengths;
    bool have_lengths = false;
    int level = 0;
    std::string section;
    while (r.next(line)) {
        if (line.front() == '#') {
            section = tokens(line).front();
            if (section == "#EDGE_LENGTHS") have_lengths = true;
            if (section != "#LABELS" && section != "#COLLAR_S" && section != "#GAMMA" &&
                section != "#EDGE_LENGTHS" && section != "#LEVEL") {
                throw r.error("unknown section " + section);
            }
            continue;
        }
        auto t = tokens(line);
        if (section == "#LABELS") {
            for (const auto& tok : t) {
                if (tok == "M") {
                    labels.push_back({Region::Minus, -1});
                } else if (tok == "P") {
                    labels.push_back({Region::Plus, -1});
                } else if (tok.size() > 2 && tok.compare(0, 2, "C:") == 0) {
                    const std::string name = tok.substr(2);
                    auto [it, inserted] = name_index.try_emplace(name, static_cast<int>(names.size()));
                    if (inserted) names.push_back(name);
                    labels.push_back({Region::Collar, it->second});
                } else {
                    throw r.error("bad face label '" + tok + "'");
                }
            }
        } else if (section == "#COLLAR_S") {
            if (t.size() != 2) throw r.error("expected 'vertex value'");
            collar_s[parse_index(r, t[0], nvi, "vertex")] = parse_double(r, t[1]);
        } else if (section == "#GAMMA") {
            for (const auto& tok : t) gamma.push_back(parse_index(r, tok, nvi, "vertex"));
        } else if (section == "#EDGE_LENGTHS") {
            if (t.size() != 3) throw r.error("expected 'a b length'");
            const int a = parse_index(r, t[0], nvi, "vertex");
            const int b = parse_index(r, t[1], nvi, "vertex");
            lengths[edge_key(a, b)] = parse_double(r, t[2]);
        } else if (section == "#LEVEL") {
            if (t.size() != 1) throw r.error("expected a level");
            level = static_cast<int>(parse_int(r, t[0]));
        } else {
            throw r.error("data outside of a section");
        }
    }
    if (static_cast<long>(labels.size()) != nf) {
        throw Error(ErrorKind::Parse, "#LABELS has " + std::to_string(labels.size()) +
                                          " entries for " + std::to_string(nf) + " faces");
    }

    TriMesh mesh;
    if (have_lengths) {
        mesh = TriMesh(std::move(positions), std::move(faces), [&](int a, int b) {
            auto it = lengths.find(edge_key(a, b));
            if (it == lengths.end()) {
                throw Error(ErrorKind::Parse, "#EDGE_LENGTHS misses edge " + std::to_string(a) +
                                                  " " + std::to_string(b));
            }
            return it->second;
        });
        if (static_cast<int>(lengths.size()) != mesh.num_edges()) {
            throw Error(ErrorKind::Parse, "#EDGE_LENGTHS lists edges that are not in the mesh");
        }
    } else {
        mesh = TriMesh::from_positions(std::move(positions), std::move(faces));
    }
    return LabeledSurfaceMesh(
        std::move(mesh), std::move(labels), std::move(names), std::move(collar_s),
        std::move(gamma), level);
}

void save_mesh(const LabeledSurfaceMesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    write_mesh(out, mesh);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

LabeledSurfaceMesh load_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_mesh(in);
}

void write_field(std::ostream& out, const Field& field)
{
    if (field.on_faces) out << "#FACES\n";
    for (size_t i = 0; i < field.values.size(); ++i) {
        out << i << ' ' << format_double(field.values[i]) << '\n';
    }
}

Field read_field(std::istream& in)
{
    LineReader r(in);
    Field field;
    std::string line;
    bool first = true;
    while (r.next(line)) {
        if (first && line == "#FACES") {
            field.on_faces = true;
            first = false;
            continue;
        }
        first = false;
        auto t = tokens(line);
        if (t.size() != 2) throw r.error("expected 'index value'");
        const long idx = parse_int(r, t[0]);
        if (idx != static_cast<long>(field.values.size())) throw r.error("indices must be consecutive from 0");
        field.values.push_back(parse_double(r, t[1]));
    }
    return field;
}

void save_field(const Field& field, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    write_field(out, field);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

Field load_field(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_field(in);
}

void write_key_values(std::ostream& out, const KeyValues& kv)
{
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

KeyValues read_key_values(std::istream& in)
{
    LineReader r(in);
    KeyValues kv;
    std::string line;
    while (r.next(line)) {
        if (line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw r.error("expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

} // namespace nodaldiv
