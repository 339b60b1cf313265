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
#include <nodaldiv/verify.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace nodaldiv;

namespace {

struct Fixture
{
    LabeledSurfaceMesh mesh = generate_preset("sphere-equator", 0);
    ConstructionResult result = construct(mesh);
};

const Fixture& fixture()
{
    static const Fixture f;
    return f;
}

std::set<std::string> failing(const VerificationReport& rep)
{
    std::set<std::string> out;
    for (const auto& c : rep.checks) {
        if (!c.pass) out.insert(c.name);
    }
    return out;
}

const CheckRecord& get(const VerificationReport& rep, const std::string& name)
{
    const CheckRecord* c = rep.find(name);
    REQUIRE(c != nullptr);
    return *c;
}

} // namespace

TEST_CASE("tolerance schedule")
{
    CHECK(eigen_tolerance(0) == doctest::Approx(0.2));
    CHECK(eigen_tolerance(1) == doctest::Approx(0.1));
    CHECK(eigen_tolerance(2) == doctest::Approx(0.05));
}

TEST_CASE("constructed fields pass every check")
{
    const auto& fx = fixture();
    const auto rep = verify(fx.mesh, fx.result);
    CHECK(rep.all_pass());
    const std::vector<std::string> expected{
        "nodal_set", "positivity", "contact_condition", "eigen_identity", "lemma_main.i",
        "lemma_main.ii", "lemma_main.iii", "lemma_main.iv", "lemma_main.v", "adaptedness_reduction"};
    for (const auto& name : expected) {
        CAPTURE(name);
        CHECK(get(rep, name).pass);
    }
    CHECK(rep.eigen_residual == doctest::Approx(0.1088).epsilon(0.01));
    CHECK(rep.eigen_residual < eigen_tolerance(0));
    CHECK(rep.min_omega > 0.0);
    CHECK(rep.min_contact > 0.0);
    CHECK(rep.residual_field.size() == static_cast<size_t>(fx.mesh.mesh().num_vertices()));
}

TEST_CASE("faults are caught and located")
{
    const auto& fx = fixture();
    const int v = 100;

    SUBCASE("sign flip")
    {
        auto r = fx.result;
        fault::flip_sign(r, v);
        const auto rep = verify(fx.mesh, r);
        CHECK(failing(rep).count("nodal_set"));
        CHECK(get(rep, "nodal_set").worst == v);
        CHECK(get(rep, "nodal_set").element == Element::Vertex);
    }
    SUBCASE("degenerate Omega")
    {
        auto r = fx.result;
        fault::zero_omega(r, v);
        const auto rep = verify(fx.mesh, r);
        CHECK(get(rep, "positivity").worst == v);
        CHECK(get(rep, "positivity").element == Element::Face);
        CHECK(std::isinf(get(rep, "eigen_identity").value));
    }
    SUBCASE("u vanishes on a whole ring")
    {
        auto r = fx.result;
        fault::zero_u_ring(fx.mesh, r, v);
        const auto rep = verify(fx.mesh, r);
        CHECK(get(rep, "contact_condition").worst == v);
        const auto& nodal = get(rep, "nodal_set");
        CHECK_FALSE(nodal.pass);
        CHECK(r.u.values[nodal.worst] == 0.0);
        CHECK(fx.mesh.vertex_side(nodal.worst) != 0);
    }
    SUBCASE("constant u")
    {
        auto r = fx.result;
        fault::constant_u(r);
        const auto f = failing(verify(fx.mesh, r));
        CHECK(f.count("nodal_set"));
        CHECK(f.count("contact_condition"));
        CHECK(f.count("eigen_identity"));
    }
    SUBCASE("F exceeds the half period")
    {
        auto r = fx.result;
        fault::scale_F(r, 1.5);
        const auto rep = verify(fx.mesh, r);
        CHECK(failing(rep) == std::set<std::string>{"lemma_main.i"});
        const auto& rec = get(rep, "lemma_main.i");
        CHECK(std::abs(r.F.values[rec.worst]) == doctest::Approx(1.5 * 0.95 * std::numbers::pi / 2));
    }
    SUBCASE("plus collar not mirrored")
    {
        auto r = fx.result;
        fault::remove_mirroring(fx.mesh, r);
        const auto f = failing(verify(fx.mesh, r));
        for (const char* n : {"lemma_main.ii", "lemma_main.iii", "lemma_main.iv", "lemma_main.v"}) {
            CAPTURE(n);
            CHECK(f.count(n));
        }
    }
    SUBCASE("negative Omega on a sampled face")
    {
        auto r = fx.result;
        const int face = fault::negate_sampled_omega(r);
        CHECK(face == sample_faces(fx.mesh.mesh().num_faces(), 256, 7).front());
        const auto rep = verify(fx.mesh, r);
        CHECK(get(rep, "adaptedness_reduction").worst == face);
        CHECK(get(rep, "adaptedness_reduction").element == Element::Face);
        CHECK(get(rep, "positivity").worst == face);
    }
}

TEST_CASE("face sampling is seeded and distinct")
{
    const auto a = sample_faces(1000, 256, 7);
    CHECK(a.size() == 256);
    CHECK(std::set<int>(a.begin(), a.end()).size() == a.size());
    CHECK(a == sample_faces(1000, 256, 7));
    CHECK(a != sample_faces(1000, 256, 8));
    CHECK(sample_faces(10, 256, 7).size() == 10);
}

TEST_CASE("sweep summary")
{
    auto row = [](int level, double residual, double interior) {
        SweepRow r;
        r.level = level;
        r.h = 0.125 / (1 << level);
        r.residual = residual;
        r.interior_residual = interior;
        r.min_omega = 1.0;
        r.min_contact = 1.0;
        return r;
    };
    auto good = summarize_sweep({row(0, 0.1, 0.1), row(1, 0.05, 0.04), row(2, 0.02, 0.01)});
    CHECK(good.monotone.pass);
    CHECK(good.interior_order == doctest::Approx(2.0));
    CHECK(good.monotone.value == doctest::Approx(std::log2(2.5)));

    auto stalled = summarize_sweep({row(0, 0.1, 0.1), row(1, 0.1, 0.05)});
    CHECK_FALSE(stalled.monotone.pass);
    CHECK(stalled.monotone.worst == 1);

    std::vector<SweepRow> rows{row(0, 0.1, 0.1), row(1, 0.05, 0.05)};
    rows[1].min_omega = 0.4;
    auto collapse = summarize_sweep(rows);
    CHECK_FALSE(collapse.monotone.pass);
    CHECK(collapse.monotone.detail.find("floors") != std::string::npos);
}

TEST_CASE("report keys")
{
    const auto& fx = fixture();
    auto rep = verify(fx.mesh, fx.result);
    rep.sweep = summarize_sweep({SweepRow{0, 0.125, 0.2, 1, 1, 0, 0.1}, SweepRow{1, 0.0625, 0.1, 1, 1, 0, 0.05}}).rows;
    std::ostringstream os;
    write_report(os, rep);
    std::istringstream in(os.str());
    const KeyValues kv = read_key_values(in);
    auto has = [&](const std::string& key) {
        for (const auto& [k, v] : kv) {
            if (k == key) return true;
        }
        return false;
    };
    for (const char* key :
         {"report.level", "report.seed", "report.sample_count", "check.nodal_set.pass",
          "check.positivity.worst", "check.eigen_identity.value", "check.lemma_main.v.tol",
          "summary.eigen_residual", "summary.min_Omega", "summary.all_pass", "param.C",
          "param.epsilon", "sweep.row.0", "sweep.row.1"}) {
        CAPTURE(key);
        CHECK(has(key));
    }

    std::ostringstream csv;
    write_sweep_csv(csv, rep.sweep);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "level,h,residual,min_omega,min_contact,seam_worst,interior_residual");
    int count = 0;
    for (std::string line; std::getline(lines, line);) ++count;
    CHECK(count == 2);
}
