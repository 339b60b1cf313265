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

#include "run_config.hpp"

#include <nodaldiv/nodaldiv.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;
using nodaldiv::cli::ConfigError;
using nodaldiv::cli::RunConfig;

namespace {

enum Exit { kPass = 0, kVerifyFailed = 1, kConstructionFailed = 2, kInputError = 3 };

/// Raised on a failing library call; carries the exit code.
struct Failure
{
    int code;
    std::string message;
};

int exit_code(nd_status s)
{
    switch (s) {
    case ND_OK: return kPass;
    case ND_ERR_CONSTRUCTION:
    case ND_ERR_SOLVER:
    case ND_ERR_INTERNAL: return kConstructionFailed;
    default: return kInputError;
    }
}

void check(nd_status s)
{
    if (s != ND_OK) throw Failure{exit_code(s), nd_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle
{
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};
using Mesh = Handle<nd_mesh, nd_mesh_free>;
using Result = Handle<nd_result, nd_result_free>;
using Report = Handle<nd_report, nd_report_free>;

struct Paths
{
    std::string mesh;
    std::string fields;
    std::string report;
};

/// Flags shared by every subcommand. Each given flag overrides the config file and environment.
struct Flags
{
    std::string config_path;
    RunConfig values;
    std::string smoothing;
    std::string sweep;
    Paths paths;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

    void add(CLI::App* app, bool with_sweep)
    {
        app->add_option("-c,--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
        bind(app->add_option("--preset", values.preset, "Surface preset"), [this](RunConfig& c) {
            c.preset = values.preset;
            c.spec_file.clear();
        });
        bind(app->add_option("--spec", values.spec_file, "Surface description file"),
             [this](RunConfig& c) { c.spec_file = values.spec_file; });
        bind(app->add_option("--level", values.level, "Refinement level"), [this](RunConfig& c) { c.level = values.level; });
        bind(app->add_option("--collar-rings", values.collar_rings, "Rings per half collar at level 0"),
             [this](RunConfig& c) { c.collar_rings = values.collar_rings; });
        bind(app->add_option("--rho0", values.rho0, "Poisson source amplitude"), [this](RunConfig& c) { c.rho0 = values.rho0; });
        bind(app->add_option("--margin", values.margin, "Margin below pi/2 for max |F|"),
             [this](RunConfig& c) { c.margin = values.margin; });
        bind(app->add_option("--smoothing", smoothing, "Seam smoothing on|off")->check(CLI::IsMember({"on", "off"})),
             [this](RunConfig& c) { c.smoothing = smoothing == "on"; });
        bind(app->add_option("--seed", values.seed, "Sampling seed"), [this](RunConfig& c) { c.seed = values.seed; });
        bind(app->add_option("--samples", values.sample_count, "Faces sampled by the adaptedness check"),
             [this](RunConfig& c) { c.sample_count = values.sample_count; });
        bind(app->add_option("--eigen-tol", values.eigen_tol, "Override the eigen residual tolerance"),
             [this](RunConfig& c) { c.eigen_tol = values.eigen_tol; });
        bind(app->add_option("-o,--out", values.output_dir, "Output directory"),
             [this](RunConfig& c) { c.output_dir = values.output_dir; });
        if (with_sweep) {
            bind(app->add_option("--sweep", sweep, "Level range a..b"), [this](RunConfig& c) {
                nodaldiv::cli::parse_level_range(sweep, c.sweep_lo, c.sweep_hi);
            });
        }
        app->add_option("--mesh", paths.mesh, "Mesh file (default <out>/mesh.off)");
        app->add_option("--fields", paths.fields, "Field directory (default <out>/fields)");
        app->add_option("--report", paths.report, "Report file (default <out>/report.txt)");
    }

    void bind(CLI::Option* opt, std::function<void(RunConfig&)> apply) { overrides.emplace_back(opt, std::move(apply)); }

    bool given(const std::string& name) const
    {
        for (const auto& [opt, fn] : overrides) {
            if (opt->get_name() == name && opt->count() > 0) return true;
        }
        return false;
    }

    RunConfig resolve() const
    {
        RunConfig c;
        if (!config_path.empty()) nodaldiv::cli::load_config(config_path, c);
        if (const char* env = std::getenv("NODALDIV_OUT"); env && *env) c.output_dir = env;
        for (const auto& [opt, fn] : overrides) {
            if (opt->count() > 0) fn(c);
        }
        c.validate();
        return c;
    }

    Paths resolve_paths(const RunConfig& c) const
    {
        Paths p = paths;
        const fs::path out(c.output_dir);
        if (p.mesh.empty()) p.mesh = (out / "mesh.off").string();
        if (p.fields.empty()) p.fields = (out / "fields").string();
        if (p.report.empty()) p.report = (out / "report.txt").string();
        return p;
    }
};

nd_construct_options construct_options(const RunConfig& c)
{
    nd_construct_options o;
    nd_construct_options_init(&o);
    o.rho0 = c.rho0;
    o.margin = c.margin;
    o.smoothing = c.smoothing ? 1 : 0;
    o.max_retries = c.max_retries;
    o.blend_width = c.blend_width;
    return o;
}

nd_verify_options verify_options(const RunConfig& c)
{
    nd_verify_options o;
    nd_verify_options_init(&o);
    o.sample_count = c.sample_count;
    o.seed = c.seed;
    o.eigen_tol = c.eigen_tol;
    return o;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure{kInputError, "cannot create " + dir.string() + ": " + ec.message()};
}

void ensure_parent(const std::string& file)
{
    const fs::path parent = fs::path(file).parent_path();
    if (!parent.empty()) ensure_dir(parent);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Failure{kInputError, "cannot open " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void build_mesh(const RunConfig& c, bool level_given, bool rings_given, Mesh& mesh)
{
    if (c.spec_file.empty()) {
        check(nd_mesh_generate_preset(c.preset.c_str(), c.level, c.collar_rings, mesh.out()));
        return;
    }
    std::string text = read_file(c.spec_file);
    // Later keys win, so explicit overrides are appended.
    if (level_given) text += "\nrefinement_level = " + std::to_string(c.level) + "\n";
    if (rings_given) text += "\ncollar_rings = " + std::to_string(c.collar_rings) + "\n";
    check(nd_mesh_from_spec_text(text.c_str(), mesh.out()));
}

void print_mesh_summary(const nd_mesh* mesh)
{
    nd_mesh_info info;
    check(nd_mesh_get_info(mesh, &info));
    std::printf("vertices %d  edges %d  faces %d  chi %d\n", info.vertices, info.edges, info.faces, info.euler);
    std::printf("S- chi %d  S+ chi %d  circles %d  Gamma vertices %d  level %d\n", info.euler_minus,
                info.euler_plus, info.circles, info.gamma_vertices, info.level);
}

int print_report(const nd_report* report)
{
    const size_t n = nd_report_check_count(report);
    int failed = 0;
    for (size_t i = 0; i < n; ++i) {
        nd_check c;
        check(nd_report_get_check(report, i, &c));
        const char* element = c.element == ND_ELEMENT_VERTEX ? "vertex" : c.element == ND_ELEMENT_FACE ? "face" : "";
        std::printf("%s  %-24s value %.6g  tol %.6g", c.pass ? "PASS" : "FAIL", c.name, c.value, c.tol);
        if (*element) std::printf("  %s %d", element, c.worst);
        std::printf("\n");
        if (!c.pass) {
            ++failed;
            if (c.detail && *c.detail) std::printf("      %s\n", c.detail);
        }
    }
    nd_summary s;
    check(nd_report_get_summary(report, &s));
    std::printf("eigen residual %.6g (interior %.6g, seam strip %.6g)\n", s.eigen_residual, s.interior_residual,
                s.seam_residual);
    if (failed) std::printf("%d check(s) failed\n", failed);
    else std::printf("all checks passed\n");
    return failed ? kVerifyFailed : kPass;
}

int run_sweep(const RunConfig& c, const Paths& paths)
{
    if (!c.spec_file.empty()) throw Failure{kInputError, "sweeps run on presets only"};
    Report report;
    const auto co = construct_options(c);
    const auto vo = verify_options(c);
    check(nd_sweep(c.preset.c_str(), c.sweep_lo, c.sweep_hi, c.collar_rings, &co, &vo, report.out()));
    ensure_parent(paths.report);
    check(nd_report_write(report.get(), paths.report.c_str()));
    const std::string csv = (fs::path(paths.report).parent_path() / "sweep.csv").string();
    check(nd_report_write_csv(report.get(), csv.c_str()));
    std::printf("levels %d..%d of %s\n", c.sweep_lo, c.sweep_hi, c.preset.c_str());
    nd_summary s;
    check(nd_report_get_summary(report.get(), &s));
    const int code = print_report(report.get());
    std::printf("interior order (finest pair) %.3f\nreport %s\ncsv %s\n", s.interior_order, paths.report.c_str(), csv.c_str());
    return code;
}

int cmd_generate(const Flags& flags)
{
    const RunConfig c = flags.resolve();
    const Paths paths = flags.resolve_paths(c);
    Mesh mesh;
    build_mesh(c, flags.given("--level"), flags.given("--collar-rings"), mesh);
    ensure_parent(paths.mesh);
    check(nd_mesh_save(mesh.get(), paths.mesh.c_str()));
    print_mesh_summary(mesh.get());
    std::printf("mesh %s\n", paths.mesh.c_str());
    return kPass;
}

int cmd_construct(const Flags& flags)
{
    const RunConfig c = flags.resolve();
    const Paths paths = flags.resolve_paths(c);
    Mesh mesh;
    check(nd_mesh_load(paths.mesh.c_str(), mesh.out()));
    Result result;
    const auto co = construct_options(c);
    check(nd_construct(mesh.get(), &co, result.out()));
    for (size_t i = 0; const char* line = nd_result_log_line(result.get(), i); ++i) std::printf("%s\n", line);
    ensure_dir(paths.fields);
    check(nd_result_save(result.get(), paths.fields.c_str()));
    std::fputs(read_file((fs::path(paths.fields) / "params.txt").string()).c_str(), stdout);
    std::printf("fields %s\n", paths.fields.c_str());
    return kPass;
}

int cmd_verify(const Flags& flags)
{
    const RunConfig c = flags.resolve();
    const Paths paths = flags.resolve_paths(c);
    if (flags.given("--sweep")) return run_sweep(c, paths);
    Mesh mesh;
    check(nd_mesh_load(paths.mesh.c_str(), mesh.out()));
    Result result;
    check(nd_result_load(mesh.get(), paths.fields.c_str(), result.out()));
    Report report;
    const auto vo = verify_options(c);
    check(nd_verify(mesh.get(), result.get(), &vo, report.out()));
    ensure_parent(paths.report);
    check(nd_report_write(report.get(), paths.report.c_str()));
    const int code = print_report(report.get());
    std::printf("report %s\n", paths.report.c_str());
    return code;
}

int cmd_report(const Flags& flags, const std::string& file)
{
    const RunConfig c = flags.resolve();
    const std::string path = !file.empty() ? file : flags.resolve_paths(c).report;
    std::istringstream in(read_file(path));
    std::string line;
    bool all_pass = false, seen = false;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
        if (key.rfind("check.", 0) == 0 && key.size() > 5 && key.ends_with(".pass")) {
            std::printf("%s  %s\n", value == "true" ? "PASS" : "FAIL", key.substr(6, key.size() - 11).c_str());
        } else if (key.rfind("summary.", 0) == 0 || key.rfind("sweep.", 0) == 0) {
            std::printf("%s = %s\n", key.c_str(), value.c_str());
        }
        if (key == "summary.all_pass") {
            seen = true;
            all_pass = value == "true";
        }
    }
    if (!seen) throw Failure{kInputError, path + ": not a report file"};
    return all_pass ? kPass : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nodal-set dividing construction: generate, construct and verify"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nd_version());

    Flags gen, con, ver, swp, rep;
    std::string report_file;
    auto* g = app.add_subcommand("generate", "Build a labeled surface mesh");
    gen.add(g, false);
    auto* k = app.add_subcommand("construct", "Build F, u and Omega on a mesh");
    con.add(k, false);
    auto* v = app.add_subcommand("verify", "Run every check on constructed fields");
    ver.add(v, true);
    auto* s = app.add_subcommand("sweep", "Full pipeline over a range of levels");
    swp.add(s, true);
    auto* r = app.add_subcommand("report", "Summarize a report file");
    rep.add(r, false);
    r->add_option("file", report_file, "Report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    try {
        if (g->parsed()) return cmd_generate(gen);
        if (k->parsed()) return cmd_construct(con);
        if (v->parsed()) return cmd_verify(ver);
        if (s->parsed()) return run_sweep(swp.resolve(), swp.resolve_paths(swp.resolve()));
        if (r->parsed()) return cmd_report(rep, report_file);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return f.code;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConstructionFailed;
    }
    return kInputError;
}
