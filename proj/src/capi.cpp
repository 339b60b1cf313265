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

#include <nodaldiv/nodaldiv.h>

#include <nodaldiv/generate.hpp>
#include <nodaldiv/verify.hpp>

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

struct nd_mesh
{
    nodaldiv::LabeledSurfaceMesh mesh;
};

struct nd_result
{
    nodaldiv::ConstructionResult result;
};

struct nd_report
{
    nodaldiv::VerificationReport report;
    std::string text;
};

namespace {

using namespace nodaldiv;

thread_local std::string g_last_error;

nd_status status_of(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return ND_ERR_INVALID_ARGUMENT;
    case ErrorKind::Parse: return ND_ERR_PARSE;
    case ErrorKind::InvalidMesh: return ND_ERR_INVALID_MESH;
    case ErrorKind::InvalidSpec: return ND_ERR_INVALID_SPEC;
    case ErrorKind::Solver: return ND_ERR_SOLVER;
    case ErrorKind::Construction: return ND_ERR_CONSTRUCTION;
    case ErrorKind::Io: return ND_ERR_IO;
    }
    return ND_ERR_INTERNAL;
}

nd_status fail(nd_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

template <typename Fn>
nd_status guarded(Fn&& fn)
{
    try {
        fn();
        return ND_OK;
    } catch (const Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(ND_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ND_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ND_ERR_INTERNAL, "unknown failure");
    }
}

void require(bool ok, const char* message)
{
    if (!ok) throw Error(ErrorKind::InvalidArgument, message);
}

ConstructOptions to_cpp(const nd_construct_options* o)
{
    ConstructOptions out;
    if (!o) return out;
    out.rho0 = o->rho0;
    out.margin = o->margin;
    out.smoothing = o->smoothing != 0;
    out.max_retries = o->max_retries;
    out.blend_width = o->blend_width;
    require(out.rho0 > 0.0, "rho0 must be positive");
    require(out.margin > 0.0 && out.margin < 1.0, "margin must lie in (0, 1)");
    require(out.max_retries >= 0, "max_retries must be nonnegative");
    require(out.blend_width > 0.0 && out.blend_width < 0.5, "blend_width must lie in (0, 0.5)");
    return out;
}

VerifyOptions to_cpp(const nd_verify_options* o)
{
    VerifyOptions out;
    if (!o) return out;
    out.sample_count = o->sample_count;
    out.seed = o->seed;
    out.eigen_tol = o->eigen_tol;
    require(out.sample_count > 0, "sample_count must be positive");
    return out;
}

std::vector<double>* field_of(nodaldiv::ConstructionResult& r, const char* name)
{
    if (!name) return nullptr;
    if (!std::strcmp(name, "F")) return &r.F.values;
    if (!std::strcmp(name, "u")) return &r.u.values;
    if (!std::strcmp(name, "omega")) return &r.omega_ref.values;
    if (!std::strcmp(name, "Omega")) return &r.Omega.values;
    if (!std::strcmp(name, "lapF")) return &r.lapF.values;
    return nullptr;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

nd_report* make_report(VerificationReport rep)
{
    auto* out = new nd_report{std::move(rep), {}};
    std::ostringstream os;
    write_report(os, out->report);
    out->text = os.str();
    return out;
}

} // namespace

extern "C" {

const char* nd_last_error(void)
{
    return g_last_error.c_str();
}

const char* nd_version(void)
{
    return "0.1.0";
}

nd_status nd_mesh_generate_preset(const char* preset, int level, int collar_rings, nd_mesh** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(preset && out, "null argument");
        *out = new nd_mesh{generate_preset(preset, level, collar_rings)};
    });
}

nd_status nd_mesh_from_spec_text(const char* text, nd_mesh** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(text && out, "null argument");
        std::istringstream in(text);
        *out = new nd_mesh{build_from_spec(parse_surface_spec(in))};
    });
}

nd_status nd_mesh_from_spec_file(const char* path, nd_mesh** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(path && out, "null argument");
        *out = new nd_mesh{build_from_spec(load_surface_spec(path))};
    });
}

nd_status nd_mesh_load(const char* path, nd_mesh** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(path && out, "null argument");
        *out = new nd_mesh{load_mesh(path)};
    });
}

nd_status nd_mesh_save(const nd_mesh* mesh, const char* path)
{
    return guarded([&] {
        require(mesh && path, "null argument");
        save_mesh(mesh->mesh, path);
    });
}

void nd_mesh_free(nd_mesh* mesh)
{
    delete mesh;
}

nd_status nd_mesh_get_info(const nd_mesh* mesh, nd_mesh_info* info)
{
    return guarded([&] {
        require(mesh && info, "null argument");
        const auto& m = mesh->mesh;
        info->vertices = m.mesh().num_vertices();
        info->edges = m.mesh().num_edges();
        info->faces = m.mesh().num_faces();
        info->euler = m.mesh().euler_characteristic();
        info->euler_minus = m.euler_minus();
        info->euler_plus = m.euler_plus();
        info->circles = static_cast<int>(m.circle_names().size());
        info->gamma_vertices = static_cast<int>(m.gamma_vertices().size());
        info->level = m.level();
    });
}

int nd_preset_count(void)
{
    return static_cast<int>(preset_names().size());
}

const char* nd_preset_name(int index)
{
    const auto& names = preset_names();
    if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
    return names[index].c_str();
}

void nd_construct_options_init(nd_construct_options* options)
{
    if (!options) return;
    const ConstructOptions d;
    options->rho0 = d.rho0;
    options->margin = d.margin;
    options->smoothing = d.smoothing ? 1 : 0;
    options->max_retries = d.max_retries;
    options->blend_width = d.blend_width;
}

nd_status nd_construct(const nd_mesh* mesh, const nd_construct_options* options, nd_result** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(mesh && out, "null argument");
        *out = new nd_result{construct(mesh->mesh, to_cpp(options))};
    });
}

nd_status nd_result_save(const nd_result* result, const char* dir)
{
    return guarded([&] {
        require(result && dir, "null argument");
        save_result(result->result, dir);
    });
}

nd_status nd_result_load(const nd_mesh* mesh, const char* dir, nd_result** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(mesh && dir && out, "null argument");
        *out = new nd_result{load_result(mesh->mesh, dir)};
    });
}

void nd_result_free(nd_result* result)
{
    delete result;
}

nd_status nd_result_get_field(const nd_result* result, const char* name, double* values, size_t capacity, size_t* count)
{
    return guarded([&] {
        require(result && count, "null argument");
        const auto* field = field_of(const_cast<nd_result*>(result)->result, name);
        require(field != nullptr, "unknown field name");
        *count = field->size();
        if (values) {
            require(capacity >= field->size(), "buffer too small");
            std::copy(field->begin(), field->end(), values);
        }
    });
}

nd_status nd_result_set_field(nd_result* result, const char* name, const double* values, size_t count)
{
    return guarded([&] {
        require(result && values, "null argument");
        auto* field = field_of(result->result, name);
        require(field != nullptr, "unknown field name");
        require(count == field->size(), "field size mismatch");
        std::copy(values, values + count, field->begin());
    });
}

nd_status nd_result_get_param(const nd_result* result, const char* name, double* value)
{
    return guarded([&] {
        require(result && name && value, "null argument");
        const auto& p = result->result.params;
        const std::string key = name;
        if (key == "C") *value = p.C;
        else if (key == "epsilon") *value = p.epsilon;
        else if (key == "sigma") *value = p.sigma;
        else if (key == "rho0") *value = p.rho0;
        else if (key == "rho0_requested") *value = p.rho0_requested;
        else if (key == "margin") *value = p.margin;
        else if (key == "retries") *value = p.retries;
        else throw Error(ErrorKind::InvalidArgument, "unknown parameter " + key);
    });
}

const char* nd_result_log_line(const nd_result* result, size_t index)
{
    if (!result || index >= result->result.log.size()) return nullptr;
    return result->result.log[index].c_str();
}

void nd_verify_options_init(nd_verify_options* options)
{
    if (!options) return;
    const VerifyOptions d;
    options->sample_count = d.sample_count;
    options->seed = d.seed;
    options->eigen_tol = d.eigen_tol;
}

nd_status nd_verify(const nd_mesh* mesh, const nd_result* result, const nd_verify_options* options, nd_report** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(mesh && result && out, "null argument");
        const auto& r = result->result;
        const int nv = mesh->mesh.mesh().num_vertices(), nf = mesh->mesh.mesh().num_faces();
        if (r.F.values.size() != size_t(nv) || r.u.values.size() != size_t(nv) || r.lapF.values.size() != size_t(nv) ||
            r.Omega.values.size() != size_t(nf) || r.omega_ref.values.size() != size_t(nf)) {
            throw Error(ErrorKind::InvalidArgument, "result does not match the mesh");
        }
        *out = make_report(verify(mesh->mesh, r, to_cpp(options)));
    });
}

nd_status nd_sweep(
    const char* preset,
    int level_lo,
    int level_hi,
    int collar_rings,
    const nd_construct_options* construct_options,
    const nd_verify_options* verify_options,
    nd_report** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        require(preset && out, "null argument");
        require(level_lo >= 0 && level_hi >= level_lo, "invalid level range");
        const ConstructOptions co = to_cpp(construct_options);
        const VerifyOptions vo = to_cpp(verify_options);
        std::vector<SweepRow> rows;
        VerificationReport finest;
        for (int level = level_lo; level <= level_hi; ++level) {
            const LabeledSurfaceMesh mesh = generate_preset(preset, level, collar_rings);
            const ConstructionResult r = construct(mesh, co);
            finest = verify(mesh, r, vo);
            rows.push_back({level, mesh.collars().front().h_s, finest.eigen_residual, finest.min_omega,
                            finest.min_contact, finest.seam_worst, finest.interior_residual});
        }
        SweepResult sweep = summarize_sweep(std::move(rows));
        finest.sweep = sweep.rows;
        finest.interior_order = sweep.interior_order;
        finest.checks.push_back(sweep.monotone);
        *out = make_report(std::move(finest));
    });
}

size_t nd_report_check_count(const nd_report* report)
{
    return report ? report->report.checks.size() : 0;
}

nd_status nd_report_get_check(const nd_report* report, size_t index, nd_check* check)
{
    return guarded([&] {
        require(report && check, "null argument");
        require(index < report->report.checks.size(), "check index out of range");
        const CheckRecord& c = report->report.checks[index];
        check->name = c.name.c_str();
        check->pass = c.pass ? 1 : 0;
        check->value = c.value;
        check->tol = c.tol;
        check->worst = c.worst;
        check->element = static_cast<nd_element>(c.element);
        check->detail = c.detail.c_str();
    });
}

nd_status nd_report_get_summary(const nd_report* report, nd_summary* summary)
{
    return guarded([&] {
        require(report && summary, "null argument");
        const auto& r = report->report;
        summary->eigen_residual = r.eigen_residual;
        summary->interior_residual = r.interior_residual;
        summary->seam_residual = r.seam_residual;
        summary->seam_worst = r.seam_worst;
        summary->min_omega = r.min_omega;
        summary->min_contact = r.min_contact;
        summary->interior_order = r.interior_order;
        summary->all_pass = r.all_pass() ? 1 : 0;
    });
}

size_t nd_report_sweep_rows(const nd_report* report)
{
    return report ? report->report.sweep.size() : 0;
}

nd_status nd_report_write(const nd_report* report, const char* path)
{
    return guarded([&] {
        require(report && path, "null argument");
        write_text(path, report->text);
    });
}

nd_status nd_report_write_csv(const nd_report* report, const char* path)
{
    return guarded([&] {
        require(report && path, "null argument");
        std::ostringstream os;
        write_sweep_csv(os, report->report.sweep);
        write_text(path, os.str());
    });
}

const char* nd_report_text(const nd_report* report)
{
    return report ? report->text.c_str() : "";
}

void nd_report_free(nd_report* report)
{
    delete report;
}

} // extern "C"
