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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace nodaldiv::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& v)
{
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("not an integer: '" + v + "'");
    return out;
}

double to_double(const std::string& v)
{
    size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigError("not a number: '" + v + "'");
    return out;
}

bool to_bool(const std::string& v)
{
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"surface.preset", [](RunConfig& c, const std::string& v) { c.preset = v; }},
        {"surface.spec", [](RunConfig& c, const std::string& v) { c.spec_file = v; }},
        {"surface.level", [](RunConfig& c, const std::string& v) { c.level = to_int(v); }},
        {"surface.collar_rings", [](RunConfig& c, const std::string& v) { c.collar_rings = to_int(v); }},
        {"construct.rho0", [](RunConfig& c, const std::string& v) { c.rho0 = to_double(v); }},
        {"construct.margin", [](RunConfig& c, const std::string& v) { c.margin = to_double(v); }},
        {"construct.smoothing", [](RunConfig& c, const std::string& v) { c.smoothing = to_bool(v); }},
        {"construct.max_retries", [](RunConfig& c, const std::string& v) { c.max_retries = to_int(v); }},
        {"construct.blend_width", [](RunConfig& c, const std::string& v) { c.blend_width = to_double(v); }},
        {"verify.seed", [](RunConfig& c, const std::string& v) { c.seed = static_cast<uint32_t>(to_int(v)); }},
        {"verify.samples", [](RunConfig& c, const std::string& v) { c.sample_count = to_int(v); }},
        {"verify.sweep", [](RunConfig& c, const std::string& v) { parse_level_range(v, c.sweep_lo, c.sweep_hi); }},
        {"tolerances.eigen_residual", [](RunConfig& c, const std::string& v) { c.eigen_tol = to_double(v); }},
        {"output.directory", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
    };
    return table;
}

} // namespace

void RunConfig::validate() const
{
    auto check = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    check(!preset.empty() || !spec_file.empty(), "surface: preset or spec required");
    check(level >= 0 && level <= 6, "surface.level must lie in [0, 6]");
    check(collar_rings >= 4 && collar_rings <= 256, "surface.collar_rings must lie in [4, 256]");
    check(rho0 > 0.0 && rho0 <= 100.0, "construct.rho0 must lie in (0, 100]");
    check(margin > 0.0 && margin < 1.0, "construct.margin must lie in (0, 1)");
    check(max_retries >= 0 && max_retries <= 64, "construct.max_retries must lie in [0, 64]");
    check(blend_width > 0.0 && blend_width < 0.5, "construct.blend_width must lie in (0, 0.5)");
    check(sample_count >= 1 && sample_count <= 1000000, "verify.samples must lie in [1, 1000000]");
    check(sweep_lo >= 0 && sweep_hi >= sweep_lo && sweep_hi <= 6, "verify.sweep must be a..b with 0 <= a <= b <= 6");
    check(eigen_tol < 0.0 || eigen_tol > 0.0, "tolerances.eigen_residual must be positive");
    check(!output_dir.empty(), "output.directory must not be empty");
}

void parse_config(std::istream& in, RunConfig& config)
{
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"surface", "construct", "verify", "tolerances", "output"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
                throw ConfigError(where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + "key '" + key + "' outside a section");
        const auto it = setters().find(section + "." + key);
        if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        try {
            it->second(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }
}

void load_config(const std::string& path, RunConfig& config)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    parse_config(in, config);
}

void parse_level_range(const std::string& text, int& lo, int& hi)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw ConfigError("expected a level range a..b, got '" + text + "'");
    lo = to_int(trim(text.substr(0, dots)));
    hi = to_int(trim(text.substr(dots + 2)));
}

} // namespace nodaldiv::cli
