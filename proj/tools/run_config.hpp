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
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace nodaldiv::cli {

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    // [surface]
    std::string preset = "sphere-equator";
    std::string spec_file; ///< takes precedence over preset when set
    int level = 0;
    int collar_rings = 8;
    // [construct]
    double rho0 = 0.2;
    double margin = 0.05;
    bool smoothing = false;
    int max_retries = 8;
    double blend_width = 0.3;
    // [verify]
    uint32_t seed = 7;
    int sample_count = 256;
    int sweep_lo = 0;
    int sweep_hi = 2;
    // [tolerances]
    double eigen_tol = -1.0; ///< negative: level schedule
    // [output]
    std::string output_dir = "out";

    /// Throws ConfigError naming the field.
    void validate() const;
};

///
/// Read `key = value` lines grouped under `[section]` headers into `config`.
/// `#` starts a comment. Unknown sections or keys are rejected with their line number.
///
void parse_config(std::istream& in, RunConfig& config);
void load_config(const std::string& path, RunConfig& config);

/// "a..b" -> (a, b).
void parse_level_range(const std::string& text, int& lo, int& hi);

} // namespace nodaldiv::cli
