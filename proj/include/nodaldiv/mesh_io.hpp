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

#include <nodaldiv/mesh.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace nodaldiv {

/// Shortest text form that round-trips (17 significant digits).
std::string format_double(double x);

///
/// Labeled-OFF: an OFF body followed by `#LABELS`, `#COLLAR_S` and `#GAMMA` sections.
/// Two further sections carry data OFF cannot: `#EDGE_LENGTHS` (a b length) and
/// `#LEVEL`. Without `#EDGE_LENGTHS`, lengths come from the vertex positions.
///
void write_mesh(std::ostream& out, const LabeledSurfaceMesh& mesh);
LabeledSurfaceMesh read_mesh(std::istream& in);
void save_mesh(const LabeledSurfaceMesh& mesh, const std::string& path);
LabeledSurfaceMesh load_mesh(const std::string& path);

struct Field
{
    bool on_faces = false;
    std::vector<double> values;
};

/// `index value` per line; face fields start with a `#FACES` line.
void write_field(std::ostream& out, const Field& field);
Field read_field(std::istream& in);
void save_field(const Field& field, const std::string& path);
Field load_field(const std::string& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines in the given order.
void write_key_values(std::ostream& out, const KeyValues& kv);
KeyValues read_key_values(std::istream& in);

} // namespace nodaldiv
