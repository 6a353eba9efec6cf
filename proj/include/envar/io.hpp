// Copyright 2026 The Envar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "envar/channels.hpp"
#include "envar/dynamics.hpp"
#include "envar/states.hpp"

namespace envar::io {

using nlohmann::json;

/// File formats (complex entries as [re, im]; a bare number is read as real):
///   state    {"dims": [..], "amplitudes": [[re, im], ...]}
///   density  {"dims": [..], "matrix": [[[re, im], ...], ...]}
///   channel  {"dim": d, "kraus": [matrix, ...]}
///   path     {"times": [...], "hamiltonians": [matrix, ...]}
///   tfd      {"energies": [...], "beta": x}
///   matrix   {"matrix": matrix}
/// Structural problems throw MalformedInput; the library constructors then
/// apply their own checks (normalisation, trace preservation, ...).

json load_file(const std::filesystem::path &path);

cplx parse_complex(const json &j);
ComplexMatrix parse_matrix(const json &j);
PureState parse_state(const json &j);
DensityMatrix parse_density(const json &j);
KrausChannel parse_channel(const json &j);
HamiltonianPath parse_path(const json &j);
TfdSpec parse_tfd(const json &j);

/// Rounds to 12 significant digits (and maps -0 to 0).
double round12(double x);
json number(double x);
json to_json(cplx z);
json to_json(const ComplexMatrix &m);
json to_json(std::span<const cplx> v);
json to_json(std::span<const double> v);
json to_json(const PureState &psi);
json to_json(const KrausChannel &ch);

/// Two-space indented document with a trailing newline.
std::string dump(const json &j);

}  // namespace envar::io
