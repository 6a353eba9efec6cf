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

#include "envar/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace envar::io {

namespace {

[[noreturn]] void malformed(const std::string &what) {
  throw EnvarError(ErrorCode::MalformedInput, what);
}

const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double parse_real(const json &j) {
  if (!j.is_number()) malformed("expected a number");
  return j.get<double>();
}

std::size_t parse_size(const json &j) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) malformed("expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) malformed("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

Dims parse_dims(const json &j) {
  if (!j.is_array() || j.empty()) malformed("\"dims\" must be a non-empty array");
  Dims d;
  for (const auto &x : j) d.push_back(parse_size(x));
  return d;
}

}  // namespace

json load_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    malformed(path.string() + ": " + e.what());
  }
}

cplx parse_complex(const json &j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) malformed("complex entries are [re, im]");
  return {parse_real(j[0]), parse_real(j[1])};
}

ComplexMatrix parse_matrix(const json &j) {
  if (!j.is_array() || j.empty()) malformed("a matrix is a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) malformed("matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  std::vector<cplx> entries;
  entries.reserve(rows * cols);
  for (const auto &row : j) {
    if (!row.is_array() || row.size() != cols) malformed("matrix rows differ in length");
    for (const auto &z : row) entries.push_back(parse_complex(z));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

PureState parse_state(const json &j) {
  Dims dims = parse_dims(field(j, "dims"));
  const json &a = field(j, "amplitudes");
  if (!a.is_array()) malformed("\"amplitudes\" must be an array");
  std::vector<cplx> amps;
  for (const auto &z : a) amps.push_back(parse_complex(z));
  return PureState(std::move(dims), std::move(amps));
}

DensityMatrix parse_density(const json &j) {
  Dims dims = parse_dims(field(j, "dims"));
  return DensityMatrix(std::move(dims), parse_matrix(field(j, "matrix")));
}

KrausChannel parse_channel(const json &j) {
  const std::size_t d = parse_size(field(j, "dim"));
  const json &ks = field(j, "kraus");
  if (!ks.is_array() || ks.empty()) malformed("\"kraus\" must be a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (const auto &k : ks) {
    ops.push_back(parse_matrix(k));
    if (ops.back().rows() != d || ops.back().cols() != d) {
      throw EnvarError(ErrorCode::DimensionMismatch,
                       "Kraus operator does not match \"dim\" = " + std::to_string(d));
    }
  }
  return KrausChannel(std::move(ops));
}

HamiltonianPath parse_path(const json &j) {
  HamiltonianPath p;
  const json &ts = field(j, "times");
  const json &hs = field(j, "hamiltonians");
  if (!ts.is_array() || !hs.is_array()) malformed("\"times\" and \"hamiltonians\" must be arrays");
  for (const auto &t : ts) p.times.push_back(parse_real(t));
  for (const auto &h : hs) p.hamiltonians.push_back(parse_matrix(h));
  validate(p);
  return p;
}

TfdSpec parse_tfd(const json &j) {
  TfdSpec s;
  const json &es = field(j, "energies");
  if (!es.is_array()) malformed("\"energies\" must be an array");
  for (const auto &e : es) s.energies.push_back(parse_real(e));
  s.beta = parse_real(field(j, "beta"));
  validate(s);
  return s;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json to_json(const ComplexMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(std::span<const cplx> v) {
  json out = json::array();
  for (const auto &z : v) out.push_back(to_json(z));
  return out;
}

json to_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json to_json(const PureState &psi) {
  return {{"dims", psi.dims()}, {"amplitudes", to_json(psi.amplitudes())}};
}

json to_json(const KrausChannel &ch) {
  json ks = json::array();
  for (const auto &k : ch.kraus()) ks.push_back(to_json(k));
  return {{"dim", ch.dim()}, {"kraus", std::move(ks)}};
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

}  // namespace envar::io
