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

#include "envar/random.hpp"

#include <cmath>
#include <numbers>

namespace envar {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(Rng &rng) {
  // 53 random mantissa bits; the standard distributions are not specified
  // bit-for-bit across library implementations, this is.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(Rng &rng) {
  // Box-Muller on (0, 1] so the log never sees zero.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx complex_normal(Rng &rng) {
  const double re = normal01(rng);
  const double im = normal01(rng);
  return cplx(re, im) * std::numbers::sqrt2 * 0.5;
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
  ComplexMatrix g(rows, cols);
  for (auto &z : g.data()) z = complex_normal(rng);
  return g;
}

ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng &rng) {
  if (cols > rows) {
    throw EnvarError(ErrorCode::ShapeMismatch, "isometry needs cols <= rows");
  }
  // Gram-Schmidt on a Ginibre matrix is QR with a positive R diagonal, which
  // is what makes the result Haar distributed.
  ComplexMatrix q = orthonormalize_columns(ginibre(rows, cols, rng), 1e-12);
  while (q.cols() < cols) q = orthonormalize_columns(ginibre(rows, cols, rng), 1e-12);
  return q;
}

ComplexMatrix random_unitary(std::size_t n, Rng &rng) {
  return random_isometry(n, n, rng);
}

ComplexMatrix random_hermitian(std::size_t n, Rng &rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix h = g + g.adjoint();
  h *= 0.5;
  return h;
}

std::vector<cplx> random_unit_vector(std::size_t n, Rng &rng) {
  std::vector<cplx> v(n);
  double nv = 0.0;
  while (nv < 1e-8) {
    for (auto &z : v) z = complex_normal(rng);
    nv = norm(v);
  }
  for (auto &z : v) z /= nv;
  return v;
}

std::vector<double> random_probabilities(std::size_t n, Rng &rng, double floor) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto &x : p) {
    x = -std::log(1.0 - uniform01(rng));  // Exp(1)
    total += x;
  }
  if (floor * static_cast<double>(n) >= 1.0) floor = 0.0;
  const double mix = floor * static_cast<double>(n);
  for (auto &x : p) x = (1.0 - mix) * x / total + floor;
  return p;
}

}  // namespace envar
