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

#include <cstdint>
#include <random>
#include <vector>

#include "envar/linalg.hpp"

namespace envar {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser. Sub-seeds for trial `i` of a run seeded with `s`
/// are `mix64(s + i)`, so results depend only on (inputs, seed) no matter
/// how trials are scheduled across threads.
std::uint64_t mix64(std::uint64_t x);
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + index);
}

double uniform01(Rng &rng);
double normal01(Rng &rng);
cplx complex_normal(Rng &rng);  // E|z|^2 = 1

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng &rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with positive R diagonal).
ComplexMatrix random_unitary(std::size_t n, Rng &rng);
/// Isometry with `cols` orthonormal columns of length `rows`.
ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng &rng);
/// Random Hermitian matrix from the Gaussian unitary ensemble (unit scale).
ComplexMatrix random_hermitian(std::size_t n, Rng &rng);
/// Uniformly random unit vector.
std::vector<cplx> random_unit_vector(std::size_t n, Rng &rng);
/// Point on the probability simplex with `n` entries bounded below by
/// `floor` (Dirichlet(1,...,1) mixed with the uniform point).
std::vector<double> random_probabilities(std::size_t n, Rng &rng, double floor = 0.02);

}  // namespace envar
