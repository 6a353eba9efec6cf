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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace envar {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadConfig {
  std::size_t max_iters = 500;
  double tol = 1e-10;          // stop when the simplex values spread by less
  double initial_step = 0.4;   // edge length of the starting simplex
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  double start_value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Downhill simplex with the usual coefficients (reflect 1, expand 2,
/// contract 1/2, shrink 1/2). Deterministic for a given start.
NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0,
                             const NelderMeadConfig &cfg = {});

}  // namespace envar
