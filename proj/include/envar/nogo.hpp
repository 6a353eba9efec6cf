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
#include <vector>

#include "envar/channels.hpp"
#include "envar/envariance.hpp"
#include "envar/execution.hpp"
#include "envar/states.hpp"

namespace envar {

struct DfsPair {
  KrausChannel phi_s;
  KrausChannel phi_e;
  ComplexMatrix support_unitary;  // R_S restricted to the Schmidt support
};

/// Random DFS channel on the system's Schmidt support (Haar block per
/// multiplicity group, 1-3 Kraus operators, random complement action) and
/// its partner built from the conjugate blocks on the environment side.
DfsPair sample_dfs_pair(const SchmidtDecomposition &sd, Rng &rng);

/// Random full-rank channel that is not DFS on `support`. Draws that happen
/// to pass dfs_check are discarded; `rejected` counts them.
KrausChannel sample_non_dfs(std::size_t dim, const ComplexMatrix &support, Rng &rng,
                            std::size_t *rejected = nullptr);

struct NogoOptions {
  Execution execution = Execution::Parallel;
  double envariance_tol = 1e-8;
  double dfs_tol = 1e-8;
  double purity_margin = 1e-6;  // falsified when purity < 1 - margin
  double gram_tol = 1e-8;
};

struct NogoTrial {
  double positive_residual = 0.0;
  bool positive_pass = false;
  bool dfs_recovered = false;     // both channels pass dfs_check on their supports
  double gram_residual = 0.0;     // aligned-gauge distance from diag(1, 0, ...)
  std::size_t support_rank = 0;   // Kraus rank of Phi_S restricted to the support
  double negative_purity = 1.0;
  bool negative_falsified = false;
  std::size_t rejected = 0;
};

struct NogoReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t positive_pass = 0;
  std::size_t negative_falsified = 0;
  std::size_t dfs_recovered = 0;
  std::size_t gram_pass = 0;
  std::size_t rejected_samples = 0;
  double worst_positive_residual = 0.0;
  double worst_negative_purity = 0.0;  // largest purity seen in the negative set
  double worst_gram_residual = 0.0;
  std::vector<NogoTrial> per_trial;
};

/// Runs both directions of the no-go statement on `psi`. Trial i draws from
/// an Rng seeded with trial_seed(seed, i).
NogoReport nogo_experiment(const PureState &psi, std::size_t trials, std::uint64_t seed,
                           const NogoOptions &options = {});

}  // namespace envar
