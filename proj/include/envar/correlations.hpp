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
#include <string>
#include <vector>

#include "envar/channels.hpp"
#include "envar/envariance.hpp"
#include "envar/execution.hpp"
#include "envar/states.hpp"

namespace envar {

/// Measurement operators A_a on one factor. Construction checks
/// ||sum A^dagger A - I||_F <= 1e-9 and throws CompletionViolated.
class MeasurementSet {
 public:
  MeasurementSet() = default;
  explicit MeasurementSet(std::vector<ComplexMatrix> operators);
  /// Rank-1 projectors onto the columns of a unitary.
  static MeasurementSet projective(const ComplexMatrix &basis);

  const std::vector<ComplexMatrix> &operators() const noexcept { return ops_; }
  std::size_t dim() const noexcept { return ops_.empty() ? 0 : ops_.front().cols(); }

 private:
  std::vector<ComplexMatrix> ops_;
};

enum class Direction { SToE, EToS };  // which factor is measured: S or E

/// I = S(rho_S) + S(rho_E) - S(rho), nats.
double mutual_information(const DensityMatrix &rho);
/// S(rho_S) + sum_j S(rho_Ej) - S(rho) over all factors.
double multipartite_mutual_information(const DensityMatrix &rho);

struct ConditionalEntropy {
  std::vector<double> probabilities;
  /// sum_a p_a S(rho_{other|a}); outcomes with p_a < 1e-12 are dropped.
  double entropy = 0.0;
};

/// Measures factor S (side S) or E (side E); conditional states are the
/// reduced states of the other factor. Throws DimensionMismatch.
ConditionalEntropy conditioned_entropy(const DensityMatrix &rho, const MeasurementSet &meas,
                                       Side side);

struct DiscordConfig {
  std::size_t restarts = 32;
  std::size_t max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  Execution execution = Execution::Parallel;
};

struct RestartTrace {
  double start_value = 0.0;
  double final_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct DiscordResult {
  Direction direction = Direction::SToE;
  double mutual_information = 0.0;
  double classical = 0.0;
  double discord = 0.0;
  MeasurementSet best_measurement;
  std::vector<double> best_parameters;
  std::vector<RestartTrace> optimizer_trace;
  /// Running minimum of the conditional entropy over restarts 0..k.
  std::vector<double> best_so_far;
  std::string caveat;
};

/// Minimises the conditional entropy over rank-1 projective measurements on
/// the measured factor (dimension <= 4; UnsupportedDimension otherwise).
/// Qubits use Bloch angles (theta, phi); larger factors use
/// exp(i sum_j x_j G_j) over the generalised Gell-Mann matrices. Restart 0
/// starts from the computational basis, restart r > 0 from a point drawn
/// with trial_seed(seed, r).
DiscordResult classical_correlation(const DensityMatrix &rho, Direction direction,
                                    const DiscordConfig &cfg = {});
DiscordResult discord(const DensityMatrix &rho, Direction direction,
                      const DiscordConfig &cfg = {});

/// Measurement basis for a parameter vector, as used by the optimiser.
ComplexMatrix measurement_basis(std::size_t dim, std::span<const double> params);
/// Number of optimiser parameters for a measured factor of this dimension.
std::size_t measurement_parameter_count(std::size_t dim);

struct InvarianceReport {
  double i_before = 0.0, i_after = 0.0;
  double j_before = 0.0, j_after = 0.0;
  double d_before = 0.0, d_after = 0.0;
  double delta_i = 0.0, delta_j = 0.0, delta_d = 0.0;
  double pair_residual = 0.0;
  bool pass = false;
};

/// Correlation measures before and after applying the member of the pair on
/// `side`. The pair is verified first; NotEnvariancePair if it fails.
InvarianceReport invariance_check(const DensityMatrix &rho, const KrausChannel &phi_s,
                                  const KrausChannel &phi_e, Side side, double tol,
                                  Direction direction = Direction::SToE,
                                  const DiscordConfig &cfg = {});

}  // namespace envar
