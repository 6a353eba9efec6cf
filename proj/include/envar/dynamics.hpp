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

#include <functional>
#include <string>
#include <vector>

#include "envar/channels.hpp"
#include "envar/envariance.hpp"
#include "envar/states.hpp"

namespace envar {

// ---------------------------------------------------------------------------
// Environment-assisted shortcuts to adiabaticity. Units with hbar = 1.

struct HamiltonianPath {
  std::vector<double> times;                // uniform grid
  std::vector<ComplexMatrix> hamiltonians;  // one Hermitian sample per time

  /// `samples` grid points on [t0, t1], H evaluated at each.
  static HamiltonianPath sample(const std::function<ComplexMatrix(double)> &h, double t0,
                                double t1, std::size_t samples);
};

/// Throws LengthMismatch, TooFewSamples, BadParam (non-uniform grid),
/// ShapeMismatch and NotHermitianSample (value = time of the bad sample).
void validate(const HamiltonianPath &path);

inline constexpr double kDefaultGapTol = 1e-6;

struct AdiabaticFrame {
  std::vector<double> times;
  std::vector<std::vector<double>> energies;    // [time][level], ascending
  std::vector<ComplexMatrix> vectors;           // [time], column k = |s_k(t)>
  std::vector<std::vector<double>> dynamical;   // [time][level], int E_k
  std::vector<std::vector<double>> geometric;   // [time][level], -i int <s_k|d s_k>
  std::vector<std::vector<double>> theta;       // dynamical + geometric
  double min_gap = 0.0;
  double min_gap_time = 0.0;
  double max_imag_residue = 0.0;  // discarded imaginary part of the geometric rate
  std::vector<std::string> diagnostics;

  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().rows(); }
  std::size_t size() const { return times.size(); }
};

/// Diagonalises every sample, fixes the eigenvector gauge and accumulates
/// theta_k. Gauge: at the first time each |s_k> has its largest component
/// real positive; later samples keep that component's phase, and when it
/// becomes small the vector is aligned to its predecessor and a new anchor
/// component is chosen. Throws GapTooSmall (value = time) when adjacent
/// levels come closer than `gap_tol`.
AdiabaticFrame build_frame(const HamiltonianPath &path, double gap_tol = kDefaultGapTol);

/// sum_k e^{-i theta_k(t)} |s_k(t)><s_k(0)|.
ComplexMatrix counterdiabatic_unitary(const AdiabaticFrame &frame, std::size_t t_index);

/// (1/sqrt d) sum_k |s_k(0)> (x) |k>, with the environment branch basis the
/// computational one.
PureState easta_initial_state(const AdiabaticFrame &frame);

/// (U_E)_{mn} = e^{-i theta_m(t)} <s_n(0)| U_S^dagger |s_m(t)>.
/// Throws NonUnitaryInput, DimensionMismatch.
ComplexMatrix easta_partner(const AdiabaticFrame &frame, const ComplexMatrix &u_s,
                            std::size_t t_index);

/// Strict comparison of (U_S (x) U_E)|psi(0)> with (U_cd (x) I)|psi(0)>.
EnvarianceVerdict verify_easta(const AdiabaticFrame &frame, const ComplexMatrix &u_s,
                               const ComplexMatrix &u_e, std::size_t t_index,
                               double tol = 1e-7);

struct ProjectionResult {
  double probability = 0.0;
  PureState system;
  /// |<s_k(t)|system>|^2, set when a frame reference is given.
  double fidelity = 0.0;
};

/// Projects the environment onto |k> and returns the normalised system
/// state. Throws ZeroProbabilityBranch below 1e-12.
ProjectionResult project_environment(const PureState &state, std::size_t k);
/// Same, plus the fidelity with the frame vector |s_k(t_index)>.
ProjectionResult project_environment(const PureState &state, const AdiabaticFrame &frame,
                                     std::size_t k, std::size_t t_index);

// ---------------------------------------------------------------------------
// Thermofield double

struct TfdSpec {
  std::vector<double> energies;
  double beta = 0.0;
};

/// Throws BadParam for beta < 0, non-finite values or no levels.
void validate(const TfdSpec &spec);

/// e^{-beta E_k} / Z, computed with energies shifted by their minimum.
std::vector<double> gibbs_weights(const TfdSpec &spec);
/// Z^{-1/2} sum_k e^{-beta E_k / 2} |k> (x) |k>, dims (d, d).
PureState tfd_state(const TfdSpec &spec);

enum class TfdGenerator { Difference, Sum };  // H (x) I -/+ I (x) H

/// ||e^{-i H_tot t}|psi_beta> - |psi_beta>|| with no phase allowance.
EnvarianceVerdict static_check(const TfdSpec &spec, double t, double tol = 1e-10,
                               TfdGenerator generator = TfdGenerator::Difference);

struct CommutantVerdict {
  bool holds = false;
  double residual = 0.0;  // ||HU - UH||_F
};

/// Throws DimensionMismatch.
CommutantVerdict commutant_check(const ComplexMatrix &u, const ComplexMatrix &h,
                                 double tol = 1e-10);

struct BathReport {
  double fidelity = 0.0;  // <psi_beta| (Phi (x) I)(psi_beta) |psi_beta>
  double purity = 0.0;    // of the mapped state
  double fixed_point_residual = 0.0;  // ||Phi(rho_L) - rho_L||_F
  bool violation = false;             // fidelity < 1 - tol
  bool purity_witness = false;        // purity < 1 - tol
};

/// One channel kick on the left copy. Throws DimensionMismatch.
BathReport bath_violation(const TfdSpec &spec, const KrausChannel &phi, double tol = 1e-10);

}  // namespace envar
