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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "envar/channels.hpp"
#include "envar/random.hpp"
#include "envar/states.hpp"

namespace envar {

/// Block residuals below this count as zero when deciding whether a system
/// unitary admits a partner. Same scale as kDegeneracyTol on purpose.
inline constexpr double kAdmissibilityTol = 1e-8;

enum class Side { S, E };

struct EnvarianceVerdict {
  bool holds = false;
  double residual = 0.0;
  double tol = 0.0;
  /// Global phase e^{i alpha} that best matches the mapped state (unitary
  /// checks only; 1 in strict mode and for channel checks).
  cplx phase{1.0, 0.0};
  /// ||Phi_k(rho_k) - rho_k||_F per factor ("S", "E", or "factor<k>").
  std::map<std::string, double> fixed_point_residuals;
  /// Smallest purity of the intermediate states (Phi (x) I)(rho) and
  /// (I (x) Phi)(rho); present only for pure inputs.
  std::optional<double> purity;
};

/// ||(U_S (x) U_E)|psi> - e^{i alpha}|psi>|| with the optimal alpha, or
/// alpha = 0 when `strict`. Throws DimensionMismatch.
EnvarianceVerdict unitary_envariance_check(const PureState &psi, const ComplexMatrix &u_s,
                                           const ComplexMatrix &u_e,
                                           double tol = kDefaultTol, bool strict = false);

/// Equal-magnitude groups among the support coefficients.
MultiplicityPartition multiplicity_partition(const SchmidtDecomposition &sd,
                                             double tol = kDegeneracyTol);

/// Block structure of R_S = Omega_S^dagger U_S Omega_S.
struct AdmissibilityReport {
  bool admissible = false;
  ComplexMatrix r_s;
  double support_mixing = 0.0;    // support <-> complement blocks
  double group_mixing = 0.0;      // between multiplicity groups
  double group_unitarity = 0.0;   // worst ||R_g^dagger R_g - I||_F
  std::string offending;          // empty when admissible
};

AdmissibilityReport admissibility(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                                  double tol = kAdmissibilityTol);

/// Per-group blocks of R_S plus the complement choice on the environment.
struct PartnerSpec {
  std::vector<ComplexMatrix> r_blocks;
  ComplexMatrix complement_unitary;  // empty: identity
};

PartnerSpec partner_spec(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                         double tol = kAdmissibilityTol);

/// U_E = Omega_E R_E Omega_E^dagger with R_E = conj(R_S) on each multiplicity
/// group and `complement` (identity if empty) on the environment complement.
/// Throws NotAdmissible (value = worst offending residual), NotUnitary,
/// DimensionMismatch.
ComplexMatrix partner_unitary(const PureState &psi, const ComplexMatrix &u_s,
                              double tol = kAdmissibilityTol,
                              const ComplexMatrix &complement = {});
ComplexMatrix partner_unitary(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                              double tol = kAdmissibilityTol,
                              const ComplexMatrix &complement = {});

/// Random U_S that admits a partner: a Haar block per multiplicity group and
/// a Haar unitary on the complement, rotated back by Omega_S.
ComplexMatrix random_admissible_unitary(const SchmidtDecomposition &sd, Rng &rng);
/// Random U_S that mixes two multiplicity groups (needs >= 2 groups) while
/// staying block diagonal otherwise; never admits a partner.
ComplexMatrix random_group_mixer(const SchmidtDecomposition &sd, Rng &rng);

/// ||(Phi_S (x) Phi_E)(rho) - rho||_F <= tol. Throws DimensionMismatch.
EnvarianceVerdict channel_envariance_check(const DensityMatrix &rho,
                                           const KrausChannel &phi_s,
                                           const KrausChannel &phi_e, double tol = 1e-8);

/// Tr[sigma^2] for sigma = Phi applied to one factor of a pure state.
/// Throws NotPure when |Tr rho^2 - 1| > 1e-8.
double purity_certificate(const DensityMatrix &rho, const KrausChannel &phi, Side side);
double purity_certificate(const DensityMatrix &rho, const KrausChannel &phi,
                          std::size_t factor);

/// Composite map over every factor. Throws DimensionMismatch.
EnvarianceVerdict multipartite_envariance_check(const DensityMatrix &rho,
                                                const std::vector<KrausChannel> &channels,
                                                double tol = 1e-8);

/// G_{mu nu} = Tr[rho_S Gamma_mu^dagger Gamma_nu].
ComplexMatrix kraus_gram(const DensityMatrix &rho_s, std::span<const ComplexMatrix> kraus);

/// The Gram matrix rotated into its eigenbasis (a unitary remixing of the
/// Kraus operators). For a channel acting as one unitary on the support of
/// rho_S it is diag(1, 0, ..., 0).
struct AlignedGram {
  std::vector<double> diagonal;   // descending
  double offdiag_residual = 0.0;  // distance of the rotated Gram from diagonal
  double delta_residual = 0.0;    // || leading rank block - identity ||
  std::size_t support_rank = 0;   // Kraus rank of the action restricted to supp(rho_S)
};

AlignedGram aligned_gram(const DensityMatrix &rho_s, std::span<const ComplexMatrix> kraus,
                         double rank_tol = 1e-10);

}  // namespace envar
