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
#include <span>
#include <string>
#include <vector>

#include "envar/linalg.hpp"
#include "envar/random.hpp"
#include "envar/states.hpp"

namespace envar {

inline constexpr double kChannelTol = 1e-9;

/// Trace-preserving completely positive map on a d-dimensional space, held
/// as Kraus operators. Only square maps (d_in == d_out) are supported.
/// The Choi matrix is computed once at construction.
class KrausChannel {
 public:
  /// Throws ShapeMismatch for empty or non-square/unequal operators and
  /// NotTracePreserving (value = completion residual) when
  /// ||sum K^dagger K - I||_F > tol.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, double tol = kChannelTol);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix> &kraus() const noexcept { return kraus_; }
  std::size_t num_kraus() const noexcept { return kraus_.size(); }
  /// J = sum_ij |i><j| (x) Phi(|i><j|)
  const ComplexMatrix &choi() const noexcept { return choi_; }
  double completion_residual() const noexcept { return completion_; }

 private:
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> kraus_;
  ComplexMatrix choi_;
  double completion_ = 0.0;
};

double completion_residual(std::span<const ComplexMatrix> kraus);

KrausChannel identity_channel(std::size_t dim);
KrausChannel unitary_channel(const ComplexMatrix &u);

/// Applies the channel to the whole state.
DensityMatrix apply(const KrausChannel &ch, const DensityMatrix &rho);
/// Applies the channel to one factor of a multipartite state.
DensityMatrix apply_local(const KrausChannel &ch, const DensityMatrix &rho,
                          std::size_t factor);
/// Kraus set {A_i (x) B_j}.
KrausChannel tensor(const KrausChannel &a, const KrausChannel &b);

struct ChoiReport {
  ComplexMatrix choi;
  std::vector<double> eigenvalues;  // descending
  std::size_t kraus_rank = 0;
  /// Kraus operators from the Choi eigenvectors; mutually orthogonal in the
  /// Hilbert-Schmidt inner product, ordered by decreasing weight.
  std::vector<ComplexMatrix> canonical_kraus;
  double min_eigenvalue = 0.0;
  double output_trace_residual = 0.0;  // ||Tr_out J - I||_F
};

/// Eigenvalues above rank_tol * (largest eigenvalue) count towards the rank.
ChoiReport choi_report(const KrausChannel &ch, double rank_tol = 1e-10);

/// Direct-sum structure of a channel relative to a protected subspace:
/// every Kraus operator is (sqrt(p_mu) U) on the subspace, gamma_mu on its
/// complement, and nothing connecting the two.
struct DfsReport {
  bool is_dfs = false;
  /// d x d, in the coordinates of the supplied support columns. Global phase
  /// fixed so its largest-magnitude entry is real positive.
  ComplexMatrix support_unitary;
  /// One entry per Kraus operator of the channel as given. Operators acting
  /// only on the complement have p_mu = 0.
  std::vector<double> probabilities;
  /// Complement blocks in the coordinates of the completed basis.
  std::vector<ComplexMatrix> complement_kraus;
  /// Completed basis: support columns first, then the complement.
  ComplexMatrix basis;
  /// offdiag_{canonical,given}, support_scalar_{canonical,given},
  /// complement_completion, probability_sum.
  std::map<std::string, double> residuals;
};

/// `support` holds d orthonormal columns. The verdict is taken on the
/// canonical (Choi) Kraus set; U, p and gamma are extracted from the Kraus
/// operators as given, so the data matches the caller's gauge.
DfsReport dfs_check(const KrausChannel &ch, const ComplexMatrix &support,
                    double tol = 1e-8);

/// Builds Gamma_mu = B ((sqrt(p_mu) U) (+) gamma_mu) B^dagger. `basis` is a
/// full unitary whose first d columns span the protected subspace; when it
/// is empty the computational basis is used. An empty `complement_kraus`
/// is allowed only when the complement is trivial (d == dim).
/// Throws BadProbabilities, ComplementNotTracePreserving, NotUnitary,
/// LengthMismatch.
KrausChannel dfs_build(const ComplexMatrix &u_support, std::span<const double> probs,
                       std::span<const ComplexMatrix> complement_kraus,
                       const ComplexMatrix &basis = {});

enum class StandardChannel { Depolarizing, AmplitudeDamping, Dephasing };

/// depolarizing(p):       rho -> (1 - p) rho + p I/d, via Weyl operators.
/// amplitude_damping(p):  decay |k> -> |0> for k >= 1, decay operators first
///                        then the no-jump operator (for a qubit:
///                        {[[0, sqrt p], [0, 0]], diag(1, sqrt(1 - p))}).
/// dephasing(p):          rho -> (1 - p) rho + p sum_k |k><k| rho |k><k|.
/// Zero-weight operators are dropped. Throws BadParam.
KrausChannel standard_channel(StandardChannel kind, double param, std::size_t dim);

/// Full dephasing in the orthonormal basis given by the columns of `basis`;
/// if the columns do not span the space, the complement projector is
/// appended as one more Kraus operator.
KrausChannel dephasing_channel(const ComplexMatrix &basis);

/// Channel from a random Wishart Choi matrix, made trace preserving by the
/// congruence J -> (A^{-1/2} (x) I) J (A^{-1/2} (x) I), A = Tr_out J.
/// Full Kraus rank d^2 with probability one.
KrausChannel random_channel(std::size_t dim, Rng &rng);

/// Random channel with exactly `num_kraus` operators (random isometry
/// V: C^d -> C^d (x) C^M cut into blocks).
KrausChannel random_channel_with_kraus(std::size_t dim, std::size_t num_kraus, Rng &rng);

}  // namespace envar
