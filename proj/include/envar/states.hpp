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
#include <map>
#include <span>
#include <vector>

#include "envar/linalg.hpp"

namespace envar {

/// Subsystem dimensions, slowest-varying factor first. Every flattening in
/// the library is row-major over this list: for dims (a, b) the amplitude
/// of |i>|j> sits at index i * b + j.
using Dims = std::vector<std::size_t>;

std::size_t total_dim(const Dims &dims);

class PureState {
 public:
  /// Amplitudes whose squared norm is within 1e-4 of one are renormalised;
  /// anything further off throws NotNormalized.
  PureState(Dims dims, std::vector<cplx> amplitudes);

  const Dims &dims() const noexcept { return dims_; }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::size_t num_factors() const noexcept { return dims_.size(); }

  /// Amplitude matrix Psi with psi_ij = <i, j|psi>, splitting the factors
  /// into [0, split) and [split, n). Defaults to the first factor vs rest.
  ComplexMatrix amplitude_matrix(std::size_t split = 1) const;

 private:
  Dims dims_;
  std::vector<cplx> amps_;
};

class DensityMatrix {
 public:
  /// Checks shape, Hermiticity (Frobenius residual <= 1e-10 relative to the
  /// matrix scale) and unit trace (1e-10); stores the Hermitian part.
  DensityMatrix(Dims dims, ComplexMatrix matrix);

  const Dims &dims() const noexcept { return dims_; }
  const ComplexMatrix &matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  std::size_t num_factors() const noexcept { return dims_.size(); }

 private:
  Dims dims_;
  ComplexMatrix m_;
};

DensityMatrix density(const PureState &psi);

/// Bipartite state with amplitudes psi_ij = Psi(i, j), dims (rows, cols).
PureState pure_from_matrix(const ComplexMatrix &psi_matrix);
PureState product_state(const PureState &a, const PureState &b);
PureState basis_state(const Dims &dims, const std::vector<std::size_t> &digits);
/// Reorders factors: factor k of the result is factor perm[k] of `psi`.
PureState permute_factors(const PureState &psi, const std::vector<std::size_t> &perm);
DensityMatrix permute_factors(const DensityMatrix &rho,
                              const std::vector<std::size_t> &perm);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b);

double fidelity(const PureState &a, const PureState &b);    // |<a|b>|^2
double fidelity(const PureState &a, const DensityMatrix &rho);  // <a|rho|a>

/// Partial trace keeping the factors listed in `keep` (any order; the result
/// keeps them in their original relative order). Throws BadSubsystemIndex.
DensityMatrix reduced_density(const DensityMatrix &rho,
                              const std::vector<std::size_t> &keep);
DensityMatrix reduced_density(const PureState &psi,
                              const std::vector<std::size_t> &keep);

/// Von Neumann entropy in nats; eigenvalues below 1e-14 contribute zero.
double entropy(const DensityMatrix &rho);
double entropy(const ComplexMatrix &rho);
double purity(const DensityMatrix &rho);
double min_eigenvalue(const DensityMatrix &rho);

/// Groups of indices into a descending coefficient list whose magnitudes
/// agree within `rel_tol * max(|c_i|, |c_j|)`, closed transitively.
/// counts[k] = r_k, the number of groups of size k.
struct MultiplicityPartition {
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::size_t, std::size_t> counts;
};

inline constexpr double kDegeneracyTol = 1e-8;

MultiplicityPartition multiplicity_partition(std::span<const double> coeffs,
                                             double rel_tol = kDegeneracyTol);

/// |psi> = sum_k coeffs[k] |s_k> (x) |e_k>, with |s_k> the k-th column of
/// left_basis and |e_k> the k-th column of right_basis. Both bases are full
/// unitaries; columns past `rank` span the orthogonal complements.
///
/// Phase convention: each |s_k> has its largest-magnitude component real and
/// positive and |e_k> carries the compensating phase, so coeffs are real.
struct SchmidtDecomposition {
  std::vector<double> coeffs;
  ComplexMatrix left_basis;
  ComplexMatrix right_basis;
  std::size_t rank = 0;
  MultiplicityPartition partition;

  ComplexMatrix support_left() const { return left_basis.columns(0, rank); }
  ComplexMatrix support_right() const { return right_basis.columns(0, rank); }
};

/// Schmidt decomposition of a bipartite state across factor 0 | factor 1.
/// rank counts singular values above `tol`.
SchmidtDecomposition schmidt(const PureState &psi, double tol = kDefaultTol,
                             double degeneracy_tol = kDegeneracyTol);
std::vector<cplx> reconstruct(const SchmidtDecomposition &sd);

/// sum_k c_k |s_k> (x) |e_k^(1)> (x) ... (x) |e_k^(n)>. Each basis holds
/// the branch vectors as columns.
PureState branch_state(std::span<const cplx> coeffs, const ComplexMatrix &system_basis,
                       const std::vector<ComplexMatrix> &env_bases);

// ---------------------------------------------------------------------------
// Local-operator kernels on flattened tensors.

/// (I (x) op (x) I)|v> with `op` acting on factor `factor`. `op` must be
/// square of size dims[factor].
std::vector<cplx> apply_on_factor(std::span<const cplx> amps, const Dims &dims,
                                  std::size_t factor, const ComplexMatrix &op);

/// sum_mu (I (x) K_mu (x) I) rho (I (x) K_mu (x) I)^dagger.
ComplexMatrix apply_kraus_on_factor(const ComplexMatrix &rho, const Dims &dims,
                                    std::size_t factor,
                                    std::span<const ComplexMatrix> kraus);

}  // namespace envar
