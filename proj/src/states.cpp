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

#include "envar/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace envar {

std::size_t total_dim(const Dims &dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

namespace {

void check_dims(const Dims &dims) {
  if (dims.empty()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "state needs at least one factor");
  }
  for (auto d : dims) {
    if (d == 0) throw EnvarError(ErrorCode::ShapeMismatch, "zero subsystem dimension");
  }
}

struct FactorSplit {
  std::size_t left, mid, right;
};

FactorSplit split_at(const Dims &dims, std::size_t factor) {
  if (factor >= dims.size()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex,
                     "factor " + std::to_string(factor) + " out of range");
  }
  FactorSplit s{1, dims[factor], 1};
  for (std::size_t k = 0; k < factor; ++k) s.left *= dims[k];
  for (std::size_t k = factor + 1; k < dims.size(); ++k) s.right *= dims[k];
  return s;
}

// Strides of the row-major flattening.
std::vector<std::size_t> strides_of(const Dims &dims) {
  std::vector<std::size_t> st(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) st[k - 1] = st[k] * dims[k];
  return st;
}

// For the factors listed in `which`, the flat-index contribution of every
// joint value of those factors (enumerated row-major over `which`).
std::vector<std::size_t> offsets_for(const Dims &dims,
                                     const std::vector<std::size_t> &which) {
  const auto st = strides_of(dims);
  std::vector<std::size_t> offs{0};
  for (auto f : which) {
    std::vector<std::size_t> next;
    next.reserve(offs.size() * dims[f]);
    for (auto o : offs)
      for (std::size_t v = 0; v < dims[f]; ++v) next.push_back(o + v * st[f]);
    offs = std::move(next);
  }
  return offs;
}

std::vector<std::size_t> normalize_keep(const Dims &dims,
                                        std::vector<std::size_t> keep) {
  if (keep.empty()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex, "keep set is empty");
  }
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex, "duplicate subsystem index");
  }
  if (keep.back() >= dims.size()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex,
                     "subsystem index " + std::to_string(keep.back()) +
                         " out of range for " + std::to_string(dims.size()) +
                         " factors");
  }
  return keep;
}

std::vector<std::size_t> complement_of(std::size_t n,
                                       const std::vector<std::size_t> &keep) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) out.push_back(k);
  return out;
}

Dims select(const Dims &dims, const std::vector<std::size_t> &idx) {
  Dims out;
  for (auto k : idx) out.push_back(dims[k]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

PureState::PureState(Dims dims, std::vector<cplx> amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  check_dims(dims_);
  if (total_dim(dims_) != amps_.size()) {
    throw EnvarError(ErrorCode::LengthMismatch,
                     "amplitude count " + std::to_string(amps_.size()) +
                         " does not match dims product " +
                         std::to_string(total_dim(dims_)));
  }
  for (const auto &z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw EnvarError(ErrorCode::NonFinite, "amplitude is not finite");
    }
  }
  const double n = norm(amps_);
  if (std::abs(n - 1.0) > 1e-4) {
    throw EnvarError(ErrorCode::NotNormalized,
                     "state norm " + std::to_string(n) + " is not 1", n);
  }
  for (auto &z : amps_) z /= n;
}

ComplexMatrix PureState::amplitude_matrix(std::size_t split) const {
  if (split == 0 || split > dims_.size()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex, "bad bipartition split");
  }
  std::size_t rows = 1;
  for (std::size_t k = 0; k < split; ++k) rows *= dims_[k];
  const std::size_t cols = amps_.size() / rows;
  return ComplexMatrix(rows, cols, amps_);
}

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), m_(std::move(matrix)) {
  check_dims(dims_);
  const std::size_t n = total_dim(dims_);
  if (m_.rows() != n || m_.cols() != n) {
    throw EnvarError(ErrorCode::ShapeMismatch,
                     "density matrix is " + std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()) + ", dims need " +
                         std::to_string(n));
  }
  const double herm = hermiticity_residual(m_);
  if (herm > 1e-10 * std::max(1.0, m_.frobenius_norm())) {
    throw EnvarError(ErrorCode::NotHermitian, "density matrix is not Hermitian", herm);
  }
  const cplx tr = m_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw EnvarError(ErrorCode::NotNormalized,
                     "density matrix trace " + std::to_string(tr.real()), tr.real());
  }
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m_(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
  }
}

DensityMatrix density(const PureState &psi) {
  const auto a = psi.amplitudes();
  ComplexMatrix m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i] * std::conj(a[j]);
  return DensityMatrix(psi.dims(), std::move(m));
}

PureState pure_from_matrix(const ComplexMatrix &psi_matrix) {
  if (psi_matrix.empty()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "empty amplitude matrix");
  }
  return PureState({psi_matrix.rows(), psi_matrix.cols()},
                   std::vector<cplx>(psi_matrix.data().begin(), psi_matrix.data().end()));
}

PureState product_state(const PureState &a, const PureState &b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return PureState(std::move(dims), kron(a.amplitudes(), b.amplitudes()));
}

PureState basis_state(const Dims &dims, const std::vector<std::size_t> &digits) {
  check_dims(dims);
  if (digits.size() != dims.size()) {
    throw EnvarError(ErrorCode::LengthMismatch, "one digit per factor required");
  }
  const auto st = strides_of(dims);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] >= dims[k]) {
      throw EnvarError(ErrorCode::BadSubsystemIndex, "basis digit out of range");
    }
    idx += digits[k] * st[k];
  }
  std::vector<cplx> amps(total_dim(dims), 0.0);
  amps[idx] = 1.0;
  return PureState(dims, std::move(amps));
}

namespace {

// Flat-index map: position p of the permuted tensor -> position in source.
std::vector<std::size_t> permutation_map(const Dims &dims,
                                         const std::vector<std::size_t> &perm) {
  if (perm.size() != dims.size()) {
    throw EnvarError(ErrorCode::LengthMismatch, "permutation length mismatch");
  }
  std::vector<std::size_t> check = perm;
  std::sort(check.begin(), check.end());
  for (std::size_t k = 0; k < check.size(); ++k) {
    if (check[k] != k) throw EnvarError(ErrorCode::BadSubsystemIndex, "not a permutation");
  }
  // Enumerating the source offsets in the new factor order gives, for each
  // new flat index, its source flat index.
  return offsets_for(dims, perm);
}

}  // namespace

PureState permute_factors(const PureState &psi, const std::vector<std::size_t> &perm) {
  const auto map = permutation_map(psi.dims(), perm);
  std::vector<cplx> out(psi.dim());
  for (std::size_t p = 0; p < map.size(); ++p) out[p] = psi.amplitudes()[map[p]];
  return PureState(select(psi.dims(), perm), std::move(out));
}

DensityMatrix permute_factors(const DensityMatrix &rho,
                              const std::vector<std::size_t> &perm) {
  const auto map = permutation_map(rho.dims(), perm);
  ComplexMatrix out(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t j = 0; j < map.size(); ++j) out(i, j) = rho.matrix()(map[i], map[j]);
  return DensityMatrix(select(rho.dims(), perm), std::move(out));
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(std::move(dims), kron(a.matrix(), b.matrix()));
}

double fidelity(const PureState &a, const PureState &b) {
  return std::norm(inner(a.amplitudes(), b.amplitudes()));
}

double fidelity(const PureState &a, const DensityMatrix &rho) {
  return inner(a.amplitudes(), matvec(rho.matrix(), a.amplitudes())).real();
}

// ---------------------------------------------------------------------------
// Partial traces

DensityMatrix reduced_density(const DensityMatrix &rho,
                              const std::vector<std::size_t> &keep_in) {
  const auto keep = normalize_keep(rho.dims(), keep_in);
  const auto traced = complement_of(rho.dims().size(), keep);
  const auto kept_off = offsets_for(rho.dims(), keep);
  const auto tr_off = offsets_for(rho.dims(), traced);
  const std::size_t n = kept_off.size();
  ComplexMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      cplx s = 0.0;
      for (auto t : tr_off) s += rho.matrix()(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = s;
    }
  return DensityMatrix(select(rho.dims(), keep), std::move(out));
}

DensityMatrix reduced_density(const PureState &psi,
                              const std::vector<std::size_t> &keep_in) {
  const auto keep = normalize_keep(psi.dims(), keep_in);
  const auto traced = complement_of(psi.dims().size(), keep);
  const auto kept_off = offsets_for(psi.dims(), keep);
  const auto tr_off = offsets_for(psi.dims(), traced);
  const auto amps = psi.amplitudes();
  const std::size_t n = kept_off.size();
  ComplexMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      cplx s = 0.0;
      for (auto t : tr_off) s += amps[kept_off[a] + t] * std::conj(amps[kept_off[b] + t]);
      out(a, b) = s;
      out(b, a) = std::conj(s);
    }
  return DensityMatrix(select(psi.dims(), keep), std::move(out));
}

// ---------------------------------------------------------------------------
// Scalar functionals

double entropy(const ComplexMatrix &rho) {
  const EigenSystem es = hermitian_eig(rho, std::max(1e-10, 1e-12 * rho.frobenius_norm()));
  double s = 0.0;
  for (double l : es.eigenvalues)
    if (l > 1e-14) s -= l * std::log(l);
  return s;
}

double entropy(const DensityMatrix &rho) { return entropy(rho.matrix()); }

double purity(const DensityMatrix &rho) {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
  const double f = rho.matrix().frobenius_norm();
  return f * f;
}

double min_eigenvalue(const DensityMatrix &rho) {
  return hermitian_eig(rho.matrix()).eigenvalues.front();
}

// ---------------------------------------------------------------------------
// Schmidt analysis

MultiplicityPartition multiplicity_partition(std::span<const double> coeffs,
                                             double rel_tol) {
  MultiplicityPartition out;
  const std::size_t d = coeffs.size();
  // Transitive closure of the pairwise relation via union-find; for sorted
  // input this coincides with chaining neighbours, but the input need not be
  // sorted.
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double a = std::abs(coeffs[i]), b = std::abs(coeffs[j]);
      if (std::abs(a - b) <= rel_tol * std::max(a, b)) parent[find(i)] = find(j);
    }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < d; ++i) by_root[find(i)].push_back(i);
  for (auto &[root, members] : by_root) out.groups.push_back(std::move(members));
  std::sort(out.groups.begin(), out.groups.end(),
            [](const auto &x, const auto &y) { return x.front() < y.front(); });
  for (const auto &g : out.groups) ++out.counts[g.size()];
  return out;
}

SchmidtDecomposition schmidt(const PureState &psi, double tol, double degeneracy_tol) {
  if (psi.num_factors() != 2) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "Schmidt decomposition needs a bipartite state");
  }
  SvdResult svd = complex_svd(psi.amplitude_matrix(), tol);
  SchmidtDecomposition sd;
  sd.left_basis = std::move(svd.left);
  sd.right_basis = std::move(svd.right);
  for (double s : svd.singulars) {
    if (s > tol) sd.coeffs.push_back(s);
  }
  sd.rank = sd.coeffs.size();
  for (std::size_t k = 0; k < sd.left_basis.cols(); ++k) {
    auto col = sd.left_basis.column(k);
    const cplx ph = fix_phase(col);
    sd.left_basis.set_column(k, col);
    if (k < sd.right_basis.cols()) {
      auto rcol = sd.right_basis.column(k);
      for (auto &z : rcol) z *= std::conj(ph);
      sd.right_basis.set_column(k, rcol);
    }
  }
  sd.partition = multiplicity_partition(sd.coeffs, degeneracy_tol);
  return sd;
}

std::vector<cplx> reconstruct(const SchmidtDecomposition &sd) {
  const std::size_t ds = sd.left_basis.rows(), de = sd.right_basis.rows();
  std::vector<cplx> out(ds * de, 0.0);
  for (std::size_t k = 0; k < sd.rank; ++k) {
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < de; ++j)
        out[i * de + j] += sd.coeffs[k] * sd.left_basis(i, k) * sd.right_basis(j, k);
  }
  return out;
}

PureState branch_state(std::span<const cplx> coeffs, const ComplexMatrix &system_basis,
                       const std::vector<ComplexMatrix> &env_bases) {
  const std::size_t d = coeffs.size();
  auto check_basis = [&](const ComplexMatrix &b, const char *what) {
    if (b.cols() != d) {
      throw EnvarError(ErrorCode::LengthMismatch,
                       std::string(what) + " has " + std::to_string(b.cols()) +
                           " branch vectors, expected " + std::to_string(d));
    }
    const double r = orthonormality_residual(b);
    if (r > 1e-10) {
      throw EnvarError(ErrorCode::NonOrthonormalBasis,
                       std::string(what) + " is not orthonormal", r);
    }
  };
  check_basis(system_basis, "system basis");
  for (const auto &b : env_bases) check_basis(b, "environment basis");
  double w = 0.0;
  for (const auto &c : coeffs) w += std::norm(c);
  if (std::abs(w - 1.0) > 1e-10) {
    throw EnvarError(ErrorCode::NotNormalized, "branch weights do not sum to 1", w);
  }

  Dims dims{system_basis.rows()};
  for (const auto &b : env_bases) dims.push_back(b.rows());
  std::vector<cplx> amps(total_dim(dims), 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<cplx> branch = system_basis.column(k);
    for (const auto &b : env_bases) branch = kron(branch, b.column(k));
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += coeffs[k] * branch[i];
  }
  return PureState(std::move(dims), std::move(amps));
}

// ---------------------------------------------------------------------------
// Kernels

std::vector<cplx> apply_on_factor(std::span<const cplx> amps, const Dims &dims,
                                  std::size_t factor, const ComplexMatrix &op) {
  const auto [left, mid, right] = split_at(dims, factor);
  if (op.rows() != mid || op.cols() != mid) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "operator size " + std::to_string(op.rows()) +
                         " does not match factor dimension " + std::to_string(mid));
  }
  if (amps.size() != left * mid * right) {
    throw EnvarError(ErrorCode::DimensionMismatch, "vector size does not match dims");
  }
  std::vector<cplx> out(amps.size(), 0.0);
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t a = 0; a < mid; ++a)
      for (std::size_t b = 0; b < mid; ++b) {
        const cplx k = op(a, b);
        if (k == cplx{}) continue;
        const std::size_t dst = (l * mid + a) * right;
        const std::size_t src = (l * mid + b) * right;
        for (std::size_t r = 0; r < right; ++r) out[dst + r] += k * amps[src + r];
      }
  return out;
}

ComplexMatrix apply_kraus_on_factor(const ComplexMatrix &rho, const Dims &dims,
                                    std::size_t factor,
                                    std::span<const ComplexMatrix> kraus) {
  const auto [left, mid, right] = split_at(dims, factor);
  const std::size_t n = left * mid * right;
  if (rho.rows() != n || rho.cols() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch, "density matrix does not match dims");
  }
  ComplexMatrix out(n, n);
  ComplexMatrix tmp(n, n);
  for (const auto &k : kraus) {
    if (k.rows() != mid || k.cols() != mid) {
      throw EnvarError(ErrorCode::DimensionMismatch,
                       "Kraus operator size " + std::to_string(k.rows()) +
                           " does not match factor dimension " + std::to_string(mid));
    }
    // tmp = (I (x) K (x) I) rho
    std::fill(tmp.data().begin(), tmp.data().end(), cplx{});
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t a = 0; a < mid; ++a)
        for (std::size_t b = 0; b < mid; ++b) {
          const cplx kab = k(a, b);
          if (kab == cplx{}) continue;
          for (std::size_t r = 0; r < right; ++r) {
            const std::size_t dst = (l * mid + a) * right + r;
            const std::size_t src = (l * mid + b) * right + r;
            cplx *drow = &tmp(dst, 0);
            const cplx *srow = &rho(src, 0);
            for (std::size_t c = 0; c < n; ++c) drow[c] += kab * srow[c];
          }
        }
    // out += tmp (I (x) K^dagger (x) I)
    for (std::size_t x = 0; x < n; ++x) {
      const cplx *trow = &tmp(x, 0);
      cplx *orow = &out(x, 0);
      for (std::size_t l = 0; l < left; ++l)
        for (std::size_t a = 0; a < mid; ++a)
          for (std::size_t b = 0; b < mid; ++b) {
            const cplx kab = std::conj(k(a, b));
            if (kab == cplx{}) continue;
            for (std::size_t r = 0; r < right; ++r)
              orow[(l * mid + a) * right + r] += trow[(l * mid + b) * right + r] * kab;
          }
    }
  }
  return out;
}

}  // namespace envar
