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

#include "envar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace envar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BadSubsystemIndex: return "BadSubsystemIndex";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadProbabilities: return "BadProbabilities";
    case ErrorCode::ComplementNotTracePreserving: return "ComplementNotTracePreserving";
    case ErrorCode::BadParam: return "BadParam";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::CompletionViolated: return "CompletionViolated";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotEnvariancePair: return "NotEnvariancePair";
    case ErrorCode::GapTooSmall: return "GapTooSmall";
    case ErrorCode::NotHermitianSample: return "NotHermitianSample";
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw EnvarError(ErrorCode::ShapeMismatch,
                     "entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  for (const auto &z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw EnvarError(ErrorCode::NonFinite, "matrix entry is not finite");
    }
  }
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_) {
      throw EnvarError(ErrorCode::ShapeMismatch, "ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::column_vector(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::from_columns(
    const std::vector<std::vector<cplx>> &cols) {
  if (cols.empty()) return {};
  const std::size_t n = cols.front().size();
  ComplexMatrix m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != n) {
      throw EnvarError(ErrorCode::ShapeMismatch, "columns of unequal length");
    }
    m.set_column(j, cols[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto &z : out.data_) z = std::conj(z);
  return out;
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
  std::vector<cplx> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const cplx> v) {
  if (v.size() != rows_) {
    throw EnvarError(ErrorCode::ShapeMismatch, "column length mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix ComplexMatrix::columns(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0,
                                   std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw EnvarError(ErrorCode::ShapeMismatch, "block out of range");
  }
  ComplexMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0,
                              const ComplexMatrix &b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw EnvarError(ErrorCode::ShapeMismatch, "block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto &z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw EnvarError(ErrorCode::ShapeMismatch, "matrix sum shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw EnvarError(ErrorCode::ShapeMismatch, "matrix difference shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
  for (auto &z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.cols_ != b.rows_) {
    throw EnvarError(ErrorCode::ShapeMismatch,
                     "product of " + std::to_string(a.rows_) + "x" +
                         std::to_string(a.cols_) + " and " +
                         std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const cplx *brow = &b.data_[k * b.cols_];
      cplx *crow = &c.data_[i * c.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Free helpers

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

std::vector<cplx> matvec(const ComplexMatrix &a, std::span<const cplx> v) {
  if (a.cols() != v.size()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "matvec size mismatch");
  }
  std::vector<cplx> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "inner product size mismatch");
  }
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto &z : v) s += std::norm(z);
  return std::sqrt(s);
}

double distance(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a - b).frobenius_norm();
}

double distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "vector size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double hermiticity_residual(const ComplexMatrix &h) {
  if (!h.is_square()) {
    throw EnvarError(ErrorCode::NonSquare, "matrix is not square");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      s += std::norm(h(i, j) - std::conj(h(j, i)));
  return std::sqrt(s);
}

double unitarity_residual(const ComplexMatrix &u) {
  if (!u.is_square()) {
    throw EnvarError(ErrorCode::NonSquare, "matrix is not square");
  }
  return orthonormality_residual(u);
}

bool is_hermitian(const ComplexMatrix &h, double tol) {
  return h.is_square() && hermiticity_residual(h) <= tol;
}

bool is_unitary(const ComplexMatrix &u, double tol) {
  return u.is_square() && unitarity_residual(u) <= tol;
}

double orthonormality_residual(const ComplexMatrix &v) {
  return distance(v.adjoint() * v, ComplexMatrix::identity(v.cols()));
}

cplx fix_phase(std::span<cplx> v) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // Ties go to the first index; the small relative slack keeps the choice
    // stable when two components are equal up to rounding.
    const double m = std::abs(v[i]);
    if (m > best_mag * (1.0 + 1e-12)) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return 1.0;
  const cplx phase = std::conj(v[best]) / best_mag;
  for (auto &z : v) z *= phase;
  v[best] = cplx(std::abs(v[best]), 0.0);
  return phase;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

double off_diagonal_mass(const ComplexMatrix &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix &h, double tol) {
  if (!h.is_square()) {
    throw EnvarError(ErrorCode::NonSquare, "hermitian_eig needs a square matrix");
  }
  const double herm = hermiticity_residual(h);
  if (herm > tol) {
    throw EnvarError(ErrorCode::NotHermitian,
                     "||H - H^dagger||_F = " + std::to_string(herm), herm);
  }
  const std::size_t n = h.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  const double target = std::max(std::min(tol, 1e-12) * 1e-3, 1e-16) * scale;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_mass(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Rotation is pointless once the entry is negligible against both
        // diagonal entries.
        if (sweep > 3 && r < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const cplx phase = a(p, q) / r;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });
  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orthonormal bases

ComplexMatrix orthonormalize_columns(const ComplexMatrix &a, double tol) {
  std::vector<std::vector<cplx>> kept;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<cplx> v = a.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto &q : kept) {
        const cplx c = inner(q, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    }
    const double nv = norm(v);
    if (nv <= tol) continue;
    for (auto &z : v) z /= nv;
    kept.push_back(std::move(v));
  }
  if (kept.empty()) return ComplexMatrix(a.rows(), 0);
  return ComplexMatrix::from_columns(kept);
}

ComplexMatrix complete_basis(const ComplexMatrix &cols, double tol) {
  const std::size_t n = cols.rows();
  std::vector<std::vector<cplx>> basis;
  basis.reserve(n);
  for (std::size_t j = 0; j < cols.cols(); ++j) basis.push_back(cols.column(j));
  if (basis.size() > n) {
    throw EnvarError(ErrorCode::ShapeMismatch, "more columns than dimension");
  }
  if (orthonormality_residual(cols) > tol) {
    throw EnvarError(ErrorCode::NonOrthonormalBasis,
                     "columns to extend are not orthonormal",
                     orthonormality_residual(cols));
  }
  // Greedy: repeatedly add the canonical vector with the largest component
  // outside the current span.
  while (basis.size() < n) {
    std::vector<cplx> best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<cplx> e(n, 0.0);
      e[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto &q : basis) {
          const cplx c = inner(q, e);
          for (std::size_t k = 0; k < n; ++k) e[k] -= c * q[k];
        }
      }
      const double ne = norm(e);
      if (ne > best_norm) {
        best_norm = ne;
        best = std::move(e);
      }
    }
    for (auto &z : best) z /= best_norm;
    basis.push_back(std::move(best));
  }
  if (basis.empty()) return ComplexMatrix(0, 0);
  return ComplexMatrix::from_columns(basis);
}

// ---------------------------------------------------------------------------
// SVD via the Gram matrix

SvdResult complex_svd(const ComplexMatrix &a, double tol) {
  const double fro = a.frobenius_norm();
  if (a.empty() || fro <= tol) {
    throw EnvarError(ErrorCode::ZeroMatrix, "SVD of a zero matrix", fro);
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t r = std::min(m, n);

  // Right singular vectors from A^dagger A. Singular values are taken as
  // ||A v_k|| rather than sqrt(lambda_k), which keeps tiny singular values
  // accurate to machine precision instead of sqrt(eps).
  const ComplexMatrix gram = a.adjoint() * a;
  EigenSystem es = hermitian_eig(gram, std::max(tol, 1e-12 * fro * fro));
  ComplexMatrix v(n, n);
  std::vector<double> sig(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;  // descending
    auto col = es.eigenvectors.column(src);
    v.set_column(k, col);
    sig[k] = norm(matvec(a, col));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  SvdResult out;
  out.singulars.resize(r);
  ComplexMatrix vs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    vs.set_column(k, v.column(order[k]));
    if (k < r) out.singulars[k] = sig[order[k]];
  }

  std::vector<std::vector<cplx>> left_cols;
  for (std::size_t k = 0; k < r; ++k) {
    if (out.singulars[k] <= tol) break;
    auto u = matvec(a, vs.column(k));
    for (auto &z : u) z /= out.singulars[k];
    left_cols.push_back(std::move(u));
  }
  ComplexMatrix left =
      left_cols.empty() ? ComplexMatrix(m, 0) : ComplexMatrix::from_columns(left_cols);
  // Re-orthonormalise the computed columns (in descending-sigma order) so
  // that nearly-degenerate Gram eigenvectors cannot leak into each other.
  left = orthonormalize_columns(left, 0.0);
  out.left = complete_basis(left, 1e-6);
  // A = U S V^dagger = U S (conj V)^T
  out.right = vs.conj();
  return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix &a) {
  if (!a.is_square()) {
    throw EnvarError(ErrorCode::NonSquare, "polar decomposition needs a square matrix");
  }
  const SvdResult s = complex_svd(a);
  return s.left * s.right.transpose();
}

ComplexMatrix unitary_exp(const ComplexMatrix &h, double t) {
  const EigenSystem es = hermitian_eig(h);
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx ph = std::exp(cplx(0.0, -es.eigenvalues[k] * t));
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = es.eigenvectors(i, k) * ph;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.eigenvectors(j, k));
    }
  }
  return out;
}

namespace {

ComplexMatrix spectral_map(const ComplexMatrix &h, double (*f)(double, double),
                           double param) {
  const EigenSystem es = hermitian_eig(h, std::max(1e-10, 1e-12 * h.frobenius_norm()));
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(es.eigenvalues[k], param);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = es.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.eigenvectors(j, k));
    }
  }
  return out;
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix &h) {
  return spectral_map(
      h, [](double x, double) { return x > 0.0 ? std::sqrt(x) : 0.0; }, 0.0);
}

ComplexMatrix psd_inv_sqrt(const ComplexMatrix &h, double floor) {
  return spectral_map(
      h, [](double x, double fl) { return x > fl ? 1.0 / std::sqrt(x) : 0.0; },
      floor);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

template <typename T>
T simpson(std::span<const T> f, double dt) {
  if (f.size() < 2) {
    throw EnvarError(ErrorCode::TooFewSamples,
                     "need at least 2 samples, got " + std::to_string(f.size()));
  }
  if (!(dt > 0.0)) {
    throw EnvarError(ErrorCode::BadParam, "step must be positive", dt);
  }
  const std::size_t n = f.size();
  if (n == 2) return 0.5 * dt * (f[0] + f[1]);
  if (n == 4) return 3.0 * dt / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);

  // Simpson over the first `m` samples (m odd), 3/8 rule over the rest.
  const std::size_t m = (n % 2 == 1) ? n : n - 3;
  T acc = f[0] + f[m - 1];
  for (std::size_t i = 1; i + 1 < m; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  T total = acc * (dt / 3.0);
  if (m != n) {
    total += 3.0 * dt / 8.0 *
             (f[m - 1] + 3.0 * f[m] + 3.0 * f[m + 1] + f[m + 2]);
  }
  return total;
}

}  // namespace

double integrate_sampled(std::span<const double> values, double dt) {
  return simpson<double>(values, dt);
}

cplx integrate_sampled(std::span<const cplx> values, double dt) {
  return simpson<cplx>(values, dt);
}

}  // namespace envar
