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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "envar/error.hpp"

namespace envar {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

/// Dense row-major complex matrix. Sizes here never exceed a few hundred
/// rows, so everything is plain loops over a contiguous buffer.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws ShapeMismatch if `entries.size() != rows * cols` and NonFinite
  /// if any entry is NaN or infinite.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// Column vector (n x 1).
  static ComplexMatrix column_vector(std::span<const cplx> v);
  /// Matrix whose columns are the given vectors (all of equal length).
  static ComplexMatrix from_columns(const std::vector<std::vector<cplx>> &cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  std::vector<cplx> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);
  /// Copy of the columns [first, first + count).
  ComplexMatrix columns(std::size_t first, std::size_t count) const;
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix &b);

  cplx trace() const;
  double frobenius_norm() const;

  ComplexMatrix &operator+=(const ComplexMatrix &o);
  ComplexMatrix &operator-=(const ComplexMatrix &o);
  ComplexMatrix &operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b);

std::vector<cplx> matvec(const ComplexMatrix &a, std::span<const cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>
double norm(std::span<const cplx> v);
/// Frobenius distance ||a - b||.
double distance(const ComplexMatrix &a, const ComplexMatrix &b);
double distance(std::span<const cplx> a, std::span<const cplx> b);

double hermiticity_residual(const ComplexMatrix &h);  // ||H - H^dagger||_F
double unitarity_residual(const ComplexMatrix &u);    // ||U^dagger U - I||_F
bool is_hermitian(const ComplexMatrix &h, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix &u, double tol = kDefaultTol);
/// ||V^dagger V - I||_F for the columns of `v`.
double orthonormality_residual(const ComplexMatrix &v);

/// Multiplies `v` by a unit phase so that its largest-magnitude component
/// is real and positive. Returns the phase that was applied.
cplx fix_phase(std::span<cplx> v);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unit norm
};

/// Cyclic complex Jacobi. Sweeps until the off-diagonal Frobenius mass is
/// below `tol` times the matrix scale (or an absolute floor for zero
/// matrices). Throws NonSquare / NotHermitian.
EigenSystem hermitian_eig(const ComplexMatrix &h, double tol = kDefaultTol);

/// A = left * diag(singulars) * right^T. Note the plain transpose on
/// `right`: columns of `left` and `right` pair up as |s_k> (x) |e_k> when A
/// is a bipartite amplitude matrix.
struct SvdResult {
  ComplexMatrix left;            // rows(A) x rows(A), unitary
  std::vector<double> singulars; // min(rows, cols), descending, >= 0
  ComplexMatrix right;           // cols(A) x cols(A), unitary
};

/// Throws ZeroMatrix when ||A||_F <= tol.
SvdResult complex_svd(const ComplexMatrix &a, double tol = kDefaultTol);

/// Unitary factor of the polar decomposition A = W P (square A).
ComplexMatrix polar_unitary(const ComplexMatrix &a);

/// e^{-iHt}. Throws NotHermitian.
ComplexMatrix unitary_exp(const ComplexMatrix &h, double t);

/// Extends `cols` (orthonormal columns) to a full unitary basis of the
/// ambient space; the given columns come first.
ComplexMatrix complete_basis(const ComplexMatrix &cols, double tol = 1e-8);

/// Orthonormalises the columns of `a` (modified Gram-Schmidt, two passes).
/// Columns that collapse below `tol` are dropped.
ComplexMatrix orthonormalize_columns(const ComplexMatrix &a, double tol = 1e-10);

/// Principal square root of a positive semidefinite Hermitian matrix, and its
/// pseudo-inverse counterpart (eigenvalues below `floor` are zeroed).
ComplexMatrix psd_sqrt(const ComplexMatrix &h);
ComplexMatrix psd_inv_sqrt(const ComplexMatrix &h, double floor = 1e-14);

/// Composite Simpson estimate of the integral of uniformly sampled data.
/// Odd sample counts are pure Simpson; even counts close the last three
/// intervals with Simpson's 3/8 rule; two samples fall back to the
/// trapezoid. Throws TooFewSamples (< 2) and BadParam (dt <= 0).
double integrate_sampled(std::span<const double> values, double dt);
cplx integrate_sampled(std::span<const cplx> values, double dt);

}  // namespace envar
