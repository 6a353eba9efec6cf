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

#include <algorithm>

#include "envar/linalg.hpp"
#include "envar/random.hpp"
#include "test_util.hpp"

namespace envar {
namespace {

using testing::expect_code;
using testing::pauli_x;
using testing::pauli_y;
using testing::pauli_z;

TEST(Linalg, EigTwoByTwoMatchesClosedForm) {
  // H = a I + b.sigma has eigenvalues a -/+ |b|.
  const double a = 0.3, bx = 0.4, by = -1.1, bz = 0.7;
  const ComplexMatrix h = ComplexMatrix::identity(2) * cplx(a) + pauli_x() * cplx(bx) +
                          pauli_y() * cplx(by) + pauli_z() * cplx(bz);
  const double r = std::sqrt(bx * bx + by * by + bz * bz);
  const EigenSystem es = hermitian_eig(h);
  EXPECT_NEAR(es.eigenvalues[0], a - r, 1e-13);
  EXPECT_NEAR(es.eigenvalues[1], a + r, 1e-13);
}

TEST(Linalg, EigReconstructsRandomHermitian) {
  Rng rng(11);
  for (std::size_t n : {1u, 3u, 6u, 9u}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const EigenSystem es = hermitian_eig(h);
    EXPECT_TRUE(std::is_sorted(es.eigenvalues.begin(), es.eigenvalues.end()));
    EXPECT_LT(orthonormality_residual(es.eigenvectors), 1e-12);
    const ComplexMatrix back =
        es.eigenvectors *
        ComplexMatrix::diagonal(std::span<const double>(es.eigenvalues)) *
        es.eigenvectors.adjoint();
    EXPECT_LT(distance(back, h), 1e-11 * (1.0 + h.frobenius_norm()));
  }
}

TEST(Linalg, EigDegenerateSpectrum) {
  Rng rng(5);
  const ComplexMatrix u = random_unitary(4, rng);
  const std::vector<double> d{1.0, 1.0, -2.0, -2.0};
  const ComplexMatrix h = u * ComplexMatrix::diagonal(std::span<const double>(d)) * u.adjoint();
  const EigenSystem es = hermitian_eig(h);
  EXPECT_NEAR(es.eigenvalues[0], -2.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues[1], -2.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues[2], 1.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues[3], 1.0, 1e-12);
  EXPECT_LT(orthonormality_residual(es.eigenvectors), 1e-12);
}

TEST(Linalg, EigRejectsBadInput) {
  expect_code(ErrorCode::NonSquare, [] { hermitian_eig(ComplexMatrix(2, 3)); });
  expect_code(ErrorCode::NotHermitian,
              [] { hermitian_eig(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}); });
}

TEST(Linalg, SvdReconstructsRectangular) {
  Rng rng(3);
  for (auto [r, c] : {std::pair{2u, 5u}, std::pair{5u, 2u}, std::pair{4u, 4u}}) {
    const ComplexMatrix a = ginibre(r, c, rng);
    const SvdResult s = complex_svd(a);
    ASSERT_EQ(s.singulars.size(), std::min(r, c));
    EXPECT_TRUE(std::is_sorted(s.singulars.rbegin(), s.singulars.rend()));
    EXPECT_TRUE(is_unitary(s.left, 1e-11));
    EXPECT_TRUE(is_unitary(s.right, 1e-11));
    ComplexMatrix sig(r, c);
    for (std::size_t k = 0; k < s.singulars.size(); ++k) sig(k, k) = s.singulars[k];
    EXPECT_LT(distance(s.left * sig * s.right.transpose(), a), 1e-11);
  }
}

TEST(Linalg, SvdOfRankOneOuterProduct) {
  // |u><v| scaled by 3 has a single singular value 3.
  const std::vector<cplx> u{0.6, cplx(0, 0.8)}, v{1.0, 0.0, 0.0};
  ComplexMatrix a(2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = 3.0 * u[i] * std::conj(v[j]);
  const SvdResult s = complex_svd(a);
  EXPECT_NEAR(s.singulars[0], 3.0, 1e-13);
  EXPECT_NEAR(s.singulars[1], 0.0, 1e-13);
}

TEST(Linalg, SvdRejectsZeroMatrix) {
  expect_code(ErrorCode::ZeroMatrix, [] { complex_svd(ComplexMatrix(3, 3)); });
}

TEST(Linalg, UnitaryExpOfPauliIsRotation) {
  // exp(-i t X) = cos t I - i sin t X.
  const double t = 0.83;
  const ComplexMatrix expect =
      ComplexMatrix::identity(2) * cplx(std::cos(t)) + pauli_x() * cplx(0.0, -std::sin(t));
  EXPECT_LT(distance(unitary_exp(pauli_x(), t), expect), 1e-14);
  expect_code(ErrorCode::NotHermitian,
              [] { unitary_exp(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, 1.0); });
}

TEST(Linalg, PolarUnitaryOfScaledUnitary) {
  Rng rng(8);
  const ComplexMatrix u = random_unitary(3, rng);
  const std::vector<double> p{2.0, 0.5, 1.5};
  const ComplexMatrix w = random_unitary(3, rng);
  const ComplexMatrix pos = w * ComplexMatrix::diagonal(std::span<const double>(p)) * w.adjoint();
  EXPECT_LT(distance(polar_unitary(u * pos), u), 1e-11);
}

TEST(Linalg, FixPhaseMakesLargestComponentPositive) {
  std::vector<cplx> v{cplx(0.1, 0.2), cplx(0.0, -0.9), cplx(0.3, 0.0)};
  const std::vector<cplx> orig = v;
  const cplx ph = fix_phase(v);
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-15);
  EXPECT_NEAR(v[1].real(), 0.9, 1e-15);
  EXPECT_NEAR(v[1].imag(), 0.0, 1e-15);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v[i] - ph * orig[i]), 0.0, 1e-15);
}

TEST(Linalg, CompleteBasisKeepsGivenColumnsFirst) {
  Rng rng(21);
  const ComplexMatrix iso = random_isometry(5, 2, rng);
  const ComplexMatrix full = complete_basis(iso);
  ASSERT_EQ(full.cols(), 5u);
  EXPECT_TRUE(is_unitary(full, 1e-11));
  EXPECT_LT(distance(full.columns(0, 2), iso), 1e-14);
  expect_code(ErrorCode::NonOrthonormalBasis,
              [] { complete_basis(ComplexMatrix{{1.0, 1.0}, {0.0, 0.0}}); });
}

TEST(Linalg, PsdSqrtSquaresBack) {
  Rng rng(4);
  const ComplexMatrix g = ginibre(4, 4, rng);
  const ComplexMatrix pos = g * g.adjoint();
  const ComplexMatrix r = psd_sqrt(pos);
  EXPECT_LT(distance(r * r, pos), 1e-11);
  EXPECT_LT(distance(psd_inv_sqrt(pos) * pos * psd_inv_sqrt(pos), ComplexMatrix::identity(4)),
            1e-9);
}

TEST(Linalg, KronAndMatvecAgreeWithIndexFormula) {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix b{{0.0, cplx(0, 1)}, {5.0, 6.0}};
  const ComplexMatrix k = kron(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          EXPECT_EQ(k(2 * i + p, 2 * j + q), a(i, j) * b(p, q));
  const std::vector<cplx> v{1.0, cplx(0, 1)};
  const auto w = matvec(a, v);
  EXPECT_EQ(w[0], cplx(1.0, 2.0));
  EXPECT_EQ(w[1], cplx(3.0, 4.0));
  EXPECT_EQ(inner(v, v), cplx(2.0, 0.0));
}

TEST(Linalg, ConstructorRejectsBadEntries) {
  expect_code(ErrorCode::ShapeMismatch, [] { ComplexMatrix(2, 2, std::vector<cplx>(3)); });
  expect_code(ErrorCode::NonFinite, [] {
    ComplexMatrix(1, 1, std::vector<cplx>{cplx(std::nan(""), 0.0)});
  });
}

TEST(Linalg, SimpsonIsExactForCubics) {
  // Both the odd-count rule and the 3/8 closure integrate cubics exactly.
  for (std::size_t n : {5u, 6u, 11u, 12u}) {
    const double dt = 2.0 / double(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = i * dt;
      f[i] = x * x * x - 2 * x + 1;
    }
    EXPECT_NEAR(integrate_sampled(std::span<const double>(f), dt), 4.0 - 4.0 + 2.0, 1e-13) << n;
  }
  const std::vector<double> two{1.0, 3.0};
  EXPECT_DOUBLE_EQ(integrate_sampled(std::span<const double>(two), 0.5), 1.0);
  expect_code(ErrorCode::TooFewSamples, [] {
    const std::vector<double> one{1.0};
    integrate_sampled(std::span<const double>(one), 0.1);
  });
  expect_code(ErrorCode::BadParam, [] {
    const std::vector<double> f{1.0, 2.0, 3.0};
    integrate_sampled(std::span<const double>(f), 0.0);
  });
}

TEST(Linalg, SimpsonComplexConvergesAtFourthOrder) {
  auto err = [](std::size_t n) {
    const double dt = 1.0 / double(n - 1);
    std::vector<cplx> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(cplx(0.0, 3.0 * i * dt));
    const cplx exact = (std::exp(cplx(0.0, 3.0)) - 1.0) / cplx(0.0, 3.0);
    return std::abs(integrate_sampled(std::span<const cplx>(f), dt) - exact);
  };
  EXPECT_GT(err(21) / err(41), 12.0);
}

TEST(Linalg, SvdSquaresMatchEigenvaluesOfGram) {
  Rng rng(31);
  const ComplexMatrix a = ginibre(3, 5, rng);
  const SvdResult s = complex_svd(a);
  const EigenSystem es = hermitian_eig(a * a.adjoint());
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(s.singulars[k] * s.singulars[k], es.eigenvalues[2 - k], 1e-9);
}

TEST(Linalg, UnitaryExpGroupProperty) {
  Rng rng(32);
  const ComplexMatrix h = random_hermitian(5, rng);
  EXPECT_LT(distance(unitary_exp(h, 0.9), unitary_exp(h, 0.37) * unitary_exp(h, 0.53)), 1e-9);
  EXPECT_LT(unitarity_residual(unitary_exp(h, 0.37)), 1e-10);
  EXPECT_LT(distance(unitary_exp(pauli_z(), std::numbers::pi), ComplexMatrix::identity(2) * cplx(-1)),
            1e-14);
  EXPECT_LT(distance(unitary_exp(ComplexMatrix(3, 3), 2.0), ComplexMatrix::identity(3)), 1e-15);
}

TEST(Linalg, SimpsonOfSine) {
  const std::size_t n = 201;
  const double dt = std::numbers::pi / double(n - 1);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(i * dt);
  EXPECT_NEAR(integrate_sampled(std::span<const double>(f), dt), 2.0, 1e-8);
}

}  // namespace
}  // namespace envar
