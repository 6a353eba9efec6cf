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

#include "envar/channels.hpp"
#include "envar/random.hpp"
#include "test_util.hpp"

namespace envar {
namespace {

using testing::expect_code;
using testing::pauli_x;

DensityMatrix random_density(std::size_t d, Rng &rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  ComplexMatrix m = g * g.adjoint();
  m *= cplx(1.0 / m.trace().real());
  return DensityMatrix({d}, m);
}

/// Two-Kraus channel on C^4 that acts as X on span{|0>, |3>} with weights
/// (p, 1 - p) and damps the complement.
KrausChannel four_level_channel(double p) {
  const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
  ComplexMatrix g1(4, 4), g2(4, 4);
  g1(0, 3) = g1(1, 2) = g1(3, 0) = a;
  g2(0, 3) = g2(2, 2) = g2(3, 0) = b;
  g2(1, 1) = 1.0;
  return KrausChannel({g1, g2});
}

ComplexMatrix support_03() {
  ComplexMatrix s(4, 2);
  s(0, 0) = s(3, 1) = 1.0;
  return s;
}

TEST(Channels, ConstructorValidates) {
  expect_code(ErrorCode::ShapeMismatch, [] { KrausChannel(std::vector<ComplexMatrix>{}); });
  expect_code(ErrorCode::ShapeMismatch,
              [] { KrausChannel({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}); });
  try {
    KrausChannel({ComplexMatrix::identity(2) * cplx(0.9)});
    ADD_FAILURE() << "expected NotTracePreserving";
  } catch (const EnvarError &e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTracePreserving);
    // ||0.81 I - I||_F = 0.19 sqrt2.
    EXPECT_NEAR(e.value(), 0.19 * std::numbers::sqrt2, 1e-12);
  }
}

TEST(Channels, DepolarizingMatchesMixingFormula) {
  Rng rng(1);
  for (std::size_t d : {2u, 3u}) {
    const double p = 0.37;
    const KrausChannel ch = standard_channel(StandardChannel::Depolarizing, p, d);
    const DensityMatrix rho = random_density(d, rng);
    const ComplexMatrix expect =
        rho.matrix() * cplx(1.0 - p) + ComplexMatrix::identity(d) * cplx(p / double(d));
    EXPECT_LT(distance(apply(ch, rho).matrix(), expect), 1e-13);
    EXPECT_EQ(choi_report(ch).kraus_rank, d * d);
  }
}

TEST(Channels, AmplitudeDampingMatchesClosedForm) {
  Rng rng(2);
  const double p = 0.3;
  const KrausChannel ch = standard_channel(StandardChannel::AmplitudeDamping, p, 2);
  const DensityMatrix rho = random_density(2, rng);
  const ComplexMatrix &r = rho.matrix();
  const ComplexMatrix expect{{r(0, 0) + p * r(1, 1), std::sqrt(1 - p) * r(0, 1)},
                             {std::sqrt(1 - p) * r(1, 0), (1 - p) * r(1, 1)}};
  EXPECT_LT(distance(apply(ch, rho).matrix(), expect), 1e-14);
  EXPECT_EQ(choi_report(ch).kraus_rank, 2u);
}

TEST(Channels, DephasingScalesCoherences) {
  Rng rng(3);
  const double p = 0.6;
  const KrausChannel ch = standard_channel(StandardChannel::Dephasing, p, 3);
  const DensityMatrix rho = random_density(3, rng);
  const ComplexMatrix out = apply(ch, rho).matrix();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const cplx expect = i == j ? rho.matrix()(i, j) : (1 - p) * rho.matrix()(i, j);
      EXPECT_NEAR(std::abs(out(i, j) - expect), 0.0, 1e-14);
    }
  expect_code(ErrorCode::BadParam,
              [] { standard_channel(StandardChannel::Dephasing, 1.5, 2); });
}

TEST(Channels, DephasingInIncompleteBasisKeepsComplementBlock) {
  // Projective dephasing onto |0>, |1> of a qutrit plus the projector on |2>.
  ComplexMatrix basis(3, 2);
  basis(0, 0) = basis(1, 1) = 1.0;
  const KrausChannel ch = dephasing_channel(basis);
  EXPECT_EQ(ch.num_kraus(), 3u);
  EXPECT_LT(ch.completion_residual(), 1e-14);
}

TEST(Channels, ChoiOfIdentityIsMaximallyEntangledProjector) {
  const ChoiReport rep = choi_report(identity_channel(3));
  EXPECT_EQ(rep.kraus_rank, 1u);
  EXPECT_NEAR(rep.eigenvalues[0], 3.0, 1e-13);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(rep.choi(i * 3 + i, j * 3 + j) - 1.0), 0.0, 1e-15);
  EXPECT_LT(rep.output_trace_residual, 1e-14);
}

TEST(Channels, CanonicalKrausReproduceTheChannel) {
  Rng rng(4);
  const KrausChannel ch = random_channel(3, rng);
  const ChoiReport rep = choi_report(ch);
  EXPECT_GE(rep.min_eigenvalue, -1e-12);
  const KrausChannel canon(rep.canonical_kraus);
  const DensityMatrix rho = random_density(3, rng);
  EXPECT_LT(distance(apply(ch, rho).matrix(), apply(canon, rho).matrix()), 1e-12);
  // Hilbert-Schmidt orthogonality.
  for (std::size_t a = 0; a < rep.canonical_kraus.size(); ++a)
    for (std::size_t b = a + 1; b < rep.canonical_kraus.size(); ++b)
      EXPECT_LT(std::abs((rep.canonical_kraus[a].adjoint() * rep.canonical_kraus[b]).trace()),
                1e-12);
}

TEST(Channels, LocalApplicationAndTensorAgree) {
  Rng rng(5);
  const KrausChannel a = random_channel(2, rng), b = random_channel(3, rng);
  const ComplexMatrix g = ginibre(6, 6, rng);
  ComplexMatrix m = g * g.adjoint();
  m *= cplx(1.0 / m.trace().real());
  const DensityMatrix rho({2, 3}, m);
  const DensityMatrix seq = apply_local(b, apply_local(a, rho, 0), 1);
  const KrausChannel ab = tensor(a, b);
  const DensityMatrix joint = apply(ab, DensityMatrix({6}, m));
  EXPECT_LT(distance(seq.matrix(), joint.matrix()), 1e-13);
}

TEST(Channels, FourLevelChannelIsDfsOnItsSupport) {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    const DfsReport rep = dfs_check(four_level_channel(p), support_03());
    ASSERT_TRUE(rep.is_dfs) << p;
    EXPECT_LT(distance(rep.support_unitary, pauli_x()), 1e-12);
    EXPECT_NEAR(rep.probabilities[0], p, 1e-12);
    EXPECT_NEAR(rep.probabilities[1], 1 - p, 1e-12);
  }
}

TEST(Channels, DfsCheckRejectsLeakingChannel) {
  // Amplitude damping moves |1> to |0>, which is not unitary on span{|0>,|1>}.
  ComplexMatrix supp = ComplexMatrix::identity(2);
  const DfsReport rep =
      dfs_check(standard_channel(StandardChannel::AmplitudeDamping, 0.2, 2), supp);
  EXPECT_FALSE(rep.is_dfs);
  // Depolarizing on a qubit: the support is the whole space, Kraus operators
  // are not proportional to one unitary.
  EXPECT_FALSE(
      dfs_check(standard_channel(StandardChannel::Depolarizing, 0.2, 2), supp).is_dfs);
}

TEST(Channels, DfsBuildRoundTrips) {
  Rng rng(6);
  const ComplexMatrix u = random_unitary(2, rng);
  const ComplexMatrix basis = random_unitary(5, rng);
  const std::vector<double> probs{0.2, 0.5, 0.3};
  const std::vector<ComplexMatrix> comp = random_channel_with_kraus(3, 3, rng).kraus();
  const KrausChannel ch = dfs_build(u, probs, comp, basis);
  EXPECT_LT(ch.completion_residual(), 1e-12);
  const DfsReport rep = dfs_check(ch, basis.columns(0, 2));
  ASSERT_TRUE(rep.is_dfs);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(rep.probabilities[k], probs[k], 1e-10);
  // The recovered unitary equals u up to a global phase.
  const cplx ph = (u.adjoint() * rep.support_unitary).trace() / 2.0;
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-10);
  EXPECT_LT(distance(rep.support_unitary, u * ph), 1e-10);
}

TEST(Channels, DfsBuildErrors) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const std::vector<ComplexMatrix> none;
  expect_code(ErrorCode::NotUnitary, [&] {
    dfs_build(id * cplx(2.0), std::vector<double>{1.0}, none);
  });
  expect_code(ErrorCode::BadProbabilities,
              [&] { dfs_build(id, std::vector<double>{0.5, 0.4}, none); });
  expect_code(ErrorCode::BadProbabilities,
              [&] { dfs_build(id, std::vector<double>{1.5, -0.5}, none); });
  expect_code(ErrorCode::LengthMismatch, [&] {
    dfs_build(id, std::vector<double>{0.5, 0.5}, std::vector<ComplexMatrix>{id});
  });
  expect_code(ErrorCode::ComplementNotTracePreserving, [&] {
    dfs_build(id, std::vector<double>{0.5, 0.5},
              std::vector<ComplexMatrix>{id * cplx(0.5), id * cplx(0.5)});
  });
}

TEST(Channels, RandomChannelsAreTracePreserving) {
  Rng rng(7);
  for (std::size_t d : {2u, 4u, 6u}) {
    const KrausChannel ch = random_channel(d, rng);
    EXPECT_LT(ch.completion_residual(), 1e-10);
    EXPECT_LT(choi_report(ch).output_trace_residual, 1e-10);
    const KrausChannel k2 = random_channel_with_kraus(d, 2, rng);
    EXPECT_EQ(k2.num_kraus(), 2u);
    EXPECT_LT(k2.completion_residual(), 1e-10);
  }
}

}  // namespace
}  // namespace envar
