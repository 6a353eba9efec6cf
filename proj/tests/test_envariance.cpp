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

#include "envar/envariance.hpp"
#include "envar/nogo.hpp"
#include "envar/random.hpp"
#include "test_util.hpp"

namespace envar {
namespace {

using testing::bell;
using testing::expect_code;
using testing::ghz;
using testing::pauli_x;

PureState state_08_06() { return PureState({2, 2}, {0.8, 0.0, 0.0, 0.6}); }

ComplexMatrix phases(double a, double b) {
  return ComplexMatrix{{std::polar(1.0, a), 0.0}, {0.0, std::polar(1.0, b)}};
}

/// Random state on (ds, de) with Schmidt rank `rank`; when `degenerate` the
/// first two coefficients coincide.
PureState random_state(std::size_t ds, std::size_t de, std::size_t rank, bool degenerate,
                       Rng &rng) {
  std::vector<double> c(rank);
  for (auto &x : c) x = 0.2 + uniform01(rng);
  if (degenerate && rank >= 2) c[1] = c[0];
  double n = 0.0;
  for (double x : c) n += x * x;
  const ComplexMatrix l = random_isometry(ds, rank, rng), r = random_isometry(de, rank, rng);
  ComplexMatrix psi(ds, de);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < de; ++j) psi(i, j) += c[k] / std::sqrt(n) * l(i, k) * r(j, k);
  return pure_from_matrix(psi);
}

TEST(Envariance, BellStateUnderBitFlips) {
  const EnvarianceVerdict v = unitary_envariance_check(bell(), pauli_x(), pauli_x());
  EXPECT_TRUE(v.holds);
  EXPECT_LT(v.residual, 1e-15);
}

TEST(Envariance, OppositePhasesCancel) {
  const double phi = 0.41;
  const EnvarianceVerdict v =
      unitary_envariance_check(state_08_06(), phases(phi, -phi), phases(-phi, phi), 1e-12, true);
  EXPECT_TRUE(v.holds);
}

TEST(Envariance, SwappingUnequalWeightsFails) {
  // X (x) X maps 0.8|00> + 0.6|11> to 0.6|00> + 0.8|11>; the overlap 0.96 is
  // real, so the best phase is 1 and the residual is |(-0.2, 0.2)| = sqrt(0.08).
  const EnvarianceVerdict v = unitary_envariance_check(state_08_06(), pauli_x(), pauli_x());
  EXPECT_FALSE(v.holds);
  EXPECT_NEAR(v.residual, std::sqrt(0.08), 1e-14);
  EXPECT_GT(v.residual, 0.1);
}

TEST(Envariance, GlobalPhaseIsReportedAndStrictModeRejectsIt) {
  const ComplexMatrix i_phase = ComplexMatrix::identity(2) * cplx(0.0, 1.0);
  const EnvarianceVerdict loose =
      unitary_envariance_check(bell(), i_phase, ComplexMatrix::identity(2));
  EXPECT_TRUE(loose.holds);
  EXPECT_NEAR(std::abs(loose.phase - cplx(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_FALSE(
      unitary_envariance_check(bell(), i_phase, ComplexMatrix::identity(2), 1e-10, true).holds);
}

TEST(Envariance, MultiplicityPartitionExamples) {
  EXPECT_EQ(multiplicity_partition(schmidt(bell())).counts.at(2), 1u);
  EXPECT_EQ(multiplicity_partition(schmidt(state_08_06())).counts.at(1), 2u);
  const double c = 1.0 / std::sqrt(3.0);
  const PureState w({3, 3}, {c, 0, 0, 0, c, 0, 0, 0, c});
  EXPECT_EQ(multiplicity_partition(schmidt(w)).counts.at(3), 1u);
}

TEST(Envariance, PartnerExamples) {
  EXPECT_LT(distance(partner_unitary(bell(), pauli_x()), pauli_x()), 1e-12);
  const ComplexMatrix ue = partner_unitary(state_08_06(), phases(0.3, -1.1));
  EXPECT_LT(distance(ue, phases(-0.3, 1.1)), 1e-12);
  try {
    partner_unitary(state_08_06(), pauli_x());
    ADD_FAILURE() << "expected NotAdmissible";
  } catch (const EnvarError &e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAdmissible);
    EXPECT_GT(e.value(), 0.1);
  }
}

TEST(Envariance, AdmissibilityDiagnosesTheOffence) {
  const AdmissibilityReport rep = admissibility(schmidt(state_08_06()), pauli_x());
  EXPECT_FALSE(rep.admissible);
  EXPECT_GT(rep.group_mixing, 0.1);
  EXPECT_FALSE(rep.offending.empty());
  // Support leakage: a qutrit state supported on {|0>, |1>} with U_S mixing in |2>.
  const PureState psi({3, 3}, {0.8, 0, 0, 0, 0.6, 0, 0, 0, 0});
  const ComplexMatrix mix{{1.0, 0.0, 0.0},
                          {0.0, testing::kInvSqrt2, testing::kInvSqrt2},
                          {0.0, testing::kInvSqrt2, -testing::kInvSqrt2}};
  EXPECT_GT(admissibility(schmidt(psi), mix).support_mixing, 0.1);
}

TEST(Envariance, RandomAdmissiblePartnersRestoreTheState) {
  Rng rng(101);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t ds = 2 + rep % 5, de = 2 + (rep / 5) % 5;
    const std::size_t rank = 1 + rep % std::min(ds, de);
    const PureState psi = random_state(ds, de, rank, rep % 2 == 0, rng);
    const SchmidtDecomposition sd = schmidt(psi);
    const ComplexMatrix us = random_admissible_unitary(sd, rng);
    const ComplexMatrix ue = partner_unitary(sd, us);
    EXPECT_TRUE(is_unitary(ue, 1e-10));
    EXPECT_TRUE(unitary_envariance_check(psi, us, ue, 1e-9).holds) << rep;
  }
}

TEST(Envariance, PartnerIsUniqueOnTheSupport) {
  Rng rng(7);
  const PureState psi = random_state(4, 5, 2, true, rng);
  const SchmidtDecomposition sd = schmidt(psi);
  const ComplexMatrix us = random_admissible_unitary(sd, rng);
  const ComplexMatrix a = partner_unitary(sd, us);
  const ComplexMatrix b = partner_unitary(sd, us, kAdmissibilityTol, random_unitary(3, rng));
  EXPECT_GT(distance(a, b), 1e-3);
  const ComplexMatrix pe = sd.support_right() * sd.support_right().adjoint();
  EXPECT_LT(distance(pe * a * pe, pe * b * pe), 1e-9);
  EXPECT_TRUE(unitary_envariance_check(psi, us, b, 1e-9).holds);
}

TEST(Envariance, GroupMixersAreRejected) {
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const PureState psi = random_state(4, 4, 3, rep % 2 == 0, rng);
    const SchmidtDecomposition sd = schmidt(psi);
    const ComplexMatrix us = random_group_mixer(sd, rng);
    expect_code(ErrorCode::NotAdmissible, [&] { partner_unitary(sd, us); });
  }
  expect_code(ErrorCode::BadParam, [&] { random_group_mixer(schmidt(bell()), rng); });
}

TEST(Envariance, ChannelExamples) {
  const DensityMatrix rho = density(bell());
  const KrausChannel id = identity_channel(2);
  EXPECT_TRUE(channel_envariance_check(rho, id, id).holds);

  // Classically correlated state with dephasing on both sides.
  ComplexMatrix m(4, 4);
  m(0, 0) = 0.64;
  m(3, 3) = 0.36;
  const DensityMatrix cl({2, 2}, m);
  const KrausChannel deph = dephasing_channel(ComplexMatrix::identity(2));
  EXPECT_TRUE(channel_envariance_check(cl, deph, deph).holds);

  const KrausChannel dep = standard_channel(StandardChannel::Depolarizing, 0.5, 2);
  const EnvarianceVerdict v = channel_envariance_check(rho, dep, id);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.purity.has_value());
  EXPECT_NEAR(*v.purity, 0.4375, 1e-12);
}

TEST(Envariance, PurityCertificateOracle) {
  // (1-p) Bell + p I/4 has purity (1-p)^2 + 2p(1-p)/4 + p^2/4 = 0.4375 at p = 1/2.
  const DensityMatrix rho = density(bell());
  const KrausChannel dep = standard_channel(StandardChannel::Depolarizing, 0.5, 2);
  EXPECT_NEAR(purity_certificate(rho, dep, Side::S), 0.4375, 1e-13);
  Rng rng(3);
  EXPECT_NEAR(purity_certificate(rho, unitary_channel(random_unitary(2, rng)), Side::E), 1.0,
              1e-13);
  ComplexMatrix mixed = ComplexMatrix::identity(4) * cplx(0.25);
  expect_code(ErrorCode::NotPure,
              [&] { purity_certificate(DensityMatrix({2, 2}, mixed), dep, Side::S); });
}

TEST(Envariance, EnvariantPairsAreDfsAndKeepPurity) {
  // Forward direction on sampled DFS pairs: envariance implies unit
  // intermediate purity and the DFS form on both Schmidt supports.
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const PureState psi = random_state(4, 5, 2 + rep % 2, rep % 3 == 0, rng);
    const SchmidtDecomposition sd = schmidt(psi);
    const DfsPair pair = sample_dfs_pair(sd, rng);
    const DensityMatrix rho = density(psi);
    const EnvarianceVerdict v = channel_envariance_check(rho, pair.phi_s, pair.phi_e);
    ASSERT_TRUE(v.holds) << v.residual;
    EXPECT_NEAR(purity_certificate(rho, pair.phi_s, Side::S), 1.0, 1e-8);
    EXPECT_NEAR(purity_certificate(rho, pair.phi_e, Side::E), 1.0, 1e-8);
    EXPECT_TRUE(dfs_check(pair.phi_s, sd.support_left()).is_dfs);
    EXPECT_TRUE(dfs_check(pair.phi_e, sd.support_right()).is_dfs);

    // Swapping the roles of S and E keeps the verdict.
    const DensityMatrix swapped = density(permute_factors(psi, {1, 0}));
    EXPECT_TRUE(channel_envariance_check(swapped, pair.phi_e, pair.phi_s).holds);
  }
}

TEST(Envariance, SwappedRolesFailTogether) {
  const KrausChannel dep = standard_channel(StandardChannel::Depolarizing, 0.3, 2);
  const KrausChannel id = identity_channel(2);
  const PureState psi = state_08_06();
  EXPECT_FALSE(channel_envariance_check(density(psi), dep, id).holds);
  EXPECT_FALSE(channel_envariance_check(density(permute_factors(psi, {1, 0})), id, dep).holds);
}

TEST(Envariance, GhzUnderBitFlips) {
  const KrausChannel x = unitary_channel(pauli_x());
  const EnvarianceVerdict v = multipartite_envariance_check(density(ghz(3)), {x, x, x});
  EXPECT_TRUE(v.holds);
  EXPECT_LT(v.residual, 1e-15);
  ASSERT_TRUE(v.purity.has_value());
  EXPECT_NEAR(*v.purity, 1.0, 1e-14);
}

TEST(Envariance, GhzPhaseCompensationOnOneEnvironment) {
  // diag(e^{i phi}, e^{-i phi}) on S and the conjugate on E1 leave
  // (|000> + |111>)/sqrt2 unchanged; E2 can stay idle.
  const double phi = 0.77;
  const KrausChannel s = unitary_channel(phases(phi, -phi));
  const KrausChannel e1 = unitary_channel(phases(-phi, phi));
  const EnvarianceVerdict v =
      multipartite_envariance_check(density(ghz(3)), {s, e1, identity_channel(2)});
  EXPECT_TRUE(v.holds);
  const EnvarianceVerdict alt =
      multipartite_envariance_check(density(ghz(3)), {s, identity_channel(2), e1});
  EXPECT_TRUE(alt.holds);
}

TEST(Envariance, GhzDepolarizingOnOneEnvironmentFails) {
  const KrausChannel id = identity_channel(2);
  const KrausChannel dep = standard_channel(StandardChannel::Depolarizing, 0.3, 2);
  const EnvarianceVerdict v = multipartite_envariance_check(density(ghz(3)), {id, id, dep});
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.purity.has_value());
  // The GHZ marginal pair across E2 | rest is Bell-like: purity
  // (1-p)^2 + p(1-p)/2 + p^2/4 at p = 0.3.
  EXPECT_NEAR(*v.purity, 0.49 + 0.105 + 0.0225, 1e-12);
  // The maximally mixed marginal of E2 is a fixed point all the same.
  EXPECT_LT(v.fixed_point_residuals.at("factor2"), 1e-15);
  expect_code(ErrorCode::DimensionMismatch,
              [&] { multipartite_envariance_check(density(ghz(3)), {id, id}); });
}

TEST(Envariance, AlignedGramOfDfsChannelIsSingleKraus) {
  const PureState psi = state_08_06();
  const DensityMatrix rho_s = reduced_density(psi, {0});
  const std::vector<double> probs{0.25, 0.75};
  const KrausChannel ch = dfs_build(pauli_x(), probs, {});
  const ComplexMatrix g = kraus_gram(rho_s, ch.kraus());
  // Tr[rho_S Gamma_mu^dagger Gamma_nu] = sqrt(p_mu p_nu) for Gamma = sqrt(p) X.
  EXPECT_NEAR(g(0, 1).real(), std::sqrt(0.25 * 0.75), 1e-14);
  const AlignedGram ag = aligned_gram(rho_s, ch.kraus());
  EXPECT_EQ(ag.support_rank, 1u);
  EXPECT_NEAR(ag.diagonal[0], 1.0, 1e-12);
  EXPECT_LT(ag.delta_residual, 1e-12);

  const KrausChannel dep = standard_channel(StandardChannel::Depolarizing, 0.3, 2);
  EXPECT_GT(aligned_gram(rho_s, dep.kraus()).support_rank, 1u);
}

}  // namespace
}  // namespace envar
