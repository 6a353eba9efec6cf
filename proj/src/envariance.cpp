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

#include <algorithm>
#include <cmath>
#include <string>

namespace envar {

namespace {

void require_square(const ComplexMatrix &m, std::size_t n, const char *what) {
  if (m.rows() != n || m.cols() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", factor has dimension " +
                         std::to_string(n));
  }
}

double purity_of(const DensityMatrix &rho) { return purity(rho); }

bool is_pure(const DensityMatrix &rho) { return std::abs(purity_of(rho) - 1.0) <= 1e-8; }

}  // namespace

EnvarianceVerdict unitary_envariance_check(const PureState &psi, const ComplexMatrix &u_s,
                                           const ComplexMatrix &u_e, double tol,
                                           bool strict) {
  if (psi.num_factors() != 2) {
    throw EnvarError(ErrorCode::DimensionMismatch, "envariance check needs a bipartite state");
  }
  require_square(u_s, psi.dims()[0], "U_S");
  require_square(u_e, psi.dims()[1], "U_E");
  auto mapped = apply_on_factor(psi.amplitudes(), psi.dims(), 0, u_s);
  mapped = apply_on_factor(mapped, psi.dims(), 1, u_e);

  EnvarianceVerdict v;
  v.tol = tol;
  if (!strict) {
    const cplx ov = inner(psi.amplitudes(), mapped);
    if (std::abs(ov) > 0.0) v.phase = ov / std::abs(ov);
  }
  std::vector<cplx> target(psi.amplitudes().begin(), psi.amplitudes().end());
  for (auto &z : target) z *= v.phase;
  v.residual = distance(mapped, target);
  v.holds = v.residual <= tol;
  return v;
}

MultiplicityPartition multiplicity_partition(const SchmidtDecomposition &sd, double tol) {
  return multiplicity_partition(std::span<const double>(sd.coeffs.data(), sd.rank), tol);
}

AdmissibilityReport admissibility(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                                  double tol) {
  const std::size_t ds = sd.left_basis.rows();
  require_square(u_s, ds, "U_S");
  AdmissibilityReport rep;
  rep.r_s = sd.left_basis.adjoint() * u_s * sd.left_basis;
  const std::size_t d = sd.rank;
  const std::size_t c = ds - d;
  if (c > 0) {
    rep.support_mixing = std::hypot(rep.r_s.block(0, d, d, c).frobenius_norm(),
                                    rep.r_s.block(d, 0, c, d).frobenius_norm());
  }
  std::vector<std::size_t> group_of(d);
  for (std::size_t g = 0; g < sd.partition.groups.size(); ++g)
    for (std::size_t k : sd.partition.groups[g]) group_of[k] = g;
  double mix2 = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (group_of[i] != group_of[j]) mix2 += std::norm(rep.r_s(i, j));
  rep.group_mixing = std::sqrt(mix2);
  for (const auto &g : sd.partition.groups) {
    ComplexMatrix blk(g.size(), g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) blk(a, b) = rep.r_s(g[a], g[b]);
    rep.group_unitarity = std::max(rep.group_unitarity, unitarity_residual(blk));
  }
  if (rep.support_mixing > tol) {
    rep.offending = "R_S mixes the Schmidt support with its complement";
  } else if (rep.group_mixing > tol) {
    rep.offending = "R_S mixes multiplicity groups with different coefficients";
  } else if (rep.group_unitarity > tol) {
    rep.offending = "R_S is not unitary on a multiplicity group";
  }
  rep.admissible = rep.offending.empty();
  return rep;
}

PartnerSpec partner_spec(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                         double tol) {
  const AdmissibilityReport adm = admissibility(sd, u_s, tol);
  if (!adm.admissible) {
    const double worst =
        std::max({adm.support_mixing, adm.group_mixing, adm.group_unitarity});
    throw EnvarError(ErrorCode::NotAdmissible, adm.offending, worst);
  }
  PartnerSpec spec;
  for (const auto &g : sd.partition.groups) {
    ComplexMatrix blk(g.size(), g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) blk(a, b) = adm.r_s(g[a], g[b]);
    spec.r_blocks.push_back(std::move(blk));
  }
  return spec;
}

ComplexMatrix partner_unitary(const SchmidtDecomposition &sd, const ComplexMatrix &u_s,
                              double tol, const ComplexMatrix &complement) {
  const PartnerSpec spec = partner_spec(sd, u_s, tol);
  const std::size_t de = sd.right_basis.rows();
  const std::size_t c = de - sd.rank;
  ComplexMatrix r_e = ComplexMatrix::identity(de);
  for (std::size_t gi = 0; gi < sd.partition.groups.size(); ++gi) {
    const auto &g = sd.partition.groups[gi];
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b)
        r_e(g[a], g[b]) = std::conj(spec.r_blocks[gi](a, b));
  }
  if (!complement.empty()) {
    require_square(complement, c, "environment complement unitary");
    const double r = unitarity_residual(complement);
    if (r > 1e-10) {
      throw EnvarError(ErrorCode::NotUnitary, "complement choice is not unitary", r);
    }
    r_e.set_block(sd.rank, sd.rank, complement);
  }
  return sd.right_basis * r_e * sd.right_basis.adjoint();
}

ComplexMatrix partner_unitary(const PureState &psi, const ComplexMatrix &u_s, double tol,
                              const ComplexMatrix &complement) {
  const double ur = unitarity_residual(u_s);
  if (ur > 1e-10) throw EnvarError(ErrorCode::NotUnitary, "U_S is not unitary", ur);
  return partner_unitary(schmidt(psi), u_s, tol, complement);
}

ComplexMatrix random_admissible_unitary(const SchmidtDecomposition &sd, Rng &rng) {
  const std::size_t ds = sd.left_basis.rows();
  ComplexMatrix r = ComplexMatrix::identity(ds);
  for (const auto &g : sd.partition.groups) {
    const ComplexMatrix blk = random_unitary(g.size(), rng);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) r(g[a], g[b]) = blk(a, b);
  }
  if (sd.rank < ds) r.set_block(sd.rank, sd.rank, random_unitary(ds - sd.rank, rng));
  return sd.left_basis * r * sd.left_basis.adjoint();
}

ComplexMatrix random_group_mixer(const SchmidtDecomposition &sd, Rng &rng) {
  const auto &groups = sd.partition.groups;
  if (groups.size() < 2) {
    throw EnvarError(ErrorCode::BadParam, "need at least two multiplicity groups to mix");
  }
  const std::size_t ds = sd.left_basis.rows();
  const std::size_t ga = static_cast<std::size_t>(uniform01(rng) * groups.size());
  std::size_t gb = static_cast<std::size_t>(uniform01(rng) * (groups.size() - 1));
  if (gb >= ga) ++gb;
  ComplexMatrix r = ComplexMatrix::identity(ds);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (gi == ga || gi == gb) continue;
    const auto &g = groups[gi];
    const ComplexMatrix blk = random_unitary(g.size(), rng);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) r(g[a], g[b]) = blk(a, b);
  }
  std::vector<std::size_t> idx(groups[ga]);
  idx.insert(idx.end(), groups[gb].begin(), groups[gb].end());
  const ComplexMatrix blk = random_unitary(idx.size(), rng);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r(idx[a], idx[b]) = blk(a, b);
  if (sd.rank < ds) r.set_block(sd.rank, sd.rank, random_unitary(ds - sd.rank, rng));
  return sd.left_basis * r * sd.left_basis.adjoint();
}

EnvarianceVerdict channel_envariance_check(const DensityMatrix &rho,
                                           const KrausChannel &phi_s,
                                           const KrausChannel &phi_e, double tol) {
  if (rho.num_factors() != 2) {
    throw EnvarError(ErrorCode::DimensionMismatch, "envariance check needs a bipartite state");
  }
  EnvarianceVerdict v = multipartite_envariance_check(rho, {phi_s, phi_e}, tol);
  v.fixed_point_residuals = {{"S", v.fixed_point_residuals.at("factor0")},
                             {"E", v.fixed_point_residuals.at("factor1")}};
  return v;
}

double purity_certificate(const DensityMatrix &rho, const KrausChannel &phi,
                          std::size_t factor) {
  const double p = purity_of(rho);
  if (std::abs(p - 1.0) > 1e-8) {
    throw EnvarError(ErrorCode::NotPure, "certificate needs a pure state", p);
  }
  return purity(apply_local(phi, rho, factor));
}

double purity_certificate(const DensityMatrix &rho, const KrausChannel &phi, Side side) {
  return purity_certificate(rho, phi, side == Side::S ? std::size_t{0} : std::size_t{1});
}

EnvarianceVerdict multipartite_envariance_check(const DensityMatrix &rho,
                                                const std::vector<KrausChannel> &channels,
                                                double tol) {
  const std::size_t n = rho.num_factors();
  if (channels.size() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     std::to_string(channels.size()) + " channels for " + std::to_string(n) +
                         " factors");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (channels[k].dim() != rho.dims()[k]) {
      throw EnvarError(ErrorCode::DimensionMismatch,
                       "channel " + std::to_string(k) + " has dimension " +
                           std::to_string(channels[k].dim()) + ", factor has " +
                           std::to_string(rho.dims()[k]));
    }
  }
  EnvarianceVerdict v;
  v.tol = tol;
  ComplexMatrix m = rho.matrix();
  for (std::size_t k = 0; k < n; ++k)
    m = apply_kraus_on_factor(m, rho.dims(), k, channels[k].kraus());
  v.residual = distance(m, rho.matrix());
  v.holds = v.residual <= tol;

  for (std::size_t k = 0; k < n; ++k) {
    const DensityMatrix marginal = reduced_density(rho, {k});
    const DensityMatrix mapped = apply(channels[k], marginal);
    v.fixed_point_residuals["factor" + std::to_string(k)] =
        distance(mapped.matrix(), marginal.matrix());
  }
  if (is_pure(rho)) {
    double worst = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      worst = std::min(worst, purity(apply_local(channels[k], rho, k)));
    v.purity = worst;
  }
  return v;
}

ComplexMatrix kraus_gram(const DensityMatrix &rho_s, std::span<const ComplexMatrix> kraus) {
  const std::size_t m = kraus.size();
  ComplexMatrix g(m, m);
  std::vector<ComplexMatrix> k_rho;
  k_rho.reserve(m);
  for (const auto &k : kraus) {
    require_square(k, rho_s.dim(), "Kraus operator");
    k_rho.push_back(k * rho_s.matrix());
  }
  // Tr[rho G_mu^dagger G_nu] = Tr[G_nu rho G_mu^dagger] = <G_mu, G_nu rho>_HS
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu < m; ++nu) {
      cplx s = 0.0;
      const auto a = kraus[mu].data();
      const auto b = k_rho[nu].data();
      for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
      g(mu, nu) = s;
    }
  return g;
}

AlignedGram aligned_gram(const DensityMatrix &rho_s, std::span<const ComplexMatrix> kraus,
                         double rank_tol) {
  const ComplexMatrix g = kraus_gram(rho_s, kraus);
  const EigenSystem es = hermitian_eig(g, 1e-9);
  AlignedGram out;
  out.diagonal.assign(es.eigenvalues.rbegin(), es.eigenvalues.rend());
  const ComplexMatrix w = es.eigenvectors;
  const ComplexMatrix rotated = w.adjoint() * g * w;
  double off2 = 0.0;
  for (std::size_t i = 0; i < rotated.rows(); ++i)
    for (std::size_t j = 0; j < rotated.cols(); ++j)
      if (i != j) off2 += std::norm(rotated(i, j));
  out.offdiag_residual = std::sqrt(off2);
  const double top = std::max(out.diagonal.front(), 0.0);
  for (double lam : out.diagonal)
    if (lam > rank_tol * std::max(top, 1.0)) ++out.support_rank;
  double d2 = 0.0;
  for (std::size_t k = 0; k < out.diagonal.size(); ++k) {
    const double target = k < out.support_rank ? 1.0 : 0.0;
    d2 += std::pow(out.diagonal[k] - target, 2);
  }
  out.delta_residual = std::sqrt(d2);
  return out;
}

}  // namespace envar
