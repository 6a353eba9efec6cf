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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace envar {

double completion_residual(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) return 0.0;
  const std::size_t n = kraus.front().cols();
  ComplexMatrix sum(n, n);
  for (const auto &k : kraus) sum += k.adjoint() * k;
  return distance(sum, ComplexMatrix::identity(n));
}

namespace {

ComplexMatrix choi_of(std::span<const ComplexMatrix> kraus, std::size_t d) {
  const std::size_t n = d * d;
  ComplexMatrix j(n, n);
  std::vector<cplx> vec(n);
  for (const auto &k : kraus) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t a = 0; a < d; ++a) vec[i * d + a] = k(a, i);
    for (std::size_t x = 0; x < n; ++x) {
      if (vec[x] == cplx{}) continue;
      for (std::size_t y = 0; y < n; ++y) j(x, y) += vec[x] * std::conj(vec[y]);
    }
  }
  return j;
}

ComplexMatrix trace_output(const ComplexMatrix &choi, std::size_t d) {
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t a = 0; a < d; ++a) out(i, j) += choi(i * d + a, j * d + a);
  return out;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, double tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) {
    throw EnvarError(ErrorCode::ShapeMismatch, "channel needs at least one Kraus operator");
  }
  dim_ = kraus_.front().rows();
  for (const auto &k : kraus_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw EnvarError(ErrorCode::ShapeMismatch,
                       "Kraus operators must all be " + std::to_string(dim_) + "x" +
                           std::to_string(dim_));
    }
  }
  if (dim_ == 0) throw EnvarError(ErrorCode::ShapeMismatch, "zero-dimensional channel");
  completion_ = envar::completion_residual(kraus_);
  if (completion_ > tol) {
    throw EnvarError(ErrorCode::NotTracePreserving,
                     "||sum K^dagger K - I||_F = " + std::to_string(completion_),
                     completion_);
  }
  choi_ = choi_of(kraus_, dim_);
}

KrausChannel identity_channel(std::size_t dim) {
  return KrausChannel({ComplexMatrix::identity(dim)});
}

KrausChannel unitary_channel(const ComplexMatrix &u) {
  if (!u.is_square()) throw EnvarError(ErrorCode::NonSquare, "unitary must be square");
  const double r = unitarity_residual(u);
  if (r > kChannelTol) throw EnvarError(ErrorCode::NotUnitary, "operator is not unitary", r);
  return KrausChannel({u});
}

DensityMatrix apply(const KrausChannel &ch, const DensityMatrix &rho) {
  if (ch.dim() != rho.dim()) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "channel dimension " + std::to_string(ch.dim()) +
                         " vs state dimension " + std::to_string(rho.dim()));
  }
  return DensityMatrix(rho.dims(),
                       apply_kraus_on_factor(rho.matrix(), {rho.dim()}, 0, ch.kraus()));
}

DensityMatrix apply_local(const KrausChannel &ch, const DensityMatrix &rho,
                          std::size_t factor) {
  if (factor >= rho.num_factors()) {
    throw EnvarError(ErrorCode::BadSubsystemIndex, "factor out of range");
  }
  if (rho.dims()[factor] != ch.dim()) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "channel dimension " + std::to_string(ch.dim()) +
                         " vs factor dimension " + std::to_string(rho.dims()[factor]));
  }
  return DensityMatrix(rho.dims(),
                       apply_kraus_on_factor(rho.matrix(), rho.dims(), factor, ch.kraus()));
}

KrausChannel tensor(const KrausChannel &a, const KrausChannel &b) {
  std::vector<ComplexMatrix> ks;
  ks.reserve(a.num_kraus() * b.num_kraus());
  for (const auto &x : a.kraus())
    for (const auto &y : b.kraus()) ks.push_back(kron(x, y));
  return KrausChannel(std::move(ks));
}

ChoiReport choi_report(const KrausChannel &ch, double rank_tol) {
  const std::size_t d = ch.dim();
  ChoiReport rep;
  rep.choi = ch.choi();
  const EigenSystem es = hermitian_eig(rep.choi, 1e-9 * std::max(1.0, rep.choi.frobenius_norm()));
  const std::size_t n = es.eigenvalues.size();
  rep.eigenvalues.assign(es.eigenvalues.rbegin(), es.eigenvalues.rend());
  rep.min_eigenvalue = es.eigenvalues.front();
  const double cutoff = rank_tol * std::max(rep.eigenvalues.front(), 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double lam = rep.eigenvalues[m];
    if (lam <= cutoff) break;
    const std::size_t src = n - 1 - m;
    ComplexMatrix k(d, d);
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t a = 0; a < d; ++a) k(a, i) = s * es.eigenvectors(i * d + a, src);
    rep.canonical_kraus.push_back(std::move(k));
  }
  rep.kraus_rank = rep.canonical_kraus.size();
  rep.output_trace_residual =
      distance(trace_output(rep.choi, d), ComplexMatrix::identity(d));
  return rep;
}

// ---------------------------------------------------------------------------
// Direct-sum (DFS) structure

namespace {

struct BlockAnalysis {
  double offdiag = 0.0;
  double scalar = 0.0;
  ComplexMatrix unitary;
  std::vector<cplx> scalars;
  std::vector<ComplexMatrix> complement;
};

BlockAnalysis analyze_blocks(std::span<const ComplexMatrix> kraus,
                             const ComplexMatrix &basis, std::size_t d) {
  const std::size_t n = basis.rows();
  const std::size_t c = n - d;
  const ComplexMatrix badj = basis.adjoint();
  BlockAnalysis out;
  std::vector<ComplexMatrix> support_blocks;
  double off2 = 0.0;
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t mu = 0; mu < kraus.size(); ++mu) {
    const ComplexMatrix kp = badj * kraus[mu] * basis;
    support_blocks.push_back(kp.block(0, 0, d, d));
    if (c > 0) {
      off2 += std::pow(kp.block(0, d, d, c).frobenius_norm(), 2);
      off2 += std::pow(kp.block(d, 0, c, d).frobenius_norm(), 2);
    }
    out.complement.push_back(kp.block(d, d, c, c));
    const double nb = support_blocks.back().frobenius_norm();
    if (nb > best_norm) {
      best_norm = nb;
      best = mu;
    }
  }
  out.offdiag = std::sqrt(off2);
  if (best_norm <= 1e-12) {
    // Nothing of the channel survives on the support: certainly not DFS.
    out.unitary = ComplexMatrix::identity(d);
    out.scalars.assign(kraus.size(), 0.0);
    out.scalar = std::sqrt(static_cast<double>(d));
    return out;
  }
  out.unitary = polar_unitary(support_blocks[best]);
  fix_phase(out.unitary.data());
  double sc2 = 0.0;
  for (const auto &a : support_blocks) {
    const cplx s = (out.unitary.adjoint() * a).trace() / static_cast<double>(d);
    out.scalars.push_back(s);
    sc2 += std::pow(distance(a, s * out.unitary), 2);
  }
  out.scalar = std::sqrt(sc2);
  return out;
}

}  // namespace

DfsReport dfs_check(const KrausChannel &ch, const ComplexMatrix &support, double tol) {
  const std::size_t d = support.cols();
  if (support.rows() != ch.dim() || d == 0 || d > ch.dim()) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "support must have between 1 and dim columns of length dim");
  }
  DfsReport rep;
  rep.basis = complete_basis(support);

  const ChoiReport choi = choi_report(ch);
  const BlockAnalysis canon = analyze_blocks(choi.canonical_kraus, rep.basis, d);
  const BlockAnalysis given = analyze_blocks(ch.kraus(), rep.basis, d);

  rep.support_unitary = given.unitary;
  double psum = 0.0;
  for (const auto &s : given.scalars) {
    rep.probabilities.push_back(std::norm(s));
    psum += std::norm(s);
  }
  rep.complement_kraus = given.complement;
  rep.residuals["offdiag_canonical"] = canon.offdiag;
  rep.residuals["offdiag_given"] = given.offdiag;
  rep.residuals["support_scalar_canonical"] = canon.scalar;
  rep.residuals["support_scalar_given"] = given.scalar;
  rep.residuals["complement_completion"] =
      d < ch.dim() ? completion_residual(given.complement) : 0.0;
  rep.residuals["probability_sum"] = std::abs(psum - 1.0);
  rep.is_dfs = canon.offdiag <= tol && canon.scalar <= tol &&
               rep.residuals["complement_completion"] <= tol;
  return rep;
}

KrausChannel dfs_build(const ComplexMatrix &u_support, std::span<const double> probs,
                       std::span<const ComplexMatrix> complement_kraus,
                       const ComplexMatrix &basis) {
  if (!u_support.is_square() || u_support.empty()) {
    throw EnvarError(ErrorCode::NonSquare, "support unitary must be square");
  }
  const double ur = unitarity_residual(u_support);
  if (ur > kChannelTol) {
    throw EnvarError(ErrorCode::NotUnitary, "support operator is not unitary", ur);
  }
  if (probs.empty()) throw EnvarError(ErrorCode::BadProbabilities, "no probabilities");
  double psum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw EnvarError(ErrorCode::BadProbabilities,
                       "probability " + std::to_string(p) + " outside (0, 1]", p);
    }
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9) {
    throw EnvarError(ErrorCode::BadProbabilities, "probabilities do not sum to 1", psum);
  }

  const std::size_t d = u_support.rows();
  std::size_t c = 0;
  if (!complement_kraus.empty()) {
    c = complement_kraus.front().rows();
    if (complement_kraus.size() != probs.size()) {
      throw EnvarError(ErrorCode::LengthMismatch,
                       "need one complement operator per probability");
    }
    for (const auto &g : complement_kraus) {
      if (g.rows() != c || g.cols() != c) {
        throw EnvarError(ErrorCode::ShapeMismatch, "complement operators differ in shape");
      }
    }
    if (c > 0) {
      const double cr = completion_residual(complement_kraus);
      if (cr > kChannelTol) {
        throw EnvarError(ErrorCode::ComplementNotTracePreserving,
                         "||sum gamma^dagger gamma - I||_F = " + std::to_string(cr), cr);
      }
    }
  }
  const std::size_t n = d + c;
  ComplexMatrix b = basis.empty() ? ComplexMatrix::identity(n) : basis;
  if (b.rows() != n || b.cols() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "basis is " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ", blocks need " + std::to_string(n));
  }
  const double br = unitarity_residual(b);
  if (br > 1e-9) throw EnvarError(ErrorCode::NotUnitary, "basis is not unitary", br);

  std::vector<ComplexMatrix> ks;
  ks.reserve(probs.size());
  for (std::size_t mu = 0; mu < probs.size(); ++mu) {
    ComplexMatrix blockdiag(n, n);
    blockdiag.set_block(0, 0, u_support * cplx(std::sqrt(probs[mu]), 0.0));
    if (c > 0) blockdiag.set_block(d, d, complement_kraus[mu]);
    ks.push_back(b * blockdiag * b.adjoint());
  }
  return KrausChannel(std::move(ks));
}

// ---------------------------------------------------------------------------
// Standard channels

KrausChannel standard_channel(StandardChannel kind, double param, std::size_t dim) {
  if (!(param >= 0.0 && param <= 1.0)) {
    throw EnvarError(ErrorCode::BadParam, "parameter must lie in [0, 1]", param);
  }
  if (dim < 1) throw EnvarError(ErrorCode::BadParam, "dimension must be positive");
  std::vector<ComplexMatrix> ks;
  const std::size_t d = dim;
  switch (kind) {
    case StandardChannel::Depolarizing: {
      const double dd = static_cast<double>(d * d);
      const double w0 = 1.0 - param + param / dd;
      const double w = param / dd;
      const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(d));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          const double weight = (a == 0 && b == 0) ? w0 : w;
          if (weight <= 0.0) continue;
          ComplexMatrix wab(d, d);  // X^a Z^b
          for (std::size_t k = 0; k < d; ++k)
            wab((k + a) % d, k) = std::sqrt(weight) * std::pow(omega, static_cast<double>(b * k));
          ks.push_back(std::move(wab));
        }
      break;
    }
    case StandardChannel::AmplitudeDamping: {
      if (param > 0.0) {
        for (std::size_t k = 1; k < d; ++k) {
          ComplexMatrix decay(d, d);
          decay(0, k) = std::sqrt(param);
          ks.push_back(std::move(decay));
        }
      }
      ComplexMatrix keep(d, d);
      keep(0, 0) = 1.0;
      for (std::size_t k = 1; k < d; ++k) keep(k, k) = std::sqrt(1.0 - param);
      ks.push_back(std::move(keep));
      break;
    }
    case StandardChannel::Dephasing: {
      if (param < 1.0) ks.push_back(ComplexMatrix::identity(d) * cplx(std::sqrt(1.0 - param)));
      if (param > 0.0) {
        for (std::size_t k = 0; k < d; ++k) {
          ComplexMatrix proj(d, d);
          proj(k, k) = std::sqrt(param);
          ks.push_back(std::move(proj));
        }
      }
      break;
    }
  }
  return KrausChannel(std::move(ks));
}

KrausChannel dephasing_channel(const ComplexMatrix &basis) {
  const double r = orthonormality_residual(basis);
  if (r > 1e-9) {
    throw EnvarError(ErrorCode::NonOrthonormalBasis, "dephasing basis is not orthonormal", r);
  }
  const std::size_t n = basis.rows();
  std::vector<ComplexMatrix> ks;
  ComplexMatrix rest = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    const auto col = ComplexMatrix::column_vector(basis.column(k));
    ComplexMatrix proj = col * col.adjoint();
    rest -= proj;
    ks.push_back(std::move(proj));
  }
  if (basis.cols() < n) ks.push_back(std::move(rest));
  return KrausChannel(std::move(ks));
}

KrausChannel random_channel(std::size_t dim, Rng &rng) {
  const std::size_t n = dim * dim;
  const ComplexMatrix g = ginibre(n, n, rng);
  const ComplexMatrix w = g * g.adjoint();
  const ComplexMatrix x = kron(psd_inv_sqrt(trace_output(w, dim)), ComplexMatrix::identity(dim));
  ComplexMatrix j = x * w * x;
  // Clean rounding asymmetry before the eigensolver sees it.
  j = (j + j.adjoint()) * cplx(0.5);

  const EigenSystem es = hermitian_eig(j, 1e-8);
  std::vector<ComplexMatrix> ks;
  for (std::size_t m = n; m-- > 0;) {
    const double lam = es.eigenvalues[m];
    if (lam <= 1e-14) continue;
    ComplexMatrix k(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t a = 0; a < dim; ++a)
        k(a, i) = std::sqrt(lam) * es.eigenvectors(i * dim + a, m);
    ks.push_back(std::move(k));
  }
  return KrausChannel(std::move(ks));
}

KrausChannel random_channel_with_kraus(std::size_t dim, std::size_t num_kraus, Rng &rng) {
  if (num_kraus == 0) throw EnvarError(ErrorCode::BadParam, "need at least one Kraus operator");
  const ComplexMatrix v = random_isometry(dim * num_kraus, dim, rng);
  std::vector<ComplexMatrix> ks;
  for (std::size_t mu = 0; mu < num_kraus; ++mu) ks.push_back(v.block(mu * dim, 0, dim, dim));
  return KrausChannel(std::move(ks));
}

}  // namespace envar
