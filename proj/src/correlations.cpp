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

#include "envar/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>

#include "envar/optimize.hpp"
#include "envar/random.hpp"

namespace envar {

namespace {

constexpr double kDropProbability = 1e-12;

const char *kProjectiveCaveat =
    "minimum taken over rank-1 projective measurements; a general POVM may reach a "
    "lower conditional entropy";

// Tr_m[(M on factor m) rho] for a bipartite rho, m in {0, 1}.
ComplexMatrix contract_factor(const ComplexMatrix &rho, const Dims &dims, std::size_t m,
                              const ComplexMatrix &op) {
  const std::size_t ds = dims[0], de = dims[1];
  if (m == 0) {
    ComplexMatrix out(de, de);
    for (std::size_t s = 0; s < ds; ++s)
      for (std::size_t s2 = 0; s2 < ds; ++s2) {
        const cplx w = op(s, s2);
        if (w == cplx{}) continue;
        for (std::size_t e = 0; e < de; ++e)
          for (std::size_t e2 = 0; e2 < de; ++e2)
            out(e, e2) += w * rho(s2 * de + e, s * de + e2);
      }
    return out;
  }
  ComplexMatrix out(ds, ds);
  for (std::size_t e = 0; e < de; ++e)
    for (std::size_t e2 = 0; e2 < de; ++e2) {
      const cplx w = op(e, e2);
      if (w == cplx{}) continue;
      for (std::size_t s = 0; s < ds; ++s)
        for (std::size_t s2 = 0; s2 < ds; ++s2)
          out(s, s2) += w * rho(s * de + e2, s2 * de + e);
    }
  return out;
}

void require_bipartite(const DensityMatrix &rho) {
  if (rho.num_factors() != 2) {
    throw EnvarError(ErrorCode::DimensionMismatch, "expected a bipartite state");
  }
}

std::vector<ComplexMatrix> gell_mann(std::size_t d) {
  std::vector<ComplexMatrix> g;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix sym(d, d), anti(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      anti(j, k) = cplx(0.0, -1.0);
      anti(k, j) = cplx(0.0, 1.0);
      g.push_back(std::move(sym));
      g.push_back(std::move(anti));
    }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix diag(d, d);
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -norm * static_cast<double>(l);
    g.push_back(std::move(diag));
  }
  return g;
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<ComplexMatrix> operators)
    : ops_(std::move(operators)) {
  if (ops_.empty()) throw EnvarError(ErrorCode::CompletionViolated, "no measurement operators");
  const std::size_t n = ops_.front().cols();
  for (const auto &a : ops_) {
    if (a.rows() != n || a.cols() != n) {
      throw EnvarError(ErrorCode::ShapeMismatch, "measurement operators differ in shape");
    }
  }
  const double r = completion_residual(ops_);
  if (r > 1e-9) {
    throw EnvarError(ErrorCode::CompletionViolated,
                     "||sum A^dagger A - I||_F = " + std::to_string(r), r);
  }
}

MeasurementSet MeasurementSet::projective(const ComplexMatrix &basis) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    const auto v = ComplexMatrix::column_vector(basis.column(k));
    ops.push_back(v * v.adjoint());
  }
  return MeasurementSet(std::move(ops));
}

double mutual_information(const DensityMatrix &rho) {
  require_bipartite(rho);
  return multipartite_mutual_information(rho);
}

double multipartite_mutual_information(const DensityMatrix &rho) {
  double s = -entropy(rho);
  for (std::size_t k = 0; k < rho.num_factors(); ++k) s += entropy(reduced_density(rho, {k}));
  return s;
}

ConditionalEntropy conditioned_entropy(const DensityMatrix &rho, const MeasurementSet &meas,
                                       Side side) {
  require_bipartite(rho);
  const std::size_t m = side == Side::S ? 0 : 1;
  if (meas.dim() != rho.dims()[m]) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "measurement dimension " + std::to_string(meas.dim()) +
                         " vs factor dimension " + std::to_string(rho.dims()[m]));
  }
  ConditionalEntropy out;
  for (const auto &a : meas.operators()) {
    const ComplexMatrix sigma = contract_factor(rho.matrix(), rho.dims(), m, a.adjoint() * a);
    const double p = sigma.trace().real();
    out.probabilities.push_back(p);
    if (p < kDropProbability) continue;
    out.entropy += p * entropy(sigma * cplx(1.0 / p));
  }
  return out;
}

std::size_t measurement_parameter_count(std::size_t dim) {
  if (dim <= 1) return 0;
  if (dim == 2) return 2;
  return dim * dim - 1;
}

ComplexMatrix measurement_basis(std::size_t dim, std::span<const double> params) {
  if (params.size() != measurement_parameter_count(dim)) {
    throw EnvarError(ErrorCode::LengthMismatch, "wrong number of measurement parameters");
  }
  if (dim <= 1) return ComplexMatrix::identity(dim);
  if (dim == 2) {
    const double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
    const cplx ph = std::polar(1.0, params[1]);
    return ComplexMatrix{{c, -std::conj(ph) * s}, {ph * s, c}};
  }
  const auto gens = gell_mann(dim);
  ComplexMatrix h(dim, dim);
  for (std::size_t j = 0; j < gens.size(); ++j) h += gens[j] * cplx(params[j]);
  return unitary_exp(h, -1.0);  // exp(+i H)
}

DiscordResult classical_correlation(const DensityMatrix &rho, Direction direction,
                                    const DiscordConfig &cfg) {
  require_bipartite(rho);
  const Side side = direction == Direction::SToE ? Side::S : Side::E;
  const std::size_t measured = side == Side::S ? 0 : 1;
  const std::size_t dim = rho.dims()[measured];
  if (dim > 4) {
    throw EnvarError(ErrorCode::UnsupportedDimension,
                     "measured factor has dimension " + std::to_string(dim) +
                         "; the optimiser covers dimensions up to 4",
                     static_cast<double>(dim));
  }
  const std::size_t np = measurement_parameter_count(dim);
  const Objective objective = [&](std::span<const double> x) {
    return conditioned_entropy(rho, MeasurementSet::projective(measurement_basis(dim, x)), side)
        .entropy;
  };

  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);
  std::vector<NelderMeadResult> runs(restarts);
  std::vector<std::optional<std::exception_ptr>> errors(restarts);
  NelderMeadConfig nm;
  nm.max_iters = cfg.max_iters;
  nm.tol = cfg.tol;

  auto run = [&](std::size_t r) {
    try {
      std::vector<double> x0(np, 0.0);
      if (r > 0) {
        Rng rng(trial_seed(cfg.seed, r));
        for (std::size_t j = 0; j < np; ++j) {
          const double u = uniform01(rng);
          if (dim == 2) {
            x0[j] = j == 0 ? std::numbers::pi * u : 2.0 * std::numbers::pi * u;
          } else {
            x0[j] = std::numbers::pi * (2.0 * u - 1.0);
          }
        }
      }
      runs[r] = nelder_mead(objective, std::move(x0), nm);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const auto n = static_cast<long long>(restarts);
  if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long r = 0; r < n; ++r) run(static_cast<std::size_t>(r));
  } else {
    for (long long r = 0; r < n; ++r) run(static_cast<std::size_t>(r));
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(*e);

  DiscordResult res;
  res.direction = direction;
  res.caveat = kProjectiveCaveat;
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    res.optimizer_trace.push_back(
        {runs[r].start_value, runs[r].value, runs[r].iterations, runs[r].converged});
    if (runs[r].value < runs[best].value) best = r;
    res.best_so_far.push_back(runs[best].value);
  }
  res.best_parameters = runs[best].x;
  res.best_measurement = MeasurementSet::projective(measurement_basis(dim, res.best_parameters));
  const double s_other = entropy(reduced_density(rho, {1 - measured}));
  res.mutual_information = mutual_information(rho);
  res.classical = s_other - runs[best].value;
  res.discord = res.mutual_information - res.classical;
  return res;
}

DiscordResult discord(const DensityMatrix &rho, Direction direction, const DiscordConfig &cfg) {
  return classical_correlation(rho, direction, cfg);
}

InvarianceReport invariance_check(const DensityMatrix &rho, const KrausChannel &phi_s,
                                  const KrausChannel &phi_e, Side side, double tol,
                                  Direction direction, const DiscordConfig &cfg) {
  const EnvarianceVerdict v = channel_envariance_check(rho, phi_s, phi_e);
  if (!v.holds) {
    throw EnvarError(ErrorCode::NotEnvariancePair,
                     "channels do not leave the state invariant", v.residual);
  }
  InvarianceReport rep;
  rep.pair_residual = v.residual;
  const DensityMatrix after = side == Side::S ? apply_local(phi_s, rho, 0)
                                              : apply_local(phi_e, rho, 1);
  const DiscordResult before_r = discord(rho, direction, cfg);
  const DiscordResult after_r = discord(after, direction, cfg);
  rep.i_before = before_r.mutual_information;
  rep.i_after = after_r.mutual_information;
  rep.j_before = before_r.classical;
  rep.j_after = after_r.classical;
  rep.d_before = before_r.discord;
  rep.d_after = after_r.discord;
  rep.delta_i = std::abs(rep.i_after - rep.i_before);
  rep.delta_j = std::abs(rep.j_after - rep.j_before);
  rep.delta_d = std::abs(rep.d_after - rep.d_before);
  rep.pass = rep.delta_i <= tol && rep.delta_j <= tol && rep.delta_d <= tol;
  return rep;
}

}  // namespace envar
