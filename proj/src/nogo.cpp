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

#include "envar/nogo.hpp"

#include <algorithm>
#include <exception>
#include <optional>

namespace envar {

namespace {

ComplexMatrix block_support_unitary(const SchmidtDecomposition &sd, Rng &rng) {
  ComplexMatrix r(sd.rank, sd.rank);
  for (const auto &g : sd.partition.groups) {
    const ComplexMatrix blk = random_unitary(g.size(), rng);
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) r(g[a], g[b]) = blk(a, b);
  }
  return r;
}

KrausChannel random_dfs(const ComplexMatrix &u_support, const ComplexMatrix &basis,
                        Rng &rng) {
  const std::size_t m = 1 + static_cast<std::size_t>(uniform01(rng) * 3.0);
  const std::vector<double> probs = random_probabilities(m, rng);
  const std::size_t c = basis.rows() - u_support.rows();
  std::vector<ComplexMatrix> gammas;
  if (c > 0) gammas = random_channel_with_kraus(c, m, rng).kraus();
  return dfs_build(u_support, probs, gammas, basis);
}

}  // namespace

DfsPair sample_dfs_pair(const SchmidtDecomposition &sd, Rng &rng) {
  const ComplexMatrix r = block_support_unitary(sd, rng);
  KrausChannel phi_s = random_dfs(r, sd.left_basis, rng);
  KrausChannel phi_e = random_dfs(r.conj(), sd.right_basis, rng);
  return DfsPair{std::move(phi_s), std::move(phi_e), r};
}

KrausChannel sample_non_dfs(std::size_t dim, const ComplexMatrix &support, Rng &rng,
                            std::size_t *rejected) {
  for (;;) {
    KrausChannel ch = random_channel(dim, rng);
    if (!dfs_check(ch, support).is_dfs) return ch;
    if (rejected) ++*rejected;
  }
}

NogoReport nogo_experiment(const PureState &psi, std::size_t trials, std::uint64_t seed,
                           const NogoOptions &options) {
  NogoReport rep;
  rep.trials = trials;
  rep.seed = seed;
  if (trials == 0) return rep;

  const SchmidtDecomposition sd = schmidt(psi);
  const DensityMatrix rho = density(psi);
  const DensityMatrix rho_s = reduced_density(rho, {0});
  const ComplexMatrix supp_s = sd.support_left();
  const ComplexMatrix supp_e = sd.support_right();

  rep.per_trial.resize(trials);
  std::vector<std::optional<std::exception_ptr>> errors(trials);

  auto run = [&](std::size_t i) {
    try {
      Rng rng(trial_seed(seed, i));
      NogoTrial t;
      const DfsPair pair = sample_dfs_pair(sd, rng);
      const EnvarianceVerdict v =
          channel_envariance_check(rho, pair.phi_s, pair.phi_e, options.envariance_tol);
      t.positive_residual = v.residual;
      t.positive_pass = v.holds;
      t.dfs_recovered = dfs_check(pair.phi_s, supp_s, options.dfs_tol).is_dfs &&
                        dfs_check(pair.phi_e, supp_e, options.dfs_tol).is_dfs;
      const AlignedGram ag = aligned_gram(rho_s, pair.phi_s.kraus());
      t.gram_residual = std::max(ag.delta_residual, ag.offdiag_residual);
      t.support_rank = ag.support_rank;

      const KrausChannel bad = sample_non_dfs(psi.dims()[0], supp_s, rng, &t.rejected);
      t.negative_purity = purity_certificate(rho, bad, Side::S);
      t.negative_falsified = t.negative_purity < 1.0 - options.purity_margin;
      rep.per_trial[i] = t;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const auto n = static_cast<long long>(trials);
  if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(*e);

  for (const auto &t : rep.per_trial) {
    rep.positive_pass += t.positive_pass;
    rep.negative_falsified += t.negative_falsified;
    rep.dfs_recovered += t.dfs_recovered;
    const bool gram_ok = t.support_rank == 1 && t.gram_residual <= options.gram_tol;
    rep.gram_pass += gram_ok;
    rep.rejected_samples += t.rejected;
    rep.worst_positive_residual = std::max(rep.worst_positive_residual, t.positive_residual);
    rep.worst_negative_purity = std::max(rep.worst_negative_purity, t.negative_purity);
    rep.worst_gram_residual = std::max(rep.worst_gram_residual, t.gram_residual);
  }
  return rep;
}

}  // namespace envar
