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

#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "envar/correlations.hpp"
#include "envar/dynamics.hpp"
#include "envar/nogo.hpp"

namespace envar::cli {

using io::number;

void RunReport::add(std::string name, bool holds, json detail, bool expected) {
  verdicts.push_back({std::move(name), holds, expected, std::move(detail)});
}

bool RunReport::all_pass() const {
  for (const auto &v : verdicts)
    if (!v.pass()) return false;
  return true;
}

json RunReport::to_json() const {
  json vs = json::array();
  for (const auto &v : verdicts) {
    json j = {{"name", v.name}, {"holds", v.holds}, {"expected", v.expected}, {"pass", v.pass()}};
    if (!v.detail.empty()) j["detail"] = v.detail;
    vs.push_back(std::move(j));
  }
  return {{"command", command},
          {"version", ENVAR_VERSION},
          {"seed", seed},
          {"verdicts", std::move(vs)},
          {"values", values},
          {"all_pass", all_pass()}};
}

namespace {

KrausChannel dfs_channel(double p) {
  const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
  ComplexMatrix g1(4, 4), g2(4, 4);
  g1(0, 3) = a;
  g1(1, 2) = a;
  g1(3, 0) = a;
  g2(0, 3) = b;
  g2(1, 1) = 1.0;
  g2(2, 2) = b;
  g2(3, 0) = b;
  return KrausChannel({g1, g2});
}

PureState dfs_state() {
  std::vector<cplx> amps(16, 0.0);
  amps[0] = amps[15] = 1.0 / std::numbers::sqrt2;  // |00>|00> and |11>|11>
  return PureState({4, 4}, amps);
}

PureState bell_state() {
  return PureState({2, 2}, {1.0 / std::numbers::sqrt2, 0.0, 0.0, 1.0 / std::numbers::sqrt2});
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

DiscordConfig discord_config(const DemoOptions &opt) {
  DiscordConfig cfg;
  cfg.restarts = opt.restarts;
  cfg.seed = opt.seed;
  return cfg;
}

}  // namespace

RunReport demo_dfs(const DemoOptions &opt) {
  RunReport rep;
  rep.command = "demo dfs";
  rep.seed = opt.seed;
  const PureState psi = dfs_state();
  const DensityMatrix rho = density(psi);
  const SchmidtDecomposition sd = schmidt(psi);
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  json per_p = json::object();
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    const std::string tag = "p=" + fmt(p);
    const KrausChannel ch = dfs_channel(p);
    const EnvarianceVerdict v = channel_envariance_check(rho, ch, ch, 1e-10);
    rep.add("envariance " + tag, v.holds, {{"residual", number(v.residual)}});

    const DfsReport dfs = dfs_check(ch, sd.support_left());
    const double u_err = distance(dfs.support_unitary, x);
    const double p_err = std::max(std::abs(dfs.probabilities.at(0) - p),
                                  std::abs(dfs.probabilities.at(1) - (1.0 - p)));
    rep.add("dfs structure " + tag, dfs.is_dfs && u_err <= 1e-9 && p_err <= 1e-9,
            {{"unitary_error", number(u_err)}, {"probability_error", number(p_err)}});

    const double cert = purity_certificate(rho, ch, Side::S);
    rep.add("intermediate purity " + tag, cert >= 1.0 - 1e-10, {{"purity", number(cert)}});

    const AlignedGram ag = aligned_gram(reduced_density(rho, {0}), ch.kraus());
    rep.add("single kraus on support " + tag,
            ag.support_rank == 1 && ag.delta_residual <= 1e-8,
            {{"support_rank", ag.support_rank}, {"delta_residual", number(ag.delta_residual)}});

    per_p[tag] = {{"residual", number(v.residual)},
                  {"probabilities", io::to_json(std::span<const double>(dfs.probabilities))},
                  {"support_unitary", io::to_json(dfs.support_unitary)},
                  {"fixed_point_S", number(v.fixed_point_residuals.at("S"))},
                  {"fixed_point_E", number(v.fixed_point_residuals.at("E"))}};
  }
  const InvarianceReport inv =
      invariance_check(rho, dfs_channel(0.3), dfs_channel(0.3), Side::S, 1e-5,
                       Direction::SToE, discord_config(opt));
  rep.add("correlations preserved p=0.3", inv.pass,
          {{"delta_I", number(inv.delta_i)},
           {"delta_J", number(inv.delta_j)},
           {"delta_D", number(inv.delta_d)}});
  rep.values = {{"per_p", per_p},
                {"I", number(inv.i_before)},
                {"J", number(inv.j_before)},
                {"D", number(inv.d_before)}};
  return rep;
}

RunReport demo_nogo(const DemoOptions &opt) {
  RunReport rep;
  rep.command = "demo nogo";
  rep.seed = opt.seed;
  const NogoReport nr = nogo_experiment(bell_state(), opt.trials, opt.seed);
  rep.add("DFS pairs are envariant", nr.positive_pass == nr.trials,
          {{"passed", nr.positive_pass}, {"worst_residual", number(nr.worst_positive_residual)}});
  rep.add("non-DFS channels falsified", nr.negative_falsified == nr.trials,
          {{"falsified", nr.negative_falsified},
           {"largest_purity", number(nr.worst_negative_purity)}});
  rep.add("DFS form recovered", nr.dfs_recovered == nr.trials,
          {{"recovered", nr.dfs_recovered}});
  rep.add("one Kraus operator on the support", nr.gram_pass == nr.trials,
          {{"passed", nr.gram_pass}, {"worst_residual", number(nr.worst_gram_residual)}});
  rep.values = {{"trials", nr.trials},
                {"positive_pass", nr.positive_pass},
                {"negative_falsified", nr.negative_falsified},
                {"rejected_samples", nr.rejected_samples}};
  return rep;
}

RunReport easta_report(const HamiltonianPath &path, const DemoOptions &opt,
                       const std::string &command) {
  RunReport rep;
  rep.command = command;
  rep.seed = opt.seed;
  const AdiabaticFrame fr = build_frame(path);
  const std::size_t last = fr.size() - 1;
  const std::size_t d = fr.dim();
  Rng rng(trial_seed(opt.seed, 0));
  const ComplexMatrix u_rand = random_unitary(d, rng);
  const ComplexMatrix u_cd = counterdiabatic_unitary(fr, last);

  const std::pair<const char *, ComplexMatrix> choices[] = {
      {"identity", ComplexMatrix::identity(d)}, {"U_cd", u_cd}, {"random", u_rand}};
  for (const auto &[name, u_s] : choices) {
    const ComplexMatrix u_e = easta_partner(fr, u_s, last);
    const EnvarianceVerdict v = verify_easta(fr, u_s, u_e, last, 1e-6);
    rep.add(std::string("partner for U_S = ") + name, v.holds,
            {{"residual", number(v.residual)}});
  }
  const EnvarianceVerdict bare = verify_easta(fr, u_rand, ComplexMatrix::identity(d), last, 1e-6);
  rep.add("U_E = identity with random U_S", bare.holds, {{"residual", number(bare.residual)}},
          false);

  double worst_fid = 1.0, worst_p = 0.0;
  const PureState psi0 = easta_initial_state(fr);
  for (std::size_t q = 0; q < 5; ++q) {
    const std::size_t i = q * last / 4;
    const ComplexMatrix u_e = easta_partner(fr, u_rand, i);
    auto amps = apply_on_factor(psi0.amplitudes(), psi0.dims(), 0, u_rand);
    amps = apply_on_factor(amps, psi0.dims(), 1, u_e);
    const PureState fin(psi0.dims(), amps);
    for (std::size_t k = 0; k < d; ++k) {
      const ProjectionResult pr = project_environment(fin, fr, k, i);
      worst_fid = std::min(worst_fid, pr.fidelity);
      worst_p = std::max(worst_p, std::abs(pr.probability - 1.0 / double(d)));
    }
  }
  rep.add("readout follows the adiabatic frame", worst_fid > 1.0 - 1e-6 && worst_p < 1e-9,
          {{"worst_fidelity", number(worst_fid)}, {"probability_error", number(worst_p)}});

  json theta = json::array();
  for (double t : fr.theta[last]) theta.push_back(number(t));
  rep.values = {{"steps", fr.size()},
                {"min_gap", number(fr.min_gap)},
                {"min_gap_time", number(fr.min_gap_time)},
                {"theta_final", theta},
                {"max_imag_residue", number(fr.max_imag_residue)},
                {"diagnostics", fr.diagnostics},
                {"U_cd_final", io::to_json(u_cd)}};
  return rep;
}

RunReport demo_easta(const DemoOptions &opt) {
  const auto path = HamiltonianPath::sample(
      [](double t) { return ComplexMatrix{{1.0 - t, t}, {t, -(1.0 - t)}}; }, 0.0, 1.0,
      opt.steps);
  RunReport rep = easta_report(path, opt, "demo easta");
  const std::size_t fine_steps = 2 * opt.steps - 1;
  const auto fine = HamiltonianPath::sample(
      [](double t) { return ComplexMatrix{{1.0 - t, t}, {t, -(1.0 - t)}}; }, 0.0, 1.0,
      fine_steps);
  const AdiabaticFrame a = build_frame(path), b = build_frame(fine);
  double change = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k)
    change = std::max(change, std::abs(a.theta.back()[k] - b.theta.back()[k]));
  rep.add("theta stable under grid doubling", change < 1e-6, {{"change", number(change)}});
  return rep;
}

RunReport demo_tfd(const DemoOptions &opt) {
  RunReport rep;
  rep.command = "demo tfd";
  rep.seed = opt.seed;
  TfdSpec spec{opt.energies, opt.beta};
  validate(spec);
  const std::size_t d = spec.energies.size();

  double worst = 0.0;
  for (double t : {0.0, 0.5, 1.0, 13.37}) worst = std::max(worst, static_check(spec, t).residual);
  rep.add("static under H(x)I - I(x)H", worst <= 1e-10, {{"residual", number(worst)}});
  const EnvarianceVerdict sum = static_check(spec, 1.0, 1e-10, TfdGenerator::Sum);
  rep.add("static under H(x)I + I(x)H", sum.holds, {{"residual", number(sum.residual)}},
          false);

  std::vector<double> e_d(spec.energies);
  const ComplexMatrix h = ComplexMatrix::diagonal(std::span<const double>(e_d));
  const CommutantVerdict comm = commutant_check(unitary_exp(h, 0.7), h);
  rep.add("exp(-iHt) commutes with H", comm.holds, {{"residual", number(comm.residual)}});

  const BathReport amp =
      bath_violation(spec, standard_channel(StandardChannel::AmplitudeDamping, 0.3, d), 1e-10);
  rep.add("static after amplitude-damping kick", !amp.violation,
          {{"fidelity", number(amp.fidelity)}, {"purity", number(amp.purity)}}, false);

  const BathReport deph = bath_violation(spec, dephasing_channel(ComplexMatrix::identity(d)));
  rep.add("energy dephasing fixes rho_L", deph.fixed_point_residual <= 1e-10,
          {{"residual", number(deph.fixed_point_residual)}});
  rep.add("static after energy dephasing", !deph.purity_witness,
          {{"purity", number(deph.purity)}}, false);

  rep.values = {{"gibbs_weights", io::to_json(std::span<const double>(gibbs_weights(spec)))},
                {"amplitude_damping", {{"fidelity", number(amp.fidelity)},
                                       {"purity", number(amp.purity)}}},
                {"dephasing", {{"fidelity", number(deph.fidelity)},
                               {"purity", number(deph.purity)}}}};
  return rep;
}

RunReport demo_discord(const DemoOptions &opt) {
  RunReport rep;
  rep.command = "demo discord";
  rep.seed = opt.seed;
  const DiscordConfig cfg = discord_config(opt);

  const DiscordResult bell = discord(density(bell_state()), Direction::SToE, cfg);
  rep.add("Bell discord = ln 2", std::abs(bell.discord - std::numbers::ln2) <= 1e-5,
          {{"D", number(bell.discord)}});

  ComplexMatrix mix(4, 4);
  mix(0, 0) = mix(3, 3) = 0.5;
  const DiscordResult cl = discord(DensityMatrix({2, 2}, mix), Direction::SToE, cfg);
  rep.add("classical mixture has zero discord", std::abs(cl.discord) <= 1e-6,
          {{"D", number(cl.discord)}, {"J", number(cl.classical)}});

  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng(trial_seed(opt.seed, 1000 + i));
    const PureState psi({2, 2}, random_unit_vector(4, rng));
    const DensityMatrix rho = density(psi);
    const DiscordResult r = discord(rho, Direction::SToE, cfg);
    worst = std::max(worst, std::abs(r.discord - entropy(reduced_density(rho, {1}))));
  }
  rep.add("pure states: D = S(rho_E)", worst <= 1e-5, {{"worst_error", number(worst)}});
  rep.values = {{"bell", {{"I", number(bell.mutual_information)},
                          {"J", number(bell.classical)},
                          {"D", number(bell.discord)}}},
                {"classical_mixture", {{"I", number(cl.mutual_information)},
                                       {"J", number(cl.classical)},
                                       {"D", number(cl.discord)}}},
                {"caveat", bell.caveat}};
  return rep;
}

}  // namespace envar::cli
