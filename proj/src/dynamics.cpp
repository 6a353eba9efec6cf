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

#include "envar/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace envar {

namespace {

// Below this fraction of the column's largest magnitude the anchor component
// no longer pins the phase well and a new one is chosen.
constexpr double kAnchorFloor = 0.3;
constexpr double kImagResidueWarn = 1e-8;

std::size_t argmax_abs(std::span<const cplx> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
  return best;
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto &z : v) m = std::max(m, std::abs(z));
  return m;
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(12);
  os << t;
  return os.str();
}

// Running integral of `values` over the first i + 1 samples, for every i.
std::vector<double> cumulative_integral(const std::vector<double> &values, double dt) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i)
    out[i] = integrate_sampled(std::span<const double>(values.data(), i + 1), dt);
  return out;
}

}  // namespace

HamiltonianPath HamiltonianPath::sample(const std::function<ComplexMatrix(double)> &h,
                                        double t0, double t1, std::size_t samples) {
  if (samples < 2) throw EnvarError(ErrorCode::TooFewSamples, "a path needs two samples");
  if (!(t1 > t0)) throw EnvarError(ErrorCode::BadParam, "path needs t1 > t0");
  HamiltonianPath p;
  const double dt = (t1 - t0) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? t1 : t0 + dt * static_cast<double>(i);
    p.times.push_back(t);
    p.hamiltonians.push_back(h(t));
  }
  return p;
}

void validate(const HamiltonianPath &path) {
  if (path.times.size() != path.hamiltonians.size()) {
    throw EnvarError(ErrorCode::LengthMismatch, "times and hamiltonians differ in length");
  }
  if (path.times.size() < 2) throw EnvarError(ErrorCode::TooFewSamples, "a path needs two samples");
  const double dt = (path.times.back() - path.times.front()) /
                    static_cast<double>(path.times.size() - 1);
  if (!(dt > 0.0)) throw EnvarError(ErrorCode::BadParam, "times must increase");
  for (std::size_t i = 1; i < path.times.size(); ++i) {
    const double step = path.times[i] - path.times[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw EnvarError(ErrorCode::BadParam, "time grid is not uniform at index " +
                                                std::to_string(i));
    }
  }
  const std::size_t n = path.hamiltonians.front().rows();
  for (std::size_t i = 0; i < path.hamiltonians.size(); ++i) {
    const auto &h = path.hamiltonians[i];
    if (h.rows() != n || h.cols() != n || n == 0) {
      throw EnvarError(ErrorCode::ShapeMismatch, "Hamiltonian samples differ in shape");
    }
    if (hermiticity_residual(h) > 1e-10 * std::max(1.0, h.frobenius_norm())) {
      throw EnvarError(ErrorCode::NotHermitianSample,
                       "sample at t = " + fmt_time(path.times[i]) + " is not Hermitian",
                       path.times[i]);
    }
  }
}

AdiabaticFrame build_frame(const HamiltonianPath &path, double gap_tol) {
  validate(path);
  const std::size_t steps = path.times.size();
  const std::size_t n = path.hamiltonians.front().rows();
  const double dt = (path.times.back() - path.times.front()) / static_cast<double>(steps - 1);

  AdiabaticFrame fr;
  fr.times = path.times;
  fr.min_gap = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> anchor(n, 0);
  std::vector<cplx> anchor_phase(n, 1.0);

  for (std::size_t i = 0; i < steps; ++i) {
    const EigenSystem es = hermitian_eig(path.hamiltonians[i]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double gap = es.eigenvalues[k + 1] - es.eigenvalues[k];
      if (gap < fr.min_gap) {
        fr.min_gap = gap;
        fr.min_gap_time = path.times[i];
      }
      if (gap < gap_tol) {
        throw EnvarError(ErrorCode::GapTooSmall,
                         "gap " + fmt_time(gap) + " between levels " + std::to_string(k) +
                             " and " + std::to_string(k + 1) + " at t = " +
                             fmt_time(path.times[i]),
                         path.times[i]);
      }
    }
    if (n == 1) fr.min_gap = 0.0;
    ComplexMatrix v = es.eigenvectors;
    for (std::size_t k = 0; k < n; ++k) {
      auto col = v.column(k);
      if (i == 0) {
        fix_phase(col);
        anchor[k] = argmax_abs(col);
        anchor_phase[k] = 1.0;
      } else {
        const auto prev = fr.vectors[i - 1].column(k);
        bool realign = std::abs(col[anchor[k]]) < kAnchorFloor * max_abs(col);
        if (!realign) {
          const cplx a = col[anchor[k]];
          const cplx ph = anchor_phase[k] * std::conj(a) / std::abs(a);
          for (auto &z : col) z *= ph;
          realign = inner(prev, col).real() <= 0.0;
        }
        if (realign) {
          const cplx ov = inner(prev, col);
          const cplx ph = std::conj(ov) / std::abs(ov);
          for (auto &z : col) z *= ph;
          anchor[k] = argmax_abs(col);
          anchor_phase[k] = col[anchor[k]] / std::abs(col[anchor[k]]);
          fr.diagnostics.push_back("level " + std::to_string(k) + " re-anchored at t = " +
                                   fmt_time(path.times[i]));
        }
      }
      v.set_column(k, col);
    }
    fr.energies.push_back(es.eigenvalues);
    fr.vectors.push_back(std::move(v));
  }

  // Geometric rate -i <s|ds/dt>, central differences inside, one-sided
  // second order at the ends (first order if only two samples).
  std::vector<std::vector<double>> rate(n, std::vector<double>(steps, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<cplx>> cols(steps);
    for (std::size_t i = 0; i < steps; ++i) cols[i] = fr.vectors[i].column(k);
    for (std::size_t i = 0; i < steps; ++i) {
      std::vector<cplx> ds(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (steps == 2) {
          ds[j] = (cols[1][j] - cols[0][j]) / dt;
        } else if (i == 0) {
          ds[j] = (-3.0 * cols[0][j] + 4.0 * cols[1][j] - cols[2][j]) / (2.0 * dt);
        } else if (i + 1 == steps) {
          ds[j] = (3.0 * cols[i][j] - 4.0 * cols[i - 1][j] + cols[i - 2][j]) / (2.0 * dt);
        } else {
          ds[j] = (cols[i + 1][j] - cols[i - 1][j]) / (2.0 * dt);
        }
      }
      const cplx r = inner(cols[i], ds);
      rate[k][i] = r.imag();
      fr.max_imag_residue = std::max(fr.max_imag_residue, std::abs(r.real()));
    }
  }
  if (fr.max_imag_residue > kImagResidueWarn) {
    fr.diagnostics.push_back("geometric rate had an imaginary part up to " +
                             fmt_time(fr.max_imag_residue) + "; discarded");
  }

  fr.dynamical.assign(steps, std::vector<double>(n, 0.0));
  fr.geometric.assign(steps, std::vector<double>(n, 0.0));
  fr.theta.assign(steps, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(steps);
    for (std::size_t i = 0; i < steps; ++i) e[i] = fr.energies[i][k];
    const auto dyn = cumulative_integral(e, dt);
    const auto geo = cumulative_integral(rate[k], dt);
    for (std::size_t i = 0; i < steps; ++i) {
      fr.dynamical[i][k] = dyn[i];
      fr.geometric[i][k] = geo[i];
      fr.theta[i][k] = dyn[i] + geo[i];
    }
  }
  return fr;
}

namespace {

void check_index(const AdiabaticFrame &frame, std::size_t t_index) {
  if (t_index >= frame.size()) {
    throw EnvarError(ErrorCode::BadParam, "time index " + std::to_string(t_index) +
                                              " outside the frame");
  }
}

ComplexMatrix phase_diag(const AdiabaticFrame &frame, std::size_t t_index) {
  const std::size_t n = frame.dim();
  ComplexMatrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) d(k, k) = std::polar(1.0, -frame.theta[t_index][k]);
  return d;
}

}  // namespace

ComplexMatrix counterdiabatic_unitary(const AdiabaticFrame &frame, std::size_t t_index) {
  check_index(frame, t_index);
  return frame.vectors[t_index] * phase_diag(frame, t_index) * frame.vectors.front().adjoint();
}

PureState easta_initial_state(const AdiabaticFrame &frame) {
  const std::size_t n = frame.dim();
  const ComplexMatrix amp = frame.vectors.front() * cplx(1.0 / std::sqrt(double(n)));
  return pure_from_matrix(amp);
}

ComplexMatrix easta_partner(const AdiabaticFrame &frame, const ComplexMatrix &u_s,
                            std::size_t t_index) {
  check_index(frame, t_index);
  const std::size_t n = frame.dim();
  if (u_s.rows() != n || u_s.cols() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch, "U_S does not match the frame dimension");
  }
  const double r = unitarity_residual(u_s);
  if (r > 1e-9) throw EnvarError(ErrorCode::NonUnitaryInput, "U_S is not unitary", r);
  // m(n, m) = <s_n(0)| U_S^dagger |s_m(t)>
  const ComplexMatrix m =
      frame.vectors.front().adjoint() * u_s.adjoint() * frame.vectors[t_index];
  return phase_diag(frame, t_index) * m.transpose();
}

EnvarianceVerdict verify_easta(const AdiabaticFrame &frame, const ComplexMatrix &u_s,
                               const ComplexMatrix &u_e, std::size_t t_index, double tol) {
  check_index(frame, t_index);
  const std::size_t n = frame.dim();
  if (u_s.rows() != n || u_s.cols() != n || u_e.rows() != n || u_e.cols() != n) {
    throw EnvarError(ErrorCode::DimensionMismatch, "unitaries do not match the frame dimension");
  }
  const PureState psi0 = easta_initial_state(frame);
  auto lhs = apply_on_factor(psi0.amplitudes(), psi0.dims(), 0, u_s);
  lhs = apply_on_factor(lhs, psi0.dims(), 1, u_e);
  const auto rhs = apply_on_factor(psi0.amplitudes(), psi0.dims(), 0,
                                   counterdiabatic_unitary(frame, t_index));
  EnvarianceVerdict v;
  v.tol = tol;
  v.residual = distance(lhs, rhs);
  v.holds = v.residual <= tol;
  return v;
}

ProjectionResult project_environment(const PureState &state, std::size_t k) {
  if (state.num_factors() != 2) {
    throw EnvarError(ErrorCode::DimensionMismatch, "projection needs a bipartite state");
  }
  const std::size_t ds = state.dims()[0], de = state.dims()[1];
  if (k >= de) throw EnvarError(ErrorCode::BadParam, "branch index outside the environment");
  std::vector<cplx> s(ds);
  double p = 0.0;
  for (std::size_t i = 0; i < ds; ++i) {
    s[i] = state.amplitudes()[i * de + k];
    p += std::norm(s[i]);
  }
  if (p < 1e-12) {
    throw EnvarError(ErrorCode::ZeroProbabilityBranch,
                     "branch " + std::to_string(k) + " has probability " + fmt_time(p), p);
  }
  for (auto &z : s) z /= std::sqrt(p);
  return ProjectionResult{p, PureState({ds}, std::move(s)), 0.0};
}

ProjectionResult project_environment(const PureState &state, const AdiabaticFrame &frame,
                                     std::size_t k, std::size_t t_index) {
  check_index(frame, t_index);
  if (state.dims()[0] != frame.dim() || k >= frame.dim()) {
    throw EnvarError(ErrorCode::DimensionMismatch, "state does not match the frame");
  }
  ProjectionResult out = project_environment(state, k);
  out.fidelity = std::norm(inner(frame.vectors[t_index].column(k), out.system.amplitudes()));
  return out;
}

// ---------------------------------------------------------------------------
// Thermofield double

void validate(const TfdSpec &spec) {
  if (spec.energies.empty()) throw EnvarError(ErrorCode::BadParam, "no energy levels");
  if (!std::isfinite(spec.beta) || spec.beta < 0.0) {
    throw EnvarError(ErrorCode::BadParam, "beta must be finite and non-negative", spec.beta);
  }
  for (double e : spec.energies)
    if (!std::isfinite(e)) throw EnvarError(ErrorCode::BadParam, "energies must be finite");
}

std::vector<double> gibbs_weights(const TfdSpec &spec) {
  validate(spec);
  const double emin = *std::min_element(spec.energies.begin(), spec.energies.end());
  std::vector<double> w;
  double z = 0.0;
  for (double e : spec.energies) {
    w.push_back(std::exp(-spec.beta * (e - emin)));
    z += w.back();
  }
  for (auto &x : w) x /= z;
  return w;
}

PureState tfd_state(const TfdSpec &spec) {
  const std::vector<double> w = gibbs_weights(spec);
  const std::size_t d = w.size();
  std::vector<cplx> amps(d * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) amps[k * d + k] = std::sqrt(w[k]);
  return PureState({d, d}, std::move(amps));
}

EnvarianceVerdict static_check(const TfdSpec &spec, double t, double tol,
                               TfdGenerator generator) {
  const PureState psi = tfd_state(spec);
  const std::size_t d = spec.energies.size();
  const double sign = generator == TfdGenerator::Difference ? -1.0 : 1.0;
  // H_tot is diagonal in |j>|k> with eigenvalue E_j + sign * E_k.
  std::vector<cplx> evolved(psi.amplitudes().begin(), psi.amplitudes().end());
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      evolved[j * d + k] *= std::polar(1.0, -(spec.energies[j] + sign * spec.energies[k]) * t);
  EnvarianceVerdict v;
  v.tol = tol;
  v.residual = distance(evolved, psi.amplitudes());
  v.holds = v.residual <= tol;
  return v;
}

CommutantVerdict commutant_check(const ComplexMatrix &u, const ComplexMatrix &h, double tol) {
  if (!u.is_square() || u.rows() != h.rows() || h.rows() != h.cols()) {
    throw EnvarError(ErrorCode::DimensionMismatch, "U and H must be square of equal size");
  }
  CommutantVerdict v;
  v.residual = distance(h * u, u * h);
  v.holds = v.residual <= tol;
  return v;
}

BathReport bath_violation(const TfdSpec &spec, const KrausChannel &phi, double tol) {
  const PureState psi = tfd_state(spec);
  if (phi.dim() != spec.energies.size()) {
    throw EnvarError(ErrorCode::DimensionMismatch,
                     "channel dimension " + std::to_string(phi.dim()) + " vs " +
                         std::to_string(spec.energies.size()) + " levels");
  }
  const DensityMatrix rho = density(psi);
  const DensityMatrix mapped = apply_local(phi, rho, 0);
  const DensityMatrix rho_l = reduced_density(rho, {0});
  BathReport rep;
  rep.fidelity = fidelity(psi, mapped);
  rep.purity = purity(mapped);
  rep.fixed_point_residual = distance(apply(phi, rho_l).matrix(), rho_l.matrix());
  rep.violation = rep.fidelity < 1.0 - tol;
  rep.purity_witness = rep.purity < 1.0 - tol;
  return rep;
}

}  // namespace envar
