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

#include <cmath>
#include <limits>
#include <numbers>

#include "envar/states.hpp"

namespace envar::testing {

/// Brute-force classical correlation for a state whose first factor is a
/// qubit: scans projective measurements n = (theta, phi) on the Bloch sphere
/// at `step_deg` resolution and returns S(rho_E) - min conditional entropy.
/// Only the upper hemisphere is needed since n and -n give the same
/// measurement.
inline double grid_classical_correlation(const DensityMatrix &rho, double step_deg = 1.0) {
  const std::size_t de = rho.dims()[1];
  const ComplexMatrix &m = rho.matrix();
  // Blocks B_ab = <a|_S rho |b>_S, each de x de.
  ComplexMatrix blk[2][2];
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) blk[a][b] = m.block(a * de, b * de, de, de);

  const double deg = std::numbers::pi / 180.0;
  const int nt = static_cast<int>(std::lround(90.0 / step_deg));
  const int np = static_cast<int>(std::lround(360.0 / step_deg));
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= nt; ++it) {
    const double th = it * step_deg * deg;
    for (int ip = 0; ip < (it == 0 ? 1 : np); ++ip) {
      const double ph = ip * step_deg * deg;
      // |+n> = (cos th/2, e^{i ph} sin th/2), |-n> orthogonal.
      const cplx vp[2] = {std::cos(th / 2), std::polar(std::sin(th / 2), ph)};
      const cplx vm[2] = {-std::polar(std::sin(th / 2), -ph), std::cos(th / 2)};
      double h = 0.0;
      for (const cplx *v : {vp, vm}) {
        ComplexMatrix cond(de, de);
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b) cond += blk[a][b] * (std::conj(v[a]) * v[b]);
        const double p = cond.trace().real();
        if (p < 1e-12) continue;
        cond *= cplx(1.0 / p);
        h += p * entropy(cond);
      }
      best = std::min(best, h);
    }
  }
  return entropy(reduced_density(rho, {1})) - best;
}

}  // namespace envar::testing
