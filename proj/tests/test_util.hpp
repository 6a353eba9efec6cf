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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "envar/error.hpp"
#include "envar/linalg.hpp"
#include "envar/states.hpp"

namespace envar::testing {

inline const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

inline PureState bell() { return PureState({2, 2}, {kInvSqrt2, 0.0, 0.0, kInvSqrt2}); }

/// (|0...0> + |1...1>)/sqrt2 over `n` qubits.
inline PureState ghz(std::size_t n) {
  std::vector<cplx> a(std::size_t{1} << n, 0.0);
  a.front() = a.back() = kInvSqrt2;
  return PureState(Dims(n, 2), a);
}

/// Entropy of a 2x2 Hermitian PSD matrix from its closed-form eigenvalues.
inline double entropy2(const ComplexMatrix &m) {
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const double r = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(m(0, 1)));
  double s = 0.0;
  for (double l : {(a + d) / 2 + r, (a + d) / 2 - r})
    if (l > 1e-300) s -= l * std::log(l);
  return s;
}

/// Binary Shannon entropy in nats.
inline double h2(double p) {
  double s = 0.0;
  for (double q : {p, 1.0 - p})
    if (q > 0) s -= q * std::log(q);
  return s;
}

/// Runs `f` and asserts it throws EnvarError with the given code.
inline void expect_code(ErrorCode code, const std::function<void()> &f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code) << ", nothing thrown";
  } catch (const EnvarError &e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace envar::testing
