// Copyright 2026 The Qudit Pulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qudit/types.hpp"

namespace qudit {

/// Physical description of one or two coupled transmons truncated to
/// `d + guard` levels each. Frequencies are angular, in rad/ns.
struct QuditSystem {
  int num_qudits = 1;
  int d = 2;
  int guard = 2;
  std::vector<double> omega;  // 0-1 transition, per qudit
  std::vector<double> xi;     // anharmonicity, per qudit
  double coupling_J = 0.0;
  double omega_rot = 0.0;

  int levels() const { return d + guard; }
  int full_dim() const { return num_qudits == 1 ? levels() : levels() * levels(); }
  int essential_dim() const { return num_qudits == 1 ? d : d * d; }

  /// Throws InvalidArgument on inconsistent fields.
  void validate() const;

  /// True if full-space basis index `i` has any qudit in a guard level.
  bool is_guard_state(int i) const;

  bool operator==(const QuditSystem&) const = default;
};

/// Transmon parameters used throughout: 4.914 / 5.114 GHz, -0.330 GHz
/// anharmonicity, 3.8 MHz coupling. The rotating frame is placed at the
/// midpoint of the extreme carrier frequencies.
QuditSystem transmon_system(int num_qudits, int d, int guard = 2);

/// Truncated annihilation operator on `n` levels.
template <typename Real = double>
ComplexMatrix<Real> lowering_operator(int n) {
  if (n < 2) throw InvalidArgument("lowering_operator: need at least 2 levels");
  ComplexMatrix<Real> a = ComplexMatrix<Real>::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<Real>(k));
  return a;
}

template <typename Derived1, typename Derived2>
auto kron(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using Scalar = typename Derived1::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Rotating-frame drift: detuning, anharmonicity and exchange coupling.
CMatrix drift_hamiltonian(const QuditSystem& sys);

struct ControlPair {
  CMatrix symmetric;      // a + a^dagger, multiplies p_k
  CMatrix antisymmetric;  // i (a - a^dagger), multiplies q_k
};

std::vector<ControlPair> control_operators(const QuditSystem& sys);

struct GateSpec {
  std::string name;
  int dim_h = 0;
  CMatrix matrix;
};

/// Gate names understood by `gate`.
inline constexpr std::string_view kGateNames[] = {"X_d", "Xs_d", "H_d", "T_d", "Z_d", "SWAP_d", "CNOT", "SWAP2"};

/// Number of qudits the named gate acts on. Throws on an unknown name.
int gate_qudits(std::string_view name);

/// Generalized qudit gates, templated on the real scalar type.
///
/// Two-qudit gates use row-major composite indexing |i>|j> -> i*d + j.
/// T_d takes the principal branch of the fourth root, phase 2*pi*k/(4d).
template <typename Real = double>
ComplexMatrix<Real> gate_matrix(std::string_view name, int d) {
  using C = std::complex<Real>;
  using M = ComplexMatrix<Real>;
  if (d < 2) throw InvalidArgument("gate: d must be at least 2");
  const Real two_pi = static_cast<Real>(2) * std::numbers::pi_v<Real>;
  auto root_of_unity = [&](Real power) { return std::polar(Real(1), two_pi * power / static_cast<Real>(d)); };

  if (name == "X_d") {
    M m = M::Zero(d, d);
    for (int k = 0; k < d; ++k) m((k + 1) % d, k) = 1;
    return m;
  }
  if (name == "Xs_d") {
    M m = M::Identity(d, d);
    m(0, 0) = m(d - 1, d - 1) = 0;
    m(0, d - 1) = m(d - 1, 0) = 1;
    return m;
  }
  if (name == "H_d") {
    M m(d, d);
    const Real norm = Real(1) / std::sqrt(static_cast<Real>(d));
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) m(j, k) = norm * root_of_unity(static_cast<Real>((j * k) % d));
    // d = 2 gives exact +-1; keep the sign without polar round-off.
    if (d == 2) m(1, 1) = C(-norm, 0);
    return m;
  }
  if (name == "T_d" || name == "Z_d") {
    const Real scale = name == "T_d" ? Real(0.25) : Real(1);
    M m = M::Zero(d, d);
    for (int k = 0; k < d; ++k) m(k, k) = root_of_unity(scale * static_cast<Real>(k));
    if (name == "Z_d" && d == 2) m(1, 1) = C(-1, 0);
    return m;
  }
  if (name == "SWAP_d" || name == "SWAP2") {
    if (name == "SWAP2" && d != 2) throw InvalidArgument("gate: SWAP2 is defined for d = 2");
    M m = M::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(j * d + i, i * d + j) = 1;
    return m;
  }
  if (name == "CNOT") {
    if (d != 2) throw InvalidArgument("gate: CNOT is defined for d = 2");
    M m = M::Zero(4, 4);
    m(0, 0) = m(1, 1) = 1;
    m(3, 2) = m(2, 3) = 1;
    return m;
  }
  throw InvalidArgument("gate: unknown gate name '" + std::string(name) + "'");
}

GateSpec gate(std::string_view name, int d);

/// Pads a target on the essential space to the full space: essential
/// index i*d + j goes to full index i*n + j. Guard rows are zero.
CMatrix embed_target(const GateSpec& target, const QuditSystem& sys);

}  // namespace qudit
