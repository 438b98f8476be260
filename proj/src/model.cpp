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

#include "qudit/model.hpp"

#include "qudit/pulse.hpp"

namespace qudit {

void QuditSystem::validate() const {
  if (num_qudits != 1 && num_qudits != 2) throw InvalidArgument("system: num_qudits must be 1 or 2");
  if (d < 2) throw InvalidArgument("system: d must be at least 2");
  if (guard < 0) throw InvalidArgument("system: guard must be non-negative");
  if (static_cast<int>(omega.size()) != num_qudits || static_cast<int>(xi.size()) != num_qudits)
    throw InvalidArgument("system: omega and xi need one entry per qudit");
  for (double v : omega)
    if (!std::isfinite(v)) throw InvalidArgument("system: non-finite omega");
  for (double v : xi)
    if (!std::isfinite(v)) throw InvalidArgument("system: non-finite xi");
  if (!std::isfinite(coupling_J) || !std::isfinite(omega_rot)) throw InvalidArgument("system: non-finite parameter");
}

bool QuditSystem::is_guard_state(int i) const {
  const int n = levels();
  if (num_qudits == 1) return i >= d;
  return i / n >= d || i % n >= d;
}

QuditSystem transmon_system(int num_qudits, int d, int guard) {
  QuditSystem sys;
  sys.num_qudits = num_qudits;
  sys.d = d;
  sys.guard = guard;
  sys.omega = {from_ghz(4.914), from_ghz(5.114)};
  sys.xi = {from_ghz(-0.330), from_ghz(-0.330)};
  sys.omega.resize(num_qudits);
  sys.xi.resize(num_qudits);
  sys.coupling_J = num_qudits == 2 ? from_mhz(3.8) : 0.0;
  sys.validate();
  sys.omega_rot = rotating_frame_frequency(sys);
  return sys;
}

namespace {

// Promote a single-qudit operator to qudit `k` of the composite space.
CMatrix promote(const QuditSystem& sys, const CMatrix& op, int k) {
  if (sys.num_qudits == 1) return op;
  const CMatrix id = CMatrix::Identity(sys.levels(), sys.levels());
  return k == 0 ? CMatrix(kron(op, id)) : CMatrix(kron(id, op));
}

}  // namespace

CMatrix drift_hamiltonian(const QuditSystem& sys) {
  sys.validate();
  const CMatrix a = lowering_operator(sys.levels());
  const CMatrix number = a.adjoint() * a;
  const CMatrix self_kerr = a.adjoint() * a.adjoint() * a * a;

  const int n = sys.full_dim();
  CMatrix h = CMatrix::Zero(n, n);
  for (int k = 0; k < sys.num_qudits; ++k) {
    const CMatrix local = (sys.omega[k] - sys.omega_rot) * number + 0.5 * sys.xi[k] * self_kerr;
    h += promote(sys, local, k);
  }
  if (sys.num_qudits == 2) {
    const CMatrix a1 = promote(sys, a, 0);
    const CMatrix a2 = promote(sys, a, 1);
    h += sys.coupling_J * (a1.adjoint() * a2 + a2.adjoint() * a1);
  }
  return h;
}

std::vector<ControlPair> control_operators(const QuditSystem& sys) {
  sys.validate();
  const CMatrix a = lowering_operator(sys.levels());
  const Complex i_unit(0.0, 1.0);
  std::vector<ControlPair> ops;
  ops.reserve(sys.num_qudits);
  for (int k = 0; k < sys.num_qudits; ++k) {
    const CMatrix ak = promote(sys, a, k);
    ops.push_back({ak + ak.adjoint(), i_unit * (ak - ak.adjoint())});
  }
  return ops;
}

int gate_qudits(std::string_view name) {
  if (name == "SWAP_d" || name == "SWAP2" || name == "CNOT") return 2;
  for (auto known : kGateNames)
    if (known == name) return 1;
  throw InvalidArgument("gate: unknown gate name '" + std::string(name) + "'");
}

GateSpec gate(std::string_view name, int d) {
  GateSpec spec;
  spec.name = std::string(name);
  spec.matrix = gate_matrix<double>(name, d);
  spec.dim_h = static_cast<int>(spec.matrix.rows());
  return spec;
}

CMatrix embed_target(const GateSpec& target, const QuditSystem& sys) {
  sys.validate();
  const int h = sys.essential_dim();
  if (target.dim_h != h || target.matrix.rows() != h || target.matrix.cols() != h)
    throw InvalidArgument("embed_target: target dimension does not match the essential space");
  const int n = sys.levels();
  CMatrix out = CMatrix::Zero(sys.full_dim(), h);
  for (int e = 0; e < h; ++e) {
    const int full = sys.num_qudits == 1 ? e : (e / sys.d) * n + e % sys.d;
    out.row(full) = target.matrix.row(e);
  }
  return out;
}

}  // namespace qudit
