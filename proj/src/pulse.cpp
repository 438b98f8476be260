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

#include "qudit/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qudit {

CarrierSet carrier_frequencies(const QuditSystem& sys) {
  CarrierSet set;
  set.lab.resize(sys.num_qudits);
  for (int k = 0; k < sys.num_qudits; ++k)
    for (int j = 0; j <= sys.d - 2; ++j) set.lab[k].push_back(sys.omega[k] + j * sys.xi[k]);

  // Every control drives at all qudits' resonances (cross-resonance).
  std::vector<double> shared;
  for (const auto& per_qudit : set.lab)
    for (double f : per_qudit) shared.push_back(f - sys.omega_rot);
  set.rot.assign(sys.num_qudits, shared);
  return set;
}

double rotating_frame_frequency(const QuditSystem& sys) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < sys.num_qudits; ++k)
    for (int j = 0; j <= sys.d - 2; ++j) {
      const double f = sys.omega[k] + j * sys.xi[k];
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  return 0.5 * (hi + lo);
}

int num_bsplines(double T) {
  if (!(T > 0)) throw InvalidArgument("num_bsplines: duration must be positive");
  const int n = static_cast<int>(std::floor(T / 10.0 + 0.5 + 1e-12)) + 2;
  return std::max(n, 3);
}

double alpha_bound(int num_carriers) {
  if (num_carriers < 1) throw InvalidArgument("alpha_bound: need at least one carrier");
  return from_mhz(40.0 / (2.0 * std::sqrt(2.0) * num_carriers));
}

QuadraticBSplines::QuadraticBSplines(int num_splines, double duration)
    : num_splines_(num_splines), duration_(duration) {
  if (num_splines < 3) throw InvalidArgument("B-splines: need at least 3 basis functions");
  if (!(duration > 0)) throw InvalidArgument("B-splines: duration must be positive");
  spacing_ = duration / (num_splines - 2);
}

QuadraticBSplines::Local QuadraticBSplines::local(double t) const {
  if (!(t >= 0.0 && t <= duration_ * (1 + 1e-12)))
    throw InvalidArgument("B-splines: time outside [0, T]");
  const double u = t / spacing_;
  const int interval = std::clamp(static_cast<int>(std::floor(u)), 0, num_splines_ - 3);
  const double x = u - interval;
  return {interval, {0.5 * (1 - x) * (1 - x), 0.5 * (-2 * x * x + 2 * x + 1), 0.5 * x * x}};
}

RVector QuadraticBSplines::values(double t) const {
  RVector out = RVector::Zero(num_splines_);
  const auto loc = local(t);
  for (int i = 0; i < 3; ++i) out[loc.first + i] = loc.values[i];
  return out;
}

RVector basis_values(int num_splines, double T, double t) { return QuadraticBSplines(num_splines, T).values(t); }

void PulseParams::validate() const {
  if (!(T > 0) || !std::isfinite(T)) throw InvalidArgument("pulse: duration must be positive");
  if (carriers.empty() || num_carriers() == 0) throw InvalidArgument("pulse: no carriers");
  for (const auto& c : carriers)
    if (static_cast<int>(c.size()) != num_carriers()) throw InvalidArgument("pulse: ragged carrier lists");
  if (num_splines < 3) throw InvalidArgument("pulse: need at least 3 splines");
  if (alpha.size() != size()) throw InvalidArgument("pulse: alpha has the wrong length");
  if (!(alpha_max > 0)) throw InvalidArgument("pulse: alpha_max must be positive");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha[i])) throw InvalidArgument("pulse: non-finite coefficient");
    if (std::abs(alpha[i]) > alpha_max) throw InvalidArgument("pulse: coefficient exceeds alpha_max");
    if (is_pinned(i) && alpha[i] != 0.0) throw InvalidArgument("pulse: boundary spline must be zero");
  }
}

PulseParams make_pulse(const QuditSystem& sys, double T) {
  PulseParams p;
  p.T = T;
  p.carriers = carrier_frequencies(sys).rot;
  p.num_splines = num_bsplines(T);
  p.alpha_max = alpha_bound(p.num_carriers());
  p.alpha = RVector::Zero(p.size());
  return p;
}

PulseParams reshape_pulse(const PulseParams& params, double T) {
  PulseParams p = params;
  p.T = T;
  p.num_splines = num_bsplines(T);
  p.alpha = RVector::Zero(p.size());
  return p;
}

namespace {

// Complex envelope sum_b alpha_{k,j,b} S_b(t) for one carrier.
Complex envelope(const PulseParams& params, const QuadraticBSplines::Local& loc, int k, int j) {
  Complex e = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int b = loc.first + i;
    e += loc.values[i] * Complex(params.alpha[params.index(k, j, b, 0)], params.alpha[params.index(k, j, b, 1)]);
  }
  return e;
}

}  // namespace

ControlValues eval_controls(const PulseParams& params, double t) {
  const QuadraticBSplines basis(params.num_splines, params.T);
  const auto loc = basis.local(t);
  ControlValues out{RVector::Zero(params.num_controls()), RVector::Zero(params.num_controls())};
  for (int k = 0; k < params.num_controls(); ++k) {
    Complex z = 0.0;
    for (int j = 0; j < params.num_carriers(); ++j)
      z += envelope(params, loc, k, j) * std::polar(1.0, params.carriers[k][j] * t);
    out.p[k] = z.real();
    out.q[k] = z.imag();
  }
  return out;
}

RVector lab_frame_control(const PulseParams& params, double omega_rot, double t) {
  const auto c = eval_controls(params, t);
  RVector f(params.num_controls());
  for (int k = 0; k < f.size(); ++k) f[k] = 2.0 * (Complex(c.p[k], c.q[k]) * std::polar(1.0, omega_rot * t)).real();
  return f;
}

RVector random_guess(const PulseParams& shape, double scale, std::uint64_t seed) {
  RVector alpha = RVector::Zero(shape.size());
  if (scale == 0.0) return alpha;
  std::mt19937_64 rng(seed);
  const double bound = scale * shape.alpha_max;
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    if (!shape.is_pinned(i)) alpha[i] = dist(rng);
  return alpha;
}

PulseParams refit(const PulseParams& params, double T_new) {
  if (!(T_new > 0) || !std::isfinite(T_new)) throw InvalidArgument("refit: duration must be positive");
  PulseParams out = reshape_pulse(params, T_new);
  const QuadraticBSplines old_basis(params.num_splines, params.T);
  const QuadraticBSplines new_basis(out.num_splines, T_new);

  const int intervals = out.num_splines - 2;
  const int samples = 8 * intervals + 1;
  const int unknowns = out.num_splines - 2;  // interior splines only

  RMatrix design = RMatrix::Zero(samples, unknowns);
  std::vector<double> times(samples);
  for (int s = 0; s < samples; ++s) {
    times[s] = T_new * s / (samples - 1);
    const auto loc = new_basis.local(times[s]);
    for (int i = 0; i < 3; ++i) {
      const int b = loc.first + i;
      if (b >= 1 && b <= out.num_splines - 2) design(s, b - 1) = loc.values[i];
    }
  }

  const RMatrix normal = design.transpose() * design;
  const Eigen::LLT<RMatrix> chol(normal);
  if (chol.info() != Eigen::Success) throw RefitError("refit: singular normal equations");

  const int nc = params.num_controls();
  const int nf = params.num_carriers();
  // Columns hold (re, im) per carrier of every control.
  RMatrix targets = RMatrix::Zero(samples, 2 * nc * nf);
  const double keep_until = std::min(params.T, T_new);
  for (int s = 0; s < samples; ++s) {
    if (times[s] > keep_until) continue;
    const auto loc = old_basis.local(std::min(times[s], params.T));
    for (int k = 0; k < nc; ++k)
      for (int j = 0; j < nf; ++j) {
        const Complex e = envelope(params, loc, k, j);
        targets(s, 2 * (k * nf + j)) = e.real();
        targets(s, 2 * (k * nf + j) + 1) = e.imag();
      }
  }

  const RMatrix coeffs = chol.solve(design.transpose() * targets);
  if (!coeffs.allFinite()) throw RefitError("refit: non-finite solution");
  for (int k = 0; k < nc; ++k)
    for (int j = 0; j < nf; ++j)
      for (int c = 0; c < 2; ++c)
        for (int b = 1; b <= out.num_splines - 2; ++b)
          out.alpha[out.index(k, j, b, c)] =
              std::clamp(coeffs(b - 1, 2 * (k * nf + j) + c), -out.alpha_max, out.alpha_max);
  return out;
}

}  // namespace qudit
