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

#include "qudit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qudit {

std::string_view to_string(FitModel model) { return model == FitModel::linear ? "linear" : "quadratic"; }

FitModel parse_fit_model(std::string_view name) {
  if (name == "linear") return FitModel::linear;
  if (name == "quadratic") return FitModel::quadratic;
  throw InvalidArgument("fit: unknown model '" + std::string(name) + "'");
}

FitResult fit(std::span<const DurationPoint> points, FitModel model) {
  const int p = model == FitModel::linear ? 2 : 3;
  const int n = static_cast<int>(points.size());
  if (n < p + 1) throw InvalidArgument("fit: not enough points for the model");

  std::vector<double> ds;
  for (const auto& pt : points) {
    if (!std::isfinite(pt.d) || !std::isfinite(pt.T)) throw InvalidArgument("fit: non-finite data");
    ds.push_back(pt.d);
  }
  std::sort(ds.begin(), ds.end());
  if (std::adjacent_find(ds.begin(), ds.end()) != ds.end()) throw InvalidArgument("fit: duplicate d values");

  // Columns ordered by descending power: [d^2,] d, 1.
  RMatrix x(n, p);
  RVector y(n);
  for (int i = 0; i < n; ++i) {
    const double d = points[i].d;
    if (p == 3) x(i, 0) = d * d;
    x(i, p - 2) = d;
    x(i, p - 1) = 1.0;
    y[i] = points[i].T;
  }

  const Eigen::ColPivHouseholderQR<RMatrix> qr(x);
  if (qr.rank() < p) throw NumericError("fit: rank-deficient design matrix");
  const RVector beta = qr.solve(y);

  const RVector residual = y - x * beta;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double s2 = n > p ? ss_res / (n - p) : 0.0;
  const RMatrix cov = s2 * (x.transpose() * x).inverse();

  FitResult out;
  out.model = model;
  out.num_points = n;
  if (p == 3) {
    out.a = beta[0];
    out.se_a = std::sqrt(std::max(cov(0, 0), 0.0));
  }
  out.b = beta[p - 2];
  out.c = beta[p - 1];
  out.se_b = std::sqrt(std::max(cov(p - 2, p - 2), 0.0));
  out.se_c = std::sqrt(std::max(cov(p - 1, p - 1), 0.0));
  // Constant data: relative residual is exactly zero, call the fit
  // perfect and flag it.
  if (ss_tot <= 1e-24 * std::max(1.0, y.squaredNorm())) {
    out.degenerate = true;
    out.r_squared = 1.0;
  } else {
    out.r_squared = 1.0 - ss_res / ss_tot;
  }
  return out;
}

double evaluate_fit(const FitResult& f, double d) { return f.a * d * d + f.b * d + f.c; }

}  // namespace qudit
