// Copyright 2026 The wsnfd Authors
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

// Independent reference implementations used only by tests.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace wsnfd::testing {

/// Mann-Whitney statistic: fraction of (positive, negative) pairs ordered correctly, ties count one half.
inline double pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != -1) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) good += 1.0;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / pairs;
}

/// Exhaustive search for a separating line w.x + b over a fine angular grid (2-D inputs).
inline bool linearly_separable_2d(const std::vector<std::array<double, 2>>& x, const std::vector<int>& y) {
  constexpr int kAngles = 3600;
  for (int a = 0; a < kAngles; ++a) {
    const double theta = 2.0 * M_PI * a / kAngles;
    const double w0 = std::cos(theta);
    const double w1 = std::sin(theta);
    double lo_pos = INFINITY;
    double hi_neg = -INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = w0 * x[i][0] + w1 * x[i][1];
      if (y[i] == 1) lo_pos = std::min(lo_pos, p);
      else hi_neg = std::max(hi_neg, p);
    }
    if (lo_pos > hi_neg) return true;
  }
  return false;
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return 0.5 * (a + a.transpose());
}

/// Sample covariance with divisor n-1, computed column pair by column pair.
inline Eigen::MatrixXd naive_covariance(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  const auto p = x.cols();
  Eigen::MatrixXd c(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b) {
      const double ma = x.col(a).mean();
      const double mb = x.col(b).mean();
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += (x(i, a) - ma) * (x(i, b) - mb);
      c(a, b) = s / static_cast<double>(n - 1);
    }
  return c;
}

}  // namespace wsnfd::testing
