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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wsnfd {

/// Counts with normal (+1) as the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the corresponding denominator was zero and the value defaulted to 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

MetricSet classification_metrics(const ConfusionCounts& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // scores >= threshold are predicted positive
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
  double auc = 0.0;
};

/// Sweeps every distinct score as a threshold (equal scores move together)
/// and integrates the curve with the trapezoidal rule.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> y_true);

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Mean, sample std and the Student-t confidence interval for the mean.
SummaryStats summary_stats(std::span<const double> values, double confidence = 0.95);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  std::size_t df = 0;
};

/// Paired t-test on d = a - b. All-zero differences give t = 0, p = 1.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// I_x(a, b) by Lentz's continued fraction, absolute tolerance 1e-10 or better.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double student_t_quantile(double p, double df);

/// "mean ± std" in percent with two decimals, e.g. "99.72 ± 0.15" for (0.9972, 0.0015).
std::string format_percent_mean_std(double mean, double std);

}  // namespace wsnfd
