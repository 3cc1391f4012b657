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

#include "wsnfd/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wsnfd/error.hpp"

namespace wsnfd {

Standardized standardize(const Matrix& x) {
  const auto n = x.rows();
  if (n < 2) throw Error(ErrorKind::TooFewRows, "standardize needs at least 2 rows");
  Standardized out;
  out.z.resize(n, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const double ss = (x.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " has zero variance");
    out.z.col(j) = (x.col(j).array() - mean) / sd;
    out.means.push_back(mean);
    out.stds.push_back(sd);
  }
  return out;
}

ColMatrix covariance(const Matrix& z) {
  const auto n = z.rows();
  if (n < 2) throw Error(ErrorKind::TooFewRows, "covariance needs at least 2 rows");
  const Eigen::RowVectorXd mean = z.colwise().mean();
  const Matrix centred = z.rowwise() - mean;
  ColMatrix c = (centred.transpose() * centred) / static_cast<double>(n - 1);
  // Exact symmetry regardless of GEMM summation order.
  return 0.5 * (c + c.transpose());
}

EigenDecomposition sym_eigen(const ColMatrix& c, const JacobiOptions& options) {
  if (c.rows() != c.cols()) throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  const auto p = c.rows();
  if (p > 0 && (c - c.transpose()).cwiseAbs().maxCoeff() > options.symmetry_tolerance)
    throw Error(ErrorKind::NotSymmetric, "asymmetry exceeds tolerance");

  ColMatrix a = c;
  ColMatrix v = ColMatrix::Identity(p, p);
  const double target = options.relative_tolerance * c.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index q = 0; q < p; ++q)
      for (Eigen::Index r = q + 1; r < p; ++r) s += 2.0 * a(q, r) * a(q, r);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep >= options.max_sweeps)
      throw Error(ErrorKind::NoConvergence, "Jacobi exceeded " + std::to_string(options.max_sweeps) + " sweeps");
    ++sweep;
    for (Eigen::Index q = 0; q < p - 1; ++q) {
      for (Eigen::Index r = q + 1; r < p; ++r) {
        const double apq = a(q, r);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(q, r) (Golub & Van Loan, sym.schur2).
        const double theta = (a(r, r) - a(q, q)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;

        for (Eigen::Index k = 0; k < p; ++k) {
          const double akq = a(k, q);
          const double akr = a(k, r);
          a(k, q) = cs * akq - sn * akr;
          a(k, r) = sn * akq + cs * akr;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aqk = a(q, k);
          const double ark = a(r, k);
          a(q, k) = cs * aqk - sn * ark;
          a(r, k) = sn * aqk + cs * ark;
        }
        a(q, r) = 0.0;
        a(r, q) = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) {
          const double vkq = v(k, q);
          const double vkr = v(k, r);
          v(k, q) = cs * vkq - sn * vkr;
          v(k, r) = sn * vkq + cs * vkr;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvectors.resize(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues.push_back(a(src, src));
    Eigen::VectorXd col = v.col(src);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0.0) col = -col;
    out.eigenvectors.col(k) = col;
  }
  return out;
}

std::vector<double> normalized_spectrum(const std::vector<double>& eigenvalues) {
  std::vector<double> floored(eigenvalues.size());
  std::transform(eigenvalues.begin(), eigenvalues.end(), floored.begin(), [](double l) { return std::max(l, 0.0); });
  const double total = std::accumulate(floored.begin(), floored.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateSpectrum, "eigenvalues sum to zero");
  for (auto& l : floored) l /= total;
  return floored;
}

std::size_t select_components(const std::vector<double>& eigenvalues, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1]");
  const auto share = normalized_spectrum(eigenvalues);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < share.size(); ++k) {
    cumulative += share[k];
    // Slack of a few ulps so that threshold 1.0 is reachable despite rounding.
    if (cumulative >= threshold - 1e-12) return k + 1;
  }
  return share.size();
}

bool PcaModel::operator==(const PcaModel& other) const {
  return means == other.means && stds == other.stds && eigenvalues == other.eigenvalues &&
         eigenvectors == other.eigenvectors && retained == other.retained;
}

PcaModel fit_pca(const Matrix& x, double threshold) {
  auto standardized = standardize(x);
  const auto decomposition = sym_eigen(covariance(standardized.z));
  PcaModel model;
  model.means = std::move(standardized.means);
  model.stds = std::move(standardized.stds);
  model.eigenvalues = decomposition.eigenvalues;
  model.eigenvectors = decomposition.eigenvectors;
  model.retained = select_components(model.eigenvalues, threshold);
  return model;
}

Matrix transform(const PcaModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.feature_count())
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.feature_count()) + " columns, got " +
                                                  std::to_string(x.cols()));
  Matrix z(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    z.col(j) = (x.col(j).array() - model.means[idx]) / model.stds[idx];
  }
  return z * model.projection();
}

LabeledDataset transform(const PcaModel& model, const LabeledDataset& data) {
  LabeledDataset out;
  out.features = transform(model, data.features);
  out.labels = data.labels;
  for (std::size_t k = 0; k < model.retained; ++k) out.feature_names.push_back("PC" + std::to_string(k + 1));
  out.source = data.source + "#pca" + std::to_string(model.retained);
  return out;
}

}  // namespace wsnfd
