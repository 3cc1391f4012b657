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
#include <vector>

#include "wsnfd/dataset.hpp"

namespace wsnfd {

using ColMatrix = Eigen::MatrixXd;

struct Standardized {
  Matrix z;
  std::vector<double> means;
  std::vector<double> stds;  // sample (n - 1) standard deviation
};

/// Centres each column and divides by its sample standard deviation.
Standardized standardize(const Matrix& x);

/// Sample covariance with divisor n - 1.
ColMatrix covariance(const Matrix& z);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ColMatrix eigenvectors;           // one orthonormal column per eigenvalue
  int sweeps = 0;
};

struct JacobiOptions {
  double symmetry_tolerance = 1e-10;
  double relative_tolerance = 1e-12;  // off-diagonal Frobenius mass relative to ||C||_F
  int max_sweeps = 100;
};

/// Cyclic Jacobi rotations. Eigenpairs come back sorted by eigenvalue
/// (descending, stable) with each eigenvector's largest-magnitude entry positive.
EigenDecomposition sym_eigen(const ColMatrix& c, const JacobiOptions& options = {});

/// Smallest k whose cumulative share of the (floored) eigenvalue total reaches `threshold`.
std::size_t select_components(const std::vector<double>& eigenvalues, double threshold);

/// Eigenvalues divided by their total, negatives floored at zero.
std::vector<double> normalized_spectrum(const std::vector<double>& eigenvalues);

struct PcaModel {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<double> eigenvalues;
  ColMatrix eigenvectors;
  std::size_t retained = 0;

  std::size_t feature_count() const noexcept { return means.size(); }
  /// First `retained` eigenvector columns.
  ColMatrix projection() const { return eigenvectors.leftCols(static_cast<Eigen::Index>(retained)); }

  bool operator==(const PcaModel& other) const;
};

PcaModel fit_pca(const Matrix& x, double threshold = 0.995);

/// Standardizes with the stored statistics and projects onto the retained components.
Matrix transform(const PcaModel& model, const Matrix& x);

LabeledDataset transform(const PcaModel& model, const LabeledDataset& data);

}  // namespace wsnfd
