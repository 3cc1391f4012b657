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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "oracles.hpp"
#include "wsnfd/error.hpp"
#include "wsnfd/pca.hpp"

using namespace wsnfd;

namespace {

Matrix random_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no wsnfd::Error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(Standardize, TwoValueColumn) {
  Matrix x(2, 1);
  x << 1, 3;
  const auto s = standardize(x);
  EXPECT_NEAR(s.z(0, 0), -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.z(1, 0), std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(s.means[0], 2.0);
  EXPECT_NEAR(s.stds[0], std::sqrt(2.0), 1e-15);
}

TEST(Standardize, ZeroMeanUnitStdAndIdempotent) {
  const auto s = standardize(random_matrix(40, 5, 1) * 7.0 + Matrix::Constant(40, 5, 3.0));
  for (Eigen::Index j = 0; j < 5; ++j) {
    const double mean = s.z.col(j).mean();
    const double sd = std::sqrt((s.z.col(j).array() - mean).square().sum() / 39.0);
    EXPECT_LE(std::abs(mean), 1e-10);
    EXPECT_LE(std::abs(sd - 1.0), 1e-10);
  }
  const auto again = standardize(s.z);
  EXPECT_LE((again.z - s.z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Standardize, Errors) {
  Matrix constant(3, 1);
  constant << 4, 4, 4;
  EXPECT_EQ(kind_of([&] { standardize(constant); }), ErrorKind::ZeroVarianceColumn);
  EXPECT_EQ(kind_of([] { standardize(Matrix::Ones(1, 2)); }), ErrorKind::TooFewRows);
}

TEST(Covariance, HandEvaluated) {
  Matrix z(2, 2);
  z << 0, 0, 2, 2;
  ColMatrix expected(2, 2);
  expected << 2, 2, 2, 2;
  EXPECT_LE((covariance(z) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(covariance(Matrix::Constant(4, 3, 1.5)), ColMatrix::Zero(3, 3));
  EXPECT_EQ(kind_of([] { covariance(Matrix::Ones(1, 2)); }), ErrorKind::TooFewRows);
}

TEST(Covariance, MatchesNaiveOracleSymmetricUnitDiagonal) {
  const Matrix x = random_matrix(30, 6, 2);
  const ColMatrix c = covariance(x);
  EXPECT_LE((c - wsnfd::testing::naive_covariance(x)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  const ColMatrix cz = covariance(standardize(x).z);
  for (Eigen::Index j = 0; j < 6; ++j) EXPECT_LE(std::abs(cz(j, j) - 1.0), 1e-10);
}

TEST(SymEigen, Diagonal) {
  ColMatrix c(2, 2);
  c << 2, 0, 0, 3;
  const auto e = sym_eigen(c);
  EXPECT_EQ(e.eigenvalues, (std::vector<double>{3.0, 2.0}));
  EXPECT_EQ(e.eigenvectors, (ColMatrix(2, 2) << 0, 1, 1, 0).finished());
}

TEST(SymEigen, TwoByTwoByHand) {
  ColMatrix c(2, 2);
  c << 2, 1, 1, 2;
  const auto e = sym_eigen(c);
  EXPECT_NEAR(e.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.eigenvectors(0, 0), r, 1e-14);
  EXPECT_NEAR(e.eigenvectors(1, 0), r, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 1)), r, 1e-14);
  EXPECT_NEAR(e.eigenvectors(0, 1), -e.eigenvectors(1, 1), 1e-14);
}

TEST(SymEigen, ReconstructsRandomSixBySix) {
  std::mt19937_64 rng(3);
  const ColMatrix c = wsnfd::testing::random_symmetric(6, rng);
  const auto e = sym_eigen(c);
  const Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(e.eigenvalues.data(), 6);
  const ColMatrix back = e.eigenvectors * lambda.asDiagonal() * e.eigenvectors.transpose();
  EXPECT_LE((back - c).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SymEigen, AgreesWithEigenSelfAdjointSolver) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 12; ++n) {
    const ColMatrix c = wsnfd::testing::random_symmetric(n, rng, 3.0);
    const auto e = sym_eigen(c);
    Eigen::SelfAdjointEigenSolver<ColMatrix> oracle(c);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(e.eigenvalues[static_cast<std::size_t>(i)], oracle.eigenvalues()(n - 1 - i), 1e-10);
      // Same eigenvector up to sign.
      const double dot = e.eigenvectors.col(i).dot(oracle.eigenvectors().col(n - 1 - i));
      EXPECT_NEAR(std::abs(dot), 1.0, 1e-8);
    }
  }
}

TEST(SymEigen, PropertiesOnRandomMatrices) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const ColMatrix c = wsnfd::testing::random_symmetric(n, rng, 10.0);
    const auto e = sym_eigen(c);
    EXPECT_TRUE(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));
    for (int i = 0; i < n; ++i) {
      const double lambda = e.eigenvalues[static_cast<std::size_t>(i)];
      const auto v = e.eigenvectors.col(i);
      EXPECT_LE((c * v - lambda * v).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, std::abs(lambda)));
      Eigen::Index arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(v(arg), 0.0);
    }
    const ColMatrix gram = e.eigenvectors.transpose() * e.eigenvectors;
    EXPECT_LE((gram - ColMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    const double sum = std::accumulate(e.eigenvalues.begin(), e.eigenvalues.end(), 0.0);
    EXPECT_NEAR(sum, c.trace(), 1e-8);
  }
}

TEST(SymEigen, Errors) {
  ColMatrix c(2, 2);
  c << 1, 2, 3, 1;
  EXPECT_EQ(kind_of([&] { sym_eigen(c); }), ErrorKind::NotSymmetric);
  std::mt19937_64 rng(6);
  JacobiOptions tight;
  tight.max_sweeps = 1;
  EXPECT_EQ(kind_of([&] { sym_eigen(wsnfd::testing::random_symmetric(8, rng), tight); }), ErrorKind::NoConvergence);
}

TEST(SelectComponents, Examples) {
  EXPECT_EQ(select_components({0.6, 0.2, 0.1, 0.05, 0.03, 0.02}, 0.9), 3u);
  EXPECT_EQ(select_components({7.0}, 0.5), 1u);
  EXPECT_EQ(select_components({7.0}, 1.0), 1u);
  EXPECT_EQ(select_components({3.0, 1.0, 0.0}, 1.0), 2u);
  EXPECT_EQ(kind_of([] { select_components({0.0, 0.0}, 0.9); }), ErrorKind::DegenerateSpectrum);
  EXPECT_EQ(kind_of([] { select_components({1.0}, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(SelectComponents, RetainedMassReachesThreshold) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> lambda(1 + trial % 12);
    for (auto& l : lambda) l = u(rng);
    std::sort(lambda.rbegin(), lambda.rend());
    const double threshold = 0.05 + 0.95 * u(rng);
    const auto k = select_components(lambda, threshold);
    const auto spectrum = normalized_spectrum(lambda);
    const double kept = std::accumulate(spectrum.begin(), spectrum.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    EXPECT_GE(kept, threshold - 1e-12);
    if (k > 1) {
      const double fewer = kept - spectrum[k - 1];
      EXPECT_LT(fewer, threshold);
    }
  }
}

TEST(NormalizedSpectrum, FloorsNegativesAndSumsToOne) {
  const auto s = normalized_spectrum({3.0, 1.0, -1e-12});
  EXPECT_DOUBLE_EQ(s[0], 0.75);
  EXPECT_DOUBLE_EQ(s[1], 0.25);
  EXPECT_EQ(s[2], 0.0);
}

TEST(FitPca, PerfectlyCorrelatedColumnsKeepOne) {
  Matrix x(5, 2);
  x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
  const auto m = fit_pca(x, 0.99);
  EXPECT_EQ(m.retained, 1u);
  EXPECT_EQ(m.projection().cols(), 1);
}

TEST(FitPca, ThresholdOneKeepsEverything) {
  const auto m = fit_pca(random_matrix(60, 12, 8), 1.0);
  EXPECT_EQ(m.retained, 12u);
}

TEST(FitPca, SensorStandInKeepsFourComponents) {
  const auto d = min_max_normalize(synthesize_sensor_dataset(4688, 42)).data;
  EXPECT_EQ(fit_pca(d.features, 0.995).retained, 4u);
}

TEST(FitPca, ModelInvariantsAndDeterminism) {
  const Matrix x = random_matrix(50, 6, 9);
  const auto a = fit_pca(x, 0.9);
  const auto b = fit_pca(x, 0.9);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(std::is_sorted(a.eigenvalues.rbegin(), a.eigenvalues.rend()));
  for (double l : a.eigenvalues) EXPECT_GE(l, -1e-10);
  EXPECT_GE(a.retained, 1u);
  EXPECT_LE(a.retained, 6u);
  const ColMatrix gram = a.eigenvectors.transpose() * a.eigenvectors;
  EXPECT_LE((gram - ColMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-8);
  const double total = std::accumulate(a.eigenvalues.begin(), a.eigenvalues.end(), 0.0);
  EXPECT_NEAR(total, covariance(standardize(x).z).trace(), 1e-8);
}

TEST(FitPca, DuplicateColumnMovesRetainedByAtMostOne) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const Matrix x = random_matrix(80, 5, seed);
    Matrix dup(80, 6);
    dup << x, x.col(static_cast<Eigen::Index>(seed % 5));
    for (double threshold : {0.8, 0.9, 0.99}) {
      const auto a = fit_pca(x, threshold);
      const auto b = fit_pca(dup, threshold);
      EXPECT_LE(std::abs(static_cast<long>(a.retained) - static_cast<long>(b.retained)), 1);
      const auto s = normalized_spectrum(b.eigenvalues);
      EXPECT_GE(std::accumulate(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(b.retained), 0.0), threshold - 1e-12);
    }
  }
}

TEST(Transform, TrainingProjectionIsDecorrelatedWithEigenvalueVariances) {
  const Matrix x = random_matrix(50, 6, 11);
  const auto m = fit_pca(x, 1.0);
  const Matrix y = transform(m, x);
  ASSERT_EQ(y.cols(), 6);
  const ColMatrix c = covariance(y);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      if (i == j) EXPECT_NEAR(c(i, i), m.eigenvalues[static_cast<std::size_t>(i)], 1e-8);
      else EXPECT_LE(std::abs(c(i, j)), 1e-8);
    }
}

TEST(Transform, MeanRowMapsToOrigin) {
  const Matrix x = random_matrix(30, 4, 12);
  const auto m = fit_pca(x, 0.9);
  Matrix mean_row(1, 4);
  for (Eigen::Index j = 0; j < 4; ++j) mean_row(0, j) = m.means[static_cast<std::size_t>(j)];
  const Matrix y = transform(m, mean_row);
  EXPECT_EQ(y.cols(), static_cast<Eigen::Index>(m.retained));
  EXPECT_LE(y.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Transform, DimensionMismatch) {
  const auto m = fit_pca(random_matrix(30, 4, 13), 0.9);
  EXPECT_EQ(kind_of([&] { transform(m, Matrix::Zero(2, 3)); }), ErrorKind::DimensionMismatch);
}
