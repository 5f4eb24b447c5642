// acousep/stats.hpp
//
// Copyright 2026 The acousep authors
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

#ifndef ACOUSEP_STATS_HPP_
#define ACOUSEP_STATS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "acousep/error.hpp"

namespace acousep {

// All moments in this library use the population (1/N) convention.  That
// choice is load-bearing: whitening divides by eigenvalues of the 1/N sample
// covariance, and the spectral calibration equates integrated density with
// the 1/N variance, so mixing conventions would show up as small but real
// scale errors.

inline double mean(std::span<const double> x) {
  if (x.empty()) throw ParameterError("mean: empty input");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size());
}

inline double rms(std::span<const double> x) {
  if (x.empty()) throw ParameterError("rms: empty input");
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

// Excess kurtosis: E[(x - mu)^4] / sigma^4 - 3.  Zero for a Gaussian.
inline double excess_kurtosis(std::span<const double> x) {
  const double m = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m4 /= n;
  if (m2 <= 0.0) throw DegeneracyError("excess_kurtosis: constant input");
  return m4 / (m2 * m2) - 3.0;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ParameterError("pearson: length mismatch");
  if (x.empty()) throw ParameterError("pearson: empty input");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DegeneracyError("pearson: constant input");
  return sxy / std::sqrt(sxx * syy);
}

// Ranks with ties resolved by averaging, as Spearman requires.
inline std::vector<double> ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = shared;
    i = j + 1;
  }
  return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  return pearson(rx, ry);
}

// Population covariance of the rows of `x` (rows are variables, columns are
// observations), i.e. C = (X - mean) (X - mean)^T / N.
inline Eigen::MatrixXd row_covariance(const Eigen::MatrixXd& x) {
  if (x.cols() < 1) throw ParameterError("row_covariance: no observations");
  const Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean();
  return centered * centered.transpose() / static_cast<double>(x.cols());
}

}  // namespace acousep

#endif  // ACOUSEP_STATS_HPP_
