// acousep/metrics.hpp
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

#ifndef ACOUSEP_METRICS_HPP_
#define ACOUSEP_METRICS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "acousep/error.hpp"
#include "acousep/stats.hpp"

namespace acousep {

// Resolves ICA's inherent row-permutation / sign / scale ambiguity: entry t
// says which estimate row matches truth row t, with the sign and
// least-squares gain that map that estimate onto the truth.
struct AlignmentMap {
  std::vector<std::size_t> permutation;  // truth row -> estimate row
  std::vector<int> signs;                // +1 / -1 per truth row
  std::vector<double> scales;            // gain per truth row
  std::vector<double> correlations;      // |Pearson| of each matched pair
};

// Greedy max-|correlation| matching: repeatedly pair the unmatched
// (truth, estimate) rows with the largest absolute Pearson correlation.
// For well-separated sources greedy and optimal assignment agree.
inline AlignmentMap align(const Eigen::MatrixXd& estimated,
                          const Eigen::MatrixXd& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols())
    throw ParameterError("align: shape mismatch");
  const Eigen::Index j = truth.rows();
  if (j < 1 || truth.cols() < 2) throw ParameterError("align: degenerate input");

  Eigen::MatrixXd corr(j, j);
  for (Eigen::Index t = 0; t < j; ++t) {
    for (Eigen::Index e = 0; e < j; ++e) {
      std::vector<double> tv(truth.row(t).begin(), truth.row(t).end());
      std::vector<double> ev(estimated.row(e).begin(), estimated.row(e).end());
      corr(t, e) = pearson(tv, ev);
    }
  }

  AlignmentMap map;
  map.permutation.assign(static_cast<std::size_t>(j), 0);
  map.signs.assign(static_cast<std::size_t>(j), +1);
  map.scales.assign(static_cast<std::size_t>(j), 1.0);
  map.correlations.assign(static_cast<std::size_t>(j), 0.0);

  Eigen::MatrixXd remaining = corr.cwiseAbs();
  for (Eigen::Index round = 0; round < j; ++round) {
    Eigen::Index bt = 0, be = 0;
    remaining.maxCoeff(&bt, &be);
    map.permutation[static_cast<std::size_t>(bt)] = static_cast<std::size_t>(be);
    map.correlations[static_cast<std::size_t>(bt)] = remaining(bt, be);
    map.signs[static_cast<std::size_t>(bt)] = corr(bt, be) >= 0.0 ? +1 : -1;
    const double yy = estimated.row(be).squaredNorm();
    const double sy = truth.row(bt).dot(estimated.row(be));
    map.scales[static_cast<std::size_t>(bt)] =
        yy > 0.0 ? map.signs[static_cast<std::size_t>(bt)] * sy / yy : 1.0;
    remaining.row(bt).setConstant(-1.0);
    remaining.col(be).setConstant(-1.0);
  }
  return map;
}

// Estimate rows reordered, sign-corrected, and gain-fitted to the truth:
// row t of the result is scale_t * sign_t * estimated[perm_t].
inline Eigen::MatrixXd apply_alignment(const AlignmentMap& map,
                                       const Eigen::MatrixXd& estimated) {
  Eigen::MatrixXd out(estimated.rows(), estimated.cols());
  for (std::size_t t = 0; t < map.permutation.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) =
        map.scales[t] * map.signs[t] *
        estimated.row(static_cast<Eigen::Index>(map.permutation[t]));
  }
  return out;
}

inline constexpr double kSirCapDb = 300.0;

// Signal-to-interference ratio in dB: 10 log10(sum s^2 / sum (s - y)^2),
// with the estimate already aligned (permutation, sign, gain).  Error
// energy below 1e-30 -- exact recovery -- reports the 300 dB cap.
inline double sir_db(std::span<const double> aligned_estimate,
                     std::span<const double> truth) {
  if (aligned_estimate.size() != truth.size())
    throw ParameterError("sir_db: length mismatch");
  if (truth.empty()) throw ParameterError("sir_db: empty input");
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sig += truth[i] * truth[i];
    const double d = truth[i] - aligned_estimate[i];
    err += d * d;
  }
  if (sig <= 0.0) throw ParameterError("sir_db: truth is all zero");
  if (err < 1e-30) return kSirCapDb;
  return std::min(kSirCapDb, 10.0 * std::log10(sig / err));
}

// Mean SIR across aligned rows.
inline double mean_sir_db(const Eigen::MatrixXd& aligned,
                          const Eigen::MatrixXd& truth) {
  if (aligned.rows() != truth.rows() || aligned.cols() != truth.cols())
    throw ParameterError("mean_sir_db: shape mismatch");
  double acc = 0.0;
  for (Eigen::Index r = 0; r < truth.rows(); ++r) {
    std::vector<double> a(aligned.row(r).begin(), aligned.row(r).end());
    std::vector<double> t(truth.row(r).begin(), truth.row(r).end());
    acc += sir_db(a, t);
  }
  return acc / static_cast<double>(truth.rows());
}

// Binary classification tally; +1 = drone is the positive class.
struct AccuracyReport {
  double percent = 0.0;
  int true_positive = 0;
  int false_positive = 0;
  int true_negative = 0;
  int false_negative = 0;

  int total() const {
    return true_positive + false_positive + true_negative + false_negative;
  }
};

inline AccuracyReport accuracy(std::span<const int> predictions,
                               std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw ParameterError("accuracy: length mismatch");
  if (predictions.empty()) throw ParameterError("accuracy: empty input");
  AccuracyReport r;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred_drone = predictions[i] > 0;
    const bool is_drone = labels[i] > 0;
    if (pred_drone && is_drone) ++r.true_positive;
    else if (pred_drone && !is_drone) ++r.false_positive;
    else if (!pred_drone && !is_drone) ++r.true_negative;
    else ++r.false_negative;
  }
  r.percent = 100.0 * (r.true_positive + r.true_negative) / r.total();
  return r;
}

}  // namespace acousep

#endif  // ACOUSEP_METRICS_HPP_
