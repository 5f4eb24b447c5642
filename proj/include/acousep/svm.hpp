// acousep/svm.hpp
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

#ifndef ACOUSEP_SVM_HPP_
#define ACOUSEP_SVM_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/features.hpp"
#include "acousep/rng.hpp"

namespace acousep {

// Soft-margin linear SVM.  Weights and bias live in standardized feature
// space; the scaler maps raw features into that space.  A dimension that
// was constant in training keeps scale 1 (centered, it contributes exactly
// zero and is inert); training fails only if every dimension is constant.
struct SVMModel {
  Eigen::VectorXd weights;      // standardized space
  double bias = 0.0;
  double c = 1.0;
  Eigen::VectorXd scaler_mean;
  Eigen::VectorXd scaler_scale;  // stddev, or 1 for constant dimensions
  std::vector<int> support_indices;
  std::string method;  // feature family the model was trained on

  Eigen::Index dimension() const { return weights.size(); }

  Eigen::VectorXd standardize(const Eigen::VectorXd& v) const {
    return (v - scaler_mean).cwiseQuotient(scaler_scale);
  }

  double decision_value(const Eigen::VectorXd& raw) const {
    return weights.dot(standardize(raw)) + bias;
  }
};

struct SVMPrediction {
  int label = -1;  // +1 drone, -1 non-drone
  double decision_value = 0.0;
};

namespace detail {

struct LabeledMatrix {
  Eigen::MatrixXd x;      // rows = examples
  std::vector<int> y;     // +1 / -1
  std::string method;
};

inline LabeledMatrix to_labeled_matrix(const std::vector<FeatureVector>& feats,
                                       std::string_view who) {
  if (feats.empty()) throw ParameterError(std::string(who) + ": no examples");
  const std::size_t dim = feats.front().values.size();
  const FeatureMethod method = feats.front().method;
  LabeledMatrix out;
  out.method = std::string(to_string(method));
  out.x.resize(static_cast<Eigen::Index>(feats.size()),
               static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const FeatureVector& f = feats[i];
    if (f.values.size() != dim)
      throw ParameterError(std::string(who) + ": inconsistent feature dimensions");
    if (f.method != method)
      throw ParameterError(std::string(who) + ": mixed feature methods");
    if (!f.drone_label)
      throw TrainingError(std::string(who) + ": unlabeled training example");
    for (std::size_t d = 0; d < dim; ++d)
      out.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          f.values[d];
    out.y.push_back(*f.drone_label ? +1 : -1);
  }
  return out;
}

}  // namespace detail

// Trains by solving the soft-margin dual with a linear kernel using
// pairwise (SMO-style) coordinate ascent to KKT tolerance 1e-4.  The
// partner index of each update is drawn from an internally seeded
// generator, so training is deterministic given the data order.
inline SVMModel svm_train(const std::vector<FeatureVector>& features,
                          double c = 1.0) {
  if (!(c > 0.0)) throw ParameterError("svm_train: C must be positive");
  detail::LabeledMatrix data = detail::to_labeled_matrix(features, "svm_train");
  const Eigen::Index n = data.x.rows();
  const Eigen::Index p = data.x.cols();

  int pos = 0, neg = 0;
  for (int y : data.y) (y > 0 ? pos : neg)++;
  if (pos < 2 || neg < 2)
    throw TrainingError("svm_train: need at least 2 examples per class (got " +
                        std::to_string(pos) + " drone, " + std::to_string(neg) +
                        " non-drone)");

  SVMModel model;
  model.c = c;
  model.method = data.method;
  model.scaler_mean = data.x.colwise().mean();
  model.scaler_scale.resize(p);
  int constant_dims = 0;
  for (Eigen::Index d = 0; d < p; ++d) {
    const double sd = std::sqrt(
        (data.x.col(d).array() - model.scaler_mean(d)).square().mean());
    if (sd > 0.0) {
      model.scaler_scale(d) = sd;
    } else {
      model.scaler_scale(d) = 1.0;  // centered constant dimension: inert
      ++constant_dims;
    }
  }
  if (constant_dims == p)
    throw TrainingError("svm_train: every feature dimension is constant");

  Eigen::MatrixXd xs(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    xs.row(i) = ((data.x.row(i) - model.scaler_mean.transpose()).array() /
                 model.scaler_scale.transpose().array())
                    .matrix();

  const Eigen::MatrixXd gram = xs * xs.transpose();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::Map<const Eigen::VectorXi> ymap(data.y.data(), n);
  const Eigen::VectorXd y = ymap.cast<double>();
  double b = 0.0;

  const auto decision = [&](Eigen::Index i) {
    return (alpha.array() * y.array() * gram.col(i).array()).sum() + b;
  };

  constexpr double kKktTol = 1e-4;
  constexpr int kQuietPasses = 5;
  constexpr int kMaxSweeps = 2000;
  Rng rng(0x51A9F00Dull);

  int quiet = 0;
  for (int sweep = 0; sweep < kMaxSweeps && quiet < kQuietPasses; ++sweep) {
    int changed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ei = decision(i) - y(i);
      const double ri = ei * y(i);
      if (!((ri < -kKktTol && alpha(i) < c) || (ri > kKktTol && alpha(i) > 0)))
        continue;
      Eigen::Index j = static_cast<Eigen::Index>(
          rng.uniform_index(static_cast<std::size_t>(n - 1)));
      if (j >= i) ++j;
      const double ej = decision(j) - y(j);

      const double ai_old = alpha(i), aj_old = alpha(j);
      double lo, hi;
      if (y(i) != y(j)) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(c, c + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - c);
        hi = std::min(c, ai_old + aj_old);
      }
      if (lo >= hi) continue;
      const double eta = 2.0 * gram(i, j) - gram(i, i) - gram(j, j);
      if (eta >= 0.0) continue;

      double aj = aj_old - y(j) * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::abs(aj - aj_old) < 1e-7) continue;
      const double ai = ai_old + y(i) * y(j) * (aj_old - aj);
      alpha(i) = ai;
      alpha(j) = aj;

      const double b1 = b - ei - y(i) * (ai - ai_old) * gram(i, i) -
                        y(j) * (aj - aj_old) * gram(i, j);
      const double b2 = b - ej - y(i) * (ai - ai_old) * gram(i, j) -
                        y(j) * (aj - aj_old) * gram(j, j);
      if (ai > 0.0 && ai < c) {
        b = b1;
      } else if (aj > 0.0 && aj < c) {
        b = b2;
      } else {
        b = 0.5 * (b1 + b2);
      }
      ++changed;
    }
    quiet = changed == 0 ? quiet + 1 : 0;
  }

  model.weights = xs.transpose() * (alpha.array() * y.array()).matrix();

  // Recompute the bias from the margin support vectors, which is more
  // stable than the incrementally tracked value.
  double bias_acc = 0.0;
  int bias_n = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (alpha(i) > 1e-8 && alpha(i) < c - 1e-8) {
      bias_acc += y(i) - model.weights.dot(xs.row(i));
      ++bias_n;
    }
  }
  if (bias_n > 0) {
    model.bias = bias_acc / bias_n;
  } else {
    // Degenerate but legal: every alpha at a bound.  Center the hyperplane
    // between the closest opposing projections.
    double max_neg = -std::numeric_limits<double>::infinity();
    double min_pos = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double proj = model.weights.dot(xs.row(i));
      if (y(i) > 0) min_pos = std::min(min_pos, proj);
      else max_neg = std::max(max_neg, proj);
    }
    model.bias = -0.5 * (max_neg + min_pos);
  }

  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha(i) > 1e-8) model.support_indices.push_back(static_cast<int>(i));
  return model;
}

// Label = sign of the decision value; exactly 0 classifies as non-drone
// (the documented tie convention).
inline SVMPrediction svm_predict(const SVMModel& model,
                                 const FeatureVector& v) {
  if (static_cast<Eigen::Index>(v.values.size()) != model.dimension())
    throw ParameterError("svm_predict: feature dimension " +
                         std::to_string(v.values.size()) + " != model's " +
                         std::to_string(model.dimension()));
  Eigen::Map<const Eigen::VectorXd> raw(v.values.data(),
                                        static_cast<Eigen::Index>(v.values.size()));
  SVMPrediction p;
  p.decision_value = model.decision_value(raw);
  p.label = p.decision_value > 0.0 ? +1 : -1;
  return p;
}

inline nlohmann::ordered_json svm_to_json(const SVMModel& m) {
  nlohmann::ordered_json j;
  j["type"] = "svm";
  j["method"] = m.method;
  j["c"] = m.c;
  j["weights"] = std::vector<double>(m.weights.begin(), m.weights.end());
  j["bias"] = m.bias;
  j["scaler_mean"] =
      std::vector<double>(m.scaler_mean.begin(), m.scaler_mean.end());
  j["scaler_scale"] =
      std::vector<double>(m.scaler_scale.begin(), m.scaler_scale.end());
  j["support_indices"] = m.support_indices;
  return j;
}

inline SVMModel svm_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "svm")
    throw FormatError("svm model JSON: type is not 'svm'");
  SVMModel m;
  m.method = j.value("method", "");
  m.c = j.at("c").get<double>();
  const auto w = j.at("weights").get<std::vector<double>>();
  const auto mu = j.at("scaler_mean").get<std::vector<double>>();
  const auto sc = j.at("scaler_scale").get<std::vector<double>>();
  if (w.size() != mu.size() || w.size() != sc.size() || w.empty())
    throw FormatError("svm model JSON: inconsistent vector lengths");
  m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                static_cast<Eigen::Index>(w.size()));
  m.scaler_mean = Eigen::Map<const Eigen::VectorXd>(
      mu.data(), static_cast<Eigen::Index>(mu.size()));
  m.scaler_scale = Eigen::Map<const Eigen::VectorXd>(
      sc.data(), static_cast<Eigen::Index>(sc.size()));
  for (double s : sc) {
    if (!(s > 0.0)) throw FormatError("svm model JSON: non-positive scale");
  }
  m.bias = j.at("bias").get<double>();
  if (j.contains("support_indices"))
    m.support_indices = j.at("support_indices").get<std::vector<int>>();
  return m;
}

inline void save_svm(const SVMModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << svm_to_json(m).dump(2) << '\n';
}

inline SVMModel load_svm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model file '" + path.string() +
                      "' is not valid JSON: " + e.what());
  }
  return svm_from_json(j);
}

}  // namespace acousep

#endif  // ACOUSEP_SVM_HPP_
