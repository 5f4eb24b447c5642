// acousep/knn.hpp
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

#ifndef ACOUSEP_KNN_HPP_
#define ACOUSEP_KNN_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/features.hpp"
#include "acousep/svm.hpp"  // detail::to_labeled_matrix

namespace acousep {

// K-nearest-neighbor classifier under the Mahalanobis metric
// d(u, v) = (u - v)^T C^-1 (u - v), with C the covariance of the training
// vectors.  The metric makes predictions invariant to any invertible affine
// re-coordinatization applied consistently to training and query data.
struct KNNModel {
  Eigen::MatrixXd train;   // rows = training vectors
  std::vector<int> labels; // +1 drone / -1 non-drone
  Eigen::MatrixXd inv_cov;
  int k = 5;
  std::string method;

  Eigen::Index dimension() const { return train.cols(); }
};

// Squared Mahalanobis distance; tiny negative values from rounding are
// clamped to zero.
inline double mahalanobis_sq(const Eigen::MatrixXd& inv_cov,
                             const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) {
  const Eigen::VectorXd d = u - v;
  return std::max(0.0, d.dot(inv_cov * d));
}

// Stores the training set and the inverse of its covariance.  When the
// covariance is ill-conditioned (smallest eigenvalue below 1e-8 of the
// largest, which includes every case with fewer samples than dimensions), a
// ridge eps*I with eps = 1e-6 * trace / p is added first.  Only a zero
// covariance -- all training vectors identical -- is unrecoverable.
inline KNNModel knn_train(const std::vector<FeatureVector>& features,
                          int k = 5) {
  detail::LabeledMatrix data = detail::to_labeled_matrix(features, "knn_train");
  const Eigen::Index n = data.x.rows();
  const Eigen::Index p = data.x.cols();
  if (k < 1) throw ParameterError("knn_train: k must be >= 1");
  if (k % 2 == 0) throw ParameterError("knn_train: k must be odd");
  if (k > n)
    throw ParameterError("knn_train: k = " + std::to_string(k) +
                         " exceeds training count " + std::to_string(n));

  KNNModel model;
  model.k = k;
  model.method = data.method;
  model.labels = std::move(data.y);

  const Eigen::RowVectorXd mu = data.x.colwise().mean();
  const Eigen::MatrixXd centered = data.x.rowwise() - mu;
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw DegeneracyError("knn_train: covariance eigensolve failed");
  const double lam_min = eig.eigenvalues()(0);
  const double lam_max = eig.eigenvalues()(p - 1);
  // A zero covariance passes the ill-conditioning test below (0 < 0 is
  // false), so it must be rejected on its own; the ridge would be 0 anyway.
  if (!(lam_max > 0.0))
    throw DegeneracyError(
        "knn_train: covariance is zero (all training vectors identical)");
  if (lam_min < 1e-8 * lam_max) {
    const double eps = 1e-6 * cov.trace() / static_cast<double>(p);
    cov += eps * Eigen::MatrixXd::Identity(p, p);
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw DegeneracyError("knn_train: covariance singular even after ridge");
  Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  model.inv_cov = 0.5 * (inv + inv.transpose());  // exact symmetry
  model.train = std::move(data.x);
  return model;
}

// Majority vote of the k nearest training vectors.  Distance ties are
// broken by training-set index (stable ordering), and k is odd, so the
// vote itself can never tie.
inline int knn_predict(const KNNModel& model, const FeatureVector& v) {
  if (static_cast<Eigen::Index>(v.values.size()) != model.dimension())
    throw ParameterError("knn_predict: feature dimension " +
                         std::to_string(v.values.size()) + " != model's " +
                         std::to_string(model.dimension()));
  Eigen::Map<const Eigen::VectorXd> q(v.values.data(),
                                      static_cast<Eigen::Index>(v.values.size()));
  const Eigen::Index n = model.train.rows();
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    dist[static_cast<std::size_t>(i)] =
        mahalanobis_sq(model.inv_cov, model.train.row(i).transpose(), q);

  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b];
  });

  int vote = 0;
  for (int i = 0; i < model.k; ++i) vote += model.labels[idx[static_cast<std::size_t>(i)]];
  return vote > 0 ? +1 : -1;
}

inline nlohmann::ordered_json knn_to_json(const KNNModel& m) {
  nlohmann::ordered_json j;
  j["type"] = "knn";
  j["method"] = m.method;
  j["k"] = m.k;
  j["labels"] = m.labels;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.train.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index d = 0; d < m.train.cols(); ++d)
      row.push_back(m.train(i, d));
    rows.push_back(row);
  }
  j["vectors"] = rows;
  nlohmann::ordered_json ic = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.inv_cov.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < m.inv_cov.cols(); ++c)
      row.push_back(m.inv_cov(r, c));
    ic.push_back(row);
  }
  j["inv_cov"] = ic;
  return j;
}

inline KNNModel knn_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "knn")
    throw FormatError("knn model JSON: type is not 'knn'");
  KNNModel m;
  m.method = j.value("method", "");
  m.k = j.at("k").get<int>();
  m.labels = j.at("labels").get<std::vector<int>>();
  const auto& rows = j.at("vectors");
  if (!rows.is_array() || rows.empty())
    throw FormatError("knn model JSON: vectors must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(rows[0].size());
  m.train.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != p)
      throw FormatError("knn model JSON: ragged vector rows");
    for (Eigen::Index d = 0; d < p; ++d)
      m.train(i, d) = rows[i][d].get<double>();
  }
  const auto& ic = j.at("inv_cov");
  if (static_cast<Eigen::Index>(ic.size()) != p)
    throw FormatError("knn model JSON: inv_cov shape mismatch");
  m.inv_cov.resize(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    if (static_cast<Eigen::Index>(ic[r].size()) != p)
      throw FormatError("knn model JSON: inv_cov shape mismatch");
    for (Eigen::Index c = 0; c < p; ++c) m.inv_cov(r, c) = ic[r][c].get<double>();
  }
  if (static_cast<Eigen::Index>(m.labels.size()) != n)
    throw FormatError("knn model JSON: label count mismatch");
  if ((m.inv_cov - m.inv_cov.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw FormatError("knn model JSON: inv_cov is not symmetric");
  if (m.k < 1 || m.k % 2 == 0 || m.k > static_cast<int>(n))
    throw FormatError("knn model JSON: invalid k");
  return m;
}

inline void save_knn(const KNNModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << knn_to_json(m).dump(2) << '\n';
}

inline KNNModel load_knn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model file '" + path.string() +
                      "' is not valid JSON: " + e.what());
  }
  return knn_from_json(j);
}

}  // namespace acousep

#endif  // ACOUSEP_KNN_HPP_
