// acousep/mixing.hpp
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

#ifndef ACOUSEP_MIXING_HPP_
#define ACOUSEP_MIXING_HPP_

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/rng.hpp"
#include "acousep/signal.hpp"
#include "acousep/wav.hpp"

namespace acousep {

// Instantaneous (memoryless) mixing: microphone j hears sum_i a(j,i) s_i.
// The library works the determined case, so the matrix is square.
struct MixingModel {
  Eigen::MatrixXd a;

  int sources() const { return static_cast<int>(a.cols()); }
  int microphones() const { return static_cast<int>(a.rows()); }

  double condition_number() const {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0)
      return std::numeric_limits<double>::infinity();
    return sv(0) / sv(sv.size() - 1);
  }
};

// Draws a square matrix with entries uniform on [-1, 1), rejecting draws
// whose condition number exceeds `max_condition`.  Rejection keeps every
// accepted mixture honestly invertible; for n <= 8 the acceptance rate is
// high enough that the attempt cap is a formality.
inline MixingModel random_mixing_model(int n, Rng& rng,
                                       double max_condition = 100.0,
                                       int max_attempts = 1000) {
  if (n < 2) throw ParameterError("random_mixing_model: need at least 2 sources");
  if (max_condition < 1.0)
    throw ParameterError("random_mixing_model: max_condition must be >= 1");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    MixingModel m;
    m.a.resize(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m.a(r, c) = rng.uniform(-1.0, 1.0);
    if (m.condition_number() <= max_condition) return m;
  }
  throw DegeneracyError(
      "random_mixing_model: no acceptable matrix in " +
      std::to_string(max_attempts) + " attempts");
}

// A multichannel observation X = A S, optionally with the ground truth that
// produced it (the model, the stacked sources, and their class labels).
struct MixedBlock {
  Eigen::MatrixXd x;  // microphones x samples
  int sample_rate = 0;

  std::optional<MixingModel> truth_model;
  std::optional<Eigen::MatrixXd> truth_sources;  // sources x samples
  std::vector<SourceLabel> truth_labels;         // per source row

  bool has_truth() const { return truth_model.has_value(); }
};

// Mixes equal-length, equal-rate sources through the model.  The block
// keeps the exact sources and labels as ground truth.
inline MixedBlock mix(const MixingModel& model,
                      const std::vector<Signal>& sources) {
  if (sources.empty()) throw ParameterError("mix: no sources");
  if (static_cast<int>(sources.size()) != model.sources())
    throw ParameterError("mix: model expects " +
                         std::to_string(model.sources()) + " sources, got " +
                         std::to_string(sources.size()));
  const std::size_t len = sources.front().size();
  const int rate = sources.front().sample_rate;
  for (const Signal& s : sources) {
    require_valid(s, "mix");
    if (s.size() != len) throw ParameterError("mix: sources differ in length");
    if (s.sample_rate != rate)
      throw ParameterError("mix: sources differ in sample rate");
    if (!s.label) throw ParameterError("mix: unlabeled source");
  }

  MixedBlock block;
  block.sample_rate = rate;
  Eigen::MatrixXd s(sources.size(), len);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < len; ++j)
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sources[i].samples[j];
    block.truth_labels.push_back(*sources[i].label);
  }
  block.x = model.a * s;
  block.truth_model = model;
  block.truth_sources = std::move(s);
  return block;
}

// On-disk layout: the observation goes to a float32 multichannel WAV and
// the ground truth (matrix + labels) to a JSON sidecar.  Float WAV instead
// of PCM is deliberate: X = A S must survive the round trip closely enough
// that A^-1 X reconstructs the sources, which 16-bit quantization breaks.
inline void save_mixed_block(const MixedBlock& block,
                             const std::filesystem::path& wav_path,
                             const std::filesystem::path& sidecar_path) {
  store_wav_float32(wav_path, block.x, block.sample_rate);
  nlohmann::json j;
  j["sample_rate"] = block.sample_rate;
  j["microphones"] = block.x.rows();
  if (block.truth_model) {
    nlohmann::json rows = nlohmann::json::array();
    const Eigen::MatrixXd& a = block.truth_model->a;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
      rows.push_back(row);
    }
    j["mixing_matrix"] = rows;
  }
  if (!block.truth_labels.empty()) {
    nlohmann::json labels = nlohmann::json::array();
    for (SourceLabel l : block.truth_labels) labels.push_back(to_string(l));
    j["labels"] = labels;
  }
  std::ofstream out(sidecar_path, std::ios::trunc);
  if (!out)
    throw FormatError("cannot open '" + sidecar_path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

// Loads a block saved by save_mixed_block.  When the sidecar carries the
// mixing matrix, the ground-truth sources are reconstructed as A^-1 X --
// exact up to float32 storage of X, since mixing is noiseless.
inline MixedBlock load_mixed_block(
    const std::filesystem::path& wav_path,
    const std::optional<std::filesystem::path>& sidecar_path = std::nullopt) {
  WavData w = load_wav(wav_path);
  MixedBlock block;
  block.x = std::move(w.channels);
  block.sample_rate = w.sample_rate;
  if (!sidecar_path) return block;

  std::ifstream in(*sidecar_path);
  if (!in) throw FormatError("cannot open '" + sidecar_path->string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("sidecar '" + sidecar_path->string() +
                      "' is not valid JSON: " + e.what());
  }

  if (j.contains("mixing_matrix")) {
    const auto& rows = j["mixing_matrix"];
    if (!rows.is_array() || rows.empty())
      throw FormatError("sidecar mixing_matrix must be a non-empty array");
    MixingModel m;
    m.a.resize(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != rows[0].size())
        throw FormatError("sidecar mixing_matrix rows differ in length");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        m.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            rows[r][c].get<double>();
    }
    if (m.a.rows() != m.a.cols() || m.a.rows() != block.x.rows())
      throw FormatError("sidecar mixing_matrix shape does not match the WAV");
    if (m.condition_number() > 1e8)
      throw DegeneracyError("load_mixed_block: stored mixing matrix is singular");
    block.truth_sources = m.a.inverse() * block.x;
    block.truth_model = std::move(m);
  }
  if (j.contains("labels")) {
    for (const auto& l : j["labels"])
      block.truth_labels.push_back(source_label_from_string(l.get<std::string>()));
    if (block.truth_model &&
        static_cast<Eigen::Index>(block.truth_labels.size()) !=
            block.truth_model->a.cols())
      throw FormatError("sidecar labels count does not match mixing matrix");
  }
  return block;
}

}  // namespace acousep

#endif  // ACOUSEP_MIXING_HPP_
