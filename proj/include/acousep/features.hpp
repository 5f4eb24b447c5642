// acousep/features.hpp
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

#ifndef ACOUSEP_FEATURES_HPP_
#define ACOUSEP_FEATURES_HPP_

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/filterbank.hpp"
#include "acousep/mfcc.hpp"
#include "acousep/signal.hpp"

namespace acousep {

// The three feature families: 9 per-band mean-PSD values, 9 per-band RMS
// values, or 12 cepstral coefficients.
enum class FeatureMethod { kPsd9, kRmsPsd9, kMfcc12 };

inline constexpr std::array<FeatureMethod, 3> kAllFeatureMethods = {
    FeatureMethod::kPsd9, FeatureMethod::kRmsPsd9, FeatureMethod::kMfcc12};

inline constexpr std::string_view to_string(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::kPsd9: return "PSD9";
    case FeatureMethod::kRmsPsd9: return "RMSPSD9";
    case FeatureMethod::kMfcc12: return "MFCC12";
  }
  return "unknown";
}

inline constexpr std::size_t feature_dimension(FeatureMethod m) {
  return m == FeatureMethod::kMfcc12 ? 12 : 9;
}

// Accepts both the canonical spellings and the CLI-friendly lowercase ones.
inline FeatureMethod feature_method_from_string(std::string_view s) {
  if (s == "PSD9" || s == "psd") return FeatureMethod::kPsd9;
  if (s == "RMSPSD9" || s == "rms-psd") return FeatureMethod::kRmsPsd9;
  if (s == "MFCC12" || s == "mfcc") return FeatureMethod::kMfcc12;
  throw ParameterError("unknown feature method: '" + std::string(s) + "'");
}

// One extracted feature vector, tagged with how it was produced and, when
// ground truth is available, what produced the underlying signal.  The
// binary target can be present without a class (a row labeled merely
// non-drone); a known class always implies the binary target.
struct FeatureVector {
  std::vector<double> values;
  FeatureMethod method = FeatureMethod::kRmsPsd9;
  std::optional<SourceLabel> class_label;
  std::optional<bool> drone_label;
  std::size_t block_length = 0;

  void set_class(SourceLabel label) {
    class_label = label;
    drone_label = is_drone(label);
  }

  // Label string used in files: the class name when known, else the binary
  // tag, else "unknown".
  std::string label_text() const {
    if (class_label) return std::string(to_string(*class_label));
    if (drone_label) return *drone_label ? "drone" : "non-drone";
    return "unknown";
  }
};

inline void set_label_from_text(FeatureVector& v, std::string_view text) {
  if (text == "unknown" || text.empty()) {
    v.class_label.reset();
    v.drone_label.reset();
    return;
  }
  if (text == "non-drone") {
    v.class_label.reset();
    v.drone_label = false;
    return;
  }
  v.set_class(source_label_from_string(text));
}

// Extracts one feature vector from a signal.  Band features and cepstra all
// share the segment policy in spectral_segment_for.
inline FeatureVector extract_features(const Signal& signal,
                                      FeatureMethod method) {
  FeatureVector v;
  v.method = method;
  v.block_length = signal.size();
  if (signal.label) v.set_class(*signal.label);

  switch (method) {
    case FeatureMethod::kPsd9: {
      const BandFeatures bf = octave_band_features(signal);
      v.values.assign(bf.psd.begin(), bf.psd.end());
      break;
    }
    case FeatureMethod::kRmsPsd9: {
      const BandFeatures bf = octave_band_features(signal);
      v.values.assign(bf.rms.begin(), bf.rms.end());
      break;
    }
    case FeatureMethod::kMfcc12: {
      v.values = mfcc(signal);
      break;
    }
  }
  for (double x : v.values) {
    if (!std::isfinite(x))
      throw DegeneracyError("extract_features: non-finite feature value");
  }
  return v;
}

namespace detail {

// Shortest round-trip decimal rendering of a double, for CSV.
inline std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::from_chars(buf, buf + n, back);
  if (back == v) {
    // Try shorter forms; the shortest that round-trips wins.
    for (int prec = 1; prec <= 16; ++prec) {
      char s[32];
      const int m = std::snprintf(s, sizeof(s), "%.*g", prec, v);
      double b = 0.0;
      std::from_chars(s, s + m, b);
      if (b == v) return std::string(s, static_cast<std::size_t>(m));
    }
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace detail

// CSV layout: header, then one row per vector: method,label,block_length,
// then the values.  Doubles are written with shortest round-trip precision,
// so a read-back is bit-exact.
inline void write_features_csv(const std::filesystem::path& path,
                               const std::vector<FeatureVector>& features) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << "method,label,block_length,values...\n";
  for (const FeatureVector& v : features) {
    out << to_string(v.method) << ',' << v.label_text() << ','
        << v.block_length;
    for (double x : v.values) out << ',' << detail::format_double(x);
    out << '\n';
  }
  if (!out) throw FormatError("short write to '" + path.string() + "'");
}

inline std::vector<FeatureVector> read_features_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::vector<FeatureVector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("method,", 0) == 0) continue;  // header
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 4)
      throw FormatError("features CSV line " + std::to_string(line_no) +
                        ": expected at least 4 fields");
    FeatureVector v;
    v.method = feature_method_from_string(fields[0]);
    set_label_from_text(v, fields[1]);
    v.block_length = std::stoull(fields[2]);
    for (std::size_t i = 3; i < fields.size(); ++i) {
      double x = 0.0;
      const auto res =
          std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), x);
      if (res.ec != std::errc())
        throw FormatError("features CSV line " + std::to_string(line_no) +
                          ": bad number '" + fields[i] + "'");
      v.values.push_back(x);
    }
    if (v.values.size() != feature_dimension(v.method))
      throw FormatError("features CSV line " + std::to_string(line_no) +
                        ": wrong value count for " +
                        std::string(to_string(v.method)));
    out.push_back(std::move(v));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const FeatureVector& v) {
  nlohmann::ordered_json j;
  j["method"] = to_string(v.method);
  j["label"] = v.label_text();
  j["block_length"] = v.block_length;
  j["values"] = v.values;
  return j;
}

inline void write_features_json(const std::filesystem::path& path,
                                const std::vector<FeatureVector>& features) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const FeatureVector& v : features) arr.push_back(to_json(v));
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << arr.dump(2) << '\n';
}

inline std::vector<FeatureVector> read_features_json(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("features file '" + path.string() +
                      "' is not valid JSON: " + e.what());
  }
  if (!arr.is_array()) throw FormatError("features JSON must be an array");
  std::vector<FeatureVector> out;
  for (const auto& j : arr) {
    FeatureVector v;
    v.method = feature_method_from_string(j.at("method").get<std::string>());
    set_label_from_text(v, j.at("label").get<std::string>());
    v.block_length = j.at("block_length").get<std::size_t>();
    v.values = j.at("values").get<std::vector<double>>();
    if (v.values.size() != feature_dimension(v.method))
      throw FormatError("features JSON: wrong value count for " +
                        std::string(to_string(v.method)));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace acousep

#endif  // ACOUSEP_FEATURES_HPP_
