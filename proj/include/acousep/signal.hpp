// acousep/signal.hpp
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

#ifndef ACOUSEP_SIGNAL_HPP_
#define ACOUSEP_SIGNAL_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acousep/error.hpp"

namespace acousep {

// The acoustic source classes the toolkit knows how to synthesize and
// classify.  Classification itself is binary: drone against everything else.
enum class SourceLabel {
  kDrone,
  kAeroplane,
  kBird,
  kWind,
  kRain,
  kThunder,
};

inline constexpr std::array<SourceLabel, 6> kAllSourceLabels = {
    SourceLabel::kDrone, SourceLabel::kAeroplane, SourceLabel::kBird,
    SourceLabel::kWind,  SourceLabel::kRain,      SourceLabel::kThunder,
};

inline constexpr bool is_drone(SourceLabel label) {
  return label == SourceLabel::kDrone;
}

inline constexpr std::string_view to_string(SourceLabel label) {
  switch (label) {
    case SourceLabel::kDrone: return "drone";
    case SourceLabel::kAeroplane: return "aeroplane";
    case SourceLabel::kBird: return "bird";
    case SourceLabel::kWind: return "wind";
    case SourceLabel::kRain: return "rain";
    case SourceLabel::kThunder: return "thunder";
  }
  return "unknown";
}

inline SourceLabel source_label_from_string(std::string_view s) {
  for (SourceLabel label : kAllSourceLabels) {
    if (s == to_string(label)) return label;
  }
  throw ParameterError("unknown source label: '" + std::string(s) + "'");
}

// A mono sampled signal.  The label, when present, records which source
// class produced (or is believed to have produced) the samples.
struct Signal {
  std::vector<double> samples;
  int sample_rate = 22050;
  std::optional<SourceLabel> label;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws unless the signal is non-empty, has a positive sample rate, and
// contains only finite samples.  `context` names the caller in the message.
inline void require_valid(const Signal& s, std::string_view context) {
  if (s.sample_rate <= 0)
    throw ParameterError(std::string(context) + ": sample rate must be positive");
  if (s.samples.empty())
    throw ParameterError(std::string(context) + ": empty signal");
  for (double v : s.samples) {
    if (!std::isfinite(v))
      throw DegeneracyError(std::string(context) + ": non-finite sample");
  }
}

}  // namespace acousep

#endif  // ACOUSEP_SIGNAL_HPP_
