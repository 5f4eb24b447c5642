// acousep/filterbank.hpp
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

#ifndef ACOUSEP_FILTERBANK_HPP_
#define ACOUSEP_FILTERBANK_HPP_

#include <array>
#include <cmath>
#include <string>

#include "acousep/error.hpp"
#include "acousep/iir.hpp"
#include "acousep/signal.hpp"
#include "acousep/spectral.hpp"
#include "acousep/stats.hpp"

namespace acousep {

// One octave band: high/low = 2, center is the geometric mean.
struct OctaveBand {
  double low_hz = 0.0;
  double center_hz = 0.0;
  double high_hz = 0.0;
};

inline constexpr std::size_t kOctaveBandCount = 9;

// The nine canonical analysis bands, 31.25 Hz through 8 kHz centers.
inline const std::array<OctaveBand, kOctaveBandCount>& octave_bands() {
  static const std::array<OctaveBand, kOctaveBandCount> bands = {{
      {22.09, 31.25, 44.2},
      {44.19, 62.5, 88.38},
      {88.38, 125.0, 176.77},
      {176.77, 250.0, 353.55},
      {353.55, 500.0, 707.10},
      {707.10, 1000.0, 1414.21},
      {1414.21, 2000.0, 2828.0},
      {2828.43, 4000.0, 5656.0},
      {5656.85, 8000.0, 11313.0},
  }};
  return bands;
}

// Per-band measurements of one signal: the mean spectral density inside the
// band and the RMS of the band-filtered time samples.
struct BandFeatures {
  std::array<double, kOctaveBandCount> psd{};
  std::array<double, kOctaveBandCount> rms{};
};

namespace detail {

// Filters whose band reaches past Nyquist get their high edge clamped just
// below it; the sample rate is usable as long as every band CENTER is below
// Nyquist.  At the default 22050 Hz this affects only the top band (11313 Hz
// edge against an 11025 Hz Nyquist), whose octave character survives the
// clamp.
inline double clamped_high_edge(const OctaveBand& band, int sample_rate) {
  return std::min(band.high_hz, 0.99 * 0.5 * sample_rate);
}

inline void check_band_rate(const std::array<OctaveBand, kOctaveBandCount>& bands,
                            int sample_rate) {
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (0.5 * sample_rate <= bands[b].center_hz) {
      throw ConfigurationError(
          "octave_band_features: sample rate " + std::to_string(sample_rate) +
          " Hz cannot represent band " + std::to_string(b + 1) + " (center " +
          std::to_string(bands[b].center_hz) + " Hz)");
    }
  }
}

}  // namespace detail

// Passes the signal through each band's 4th-order Butterworth bandpass
// (forward-only) and reports, per band, the mean PSD within the band's
// frequency range and the RMS of the filtered time samples.  PSD segments
// follow spectral_segment_for (1024-point, shrinking for short blocks).
inline BandFeatures octave_band_features(
    const Signal& signal,
    const std::array<OctaveBand, kOctaveBandCount>& bands = octave_bands()) {
  require_valid(signal, "octave_band_features");
  detail::check_band_rate(bands, signal.sample_rate);
  const std::size_t segment = spectral_segment_for(signal.size());

  BandFeatures out;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const double high = detail::clamped_high_edge(bands[b], signal.sample_rate);
    const BiquadCascade filt =
        butterworth_bandpass(bands[b].low_hz, high, signal.sample_rate);
    const std::vector<double> y = filt.filter(signal.samples);

    double energy = 0.0;
    for (double v : y) energy += v * v;
    out.rms[b] = std::sqrt(energy / static_cast<double>(y.size()));

    const PsdEstimate psd = welch_psd(y, signal.sample_rate, segment);
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < psd.frequency_hz.size(); ++k) {
      if (psd.frequency_hz[k] >= bands[b].low_hz &&
          psd.frequency_hz[k] <= high) {
        acc += psd.density[k];
        ++n;
      }
    }
    if (n == 0) {
      // Frequency grid too coarse to land a bin inside the band; fall back
      // to the bin nearest the band center (possible only for very short
      // signals in the lowest bands).
      std::size_t best = 0;
      double best_d = std::abs(psd.frequency_hz[0] - bands[b].center_hz);
      for (std::size_t k = 1; k < psd.frequency_hz.size(); ++k) {
        const double d = std::abs(psd.frequency_hz[k] - bands[b].center_hz);
        if (d < best_d) {
          best = k;
          best_d = d;
        }
      }
      out.psd[b] = psd.density[best];
    } else {
      out.psd[b] = acc / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace acousep

#endif  // ACOUSEP_FILTERBANK_HPP_
