// acousep/spectral.hpp
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

#ifndef ACOUSEP_SPECTRAL_HPP_
#define ACOUSEP_SPECTRAL_HPP_

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "acousep/error.hpp"
#include "acousep/fft.hpp"
#include "acousep/stats.hpp"

namespace acousep {

// One-sided power spectral density estimate on fft_size/2 + 1 bins.
// Calibrated so that sum(density) * bin_width_hz equals the population
// variance of the analyzed signal (see welch_psd).
struct PsdEstimate {
  std::vector<double> frequency_hz;
  std::vector<double> density;
  double bin_width_hz = 0.0;

  double integral() const {
    double acc = 0.0;
    for (double v : density) acc += v;
    return acc * bin_width_hz;
  }
};

// Largest power-of-two segment usable for a signal of `length` samples,
// capped at `preferred`.  This is the segment policy shared by the feature
// extractors: full 1024-point segments when the block allows, shrinking for
// short blocks (e.g. 512 for L = 1000).
inline std::size_t spectral_segment_for(std::size_t length,
                                        std::size_t preferred = 1024) {
  if (length < 16)
    throw ParameterError("spectral: signal shorter than 16 samples");
  std::size_t seg = 16;
  while (seg * 2 <= length && seg * 2 <= preferred) seg *= 2;
  return seg;
}

// Averaged-periodogram (Welch) PSD: the signal is demeaned, cut into
// Hann-windowed segments with the given overlap, and the squared one-sided
// spectra are averaged.
//
// The textbook estimator conserves power only approximately (window shape
// and segment overlap leave percent-level error), so the final density is
// calibrated by one global factor such that
//
//     sum(density) * bin_width  ==  population variance of the signal
//
// exactly.  That makes the estimate an honest density: its integral is the
// signal power (DC excluded by the demeaning), not an approximation of it.
// A constant signal yields the all-zero density.
inline PsdEstimate welch_psd(std::span<const double> x, int sample_rate,
                             std::size_t segment = 1024,
                             double overlap = 0.5) {
  if (sample_rate <= 0)
    throw ParameterError("welch_psd: sample rate must be positive");
  if (!is_pow2(segment))
    throw ParameterError("welch_psd: segment must be a power of two");
  if (segment > x.size())
    throw ParameterError("welch_psd: signal shorter than one segment");
  if (overlap < 0.0 || overlap >= 1.0)
    throw ParameterError("welch_psd: overlap must lie in [0, 1)");
  for (double v : x) {
    if (!std::isfinite(v)) throw DegeneracyError("welch_psd: non-finite sample");
  }

  const double mu = mean(x);
  std::vector<double> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = x[i] - mu;
  double var = 0.0;
  for (double v : xd) var += v * v;
  var /= static_cast<double>(xd.size());

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<double> window(segment);
  double wpow = 0.0;
  for (std::size_t i = 0; i < segment; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) /
                                      static_cast<double>(segment)));
    wpow += window[i] * window[i];
  }

  std::size_t hop = static_cast<std::size_t>(
      std::lround(static_cast<double>(segment) * (1.0 - overlap)));
  if (hop == 0) hop = 1;

  const std::size_t bins = segment / 2 + 1;
  std::vector<double> acc(bins, 0.0);
  std::vector<double> seg_buf(segment);
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= xd.size(); start += hop) {
    double seg_mean = 0.0;
    for (std::size_t i = 0; i < segment; ++i) seg_mean += xd[start + i];
    seg_mean /= static_cast<double>(segment);
    for (std::size_t i = 0; i < segment; ++i)
      seg_buf[i] = (xd[start + i] - seg_mean) * window[i];
    const std::vector<std::complex<double>> spec = real_fft(seg_buf);
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag2 = std::norm(spec[k]);
      // One-sided: interior bins carry their mirror's power too.
      const double fold = (k == 0 || k == segment / 2) ? 1.0 : 2.0;
      acc[k] += fold * mag2 / (static_cast<double>(sample_rate) * wpow);
    }
    ++count;
  }

  PsdEstimate out;
  out.bin_width_hz = static_cast<double>(sample_rate) / static_cast<double>(segment);
  out.frequency_hz.resize(bins);
  out.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    out.frequency_hz[k] = static_cast<double>(k) * out.bin_width_hz;
  for (std::size_t k = 0; k < bins; ++k)
    out.density[k] = acc[k] / static_cast<double>(count);

  const double integral = out.integral();
  if (var <= 0.0 || integral <= 0.0) {
    // Constant input: the zero density is the correct answer.
    std::fill(out.density.begin(), out.density.end(), 0.0);
    return out;
  }
  const double cal = var / integral;
  for (double& v : out.density) v *= cal;
  return out;
}

}  // namespace acousep

#endif  // ACOUSEP_SPECTRAL_HPP_
