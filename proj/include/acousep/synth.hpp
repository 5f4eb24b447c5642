// acousep/synth.hpp
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

#ifndef ACOUSEP_SYNTH_HPP_
#define ACOUSEP_SYNTH_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "acousep/error.hpp"
#include "acousep/iir.hpp"
#include "acousep/rng.hpp"
#include "acousep/signal.hpp"

namespace acousep {

// Amplitude distribution of the sparse impulses in impulsive noise classes.
enum class ImpulseShape { kGaussian, kLaplace };

// Parametric model of one acoustic source.  Two families share the struct:
//
//   * harmonic sources (drone, aeroplane, bird): fundamental_hz > 0 and
//     harmonic_count > 0.  Harmonic k has amplitude 1/k and a random phase;
//     the sum rides under a sinusoidal AM envelope and a small Gaussian
//     noise floor.
//   * noise sources (wind, rain, thunder): band_low/high_hz select a
//     Butterworth bandpass applied to either continuous Gaussian noise
//     (impulse_prob == 0) or a sparse impulse train over a weaker floor.
//
// am_rate_hz == 0 disables the envelope.  The defaults below describe a
// drone; default_spec() fills in the other classes.
struct SourceSpec {
  SourceLabel label = SourceLabel::kDrone;

  double fundamental_hz = 200.0;
  int harmonic_count = 8;
  double noise_floor = 0.01;

  double am_rate_hz = 30.0;
  double am_depth = 0.6;

  double band_low_hz = 0.0;
  double band_high_hz = 0.0;
  double impulse_prob = 0.0;
  double impulse_amp = 0.0;
  ImpulseShape impulse_shape = ImpulseShape::kGaussian;
};

// The built-in model for each class.  Fundamentals, envelope rates, and
// bands are chosen so that every class stays strongly non-Gaussian even in
// sub-second windows; that property is what makes blind separation of short
// blocks work at all.
inline SourceSpec default_spec(SourceLabel label) {
  SourceSpec s;
  s.label = label;
  switch (label) {
    case SourceLabel::kDrone:
      // defaults above
      break;
    case SourceLabel::kAeroplane:
      s.fundamental_hz = 85.0;
      s.harmonic_count = 12;
      s.am_rate_hz = 6.0;
      s.am_depth = 0.4;
      break;
    case SourceLabel::kBird:
      s.fundamental_hz = 2300.0;
      s.harmonic_count = 3;
      s.am_rate_hz = 12.0;
      s.am_depth = 0.9;
      break;
    case SourceLabel::kWind:
      s.fundamental_hz = 0.0;
      s.harmonic_count = 0;
      s.band_low_hz = 20.0;
      s.band_high_hz = 400.0;
      s.am_rate_hz = 9.0;
      s.am_depth = 0.8;
      s.noise_floor = 0.0;
      break;
    case SourceLabel::kRain:
      s.fundamental_hz = 0.0;
      s.harmonic_count = 0;
      s.band_low_hz = 800.0;
      s.band_high_hz = 8000.0;
      s.impulse_prob = 0.01;
      s.impulse_amp = 4.0;
      s.impulse_shape = ImpulseShape::kGaussian;
      s.noise_floor = 0.3;
      s.am_rate_hz = 0.0;
      s.am_depth = 0.0;
      break;
    case SourceLabel::kThunder:
      s.fundamental_hz = 0.0;
      s.harmonic_count = 0;
      s.band_low_hz = 20.0;
      s.band_high_hz = 300.0;
      s.impulse_prob = 0.005;
      s.impulse_amp = 4.0;
      s.impulse_shape = ImpulseShape::kLaplace;
      s.noise_floor = 0.2;
      s.am_rate_hz = 1.5;
      s.am_depth = 0.8;
      break;
  }
  return s;
}

namespace detail {

inline void check_spec(const SourceSpec& spec, std::size_t length,
                       int sample_rate) {
  if (length == 0) throw ParameterError("synthesize: length must be positive");
  if (sample_rate <= 0)
    throw ParameterError("synthesize: sample rate must be positive");
  if (spec.am_depth < 0.0 || spec.am_depth > 1.0)
    throw ParameterError("synthesize: am_depth must lie in [0, 1]");
  if (spec.am_rate_hz < 0.0)
    throw ParameterError("synthesize: am_rate_hz must be non-negative");
  const bool harmonic = spec.harmonic_count > 0 || spec.fundamental_hz > 0.0;
  if (harmonic) {
    if (spec.fundamental_hz <= 0.0)
      throw ParameterError("synthesize: harmonic source needs fundamental_hz > 0");
    if (spec.harmonic_count <= 0)
      throw ParameterError("synthesize: harmonic source needs harmonic_count > 0");
    if (spec.fundamental_hz >= 0.5 * sample_rate)
      throw ParameterError("synthesize: fundamental at or above Nyquist");
  } else {
    if (!(spec.band_low_hz > 0.0) || !(spec.band_high_hz > spec.band_low_hz))
      throw ParameterError("synthesize: noise source needs 0 < band_low < band_high");
    if (spec.band_high_hz >= 0.5 * sample_rate)
      throw ParameterError("synthesize: noise band reaches Nyquist");
    if (spec.impulse_prob < 0.0 || spec.impulse_prob > 1.0)
      throw ParameterError("synthesize: impulse_prob must lie in [0, 1]");
  }
}

}  // namespace detail

// Deterministic synthesis: the same (spec, length, rate, rng seed) always
// produces the same samples.  Output is peak-normalized to 1.
inline Signal synthesize(const SourceSpec& spec, std::size_t length,
                         int sample_rate, Rng& rng) {
  detail::check_spec(spec, length, sample_rate);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double dt = 1.0 / sample_rate;

  std::vector<double> x(length, 0.0);
  const bool harmonic = spec.harmonic_count > 0;

  if (harmonic) {
    // Harmonics above Nyquist would alias; they are skipped, but at least
    // the fundamental must survive (guaranteed by check_spec).
    for (int k = 1; k <= spec.harmonic_count; ++k) {
      const double fk = k * spec.fundamental_hz;
      if (fk >= 0.5 * sample_rate) break;
      const double phase = rng.uniform(0.0, kTwoPi);
      const double amp = 1.0 / k;
      const double w = kTwoPi * fk;
      for (std::size_t i = 0; i < length; ++i)
        x[i] += amp * std::sin(w * (i * dt) + phase);
    }
  } else if (spec.impulse_prob > 0.0) {
    for (std::size_t i = 0; i < length; ++i) {
      double v = 0.0;
      if (rng.uniform() < spec.impulse_prob) {
        v = spec.impulse_shape == ImpulseShape::kLaplace
                ? rng.laplace(spec.impulse_amp)
                : spec.impulse_amp * rng.normal();
      }
      x[i] = v + spec.noise_floor * rng.normal();
    }
  } else {
    for (std::size_t i = 0; i < length; ++i) x[i] = rng.normal();
  }

  if (!harmonic) {
    const BiquadCascade bp =
        butterworth_bandpass(spec.band_low_hz, spec.band_high_hz, sample_rate);
    x = bp.filter(x);
  }

  if (spec.am_rate_hz > 0.0 && spec.am_depth > 0.0) {
    const double phase = rng.uniform(0.0, kTwoPi);
    const double w = kTwoPi * spec.am_rate_hz;
    for (std::size_t i = 0; i < length; ++i)
      x[i] *= 1.0 + spec.am_depth * std::sin(w * (i * dt) + phase);
  }

  if (harmonic && spec.noise_floor > 0.0) {
    for (double& v : x) v += spec.noise_floor * rng.normal();
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0))
    throw DegeneracyError("synthesize: generated an all-zero signal");
  for (double& v : x) v /= peak;

  Signal out;
  out.samples = std::move(x);
  out.sample_rate = sample_rate;
  out.label = spec.label;
  return out;
}

inline Signal synthesize(const SourceSpec& spec, std::size_t length,
                         int sample_rate, std::uint64_t seed) {
  Rng rng(seed);
  return synthesize(spec, length, sample_rate, rng);
}

}  // namespace acousep

#endif  // ACOUSEP_SYNTH_HPP_
