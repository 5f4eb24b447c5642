// acousep/iir.hpp
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

#ifndef ACOUSEP_IIR_HPP_
#define ACOUSEP_IIR_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "acousep/error.hpp"

namespace acousep {

// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// A cascade of second-order sections applied forward-only (causal, zero
// initial state), Direct Form II transposed.
class BiquadCascade {
 public:
  BiquadCascade() = default;
  explicit BiquadCascade(std::vector<Biquad> sections)
      : sections_(std::move(sections)) {}

  const std::vector<Biquad>& sections() const { return sections_; }

  std::vector<double> filter(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    for (const Biquad& s : sections_) {
      double z1 = 0.0, z2 = 0.0;
      for (double& v : y) {
        const double in = v;
        const double out = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * out + z2;
        z2 = s.b2 * in - s.a2 * out;
        v = out;
      }
    }
    return y;
  }

  // Frequency response at normalized angular frequency w (radians/sample).
  std::complex<double> response(double w) const {
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h(1.0, 0.0);
    for (const Biquad& s : sections_) {
      h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
  }

 private:
  std::vector<Biquad> sections_;
};

namespace detail {

// Pair the 2n bandpass poles into conjugate (or real-real) pairs so each
// section has real coefficients.
inline std::vector<std::pair<std::complex<double>, std::complex<double>>>
pair_poles(std::vector<std::complex<double>> poles) {
  constexpr double kImagTol = 1e-12;
  std::vector<std::complex<double>> cplx, real;
  for (const auto& p : poles) {
    (std::abs(p.imag()) > kImagTol ? cplx : real).push_back(p);
  }
  std::vector<std::pair<std::complex<double>, std::complex<double>>> pairs;
  // Complex poles: match each upper-half pole with its nearest conjugate.
  std::vector<std::complex<double>> upper, lower;
  for (const auto& p : cplx) (p.imag() > 0 ? upper : lower).push_back(p);
  if (upper.size() != lower.size())
    throw DegeneracyError("iir: poles do not occur in conjugate pairs");
  for (const auto& u : upper) {
    auto best = std::min_element(
        lower.begin(), lower.end(), [&](const auto& a, const auto& b) {
          return std::abs(a - std::conj(u)) < std::abs(b - std::conj(u));
        });
    pairs.emplace_back(u, *best);
    lower.erase(best);
  }
  // Real poles pair up among themselves.
  if (real.size() % 2 != 0)
    throw DegeneracyError("iir: odd number of real poles");
  std::sort(real.begin(), real.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i + 1 < real.size(); i += 2)
    pairs.emplace_back(real[i], real[i + 1]);
  return pairs;
}

}  // namespace detail

// Butterworth bandpass of analog prototype order n (so 2n poles, n biquad
// sections), designed by prewarped bilinear transform:
//
//   1. prewarp the band edges,          w = 2 fs tan(pi f / fs)
//   2. analog lowpass prototype poles,  p_k = exp(i pi (2k + n + 1) / (2n))
//   3. lowpass -> bandpass,             s^2 - p bw s + w0^2 = 0
//   4. bilinear transform,              z = (2 fs + s) / (2 fs - s)
//
// The bandpass numerator contributes n zeros at z = +1 and n at z = -1; each
// section takes one of each, i.e. b = (1, 0, -1) before gain.  Every section
// is normalized to unit magnitude at the geometric center frequency.
inline BiquadCascade butterworth_bandpass(double low_hz, double high_hz,
                                          double sample_rate,
                                          int prototype_order = 2) {
  if (sample_rate <= 0.0)
    throw ParameterError("butterworth_bandpass: sample rate must be positive");
  if (!(low_hz > 0.0) || !(high_hz > low_hz))
    throw ParameterError("butterworth_bandpass: need 0 < low < high");
  if (high_hz >= 0.5 * sample_rate)
    throw ParameterError("butterworth_bandpass: high edge at or above Nyquist");
  if (prototype_order < 1)
    throw ParameterError("butterworth_bandpass: order must be >= 1");

  constexpr double kPi = 3.14159265358979323846264338328;
  const double fs2 = 2.0 * sample_rate;
  const double w1 = fs2 * std::tan(kPi * low_hz / sample_rate);
  const double w2 = fs2 * std::tan(kPi * high_hz / sample_rate);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;

  const int n = prototype_order;
  std::vector<std::complex<double>> zpoles;
  zpoles.reserve(2 * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const std::complex<double> proto =
        std::polar(1.0, kPi * (2.0 * k + n + 1.0) / (2.0 * n));
    const std::complex<double> pb = proto * bw;
    const std::complex<double> disc = std::sqrt(pb * pb - 4.0 * w0sq);
    for (const std::complex<double> s : {0.5 * (pb + disc), 0.5 * (pb - disc)}) {
      zpoles.push_back((fs2 + s) / (fs2 - s));
    }
  }

  std::vector<Biquad> sections;
  for (const auto& [p, q] : detail::pair_poles(std::move(zpoles))) {
    Biquad s;
    s.b0 = 1.0;
    s.b1 = 0.0;
    s.b2 = -1.0;  // zeros at z = +1 and z = -1
    s.a1 = -(p + q).real();
    s.a2 = (p * q).real();
    sections.push_back(s);
  }

  // Unit gain at the geometric center of the band, applied per section.
  const double wc = 2.0 * kPi * std::sqrt(low_hz * high_hz) / sample_rate;
  for (Biquad& s : sections) {
    const double g = std::abs(BiquadCascade({s}).response(wc));
    if (!(g > 0.0) || !std::isfinite(g))
      throw DegeneracyError("butterworth_bandpass: degenerate section gain");
    s.b0 /= g;
    s.b1 /= g;
    s.b2 /= g;
  }
  return BiquadCascade(std::move(sections));
}

}  // namespace acousep

#endif  // ACOUSEP_IIR_HPP_
