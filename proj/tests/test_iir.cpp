// tests/test_iir.cpp
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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "acousep/iir.hpp"
#include "acousep/stats.hpp"

using namespace acousep;

namespace {

constexpr double kRate = 22050.0;

double mag_at(const BiquadCascade& c, double freq_hz) {
  return std::abs(c.response(2.0 * std::numbers::pi * freq_hz / kRate));
}

// |H| reference values computed with an independent filter-design tool for
// a 4th-order (order-2 prototype) Butterworth bandpass, 707.10-1414.21 Hz
// at 22050 Hz.
struct RefPoint {
  double freq_hz;
  double mag;
};
const RefPoint kMidBand[] = {
    {100.0, 0.005170174009771365},   {300.0, 0.05489788312263764},
    {500.0, 0.2185797234769327},     {707.1, 0.7071067811865458},
    {1000.0, 0.9999999997352709},    {1414.21, 0.707106781186547},
    {2000.0, 0.2103440075118808},    {3000.0, 0.06314443566438258},
    {5000.0, 0.01509341565805791},   {8000.0, 0.002270532350785711},
    {10000.0, 0.0002305039905630429},
};

// Same design for the lowest analysis band, 22.09-44.2 Hz: poles crowd
// z = 1, a stiff numerical case.
const RefPoint kLowBand[] = {
    {5.0, 0.01350135057855406},   {22.09, 0.7071067811840615},
    {31.25, 0.9999999999956607},  {44.2, 0.7071067811864487},
    {100.0, 0.05992178570313927}, {400.0, 0.003086310909962503},
};

}  // namespace

TEST_CASE("bandpass response matches the independent reference") {
  const BiquadCascade c = butterworth_bandpass(707.10, 1414.21, kRate);
  REQUIRE(c.sections().size() == 2);
  for (const RefPoint& p : kMidBand) {
    REQUIRE(mag_at(c, p.freq_hz) ==
            Catch::Approx(p.mag).epsilon(1e-5).margin(1e-9));
  }
}

TEST_CASE("lowest band response matches the independent reference") {
  const BiquadCascade c = butterworth_bandpass(22.09, 44.2, kRate);
  for (const RefPoint& p : kLowBand) {
    REQUIRE(mag_at(c, p.freq_hz) ==
            Catch::Approx(p.mag).epsilon(1e-5).margin(1e-9));
  }
}

TEST_CASE("edges sit at -3 dB and the geometric center at unity") {
  const double lo = 707.10, hi = 1414.21;
  const BiquadCascade c = butterworth_bandpass(lo, hi, kRate);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  REQUIRE(mag_at(c, lo) == Catch::Approx(inv_sqrt2).epsilon(1e-6));
  REQUIRE(mag_at(c, hi) == Catch::Approx(inv_sqrt2).epsilon(1e-6));
  REQUIRE(mag_at(c, std::sqrt(lo * hi)) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("higher prototype order steepens the skirts") {
  const BiquadCascade c2 = butterworth_bandpass(707.10, 1414.21, kRate, 2);
  const BiquadCascade c4 = butterworth_bandpass(707.10, 1414.21, kRate, 4);
  REQUIRE(c4.sections().size() == 4);
  REQUIRE(mag_at(c4, 300.0) < mag_at(c2, 300.0));
  REQUIRE(mag_at(c4, 4000.0) < mag_at(c2, 4000.0));
  REQUIRE(mag_at(c4, std::sqrt(707.10 * 1414.21)) ==
          Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("filtering a tone applies the predicted gain") {
  const BiquadCascade c = butterworth_bandpass(707.10, 1414.21, kRate);
  const std::size_t n = 1 << 16;
  auto tone_rms_out = [&](double freq) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::sin(2.0 * std::numbers::pi * freq *
                      static_cast<double>(i) / kRate);
    const std::vector<double> y = c.filter(x);
    // Skip the transient before measuring.
    const std::vector<double> tail(y.begin() + n / 4, y.end());
    return rms(tail);
  };
  const double in_rms = 1.0 / std::sqrt(2.0);
  REQUIRE(tone_rms_out(1000.0) ==
          Catch::Approx(in_rms * mag_at(c, 1000.0)).epsilon(0.02));
  REQUIRE(tone_rms_out(8000.0) < 0.01);
}

TEST_CASE("filter output is finite and deterministic") {
  const BiquadCascade c = butterworth_bandpass(176.77, 353.55, kRate);
  std::vector<double> x(4096);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(0.01 * static_cast<double>(i)) +
           0.5 * std::cos(0.3 * static_cast<double>(i));
  const std::vector<double> y1 = c.filter(x);
  const std::vector<double> y2 = c.filter(x);
  REQUIRE(y1 == y2);
  for (double v : y1) REQUIRE(std::isfinite(v));
}

TEST_CASE("invalid designs are rejected") {
  REQUIRE_THROWS_AS(butterworth_bandpass(100.0, 50.0, kRate), ParameterError);
  REQUIRE_THROWS_AS(butterworth_bandpass(0.0, 100.0, kRate), ParameterError);
  REQUIRE_THROWS_AS(butterworth_bandpass(-5.0, 100.0, kRate), ParameterError);
  REQUIRE_THROWS_AS(butterworth_bandpass(100.0, 12000.0, kRate),
                    ParameterError);  // beyond Nyquist
  REQUIRE_THROWS_AS(butterworth_bandpass(100.0, 200.0, 0.0), ParameterError);
  REQUIRE_THROWS_AS(butterworth_bandpass(100.0, 200.0, kRate, 0),
                    ParameterError);
}
