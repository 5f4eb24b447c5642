// tests/test_spectral.cpp
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
#include <cstddef>
#include <vector>

#include "acousep/rng.hpp"
#include "acousep/spectral.hpp"
#include "acousep/stats.hpp"

using namespace acousep;

namespace {

std::vector<double> tone(double hz, std::size_t n, int rate,
                         double amp = 1.0, double phase = 0.4) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * M_PI * hz * i / rate + phase);
  return x;
}

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

TEST_CASE("density integral equals signal power for 100 random signals") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1024 + rng.uniform_index(8192);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal() + 0.3 * rng.uniform(-1.0, 1.0);
    const PsdEstimate psd = welch_psd(x, 22050);

    const double mu = mean(x);
    double var = 0.0;
    for (double v : x) var += (v - mu) * (v - mu);
    var /= static_cast<double>(n);

    REQUIRE(std::abs(psd.integral() - var) <= 1e-6 * var);
  }
}

TEST_CASE("the calibration holds for any segment and overlap") {
  Rng rng(7);
  std::vector<double> x(3000);
  for (double& v : x) v = rng.normal();
  const double mu = mean(x);
  double var = 0.0;
  for (double v : x) var += (v - mu) * (v - mu);
  var /= static_cast<double>(x.size());

  for (std::size_t seg : {256u, 512u, 1024u, 2048u}) {
    for (double ov : {0.0, 0.25, 0.5, 0.75}) {
      const PsdEstimate psd = welch_psd(x, 22050, seg, ov);
      REQUIRE(psd.integral() == Catch::Approx(var).epsilon(1e-9));
    }
  }
}

TEST_CASE("a pure tone concentrates in the nearest bin") {
  const int rate = 22050;
  const PsdEstimate psd = welch_psd(tone(1000.0, 8192, rate), rate, 1024);
  const std::size_t peak = argmax(psd.density);
  REQUIRE(std::abs(psd.frequency_hz[peak] - 1000.0) <= psd.bin_width_hz);
  // The peak region carries nearly all the power.
  double near = 0.0;
  for (std::size_t k = 0; k < psd.density.size(); ++k)
    if (std::abs(psd.frequency_hz[k] - 1000.0) < 4 * psd.bin_width_hz)
      near += psd.density[k];
  double total = 0.0;
  for (double v : psd.density) total += v;
  REQUIRE(near > 0.99 * total);
}

TEST_CASE("relative tone strength is preserved") {
  const int rate = 22050;
  std::vector<double> x = tone(500.0, 8192, rate, 1.0);
  const std::vector<double> weak = tone(3000.0, 8192, rate, 0.1, 1.3);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += weak[i];
  const PsdEstimate psd = welch_psd(x, rate, 1024);

  auto bin_power = [&](double hz) {
    double acc = 0.0;
    for (std::size_t k = 0; k < psd.density.size(); ++k)
      if (std::abs(psd.frequency_hz[k] - hz) < 3 * psd.bin_width_hz)
        acc += psd.density[k];
    return acc * psd.bin_width_hz;
  };
  // Powers A^2/2: 0.5 and 0.005 -- a factor of 100.
  REQUIRE(bin_power(500.0) / bin_power(3000.0) ==
          Catch::Approx(100.0).epsilon(0.05));
}

TEST_CASE("frequency axis and bin width follow the sample rate") {
  const PsdEstimate psd = welch_psd(tone(440.0, 4096, 48000), 48000, 1024);
  REQUIRE(psd.bin_width_hz == Catch::Approx(48000.0 / 1024.0));
  REQUIRE(psd.frequency_hz.size() == 513);
  REQUIRE(psd.density.size() == 513);
  REQUIRE(psd.frequency_hz.front() == 0.0);
  REQUIRE(psd.frequency_hz.back() == Catch::Approx(24000.0));
  for (std::size_t k = 1; k < psd.frequency_hz.size(); ++k)
    REQUIRE(psd.frequency_hz[k] - psd.frequency_hz[k - 1] ==
            Catch::Approx(psd.bin_width_hz));
}

TEST_CASE("a constant signal yields the all-zero density") {
  const std::vector<double> x(2048, 3.5);
  const PsdEstimate psd = welch_psd(x, 22050, 1024);
  for (double v : psd.density) REQUIRE(v == 0.0);
  REQUIRE(psd.integral() == 0.0);
}

TEST_CASE("segment policy shrinks for short blocks") {
  REQUIRE(spectral_segment_for(16) == 16);
  REQUIRE(spectral_segment_for(1000) == 512);
  REQUIRE(spectral_segment_for(1024) == 1024);
  REQUIRE(spectral_segment_for(4000) == 1024);
  REQUIRE(spectral_segment_for(10000) == 1024);
  REQUIRE(spectral_segment_for(100000, 4096) == 4096);
  REQUIRE_THROWS_AS(spectral_segment_for(15), ParameterError);
}

TEST_CASE("invalid arguments are rejected") {
  const std::vector<double> x(2048, 0.0);
  REQUIRE_THROWS_AS(welch_psd(x, 0), ParameterError);
  REQUIRE_THROWS_AS(welch_psd(x, 22050, 1000), ParameterError);   // not pow2
  REQUIRE_THROWS_AS(welch_psd(x, 22050, 4096), ParameterError);   // too long
  REQUIRE_THROWS_AS(welch_psd(x, 22050, 1024, 1.0), ParameterError);
  REQUIRE_THROWS_AS(welch_psd(x, 22050, 1024, -0.1), ParameterError);

  std::vector<double> bad(2048, 0.0);
  bad[100] = std::nan("");
  REQUIRE_THROWS_AS(welch_psd(bad, 22050), DegeneracyError);
}
