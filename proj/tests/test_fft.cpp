// tests/test_fft.cpp
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
#include <complex>
#include <numbers>
#include <vector>

#include "acousep/fft.hpp"
#include "acousep/rng.hpp"

using namespace acousep;

namespace {
// Reference transform of {0.5,-1.25,2,0.75,-0.5,1.5,-2.25,0.25}, computed
// independently with a separate implementation.
const std::vector<std::complex<double>> kRef8 = {
    {1, 0},
    {-1.29809703885628, -2.659009742330268},
    {0.25, 0.75},
    {3.29809703885628, 5.840990257669732},
    {-1.5, 0},
    {3.29809703885628, -5.840990257669732},
    {0.25, -0.75},
    {-1.29809703885628, 2.659009742330268},
};
}  // namespace

TEST_CASE("eight-point transform matches an independent reference") {
  std::vector<std::complex<double>> a = {
      {0.5, 0.0}, {-1.25, 0.0}, {2.0, 0.0},  {0.75, 0.0},
      {-0.5, 0.0}, {1.5, 0.0},  {-2.25, 0.0}, {0.25, 0.0}};
  fft_inplace(a);
  REQUIRE(a.size() == kRef8.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].real() == Catch::Approx(kRef8[i].real()).margin(1e-12));
    REQUIRE(a[i].imag() == Catch::Approx(kRef8[i].imag()).margin(1e-12));
  }
}

TEST_CASE("real_fft returns the n/2+1 leading bins of the full transform") {
  const std::vector<double> x{0.5, -1.25, 2.0, 0.75, -0.5, 1.5, -2.25, 0.25};
  const auto r = real_fft(x);
  REQUIRE(r.size() == 5);
  for (std::size_t i = 0; i < r.size(); ++i) {
    REQUIRE(r[i].real() == Catch::Approx(kRef8[i].real()).margin(1e-12));
    REQUIRE(r[i].imag() == Catch::Approx(kRef8[i].imag()).margin(1e-12));
  }
}

TEST_CASE("impulse transforms to a flat spectrum") {
  std::vector<double> x(16, 0.0);
  x[0] = 1.0;
  const auto r = real_fft(x);
  for (const auto& v : r) {
    REQUIRE(v.real() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(v.imag() == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("cosine at bin k concentrates in bin k with weight n/2") {
  const std::size_t n = 64;
  const std::size_t k = 5;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k * i) /
                    static_cast<double>(n));
  const auto r = real_fft(x);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double expected = i == k ? static_cast<double>(n) / 2.0 : 0.0;
    REQUIRE(std::abs(r[i] - std::complex<double>(expected, 0.0)) < 1e-9);
  }
}

TEST_CASE("transform preserves energy") {
  Rng rng(11);
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;

  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = {x[i], 0.0};
  fft_inplace(a);
  double freq_energy = 0.0;
  for (const auto& v : a) freq_energy += std::norm(v);
  freq_energy /= static_cast<double>(n);
  REQUIRE(freq_energy == Catch::Approx(time_energy).epsilon(1e-12));
}

TEST_CASE("linearity") {
  Rng rng(13);
  const std::size_t n = 128;
  std::vector<std::complex<double>> a(n), b(n), sum(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = {rng.normal(), 0.0};
    b[i] = {rng.normal(), 0.0};
    sum[i] = 2.0 * a[i] + 3.0 * b[i];
  }
  auto fa = a, fb = b, fsum = sum;
  fft_inplace(fa);
  fft_inplace(fb);
  fft_inplace(fsum);
  for (std::size_t i = 0; i < n; ++i)
    REQUIRE(std::abs(fsum[i] - (2.0 * fa[i] + 3.0 * fb[i])) < 1e-9);
}

TEST_CASE("non-power-of-two lengths are rejected") {
  std::vector<std::complex<double>> a(12, {0.0, 0.0});
  REQUIRE_THROWS_AS(fft_inplace(a), ParameterError);
  const std::vector<double> x(100, 0.0);
  REQUIRE_THROWS_AS(real_fft(x), ParameterError);
  REQUIRE(is_pow2(64));
  REQUIRE_FALSE(is_pow2(0));
  REQUIRE_FALSE(is_pow2(96));
}
