// tests/test_fastica.cpp
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
#include <cstdint>
#include <vector>

#include "acousep/fastica.hpp"
#include "acousep/metrics.hpp"
#include "acousep/mixing.hpp"
#include "acousep/synth.hpp"

using namespace acousep;

namespace {

// Three strongly non-Gaussian sources mixed through a random square matrix.
MixedBlock make_block(std::uint64_t seed, std::size_t length = 8000) {
  std::vector<Signal> sources;
  std::uint64_t s = seed * 1000;
  for (SourceLabel l :
       {SourceLabel::kDrone, SourceLabel::kWind, SourceLabel::kBird}) {
    sources.push_back(synthesize(default_spec(l), length, 22050, s++));
  }
  Rng rng(seed);
  return mix(random_mixing_model(3, rng), sources);
}

}  // namespace

TEST_CASE("contrast names round-trip") {
  for (Contrast c : {Contrast::kTanh, Contrast::kGauss, Contrast::kCubic}) {
    REQUIRE(contrast_from_string(to_string(c)) == c);
  }
  REQUIRE_THROWS_AS(contrast_from_string("sigmoid"), ParameterError);
}

TEST_CASE("centering removes the row means exactly") {
  Rng rng(1);
  Eigen::MatrixXd x(3, 500);
  for (Eigen::Index r = 0; r < 3; ++r)
    for (Eigen::Index c = 0; c < 500; ++c) x(r, c) = rng.normal() + 2.0 * r;
  Eigen::VectorXd mu;
  const Eigen::MatrixXd xc = center(x, &mu);
  REQUIRE(xc.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE((x.rowwise().mean() - mu).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("whitening yields identity covariance on 100 random blocks") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int j = 2 + static_cast<int>(rng.uniform_index(4));  // 2..5 channels
    const int n = 400 + static_cast<int>(rng.uniform_index(800));
    Eigen::MatrixXd raw(j, n);
    for (Eigen::Index r = 0; r < j; ++r)
      for (Eigen::Index c = 0; c < n; ++c) raw(r, c) = rng.normal();
    // Correlate the channels through a random full-rank map plus offsets.
    Eigen::MatrixXd a(j, j);
    for (Eigen::Index r = 0; r < j; ++r)
      for (Eigen::Index c = 0; c < j; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
    a += 1.5 * Eigen::MatrixXd::Identity(j, j);
    const Eigen::MatrixXd x = a * raw;

    const Eigen::MatrixXd xc = center(x);
    const Eigen::MatrixXd v = whitening_matrix(xc);
    const Eigen::MatrixXd z = v * xc;
    const Eigen::MatrixXd cov =
        z * z.transpose() / static_cast<double>(z.cols());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(j, j);
    REQUIRE((cov - eye).norm() <= 1e-6);
  }
}

TEST_CASE("whitening rejects rank-deficient and degenerate input") {
  Eigen::MatrixXd x(3, 100);
  Rng rng(3);
  for (Eigen::Index c = 0; c < 100; ++c) {
    x(0, c) = rng.normal();
    x(1, c) = rng.normal();
    x(2, c) = 2.0 * x(0, c);  // duplicate microphone
  }
  REQUIRE_THROWS_AS(whitening_matrix(center(x)), DegeneracyError);

  REQUIRE_THROWS_AS(whitening_matrix(Eigen::MatrixXd::Zero(1, 50)),
                    ParameterError);
  REQUIRE_THROWS_AS(whitening_matrix(Eigen::MatrixXd::Zero(3, 3)),
                    ParameterError);
  REQUIRE_THROWS_AS(whitening_matrix(Eigen::MatrixXd::Zero(3, 50)),
                    DegeneracyError);
}

TEST_CASE("the unmixing rows stay orthonormal after convergence") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const MixedBlock block = make_block(seed);
    FastICAConfig cfg;
    cfg.seed = seed;
    const SeparationResult r = separate(block.x, cfg);
    REQUIRE(r.converged);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
    REQUIRE((r.w_whitened * r.w_whitened.transpose() - eye).norm() <= 1e-8);
  }
}

TEST_CASE("three synthetic sources are recovered from a random mixture") {
  const MixedBlock block = make_block(11);
  const SeparationResult r = separate(block.x);
  REQUIRE(r.converged);
  REQUIRE(r.y.rows() == 3);
  REQUIRE(r.y.cols() == block.x.cols());

  // Output rows are unit variance by construction.
  for (Eigen::Index i = 0; i < 3; ++i) {
    const Eigen::VectorXd row = r.y.row(i);
    const double var =
        (row.array() - row.mean()).square().sum() / row.size();
    REQUIRE(var == Catch::Approx(1.0).epsilon(1e-9));
  }

  const AlignmentMap map = align(r.y, *block.truth_sources);
  for (double c : map.correlations) REQUIRE(c >= 0.95);

  // unmixing reproduces y from the raw observation.
  const Eigen::MatrixXd y2 =
      r.unmixing * (block.x.colwise() - r.mean);
  REQUIRE((y2 - r.y).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((r.unmixing - r.w_whitened * r.whitener).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("all three contrasts solve the same easy problem") {
  const MixedBlock block = make_block(21);
  for (Contrast c : {Contrast::kTanh, Contrast::kGauss, Contrast::kCubic}) {
    FastICAConfig cfg;
    cfg.contrast = c;
    const SeparationResult r = separate(block.x, cfg);
    REQUIRE(r.converged);
    const AlignmentMap map = align(r.y, *block.truth_sources);
    for (double corr : map.correlations) REQUIRE(corr >= 0.90);
  }
}

TEST_CASE("separation is deterministic in config seed") {
  const MixedBlock block = make_block(31);
  FastICAConfig cfg;
  cfg.seed = 7;
  const SeparationResult a = separate(block.x, cfg);
  const SeparationResult b = separate(block.x, cfg);
  REQUIRE(a.iterations == b.iterations);
  REQUIRE((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((a.unmixing - b.unmixing).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exhausting the iteration budget is reported, not thrown") {
  const MixedBlock block = make_block(41, 2000);
  FastICAConfig cfg;
  cfg.max_iterations = 2;  // far too few
  cfg.tolerance = 1e-15;
  const SeparationResult r = separate(block.x, cfg);
  REQUIRE_FALSE(r.converged);
  REQUIRE(r.iterations == 2);
  REQUIRE(r.y.allFinite());
  // The estimate is still orthonormal in the whitened basis.
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  REQUIRE((r.w_whitened * r.w_whitened.transpose() - eye).norm() <= 1e-8);
}

TEST_CASE("config validation") {
  const MixedBlock block = make_block(51, 1000);
  FastICAConfig cfg;
  cfg.max_iterations = 0;
  REQUIRE_THROWS_AS(separate(block.x, cfg), ParameterError);
  cfg = {};
  cfg.tolerance = 0.0;
  REQUIRE_THROWS_AS(separate(block.x, cfg), ParameterError);
}

TEST_CASE("the non-Gaussianity objective separates signal from noise") {
  Rng rng(61);
  Eigen::MatrixXd gauss(1, 20000);
  for (Eigen::Index c = 0; c < gauss.cols(); ++c) gauss(0, c) = rng.normal();
  const Signal s =
      synthesize(default_spec(SourceLabel::kDrone), 20000, 22050, 61);
  Eigen::MatrixXd harm(1, 20000);
  const double sd = [&] {
    double m = 0.0, v = 0.0;
    for (double x : s.samples) m += x;
    m /= s.samples.size();
    for (double x : s.samples) v += (x - m) * (x - m);
    return std::sqrt(v / s.samples.size());
  }();
  for (Eigen::Index c = 0; c < harm.cols(); ++c)
    harm(0, c) = s.samples[static_cast<std::size_t>(c)] / sd;

  for (Contrast c : {Contrast::kTanh, Contrast::kGauss, Contrast::kCubic}) {
    const double ng = nongaussianity(gauss, c);
    const double nh = nongaussianity(harm, c);
    REQUIRE(nh > 10.0 * ng);  // the drone is far from Gaussian
    REQUIRE(ng < 1e-2);       // white noise sits near the reference point
  }
}

TEST_CASE("restarts pick a converged attempt and keep determinism") {
  const MixedBlock block = make_block(71);

  FastICAConfig cfg;
  cfg.seed = 5;
  const SeparationResult one = separate_best(block.x, cfg, 1);
  const SeparationResult plain = separate(block.x, cfg);
  REQUIRE(one.converged == plain.converged);
  REQUIRE((one.y - plain.y).cwiseAbs().maxCoeff() == 0.0);

  const SeparationResult many_a = separate_best(block.x, cfg, 4);
  const SeparationResult many_b = separate_best(block.x, cfg, 4);
  REQUIRE(many_a.converged);
  REQUIRE((many_a.y - many_b.y).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_AS(separate_best(block.x, cfg, 0), ParameterError);
}
