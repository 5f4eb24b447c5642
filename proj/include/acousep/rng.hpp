// acousep/rng.hpp
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

#ifndef ACOUSEP_RNG_HPP_
#define ACOUSEP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "acousep/error.hpp"

namespace acousep {

// SplitMix64 finalizer.  Also used to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic seed for a named substream of `base`.  The name is hashed
// with FNV-1a and folded together with up to two integer coordinates (trial
// index, block index, ...).  Substreams with distinct (name, a, b) are
// statistically independent for practical purposes, and the derivation does
// not depend on how many draws the parent stream has made.
inline std::uint64_t substream_seed(std::uint64_t base, std::string_view name,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  h = mix64(h ^ base);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return h;
}

// Small deterministic generator used everywhere randomness is needed.
//
// The core is SplitMix64; uniform doubles take the top 53 bits, normals come
// from Box-Muller.  std:: distributions are deliberately avoided: their
// output is implementation-defined, and byte-identical reruns across
// compilers are part of the library's contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n).  Multiply-shift; bias is < n / 2^64.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw ParameterError("uniform_index: n must be positive");
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller.  The second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // keep log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Zero-mean Laplace with scale b, by inverse CDF.
  double laplace(double b) {
    double v = uniform();
    while (v <= 0.0) v = uniform();
    const double u = v - 0.5;
    return u < 0.0 ? b * std::log(1.0 + 2.0 * u) : -b * std::log(1.0 - 2.0 * u);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent generator for a named purpose, derived from this
  // generator's seed (not its current state, so draw order elsewhere can
  // never perturb it).
  Rng substream(std::string_view name, std::uint64_t a = 0,
                std::uint64_t b = 0) const {
    return Rng(substream_seed(seed_, name, a, b));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace acousep

#endif  // ACOUSEP_RNG_HPP_
