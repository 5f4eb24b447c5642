// acousep/fft.hpp
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

#ifndef ACOUSEP_FFT_HPP_
#define ACOUSEP_FFT_HPP_

#include <bit>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "acousep/error.hpp"

namespace acousep {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey DFT, X[k] = sum_n x[n] e^{-2pi i nk/N}.
// The length must be a power of two.  Twiddles are computed on the fly from
// sin/cos, which keeps everything three-function simple and is plenty fast
// for the 2^10..2^14 transforms this library actually runs.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw ParameterError("fft: length must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  const int log2n = std::countr_zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rev = 0;
    for (int b = 0; b < log2n; ++b) rev |= ((i >> b) & 1u) << (log2n - 1 - b);
    if (i < rev) std::swap(a[i], a[rev]);
  }

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// DFT of a real signal; returns the one-sided half, bins 0..n/2 inclusive.
inline std::vector<std::complex<double>> real_fft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (!is_pow2(n)) throw ParameterError("fft: length must be a power of two");
  std::vector<std::complex<double>> a(x.begin(), x.end());
  fft_inplace(a);
  a.resize(n / 2 + 1);
  return a;
}

}  // namespace acousep

#endif  // ACOUSEP_FFT_HPP_
