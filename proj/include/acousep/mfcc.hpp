// acousep/mfcc.hpp
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

#ifndef ACOUSEP_MFCC_HPP_
#define ACOUSEP_MFCC_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "acousep/error.hpp"
#include "acousep/signal.hpp"
#include "acousep/spectral.hpp"

namespace acousep {

inline double hz_to_mel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

inline double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular mel filters on the one-sided FFT grid.  Filter m is zero
// outside [f(m-1), f(m+1)], rises linearly to 1 at f(m), and falls linearly
// back to zero; the edge frequencies are equally spaced on the mel scale
// and rounded to FFT bins.
struct MelFilterBank {
  int sample_rate = 0;
  std::size_t fft_size = 0;
  int filter_count = 0;
  std::vector<double> edge_hz;  // M + 2 values
  Eigen::MatrixXd weights;      // M x (fft_size/2 + 1)
};

inline MelFilterBank build_mel_bank(int sample_rate, std::size_t fft_size,
                                    int filter_count = 26,
                                    double f_low_hz = 20.0,
                                    double f_high_hz = 0.0) {
  if (sample_rate <= 0)
    throw ParameterError("build_mel_bank: sample rate must be positive");
  if (!is_pow2(fft_size))
    throw ParameterError("build_mel_bank: fft_size must be a power of two");
  if (f_high_hz <= 0.0) f_high_hz = 0.5 * sample_rate;
  if (!(f_low_hz >= 0.0) || !(f_low_hz < f_high_hz) ||
      f_high_hz > 0.5 * sample_rate)
    throw ParameterError("build_mel_bank: need 0 <= f_low < f_high <= rate/2");
  if (filter_count < 14)
    throw ParameterError(
        "build_mel_bank: need at least 14 filters for 13 cepstral coefficients");

  MelFilterBank bank;
  bank.sample_rate = sample_rate;
  bank.fft_size = fft_size;
  bank.filter_count = filter_count;

  const double mel_lo = hz_to_mel(f_low_hz);
  const double mel_hi = hz_to_mel(f_high_hz);
  const int m2 = filter_count + 2;
  bank.edge_hz.resize(m2);
  std::vector<long> bins(m2);
  const double bin_width = static_cast<double>(sample_rate) /
                           static_cast<double>(fft_size);
  for (int i = 0; i < m2; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * i / (m2 - 1);
    bank.edge_hz[i] = mel_to_hz(mel);
    bins[i] = std::lround(bank.edge_hz[i] / bin_width);
  }

  const auto nbins = static_cast<Eigen::Index>(fft_size / 2 + 1);
  bank.weights = Eigen::MatrixXd::Zero(filter_count, nbins);
  for (int m = 1; m <= filter_count; ++m) {
    const long a = bins[m - 1], b = bins[m], c = bins[m + 1];
    for (long k = a; k <= b && k < nbins; ++k) {
      if (k < 0) continue;
      bank.weights(m - 1, k) =
          b > a ? static_cast<double>(k - a) / static_cast<double>(b - a) : 1.0;
    }
    for (long k = b; k <= c && k < nbins; ++k) {
      if (k < 0) continue;
      bank.weights(m - 1, k) =
          c > b ? static_cast<double>(c - k) / static_cast<double>(c - b) : 1.0;
    }
  }
  return bank;
}

// Cepstral coefficients 2..13 (1-based, 12 values) of one block:
// Welch PSD over bank.fft_size-point segments -> mel energies -> natural log
// (floored at 1e-300 so truly silent bands never produce -inf; the floor
// sits far below any attainable band energy, so rescaling the input cannot
// push a live band onto it) -> DCT-II.  The
// first coefficient is excluded, which is exactly what makes the result
// invariant to positive gain: log(g^2 P) shifts every mel log-energy by the
// same constant, and a constant vector's DCT-II lives entirely in
// coefficient 1.
inline std::vector<double> mfcc(const Signal& signal,
                                const MelFilterBank& bank) {
  require_valid(signal, "mfcc");
  if (bank.sample_rate != signal.sample_rate)
    throw ParameterError("mfcc: bank was built for a different sample rate");

  const PsdEstimate psd =
      welch_psd(signal.samples, signal.sample_rate, bank.fft_size);
  Eigen::VectorXd p(static_cast<Eigen::Index>(psd.density.size()));
  for (std::size_t k = 0; k < psd.density.size(); ++k)
    p(static_cast<Eigen::Index>(k)) = psd.density[k];

  Eigen::VectorXd energies = bank.weights * p;
  const int m = bank.filter_count;
  std::vector<double> log_e(m);
  for (int i = 0; i < m; ++i)
    log_e[i] = std::log(std::max(energies(i), 1e-300));

  constexpr double kPi = 3.14159265358979323846264338328;
  std::vector<double> out(12);
  for (int j = 1; j <= 12; ++j) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      acc += log_e[i] * std::cos(j * kPi * (i + 0.5) / m);
    out[j - 1] = acc;
  }
  return out;
}

// Convenience: bank sized by the shared segment policy for this signal.
inline std::vector<double> mfcc(const Signal& signal, int filter_count = 26,
                                double f_low_hz = 20.0) {
  const std::size_t fft_size = spectral_segment_for(signal.size());
  const MelFilterBank bank =
      build_mel_bank(signal.sample_rate, fft_size, filter_count, f_low_hz);
  return mfcc(signal, bank);
}

}  // namespace acousep

#endif  // ACOUSEP_MFCC_HPP_
