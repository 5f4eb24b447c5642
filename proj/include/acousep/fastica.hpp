// acousep/fastica.hpp
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

#ifndef ACOUSEP_FASTICA_HPP_
#define ACOUSEP_FASTICA_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <string>

#include "acousep/error.hpp"
#include "acousep/rng.hpp"

namespace acousep {

// Nonlinearity used inside the fixed-point update.  tanh is the robust
// general-purpose choice; gauss suits super-Gaussian sources; cubic is
// kurtosis-based and cheapest.
enum class Contrast { kTanh, kGauss, kCubic };

inline constexpr std::string_view to_string(Contrast c) {
  switch (c) {
    case Contrast::kTanh: return "tanh";
    case Contrast::kGauss: return "gauss";
    case Contrast::kCubic: return "cubic";
  }
  return "unknown";
}

inline Contrast contrast_from_string(std::string_view s) {
  if (s == "tanh") return Contrast::kTanh;
  if (s == "gauss") return Contrast::kGauss;
  if (s == "cubic") return Contrast::kCubic;
  throw ParameterError("unknown contrast: '" + std::string(s) + "'");
}

// g and g' for one value; the batch path below vectorizes the same formulas.
inline double contrast_g(Contrast c, double u) {
  switch (c) {
    case Contrast::kTanh: return std::tanh(u);
    case Contrast::kGauss: return u * std::exp(-0.5 * u * u);
    case Contrast::kCubic: return u * u * u;
  }
  return 0.0;
}

inline double contrast_gprime(Contrast c, double u) {
  switch (c) {
    case Contrast::kTanh: {
      const double t = std::tanh(u);
      return 1.0 - t * t;
    }
    case Contrast::kGauss: {
      return (1.0 - u * u) * std::exp(-0.5 * u * u);
    }
    case Contrast::kCubic: return 3.0 * u * u;
  }
  return 0.0;
}

struct FastICAConfig {
  Contrast contrast = Contrast::kTanh;
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;  // initial unmixing guess
};

// Everything separate() learns.  y = unmixing * (x - mean column-wise);
// unmixing = w_whitened * whitener, with w_whitened orthogonal, so the rows
// of y come out with unit (population) variance.
struct SeparationResult {
  Eigen::MatrixXd y;
  Eigen::MatrixXd w_whitened;
  Eigen::MatrixXd whitener;
  Eigen::MatrixXd unmixing;
  Eigen::VectorXd mean;
  int iterations = 0;
  bool converged = false;
};

// Removes the per-channel mean.  Rows are channels.
inline Eigen::MatrixXd center(const Eigen::MatrixXd& x,
                              Eigen::VectorXd* mean_out = nullptr) {
  if (x.cols() < 1) throw ParameterError("center: no samples");
  const Eigen::VectorXd mu = x.rowwise().mean();
  if (mean_out) *mean_out = mu;
  return x.colwise() - mu;
}

// Whitening transform V = L^(-1/2) E^T from the eigendecomposition of the
// 1/N sample covariance of the (already centered) input.  V x has identity
// covariance.  Rank deficiency -- an eigenvalue below 1e-12 of the largest
// -- is a hard error: it means two microphones heard the same thing and no
// square unmixing exists.
inline Eigen::MatrixXd whitening_matrix(const Eigen::MatrixXd& centered) {
  const Eigen::Index j = centered.rows();
  const Eigen::Index l = centered.cols();
  if (j < 2) throw ParameterError("whiten: need at least two channels");
  if (l <= j) throw ParameterError("whiten: need more samples than channels");
  const Eigen::MatrixXd cov =
      centered * centered.transpose() / static_cast<double>(l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw DegeneracyError("whiten: eigendecomposition failed");
  const Eigen::VectorXd lam = eig.eigenvalues();
  const double lam_max = lam(j - 1);
  if (!(lam_max > 0.0)) throw DegeneracyError("whiten: zero covariance");
  for (Eigen::Index i = 0; i < j; ++i) {
    if (lam(i) < 1e-12 * lam_max)
      throw DegeneracyError("whiten: covariance is rank deficient");
  }
  return lam.array().rsqrt().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

namespace detail {

// W <- (W W^T)^(-1/2) W, the symmetric decorrelation that keeps all rows
// orthonormal after each batch update.
inline Eigen::MatrixXd symmetric_decorrelate(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w * w.transpose());
  if (eig.info() != Eigen::Success)
    throw DegeneracyError("fastica: decorrelation eigensolve failed");
  const Eigen::VectorXd lam = eig.eigenvalues();
  if (!(lam(0) > 0.0))
    throw DegeneracyError("fastica: unmixing estimate lost rank");
  return eig.eigenvectors() *
         lam.array().rsqrt().matrix().asDiagonal() *
         eig.eigenvectors().transpose() * w;
}

}  // namespace detail

// Symmetric fixed-point ICA on the whitened data Z (all components estimated
// in parallel):
//
//   W+ = E[g(W Z) Z^T] - diag(E[g'(W Z)]) W,   then decorrelate W+.
//
// Convergence is declared when every row direction is stable:
// max_i | 1 - |<w+_i, w_i>| | < tolerance.  A run that exhausts
// max_iterations returns converged == false rather than throwing; the
// estimate is still usable, just not trusted.
inline SeparationResult separate(const Eigen::MatrixXd& x,
                                 const FastICAConfig& cfg = {}) {
  if (cfg.max_iterations < 1)
    throw ParameterError("separate: max_iterations must be positive");
  if (!(cfg.tolerance > 0.0))
    throw ParameterError("separate: tolerance must be positive");
  if (!x.allFinite()) throw DegeneracyError("separate: non-finite input");

  SeparationResult r;
  const Eigen::MatrixXd xc = center(x, &r.mean);
  r.whitener = whitening_matrix(xc);
  const Eigen::MatrixXd z = r.whitener * xc;
  const Eigen::Index j = z.rows();
  const auto l = static_cast<double>(z.cols());

  Rng rng(cfg.seed);
  Eigen::MatrixXd w(j, j);
  for (Eigen::Index a = 0; a < j; ++a)
    for (Eigen::Index b = 0; b < j; ++b) w(a, b) = rng.normal();
  w = detail::symmetric_decorrelate(w);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const Eigen::MatrixXd u = w * z;
    Eigen::MatrixXd g(j, u.cols());
    Eigen::VectorXd gp_mean(j);
    switch (cfg.contrast) {
      case Contrast::kTanh: {
        g = u.array().tanh();
        gp_mean = (1.0 - g.array().square()).rowwise().mean();
        break;
      }
      case Contrast::kGauss: {
        const Eigen::ArrayXXd e = (-0.5 * u.array().square()).exp();
        g = (u.array() * e).matrix();
        gp_mean = ((1.0 - u.array().square()) * e).rowwise().mean();
        break;
      }
      case Contrast::kCubic: {
        g = u.array().cube();
        gp_mean = (3.0 * u.array().square()).rowwise().mean();
        break;
      }
    }
    const Eigen::MatrixXd w_next = detail::symmetric_decorrelate(
        (g * z.transpose()) / l - gp_mean.asDiagonal() * w);

    // Direction change per row, invariant to the sign flips the fixed point
    // is free to make.
    const double delta =
        (1.0 - (w_next.array() * w.array()).rowwise().sum().abs())
            .abs()
            .maxCoeff();
    w = w_next;
    r.iterations = it;
    if (delta < cfg.tolerance) {
      r.converged = true;
      break;
    }
  }

  r.w_whitened = w;
  r.unmixing = w * r.whitener;
  r.y = w * z;
  return r;
}

// G, the primitive of g, used to score solutions by non-Gaussianity.
inline double contrast_big_g(Contrast c, double u) {
  switch (c) {
    case Contrast::kTanh: return std::log(std::cosh(u));
    case Contrast::kGauss: return -std::exp(-0.5 * u * u);
    case Contrast::kCubic: return 0.25 * u * u * u * u;
  }
  return 0.0;
}

// E[G(nu)] for standard normal nu; log cosh has no closed form and is
// tabulated from quadrature.
inline double gaussian_contrast_reference(Contrast c) {
  switch (c) {
    case Contrast::kTanh: return 0.3745672074914380;
    case Contrast::kGauss: return -0.7071067811865476;
    case Contrast::kCubic: return 0.75;
  }
  return 0.0;
}

// Total non-Gaussianity of the separated rows,
// sum_i (E[G(y_i)] - E[G(nu)])^2.  Rows must be unit variance (they are,
// coming from separate()).  Higher means the projections are further from
// Gaussian, i.e. a better ICA solution.
inline double nongaussianity(const Eigen::MatrixXd& y, Contrast c) {
  if (y.cols() < 1) throw ParameterError("nongaussianity: no samples");
  const double ref = gaussian_contrast_reference(c);
  double total = 0.0;
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    double e = 0.0;
    for (Eigen::Index i = 0; i < y.cols(); ++i)
      e += contrast_big_g(c, y(r, i));
    e /= static_cast<double>(y.cols());
    total += (e - ref) * (e - ref);
  }
  return total;
}

// Symmetric FastICA can converge to different fixed points from different
// initial guesses.  Runs `restarts` independently seeded attempts and keeps
// the converged one with the highest non-Gaussianity -- a standard restart
// scheme that needs no ground truth.  The objective only ranks CONVERGED
// solutions: a non-converged run is an oscillation snapshot whose score is
// noise, so when nothing converges the first attempt is returned as-is.
// The first attempt uses cfg.seed itself, so
// separate_best(x, cfg, 1) == separate(x, cfg).
inline SeparationResult separate_best(const Eigen::MatrixXd& x,
                                      const FastICAConfig& cfg = {},
                                      int restarts = 3) {
  if (restarts < 1)
    throw ParameterError("separate_best: restarts must be positive");
  SeparationResult best;
  double best_obj = -1.0;
  bool have_any = false;
  for (int r = 0; r < restarts; ++r) {
    FastICAConfig attempt = cfg;
    if (r > 0)
      attempt.seed = substream_seed(cfg.seed, "restart",
                                    static_cast<std::uint64_t>(r));
    SeparationResult res = separate(x, attempt);
    if (!have_any) {
      best = res;
      have_any = true;
      if (res.converged) best_obj = nongaussianity(res.y, cfg.contrast);
      continue;
    }
    if (!res.converged) continue;
    const double obj = nongaussianity(res.y, cfg.contrast);
    if (!best.converged || obj > best_obj) {
      best = std::move(res);
      best_obj = obj;
    }
  }
  return best;
}

}  // namespace acousep

#endif  // ACOUSEP_FASTICA_HPP_
