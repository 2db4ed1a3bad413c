#pragma once

#include "demontape/dist.hpp"
#include "demontape/rate_matrix.hpp"

namespace demontape {

/// Exact propagator P(tau) = exp(R*tau) P(0) for one generator.
///
/// The primary route is the spectral decomposition of the detailed-balance
/// symmetrization (exact for any tau, no step-size error). When the stationary
/// weights are extreme enough that the eigenvector basis has condition number
/// above 1e8, apply() switches to dense scaling-and-squaring instead; both
/// routes are always available for cross-checking.
class Propagator {
 public:
  explicit Propagator(const RateMatrix& rate);

  /// Propagate a distribution over tau >= 0. Components within -1e-13 of zero
  /// are clamped and the result renormalized; anything worse, or a probability
  /// sum off by more than 1e-12, throws std::runtime_error.
  [[nodiscard]] JointDist apply(const JointDist& p, double tau) const;

  /// Spectral route on a raw vector, no simplex checks.
  [[nodiscard]] Eigen::Vector4d apply_spectral(const Eigen::Vector4d& v, double tau) const;
  /// Scaling-and-squaring route on a raw vector, no simplex checks.
  [[nodiscard]] Eigen::Vector4d apply_expm(const Eigen::Vector4d& v, double tau) const;

  [[nodiscard]] const Spectrum& spectrum() const { return spectrum_; }
  [[nodiscard]] const RateMatrix& rate() const { return rate_; }
  [[nodiscard]] bool uses_expm_fallback() const { return fallback_; }

 private:
  RateMatrix rate_;
  Spectrum spectrum_;
  Eigen::Vector4d sqrt_pi_;
  Eigen::Vector4d inv_sqrt_pi_;
  Eigen::Matrix4d sym_vectors_;  // orthonormal eigenvectors of the symmetrized generator
  bool fallback_ = false;
};

/// One-shot convenience wrapper around Propagator::apply.
JointDist propagate(const RateMatrix& rate, const JointDist& p0, double tau);

}  // namespace demontape
