#include "demontape/rate_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace demontape {

RateMatrix build_rate_matrix(const Params& params) {
  const double up = params.gamma() * (1.0 + params.sigma());    // u -> d
  const double down = params.gamma() * (1.0 - params.sigma());  // d -> u
  const double coop_fast = 1.0 + params.omega();                // 1u -> 0d
  const double coop_slow = 1.0 - params.omega();                // 0d -> 1u

  RateMatrix rate;
  Eigen::Matrix4d& m = rate.m;
  m(kState0d, kState0u) = up;
  m(kState0u, kState0d) = down;
  m(kState1d, kState1u) = up;
  m(kState1u, kState1d) = down;
  m(kState0d, kState1u) = coop_fast;
  m(kState1u, kState0d) = coop_slow;
  for (int j = 0; j < 4; ++j) {
    m(j, j) = -(m.col(j).sum() - m(j, j));
  }
  return rate;
}

namespace {

// Stationary weights from the detailed-balance ratios along the path
// 0u - 0d - 1u - 1d. Exact for any positive edge rates.
Eigen::Vector4d stationary_weights(const RateMatrix& rate) {
  const Eigen::Matrix4d& m = rate.m;
  const double f01 = m(kState0d, kState0u), b01 = m(kState0u, kState0d);
  const double f12 = m(kState1u, kState0d), b12 = m(kState0d, kState1u);
  const double f23 = m(kState1d, kState1u), b23 = m(kState1u, kState1d);
  if (f01 <= 0.0 || b01 <= 0.0 || f12 <= 0.0 || b12 <= 0.0 || f23 <= 0.0 || b23 <= 0.0) {
    throw std::domain_error("disconnected transition graph: stationary distribution degenerate");
  }
  Eigen::Vector4d w;
  w[0] = 1.0;
  w[1] = w[0] * f01 / b01;
  w[2] = w[1] * f12 / b12;
  w[3] = w[2] * f23 / b23;
  return w / w.sum();
}

}  // namespace

JointDist stationary_distribution(const RateMatrix& rate) {
  return JointDist::from_vec(stationary_weights(rate));
}

Spectrum eigen_spectrum(const RateMatrix& rate) {
  const Eigen::Vector4d pi = stationary_weights(rate);
  const Eigen::Vector4d sqrt_pi = pi.cwiseSqrt();
  const Eigen::Vector4d inv_sqrt_pi = sqrt_pi.cwiseInverse();

  // S = D^-1 R D with D = diag(sqrt(pi)) is symmetric under detailed balance;
  // symmetrize explicitly to remove roundoff skew before the solve.
  Eigen::Matrix4d s = inv_sqrt_pi.asDiagonal() * rate.m * sqrt_pi.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(s);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolve failed on symmetrized generator");
  }

  Spectrum spec;
  // Eigen sorts ascending; flip to descending so values[0] is the null mode.
  for (int k = 0; k < 4; ++k) {
    spec.values[static_cast<std::size_t>(k)] = solver.eigenvalues()[3 - k];
    Eigen::Vector4d v = sqrt_pi.cwiseProduct(solver.eigenvectors().col(3 - k));
    v.normalize();
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    spec.vectors.col(k) = v;
  }
  return spec;
}

}  // namespace demontape
