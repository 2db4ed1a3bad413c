#include "demontape/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace demontape {

namespace {

constexpr double kConditionLimit = 1e8;
constexpr double kNegativeClamp = -1e-13;
constexpr double kSumTol = 1e-12;

}  // namespace

Propagator::Propagator(const RateMatrix& rate) : rate_(rate) {
  const Eigen::Vector4d pi = stationary_distribution(rate).vec();
  sqrt_pi_ = pi.cwiseSqrt();
  inv_sqrt_pi_ = sqrt_pi_.cwiseInverse();

  Eigen::Matrix4d s = inv_sqrt_pi_.asDiagonal() * rate.m * sqrt_pi_.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(s);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolve failed on symmetrized generator");
  }

  for (int k = 0; k < 4; ++k) {
    spectrum_.values[static_cast<std::size_t>(k)] = solver.eigenvalues()[3 - k];
    Eigen::Vector4d v = sqrt_pi_.cwiseProduct(solver.eigenvectors().col(3 - k));
    v.normalize();
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    spectrum_.vectors.col(k) = v;
  }
  sym_vectors_ = solver.eigenvectors();

  // A generator has an exact null eigenvalue; snap the computed one so large
  // tau cannot turn its roundoff into exponential drift.
  if (std::abs(spectrum_.values[0]) < 1e-12) {
    spectrum_.values[0] = 0.0;
  }

  // cond of the eigenvector basis D*W equals cond(D) = sqrt(pi_max/pi_min).
  const double cond = std::sqrt(pi.maxCoeff() / pi.minCoeff());
  fallback_ = !(cond < kConditionLimit);
}

Eigen::Vector4d Propagator::apply_spectral(const Eigen::Vector4d& v, double tau) const {
  Eigen::Vector4d y = sym_vectors_.transpose() * inv_sqrt_pi_.cwiseProduct(v);
  for (int k = 0; k < 4; ++k) {
    // sym_vectors_ columns are ascending; spectrum_ is descending.
    y[k] *= std::exp(spectrum_.values[static_cast<std::size_t>(3 - k)] * tau);
  }
  return sqrt_pi_.cwiseProduct(sym_vectors_ * y);
}

Eigen::Vector4d Propagator::apply_expm(const Eigen::Vector4d& v, double tau) const {
  const Eigen::Matrix4d e = (rate_.m * tau).exp();
  return e * v;
}

JointDist Propagator::apply(const JointDist& p, double tau) const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be finite and >= 0");
  }
  Eigen::Vector4d out = fallback_ ? apply_expm(p.vec(), tau) : apply_spectral(p.vec(), tau);

  double sum = out.sum();
  if (std::abs(sum - 1.0) > kSumTol) {
    throw std::runtime_error("propagation lost probability mass: sum = " + std::to_string(sum));
  }
  for (int i = 0; i < 4; ++i) {
    if (out[i] < 0.0) {
      if (out[i] < kNegativeClamp) {
        throw std::runtime_error("propagation produced component " + std::to_string(out[i]));
      }
      out[i] = 0.0;
    }
  }
  out /= out.sum();
  return JointDist::from_vec(out);
}

JointDist propagate(const RateMatrix& rate, const JointDist& p0, double tau) {
  return Propagator(rate).apply(p0, tau);
}

}  // namespace demontape
