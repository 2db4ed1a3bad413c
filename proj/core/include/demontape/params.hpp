#pragma once

#include <cmath>

namespace demontape {

/// Physical parameter set of the demon-bit machine.
///
/// Canonical storage is {sigma, omega, gamma, delta}:
///   sigma  hot-bath bias,  sigma = tanh(beta_h * dE / 2)
///   omega  cold-bath bias, omega = tanh(beta_c * dE / 2)
///   gamma  intrinsic demon rate (the cooperative base rate is 1)
///   delta  incoming bit bias, delta = p0 - p1
///
/// The alternative parametrization {epsilon, omega, gamma, delta} is accepted
/// through from_epsilon(), with epsilon = (omega - sigma) / (1 - omega*sigma).
/// Units: dE = 1, k_B = 1, entropy in nats.
///
/// sigma may be negative (equivalently epsilon > omega); such machines are
/// constructible and well-defined but flagged non-physical, since they would
/// need a negative hot-bath temperature.
class Params {
 public:
  static Params from_sigma(double sigma, double omega, double gamma, double delta);
  static Params from_epsilon(double epsilon, double omega, double gamma, double delta);

  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double delta() const { return delta_; }

  /// Thermal bias epsilon = (omega - sigma) / (1 - omega*sigma).
  [[nodiscard]] double epsilon() const { return (omega_ - sigma_) / (1.0 - omega_ * sigma_); }
  /// Incoming probability of bit value 0.
  [[nodiscard]] double p0_bit() const { return 0.5 * (1.0 + delta_); }
  /// (beta_c - beta_h) * dE = 2 atanh(epsilon).
  [[nodiscard]] double beta_delta() const { return 2.0 * std::atanh(epsilon()); }
  /// Carnot efficiency 1 - T_c/T_h = atanh(epsilon)/atanh(omega).
  [[nodiscard]] double eta_carnot() const { return std::atanh(epsilon()) / std::atanh(omega_); }
  /// True when T_h is positive and T_c < T_h (0 <= sigma < omega).
  [[nodiscard]] bool physical() const { return sigma_ >= 0.0 && sigma_ < omega_; }

  /// Same baths, different incoming bit bias.
  [[nodiscard]] Params with_delta(double delta) const {
    return from_sigma(sigma_, omega_, gamma_, delta);
  }

 private:
  Params(double sigma, double omega, double gamma, double delta)
      : sigma_(sigma), omega_(omega), gamma_(gamma), delta_(delta) {}

  double sigma_;
  double omega_;
  double gamma_;
  double delta_;
};

/// sigma = (omega - epsilon) / (1 - omega*epsilon), inverse of Params::epsilon().
double sigma_from_epsilon(double epsilon, double omega);

/// delta = 2*p0 - 1.
inline double delta_from_p0(double p0) { return 2.0 * p0 - 1.0; }

}  // namespace demontape
