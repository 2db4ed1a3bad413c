#include "demontape/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace demontape {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

Params Params::from_sigma(double sigma, double omega, double gamma, double delta) {
  check_finite(sigma, "sigma");
  check_finite(omega, "omega");
  check_finite(gamma, "gamma");
  check_finite(delta, "delta");
  if (sigma <= -1.0 || sigma >= 1.0) {
    throw std::invalid_argument("sigma must lie in (-1, 1), got " + std::to_string(sigma));
  }
  if (omega <= 0.0 || omega >= 1.0) {
    throw std::invalid_argument("omega must lie in (0, 1), got " + std::to_string(omega));
  }
  if (gamma <= 0.0) {
    throw std::invalid_argument("gamma must be positive, got " + std::to_string(gamma));
  }
  if (delta < -1.0 || delta > 1.0) {
    throw std::invalid_argument("delta must lie in [-1, 1], got " + std::to_string(delta));
  }
  return {sigma, omega, gamma, delta};
}

Params Params::from_epsilon(double epsilon, double omega, double gamma, double delta) {
  check_finite(epsilon, "epsilon");
  check_finite(omega, "omega");
  if (epsilon <= -1.0 || epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in (-1, 1), got " + std::to_string(epsilon));
  }
  if (omega <= 0.0 || omega >= 1.0) {
    throw std::invalid_argument("omega must lie in (0, 1), got " + std::to_string(omega));
  }
  return from_sigma(sigma_from_epsilon(epsilon, omega), omega, gamma, delta);
}

double sigma_from_epsilon(double epsilon, double omega) {
  return (omega - epsilon) / (1.0 - omega * epsilon);
}

}  // namespace demontape
