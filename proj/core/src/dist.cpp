#include "demontape/dist.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace demontape {

namespace {

void check_prob(double p, const char* name, double tol) {
  if (!(p >= -tol && p <= 1.0 + tol)) {
    throw std::invalid_argument(std::string(name) + " out of [0,1]: " + std::to_string(p));
  }
}

}  // namespace

void BitDist::validate(double tol) const {
  check_prob(p0, "p0", tol);
  check_prob(p1, "p1", tol);
  if (std::abs(p0 + p1 - 1.0) > tol) {
    throw std::invalid_argument("bit probabilities sum to " + std::to_string(p0 + p1));
  }
}

JointDist JointDist::product(const BitDist& bit, double demon_u) {
  return {demon_u * bit.p0, (1.0 - demon_u) * bit.p0, demon_u * bit.p1, (1.0 - demon_u) * bit.p1};
}

void JointDist::validate(double tol) const {
  check_prob(p0u, "p0u", tol);
  check_prob(p0d, "p0d", tol);
  check_prob(p1u, "p1u", tol);
  check_prob(p1d, "p1d", tol);
  if (std::abs(sum() - 1.0) > tol) {
    throw std::invalid_argument("joint probabilities sum to " + std::to_string(sum()));
  }
}

double bit_entropy(double bias) {
  const double p0 = 0.5 * (1.0 + bias);
  const double p1 = 0.5 * (1.0 - bias);
  double s = 0.0;
  if (p0 > 0.0) s -= p0 * std::log(p0);
  if (p1 > 0.0) s -= p1 * std::log(p1);
  return s;
}

double bit_kl(double bias_p, double bias_q) {
  const double p[2] = {0.5 * (1.0 + bias_p), 0.5 * (1.0 - bias_p)};
  const double q[2] = {0.5 * (1.0 + bias_q), 0.5 * (1.0 - bias_q)};
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

}  // namespace demontape
