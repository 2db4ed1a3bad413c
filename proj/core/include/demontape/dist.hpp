#pragma once

#include <Eigen/Dense>

namespace demontape {

/// Marginal distribution of one bit.
struct BitDist {
  double p0 = 0.5;
  double p1 = 0.5;

  static BitDist from_bias(double delta) { return {0.5 * (1.0 + delta), 0.5 * (1.0 - delta)}; }
  [[nodiscard]] double bias() const { return p0 - p1; }

  /// Throws std::invalid_argument unless p0,p1 in [0,1] and p0+p1 = 1 within tol.
  void validate(double tol = 1e-12) const;
};

/// Joint distribution over the four demon-bit states, ordered (0u, 0d, 1u, 1d).
struct JointDist {
  double p0u = 0.25;
  double p0d = 0.25;
  double p1u = 0.25;
  double p1d = 0.25;

  /// Product state: bit marginal times demon marginal with P(demon = u) = demon_u.
  static JointDist product(const BitDist& bit, double demon_u);
  static JointDist from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

  [[nodiscard]] Eigen::Vector4d vec() const { return {p0u, p0d, p1u, p1d}; }
  [[nodiscard]] BitDist bit_marginal() const { return {p0u + p0d, p1u + p1d}; }
  [[nodiscard]] double demon_u() const { return p0u + p1u; }
  [[nodiscard]] double sum() const { return p0u + p0d + p1u + p1d; }

  /// Throws std::invalid_argument unless all components in [0,1] and the sum is 1 within tol.
  void validate(double tol = 1e-12) const;
};

/// Shannon entropy of a bit distribution with bias delta, in nats. Zero terms drop out.
double bit_entropy(double bias);

/// KL divergence D(p||q) between bit distributions given as biases, in nats.
/// Terms with p_i = 0 contribute zero; q must be interior unless matched by p.
double bit_kl(double bias_p, double bias_q);

}  // namespace demontape
