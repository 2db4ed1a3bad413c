#pragma once

#include <array>

#include <Eigen/Dense>

#include "demontape/dist.hpp"
#include "demontape/params.hpp"

namespace demontape {

/// Joint-state indices, matching the (0u, 0d, 1u, 1d) component order everywhere.
enum JointState : int { kState0u = 0, kState0d = 1, kState1u = 2, kState1d = 3 };

/// Markov generator of the joint demon-bit process, column convention:
/// m(i, j) is the rate j -> i for i != j, and each diagonal entry closes its
/// column to zero. The transition graph is the path 0u - 0d - 1u - 1d:
/// intrinsic demon flips on 0u<->0d and 1u<->1d (hot bath, rates gamma*(1 +- sigma)),
/// the cooperative flip on 0d<->1u (cold bath, rates 1 +- omega). Bits have no
/// dynamics of their own, so no other transitions exist.
struct RateMatrix {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
};

/// Assemble the generator for a parameter set. Throws std::invalid_argument on
/// non-finite or out-of-range parameters.
RateMatrix build_rate_matrix(const Params& params);

/// Stationary distribution of the generator, computed in closed form from the
/// detailed-balance ratios along the path. Its bit marginal has bias epsilon
/// and its demon marginal has P(u) = (1 - sigma)/2. Throws std::domain_error
/// for a disconnected graph (some edge rate zero, degenerate null space).
JointDist stationary_distribution(const RateMatrix& rate);

/// Real spectrum of the generator, eigenvalues sorted descending so that
/// values[0] = 0 and values[1..3] < 0. vectors.col(k) is the right eigenvector
/// of values[k], unit norm. Realness follows from detailed balance on a tree:
/// the similarity transform by diag(sqrt(pi)) is symmetric.
struct Spectrum {
  std::array<double, 4> values{};
  Eigen::Matrix4d vectors = Eigen::Matrix4d::Zero();
};

Spectrum eigen_spectrum(const RateMatrix& rate);

}  // namespace demontape
