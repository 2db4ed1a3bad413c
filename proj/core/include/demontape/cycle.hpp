#pragma once

#include <span>
#include <string_view>

#include "demontape/dist.hpp"
#include "demontape/params.hpp"
#include "demontape/propagator.hpp"

namespace demontape {

/// The per-interval demon map d' = gain*d + offset, where d is the demon's
/// u-probability at the start of an interval. The map is exactly affine, so
/// two propagations determine it. gain in [0,1) for tau > 0 makes it a
/// contraction with fixed point offset/(1-gain).
struct AffineMap {
  double gain = 0.0;
  double offset = 0.0;
  [[nodiscard]] double fixed_point() const { return offset / (1.0 - gain); }
};

/// Periodic steady state of repeated interactions at fixed tau.
struct CycleState {
  double d_star = 0.0;  // demon u-probability at interval start
  JointDist start;      // product of demon marginal and incoming bit
  JointDist end;        // after propagation over tau
  BitDist bit_out;      // outgoing bit marginal
  double tau = 0.0;
};

enum class Mode { Eraser, Refrigerator, Dissipative, Neutral };
std::string_view to_string(Mode mode);

/// Classify from the signs of the per-interval heat and bit-entropy change.
Mode classify_mode(double dq, double dsb, double tol = 1e-12);

/// Per-interval thermodynamic observables in the periodic steady state.
/// dq is the heat drawn from the cold reservoir (units of dE), dsb and
/// sigma_tau are in nats, dkl_* are the KL divergences of the incoming bit
/// distribution from the outgoing (inst) and asymptotic (asymp) ones.
struct Observables {
  double tau = 0.0;
  double delta_prime = 0.0;
  double theta = 0.0;
  double dq = 0.0;
  double dsb = 0.0;
  double sigma_tau = 0.0;
  double dkl_inst = 0.0;
  double dkl_asymp = 0.0;
  Mode mode = Mode::Neutral;
};

/// Solves the periodic steady state and the observables for one parameter set,
/// reusing the spectral decomposition across tau evaluations. All methods are
/// const and safe to call concurrently.
class CycleAnalyzer {
 public:
  explicit CycleAnalyzer(const Params& params);

  [[nodiscard]] AffineMap demon_update_map(double tau) const;
  [[nodiscard]] CycleState periodic_steady_state(double tau) const;
  [[nodiscard]] Observables observables(double tau) const;

  /// Outgoing bias for an arbitrary incoming bias at this machine's baths.
  [[nodiscard]] double outgoing_bias(double incoming_bias, double tau) const;

  /// Quasi-static entropy production = D_KL(incoming || asymptotic bit dist).
  [[nodiscard]] double sigma_infinity() const;

  [[nodiscard]] const Params& params() const { return params_; }
  [[nodiscard]] const Propagator& propagator() const { return propagator_; }

 private:
  [[nodiscard]] AffineMap map_for_bias(double bias, double tau) const;
  [[nodiscard]] double theta_at_boundary(double tau) const;

  Params params_;
  RateMatrix rate_;
  Propagator propagator_;
  double epsilon_;
};

AffineMap demon_update_map(const Params& params, double tau);
CycleState periodic_steady_state(const Params& params, double tau);
Observables observables(const Params& params, double tau);

/// Exponential-relaxation fit of the entropy-production deficit
/// ln(sigma_inf - sigma_tau) over a tau grid. rate = slope/2 is matched against
/// the generator's nonzero eigenvalues; matched_index is 1-based into the
/// descending spectrum (so 2 means the slowest nonzero eigenvalue).
struct DecayFit {
  double slope = 0.0;
  double rate = 0.0;
  int matched_index = 0;
  double matched_eigenvalue = 0.0;
  double rel_mismatch = 0.0;
  std::array<double, 4> eigenvalues{};
};

/// Throws std::domain_error when the deficit is below the numerical floor or
/// not monotone over the grid (no exponential regime to fit).
DecayFit relaxation_decay(const Params& params, std::span<const double> tau_grid);

}  // namespace demontape
