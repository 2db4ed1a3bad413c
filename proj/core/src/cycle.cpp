#include "demontape/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace demontape {

namespace {

// Below this |delta - epsilon| the direct Theta quotient has lost too many
// digits to cancellation; switch to the derivative limit.
constexpr double kThetaWindow = 1e-7;

void require_positive_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::domain_error("tau must be finite and > 0");
  }
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Eraser: return "Eraser";
    case Mode::Refrigerator: return "Refrigerator";
    case Mode::Dissipative: return "Dissipative";
    case Mode::Neutral: return "Neutral";
  }
  return "?";
}

Mode classify_mode(double dq, double dsb, double tol) {
  if (std::abs(dq) <= tol) return Mode::Neutral;
  if (dq > tol && dsb > tol) return Mode::Refrigerator;
  if (dq < -tol && dsb < -tol) return Mode::Eraser;
  return Mode::Dissipative;
}

CycleAnalyzer::CycleAnalyzer(const Params& params)
    : params_(params),
      rate_(build_rate_matrix(params)),
      propagator_(rate_),
      epsilon_(params.epsilon()) {}

AffineMap CycleAnalyzer::map_for_bias(double bias, double tau) const {
  const BitDist bit = BitDist::from_bias(bias);
  const double d0 = propagator_.apply(JointDist::product(bit, 0.0), tau).demon_u();
  const double d1 = propagator_.apply(JointDist::product(bit, 1.0), tau).demon_u();
  return {d1 - d0, d0};
}

AffineMap CycleAnalyzer::demon_update_map(double tau) const {
  require_positive_tau(tau);
  return map_for_bias(params_.delta(), tau);
}

CycleState CycleAnalyzer::periodic_steady_state(double tau) const {
  require_positive_tau(tau);
  const AffineMap map = demon_update_map(tau);
  if (map.gain >= 1.0) {
    throw std::runtime_error("demon map is not a contraction: gain = " +
                             std::to_string(map.gain));
  }
  CycleState cs;
  cs.tau = tau;
  cs.d_star = map.fixed_point();
  cs.start = JointDist::product(BitDist::from_bias(params_.delta()), cs.d_star);
  cs.end = propagator_.apply(cs.start, tau);
  cs.bit_out = cs.end.bit_marginal();
  if (std::abs(cs.end.demon_u() - cs.d_star) > 1e-10) {
    throw std::runtime_error("periodic steady state failed self-consistency");
  }
  return cs;
}

double CycleAnalyzer::outgoing_bias(double incoming_bias, double tau) const {
  require_positive_tau(tau);
  const AffineMap map = map_for_bias(incoming_bias, tau);
  const JointDist start = JointDist::product(BitDist::from_bias(incoming_bias), map.fixed_point());
  return propagator_.apply(start, tau).bit_marginal().bias();
}

double CycleAnalyzer::theta_at_boundary(double tau) const {
  // Theta -> 1 - d(delta')/d(delta) at delta = epsilon; central difference with
  // one Richardson step.
  const double h = 1e-4;
  const auto derivative = [&](double step) {
    return (outgoing_bias(epsilon_ + step, tau) - outgoing_bias(epsilon_ - step, tau)) /
           (2.0 * step);
  };
  const double d1 = derivative(h);
  const double d2 = derivative(0.5 * h);
  return 1.0 - (4.0 * d2 - d1) / 3.0;
}

Observables CycleAnalyzer::observables(double tau) const {
  const CycleState cs = periodic_steady_state(tau);
  const double delta = params_.delta();
  const double dprime = cs.bit_out.bias();

  Observables obs;
  obs.tau = tau;
  obs.delta_prime = dprime;
  obs.theta = std::abs(delta - epsilon_) >= kThetaWindow
                  ? (delta - dprime) / (delta - epsilon_)
                  : theta_at_boundary(tau);
  obs.dq = 0.5 * (delta - dprime);
  obs.dsb = bit_entropy(dprime) - bit_entropy(delta);
  obs.sigma_tau = -params_.beta_delta() * obs.dq + obs.dsb;
  obs.dkl_inst = bit_kl(delta, dprime);
  obs.dkl_asymp = bit_kl(delta, epsilon_);
  obs.mode = classify_mode(obs.dq, obs.dsb);
  return obs;
}

double CycleAnalyzer::sigma_infinity() const {
  return bit_kl(params_.delta(), epsilon_);
}

AffineMap demon_update_map(const Params& params, double tau) {
  return CycleAnalyzer(params).demon_update_map(tau);
}

CycleState periodic_steady_state(const Params& params, double tau) {
  return CycleAnalyzer(params).periodic_steady_state(tau);
}

Observables observables(const Params& params, double tau) {
  return CycleAnalyzer(params).observables(tau);
}

DecayFit relaxation_decay(const Params& params, std::span<const double> tau_grid) {
  if (tau_grid.size() < 3) {
    throw std::domain_error("relaxation fit needs at least 3 grid points");
  }
  const CycleAnalyzer analyzer(params);
  const double sigma_inf = analyzer.sigma_infinity();

  std::vector<double> deficit(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    deficit[i] = sigma_inf - analyzer.observables(tau_grid[i]).sigma_tau;
    if (!(deficit[i] > 1e-13)) {
      throw std::domain_error("entropy-production deficit below numerical floor at tau = " +
                              std::to_string(tau_grid[i]));
    }
    if (i > 0 && deficit[i] > deficit[i - 1] * (1.0 + 1e-9)) {
      throw std::domain_error("entropy-production deficit is not monotone over the grid");
    }
  }

  // least-squares line through (tau, ln deficit)
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double n = static_cast<double>(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const double y = std::log(deficit[i]);
    st += tau_grid[i];
    sy += y;
    stt += tau_grid[i] * tau_grid[i];
    sty += tau_grid[i] * y;
  }
  DecayFit fit;
  fit.slope = (n * sty - st * sy) / (n * stt - st * st);
  fit.rate = 0.5 * fit.slope;
  fit.eigenvalues = analyzer.propagator().spectrum().values;

  fit.rel_mismatch = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 4; ++k) {
    const double lambda = fit.eigenvalues[static_cast<std::size_t>(k)];
    const double rel = std::abs(fit.rate - lambda) / std::abs(lambda);
    if (rel < fit.rel_mismatch) {
      fit.rel_mismatch = rel;
      fit.matched_index = k + 1;  // 1-based, index 1 is the null mode
      fit.matched_eigenvalue = lambda;
    }
  }
  return fit;
}

}  // namespace demontape
