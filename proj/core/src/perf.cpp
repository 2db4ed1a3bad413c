#include "demontape/perf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace demontape {

namespace {

void require_eraser_region(const Params& params) {
  if (!(std::abs(params.epsilon()) > std::abs(params.delta()))) {
    throw std::domain_error("outside the eraser region |epsilon| > |delta|");
  }
}

// Eraser power extended continuously through the onset: -dSB/tau, negative
// while the machine still dissipates, equal to P_E once it erases.
double eraser_power(const CycleAnalyzer& analyzer, double tau) {
  return -analyzer.observables(tau).dsb / tau;
}

struct CubicFit {
  double kappa;
  double c2;
};

CubicFit fit_theta_cubic(const CycleAnalyzer& analyzer, double t_max) {
  constexpr int kPoints = 25;
  const double t_min = 1e-2 * t_max;
  Eigen::MatrixXd design(kPoints, 3);
  Eigen::VectorXd rhs(kPoints);
  const double ratio = std::pow(t_max / t_min, 1.0 / (kPoints - 1));
  double tau = t_min;
  for (int i = 0; i < kPoints; ++i, tau *= ratio) {
    design(i, 0) = tau;
    design(i, 1) = tau * tau;
    design(i, 2) = tau * tau * tau;
    rhs(i) = analyzer.observables(tau).theta;
  }
  const Eigen::Vector3d coeffs = design.colPivHouseholderQr().solve(rhs);
  return {coeffs[0], coeffs[1]};
}

}  // namespace

std::optional<PerfMetrics> perf_metrics(const Observables& obs, const Params& params) {
  const double dbeta_dq = params.beta_delta() * obs.dq;
  switch (obs.mode) {
    case Mode::Eraser:
      return PerfMetrics{-1, -obs.dsb / obs.tau, obs.dsb / dbeta_dq};
    case Mode::Refrigerator:
      return PerfMetrics{+1, obs.dq / obs.tau, dbeta_dq / obs.dsb};
    default:
      return std::nullopt;
  }
}

EfficiencyBounds efficiency_bounds(const Observables& obs) {
  if (obs.mode != Mode::Eraser) {
    throw std::domain_error("efficiency bounds are defined in eraser mode only");
  }
  const double mag = std::abs(obs.dsb);
  if (!(mag > 1e-13)) {
    throw std::domain_error("vanishing |dSB|");
  }
  return {obs.dkl_inst / mag, obs.dkl_asymp / mag};
}

SeriesCoeffs theta_series(const Params& params) {
  const CycleAnalyzer analyzer(params);
  // Cubic fits on three halved windows; Richardson-extrapolate the pairs
  // (kappa bias ~ T^3, c2 bias ~ T^2) and use the extrapolant spread as the
  // remaining uncertainty.
  const CubicFit f1 = fit_theta_cubic(analyzer, 1e-2);
  const CubicFit f2 = fit_theta_cubic(analyzer, 5e-3);
  const CubicFit f3 = fit_theta_cubic(analyzer, 2.5e-3);

  const double kappa_a = (8.0 * f2.kappa - f1.kappa) / 7.0;
  const double kappa_b = (8.0 * f3.kappa - f2.kappa) / 7.0;
  const double c2_a = (4.0 * f2.c2 - f1.c2) / 3.0;
  const double c2_b = (4.0 * f3.c2 - f2.c2) / 3.0;

  SeriesCoeffs out;
  out.kappa = kappa_b;
  out.c2 = c2_b;
  out.kappa_rel_err = std::abs(kappa_b - kappa_a) / std::abs(kappa_b);
  out.c2_rel_err = std::abs(c2_b - c2_a) / std::abs(c2_b);
  if (!(out.kappa_rel_err < 1e-4) || !(out.c2_rel_err < 1e-4)) {
    throw std::runtime_error("theta series fit did not converge: kappa = " +
                             std::to_string(out.kappa) + " +- " +
                             std::to_string(out.kappa_rel_err) + " rel, c2 = " +
                             std::to_string(out.c2) + " +- " + std::to_string(out.c2_rel_err) +
                             " rel");
  }
  return out;
}

double eraser_power_limit(const Params& params, const SeriesCoeffs& series) {
  return std::atanh(params.delta()) * (params.epsilon() - params.delta()) * series.kappa;
}

bool peak_criterion(const Params& params) {
  require_eraser_region(params);
  const SeriesCoeffs series = theta_series(params);
  const double delta = params.delta();
  const double eps = params.epsilon();
  // First-order short-time coefficient of the eraser power; written without
  // dividing by atanh(delta) so the delta <= 0 half of the region needs no
  // special casing.
  const double a1 = std::atanh(delta) * (eps - delta) * series.c2 +
                    (eps - delta) * (eps - delta) * series.kappa * series.kappa /
                        (2.0 * (1.0 - delta * delta));
  return a1 > 0.0;
}

OptimalTime optimal_time(const Params& params) {
  require_eraser_region(params);
  const CycleAnalyzer analyzer(params);
  const SeriesCoeffs series = theta_series(params);
  const double p_limit = eraser_power_limit(params, series);

  // An interior peak necessarily exists when the short-time power is not
  // positive: the power is positive past the onset and vanishes
  // quasi-statically. Otherwise the short-time expansion decides.
  bool has_peak = p_limit <= 0.0;
  if (!has_peak) {
    const double delta = params.delta();
    const double eps = params.epsilon();
    const double a1 = std::atanh(delta) * (eps - delta) * series.c2 +
                      (eps - delta) * (eps - delta) * series.kappa * series.kappa /
                          (2.0 * (1.0 - delta * delta));
    has_peak = a1 > 0.0;
  }
  if (!has_peak) {
    return {0.0, p_limit, false};
  }

  // geometric scan for a bracket around the maximum
  constexpr double kTauFloor = 1e-12;
  constexpr double kTauCap = 1e4;
  std::vector<double> taus;
  std::vector<double> values;
  for (double tau = 1e-4; tau <= kTauCap; tau *= 2.0) {
    taus.push_back(tau);
    values.push_back(eraser_power(analyzer, tau));
  }
  std::size_t best = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  while (best == 0) {
    const double tau = taus.front() * 0.5;
    if (tau < kTauFloor) break;
    taus.insert(taus.begin(), tau);
    values.insert(values.begin(), eraser_power(analyzer, tau));
    best = static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
  }
  if (best == 0 || best + 1 == taus.size()) {
    throw std::runtime_error("no bracket found for the power maximum");
  }

  // golden-section refinement
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = taus[best - 1];
  double b = taus[best + 1];
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = eraser_power(analyzer, x1);
  double f2 = eraser_power(analyzer, x2);
  while (b - a > 1e-8 * (a + b)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eraser_power(analyzer, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eraser_power(analyzer, x1);
    }
  }
  OptimalTime out;
  out.tau_m = 0.5 * (a + b);
  out.p_max = eraser_power(analyzer, out.tau_m);
  out.peak = true;

  const double h = 1e-5 * out.tau_m;
  const double deriv =
      (eraser_power(analyzer, out.tau_m + h) - eraser_power(analyzer, out.tau_m - h)) / (2.0 * h);
  if (!(std::abs(deriv) < 1e-6 * out.p_max / out.tau_m)) {
    throw std::runtime_error("stationarity check failed at tau_m: dP/dtau = " +
                             std::to_string(deriv));
  }
  return out;
}

StationarityResiduals stationarity_residuals(const Params& params, double tau_m) {
  const CycleAnalyzer analyzer(params);
  const double delta = params.delta();
  const double eps = params.epsilon();
  const Observables obs = analyzer.observables(tau_m);
  const double h = 1e-5 * tau_m;
  const double theta_deriv =
      (analyzer.observables(tau_m + h).theta - analyzer.observables(tau_m - h).theta) / (2.0 * h);
  const double lhs_common = tau_m * (delta - eps) * theta_deriv;
  const double rhs = obs.dsb;
  return {lhs_common * std::atanh(delta - obs.delta_prime) - rhs,
          lhs_common * std::atanh(obs.delta_prime) - rhs};
}

double onset_time(const Params& params) {
  const double delta = params.delta();
  const double eps = params.epsilon();
  if (!(delta < 0.0) || !(eps > std::abs(delta))) {
    throw std::domain_error("onset time is defined for delta < 0 < |delta| < epsilon");
  }
  const CycleAnalyzer analyzer(params);
  const double target = 2.0 * delta / (delta - eps);

  double lo = 0.0;
  double hi = 1e-2;
  while (analyzer.observables(hi).theta < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      throw std::runtime_error("onset bracketing exceeded tau = 1e6");
    }
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (analyzer.observables(mid).theta < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double tau_star = 0.5 * (lo + hi);

  const Observables at = analyzer.observables(tau_star);
  if (std::abs(std::abs(at.delta_prime) - std::abs(delta)) > 1e-8) {
    throw std::runtime_error("onset solution failed |delta'(tau*)| = |delta|");
  }
  if (!(analyzer.observables(tau_star * 0.99).dsb > -1e-13) ||
      !(analyzer.observables(tau_star * 1.01).dsb < 1e-13)) {
    throw std::runtime_error("dSB does not change sign at tau*");
  }
  return tau_star;
}

std::vector<EmpPoint> emp_curve(double delta, double omega, std::span<const double> epsilon_grid,
                                double gamma) {
  std::vector<EmpPoint> points;
  for (const double eps : epsilon_grid) {
    if (!(std::abs(eps) > std::abs(delta))) continue;
    const Params params = Params::from_epsilon(eps, omega, gamma, delta);
    const OptimalTime ot = optimal_time(params);
    EmpPoint pt;
    pt.epsilon = eps;
    pt.eta_c = std::atanh(eps) / std::atanh(omega);
    pt.tau_m = ot.tau_m;
    pt.peak_exists = ot.peak;
    if (ot.peak) {
      const Observables obs = observables(params, ot.tau_m);
      const auto perf = perf_metrics(obs, params);
      if (!perf) {
        throw std::runtime_error("no eraser metrics at tau_m");
      }
      pt.eta_mp = perf->efficiency;
    } else {
      // short-time limit of the eraser efficiency
      pt.eta_mp = std::atanh(delta) / std::atanh(eps);
    }
    points.push_back(pt);
  }
  if (points.empty()) {
    throw std::invalid_argument("no epsilon grid values inside the eraser region");
  }
  return points;
}

TradeoffBound tradeoff_bound(const Observables& obs, const PerfMetrics& perf) {
  if (perf.theta_sign != -1) {
    throw std::domain_error("trade-off bound applies to the eraser");
  }
  TradeoffBound out;
  out.lhs = perf.power * (1.0 - perf.efficiency) / perf.efficiency;
  out.rhs = obs.dkl_asymp / obs.tau;
  out.satisfied = out.lhs <= out.rhs + 1e-12;
  return out;
}

}  // namespace demontape
