#pragma once

#include <optional>
#include <span>
#include <vector>

#include "demontape/cycle.hpp"
#include "demontape/params.hpp"

namespace demontape {

/// Mode-resolved power and efficiency.
/// Eraser (theta_sign = -1):       power = |dSB|/tau,  efficiency = dSB/(dbeta*dQ).
/// Refrigerator (theta_sign = +1): power = dQ/tau,     efficiency = dbeta*dQ/dSB.
struct PerfMetrics {
  int theta_sign = 0;
  double power = 0.0;
  double efficiency = 0.0;
};

/// Empty in Neutral/Dissipative mode: no meaningful power or efficiency there.
std::optional<PerfMetrics> perf_metrics(const Observables& obs, const Params& params);

/// Bounds on (1 - eta_E)/eta_E for the eraser, from the entropy-production
/// sandwich divided by |dSB|. Throws std::domain_error unless in eraser mode
/// with |dSB| > 1e-13.
struct EfficiencyBounds {
  double lower = 0.0;
  double upper = 0.0;
};
EfficiencyBounds efficiency_bounds(const Observables& obs);

/// Leading coefficients of Theta(tau) = kappa*tau + c2*tau^2 + O(tau^3),
/// extracted by cubic least squares on tau in [1e-4, 1e-2] with one Richardson
/// window-halving step. The relative uncertainties are the window-halving
/// discrepancies.
struct SeriesCoeffs {
  double kappa = 0.0;
  double c2 = 0.0;
  double kappa_rel_err = 0.0;
  double c2_rel_err = 0.0;
};

/// Throws std::runtime_error carrying diagnostics when the fit uncertainty
/// exceeds 1e-4 relative.
SeriesCoeffs theta_series(const Params& params);

/// Short-time limit of the eraser power, lim_{tau->0} -dSB/tau
/// = atanh(delta)*(epsilon - delta)*kappa (negative before the onset when
/// delta < 0).
double eraser_power_limit(const Params& params, const SeriesCoeffs& series);

/// Whether the eraser power has an interior maximum, decided by the sign of
/// the first-order short-time coefficient
///   A1 = atanh(delta)*(eps-delta)*c2 + (eps-delta)^2*kappa^2 / (2*(1-delta^2)),
/// which reduces to the c2/kappa^2 criterion for delta > 0 and is always
/// well-defined at delta = 0 (A1 = eps^2 kappa^2 / 2 > 0, a peak exists since
/// the power starts from zero). Throws std::domain_error outside the eraser
/// region |epsilon| > |delta|.
bool peak_criterion(const Params& params);

/// Power-maximizing interaction time. When no interior peak exists the
/// boundary answer {tau_m = 0, p_max = short-time power limit} is returned
/// with peak = false. Maximization is bracketing plus golden-section to 1e-8
/// relative in tau; the zero-derivative condition is verified by central
/// difference.
struct OptimalTime {
  double tau_m = 0.0;
  double p_max = 0.0;
  bool peak = false;
};
OptimalTime optimal_time(const Params& params);

/// Residuals of the stationarity condition at tau_m,
///   tau_m*(delta-eps)*Theta'(tau_m)*atanh(arg) - (S_B(delta') - S_B(delta)),
/// evaluated for both candidate readings of the atanh argument. Diagnostic
/// only; the maximizer defines tau_m.
struct StationarityResiduals {
  double with_delta_minus_dprime = 0.0;
  double with_dprime = 0.0;
};
StationarityResiduals stationarity_residuals(const Params& params, double tau_m);

/// Onset time tau* of delayed erasure for delta < 0 < |epsilon|, |epsilon| > |delta|:
/// solves Theta(tau*) = 2*delta/(delta - epsilon) by bisection to 1e-10.
/// Throws std::domain_error outside the delayed-eraser region.
double onset_time(const Params& params);

/// One point of the efficiency-at-maximum-power curve.
struct EmpPoint {
  double epsilon = 0.0;
  double eta_c = 0.0;
  double eta_mp = 0.0;
  double tau_m = 0.0;
  bool peak_exists = false;
};

/// EMP curve over an epsilon grid at fixed (delta, omega, gamma). Grid values
/// outside the eraser region |eps| > |delta| are skipped; an empty result after
/// filtering throws std::invalid_argument.
std::vector<EmpPoint> emp_curve(double delta, double omega, std::span<const double> epsilon_grid,
                                double gamma = 1.0);

/// Joint power-efficiency bound for the eraser:
/// lhs = P_E (1 - eta_E)/eta_E (= sigma_tau/tau), rhs = dkl_asymp/tau.
struct TradeoffBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};
TradeoffBound tradeoff_bound(const Observables& obs, const PerfMetrics& perf);

}  // namespace demontape
