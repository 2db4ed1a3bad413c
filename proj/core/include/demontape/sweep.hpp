#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "demontape/cycle.hpp"
#include "demontape/io.hpp"
#include "demontape/params.hpp"
#include "demontape/perf.hpp"

namespace demontape::sweep {

/// One sweep axis. Valid names: sigma, omega, gamma, delta, epsilon, tau, p0.
struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
  bool log_spaced = false;

  [[nodiscard]] std::vector<double> values() const;
  void validate() const;
};

/// User-supplied scalar parameters before resolution. sigma/epsilon and
/// delta/p0 are mutually exclusive pairs; omega is required; gamma defaults
/// to 1 and delta to 0.
struct FixedParams {
  std::optional<double> sigma;
  std::optional<double> epsilon;
  std::optional<double> omega;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> p0;

  [[nodiscard]] Params resolve() const;  // throws std::invalid_argument on conflicts
};

/// Deterministic parallel map: evaluates fn(0..count-1) on `jobs` threads and
/// keeps results in index order.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Observables + performance + bound margins along a tau grid at fixed params.
io::Table curve_table(const Params& params, const std::vector<double>& tau_values);

/// Parametric (tau, power, efficiency) trace of the eraser along a tau grid.
io::Table pareto_table(const Params& params, const std::vector<double>& tau_values);

/// Mode / peak / tau_m / tau_star map over a (delta, epsilon) grid at fixed
/// omega, gamma. Modes are classified at tau_ref. Throws std::invalid_argument
/// when the grid exceeds cell_budget.
io::Table phase_table(double omega, double gamma, const Axis& delta_axis, const Axis& epsilon_axis,
                      double tau_ref, unsigned jobs, std::size_t cell_budget = 1000000);

/// EMP curve plus the efficiency bounds evaluated at tau_m.
io::Table emp_table(double delta, double omega, double gamma,
                    const std::vector<double>& epsilon_values);

/// Relaxation fit with an automatically selected tau window: the deficit
/// sigma_inf - sigma_tau is bracketed to [1e-9, 1e-4] of sigma_inf by
/// bisection, then fitted on a linear grid of `points`.
struct RelaxRun {
  DecayFit fit;
  std::vector<double> tau;
  std::vector<double> deficit;
};
RelaxRun relax_run(const Params& params, std::size_t points = 40);
io::Table relax_table(const RelaxRun& run);

/// Aggregates of one randomized validation sweep.
struct CheckStat {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // smallest observed margin; >= -slack means pass

  void update(double margin, double slack);
};

struct PeakAuditCell {
  double delta = 0.0;
  double epsilon = 0.0;
  bool criterion = false;
  bool brute_force = false;
};

struct ValidationReport {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  CheckStat sandwich_lower;   // sigma_tau - dkl_inst      > -1e-10
  CheckStat sandwich_upper;   // dkl_asymp - sigma_tau     > -1e-10
  CheckStat sign_dq;          // sign(dQ) == sign(delta - epsilon)
  CheckStat theta_range;      // theta in [0, 1] within 1e-10
  CheckStat eta_range;        // efficiency in (0, 1] within 1e-10
  CheckStat eq8_lower;        // (1-eta)/eta - dkl_inst/|dSB|  > -1e-10
  CheckStat eq8_upper;        // dkl_asymp/|dSB| - (1-eta)/eta > -1e-10
  CheckStat tradeoff;         // rhs - lhs > -1e-12
  std::size_t eraser_draws = 0;
  std::size_t refrigerator_draws = 0;
  std::size_t audit_cells = 0;
  std::vector<PeakAuditCell> audit_mismatches;

  [[nodiscard]] bool hard_violation() const;
  [[nodiscard]] std::string to_json() const;
};

/// Randomized invariant sweep over the standard ranges (p0 in [0,1],
/// omega in [0.2,0.8], sigma in [0,omega), gamma = 1, tau log-uniform in
/// [0.01, 100]) plus the 50x50 peak-criterion audit at omega = 0.5.
ValidationReport run_validation(std::size_t count, std::uint64_t seed, unsigned jobs);

/// Peak-criterion vs brute-force audit over the 50x50 eraser-region grid.
/// Returns the number of audited cells and the mismatching ones.
std::pair<std::size_t, std::vector<PeakAuditCell>> peak_audit(double omega, unsigned jobs);

}  // namespace demontape::sweep
