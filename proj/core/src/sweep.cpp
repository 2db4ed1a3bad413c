#include "demontape/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

#include "demontape/montecarlo.hpp"

namespace demontape::sweep {

namespace {

constexpr const char* kAxisNames[] = {"sigma", "omega", "gamma", "delta", "epsilon", "tau", "p0"};

io::Cell num(double v) { return io::Cell{v}; }
io::Cell text(std::string s) { return io::Cell{std::move(s)}; }
io::Cell none() { return io::Cell{std::monostate{}}; }

}  // namespace

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  if (log_spaced) {
    const double ratio = std::pow(max / min, 1.0 / static_cast<double>(count - 1));
    double v = min;
    for (std::size_t i = 0; i < count; ++i, v *= ratio) out[i] = v;
  } else {
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = min + step * static_cast<double>(i);
  }
  out.back() = max;
  return out;
}

void Axis::validate() const {
  if (std::find(std::begin(kAxisNames), std::end(kAxisNames), name) == std::end(kAxisNames)) {
    throw std::invalid_argument("unknown axis name: " + name);
  }
  if (count < 1) {
    throw std::invalid_argument("axis count must be >= 1");
  }
  if (!(min <= max)) {
    throw std::invalid_argument("axis range must have min <= max");
  }
  if (log_spaced && !(min > 0.0)) {
    throw std::invalid_argument("log axis needs min > 0");
  }
}

Params FixedParams::resolve() const {
  if (sigma && epsilon) {
    throw std::invalid_argument("sigma and epsilon are mutually exclusive");
  }
  if (!sigma && !epsilon) {
    throw std::invalid_argument("either sigma or epsilon is required");
  }
  if (delta && p0) {
    throw std::invalid_argument("delta and p0 are mutually exclusive");
  }
  if (!omega) {
    throw std::invalid_argument("omega is required");
  }
  const double g = gamma.value_or(1.0);
  const double d = delta ? *delta : (p0 ? delta_from_p0(*p0) : 0.0);
  return sigma ? Params::from_sigma(*sigma, *omega, g, d)
               : Params::from_epsilon(*epsilon, *omega, g, d);
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

io::Table curve_table(const Params& params, const std::vector<double>& tau_values) {
  if (tau_values.empty()) {
    throw std::invalid_argument("empty tau grid");
  }
  io::Table table;
  table.columns = {"tau",      "delta_prime", "theta",     "dQ",
                   "dSB",      "sigma_tau",   "dkl_inst",  "dkl_asymp",
                   "power",    "efficiency",  "tradeoff_lhs", "tradeoff_rhs"};
  const CycleAnalyzer analyzer(params);
  for (const double tau : tau_values) {
    const Observables obs = analyzer.observables(tau);
    const auto perf = perf_metrics(obs, params);
    std::vector<io::Cell> row = {num(obs.tau),      num(obs.delta_prime), num(obs.theta),
                                 num(obs.dq),       num(obs.dsb),         num(obs.sigma_tau),
                                 num(obs.dkl_inst), num(obs.dkl_asymp)};
    if (perf) {
      row.push_back(num(perf->power));
      row.push_back(num(perf->efficiency));
    } else {
      row.push_back(none());
      row.push_back(none());
    }
    if (perf && perf->theta_sign == -1) {
      const TradeoffBound bound = tradeoff_bound(obs, *perf);
      row.push_back(num(bound.lhs));
      row.push_back(num(bound.rhs));
    } else {
      row.push_back(none());
      row.push_back(none());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

io::Table pareto_table(const Params& params, const std::vector<double>& tau_values) {
  if (tau_values.empty()) {
    throw std::invalid_argument("empty tau grid");
  }
  io::Table table;
  table.columns = {"tau", "power", "efficiency"};
  const CycleAnalyzer analyzer(params);
  for (const double tau : tau_values) {
    const Observables obs = analyzer.observables(tau);
    const auto perf = perf_metrics(obs, params);
    std::vector<io::Cell> row = {num(tau)};
    if (perf && perf->theta_sign == -1) {
      row.push_back(num(perf->power));
      row.push_back(num(perf->efficiency));
    } else {
      row.push_back(none());
      row.push_back(none());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

io::Table phase_table(double omega, double gamma, const Axis& delta_axis, const Axis& epsilon_axis,
                      double tau_ref, unsigned jobs, std::size_t cell_budget) {
  const std::vector<double> deltas = delta_axis.values();
  const std::vector<double> epsilons = epsilon_axis.values();
  const std::size_t cells = deltas.size() * epsilons.size();
  if (cells > cell_budget) {
    throw std::invalid_argument("grid of " + std::to_string(cells) +
                                " cells exceeds the budget of " + std::to_string(cell_budget));
  }

  io::Table table;
  table.columns = {"delta", "epsilon", "mode", "peak_exists", "tau_m", "tau_star"};
  table.rows.resize(cells);

  parallel_for(cells, jobs, [&](std::size_t i) {
    const double delta = deltas[i / epsilons.size()];
    const double eps = epsilons[i % epsilons.size()];
    const Params params = Params::from_epsilon(eps, omega, gamma, delta);
    const Observables obs = observables(params, tau_ref);

    std::vector<io::Cell> row = {num(delta), num(eps), text(std::string(to_string(obs.mode)))};
    if (std::abs(eps) > std::abs(delta)) {
      const OptimalTime ot = optimal_time(params);
      row.push_back(text(ot.peak ? "true" : "false"));
      row.push_back(ot.peak ? num(ot.tau_m) : none());
      row.push_back(delta < 0.0 ? num(onset_time(params)) : none());
    } else {
      row.push_back(none());
      row.push_back(none());
      row.push_back(none());
    }
    table.rows[i] = std::move(row);
  });
  return table;
}

io::Table emp_table(double delta, double omega, double gamma,
                    const std::vector<double>& epsilon_values) {
  const std::vector<EmpPoint> points = emp_curve(delta, omega, epsilon_values, gamma);
  io::Table table;
  table.columns = {"epsilon", "eta_C",     "eta_MP",   "tau_m",
                   "peak_exists", "eta_lower", "eta_upper"};
  for (const EmpPoint& pt : points) {
    std::vector<io::Cell> row = {num(pt.epsilon), num(pt.eta_c), num(pt.eta_mp),
                                 pt.peak_exists ? num(pt.tau_m) : none(),
                                 text(pt.peak_exists ? "true" : "false")};
    if (pt.peak_exists) {
      const Params params = Params::from_epsilon(pt.epsilon, omega, gamma, delta);
      const Observables obs = observables(params, pt.tau_m);
      const EfficiencyBounds bounds = efficiency_bounds(obs);
      row.push_back(num(1.0 / (1.0 + bounds.upper)));
      row.push_back(num(1.0 / (1.0 + bounds.lower)));
    } else {
      row.push_back(none());
      row.push_back(none());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RelaxRun relax_run(const Params& params, std::size_t points) {
  if (points < 3) {
    throw std::invalid_argument("relaxation fit needs at least 3 points");
  }
  const CycleAnalyzer analyzer(params);
  const double sigma_inf = analyzer.sigma_infinity();
  if (!(sigma_inf > 1e-8)) {
    throw std::domain_error("no relaxation deficit to fit (delta too close to epsilon)");
  }
  const auto deficit_at = [&](double tau) {
    return sigma_inf - analyzer.observables(tau).sigma_tau;
  };

  // bracket the tau where deficit/sigma_inf crosses a target fraction
  const auto crossing = [&](double frac) {
    const double target = frac * sigma_inf;
    double lo = 1e-3;
    double hi = 1e-3;
    while (deficit_at(hi) > target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e7) throw std::runtime_error("relaxation window search exceeded tau = 1e7");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-6 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (deficit_at(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  const double hi_frac = std::max(1e-9, 1e-12 / sigma_inf);
  const double tau_lo = crossing(1e-4);
  const double tau_hi = crossing(hi_frac);

  RelaxRun run;
  run.tau.resize(points);
  run.deficit.resize(points);
  const double step = (tau_hi - tau_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    run.tau[i] = tau_lo + step * static_cast<double>(i);
    run.deficit[i] = deficit_at(run.tau[i]);
  }
  run.fit = relaxation_decay(params, run.tau);
  return run;
}

io::Table relax_table(const RelaxRun& run) {
  io::Table table;
  table.columns = {"tau", "deficit"};
  for (std::size_t i = 0; i < run.tau.size(); ++i) {
    table.rows.push_back({num(run.tau[i]), num(run.deficit[i])});
  }
  return table;
}

void CheckStat::update(double margin, double slack) {
  checked += 1;
  if (checked == 1 || margin < worst_margin) worst_margin = margin;
  if (margin < -slack) violations += 1;
}

bool ValidationReport::hard_violation() const {
  return sandwich_lower.violations || sandwich_upper.violations || sign_dq.violations ||
         theta_range.violations || eta_range.violations || eq8_lower.violations ||
         eq8_upper.violations || tradeoff.violations;
}

namespace {

nlohmann::ordered_json stat_json(const CheckStat& stat) {
  nlohmann::ordered_json j;
  j["checked"] = stat.checked;
  j["violations"] = stat.violations;
  j["worst_margin"] = stat.worst_margin;
  return j;
}

}  // namespace

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["count"] = count;
  j["seed"] = seed;
  j["checks"]["sandwich_lower"] = stat_json(sandwich_lower);
  j["checks"]["sandwich_upper"] = stat_json(sandwich_upper);
  j["checks"]["sign_dq"] = stat_json(sign_dq);
  j["checks"]["theta_range"] = stat_json(theta_range);
  j["checks"]["eta_range"] = stat_json(eta_range);
  j["checks"]["eq8_lower"] = stat_json(eq8_lower);
  j["checks"]["eq8_upper"] = stat_json(eq8_upper);
  j["checks"]["tradeoff"] = stat_json(tradeoff);
  j["eraser_draws"] = eraser_draws;
  j["refrigerator_draws"] = refrigerator_draws;
  j["peak_audit"]["cells"] = audit_cells;
  j["peak_audit"]["mismatches"] = audit_mismatches.size();
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const PeakAuditCell& cell : audit_mismatches) {
    nlohmann::ordered_json c;
    c["delta"] = cell.delta;
    c["epsilon"] = cell.epsilon;
    c["criterion"] = cell.criterion;
    c["brute_force"] = cell.brute_force;
    cells.push_back(std::move(c));
  }
  j["peak_audit"]["mismatch_cells"] = std::move(cells);
  j["pass"] = !hard_violation();
  return j.dump(2) + "\n";
}

namespace {

// Direct peak detection for the audit: scan the continuous extension of the
// eraser power on a log grid, refine the best interior point, compare with the
// short-time limit.
bool brute_force_peak(const Params& params, double p_limit) {
  const CycleAnalyzer analyzer(params);
  const auto power = [&](double tau) { return -analyzer.observables(tau).dsb / tau; };

  constexpr int kScan = 240;
  const double lo = 1e-5, hi = 1e4;
  const double ratio = std::pow(hi / lo, 1.0 / (kScan - 1));
  double best_tau = lo;
  double best_val = -std::numeric_limits<double>::infinity();
  double tau = lo;
  for (int i = 0; i < kScan; ++i, tau *= ratio) {
    const double v = power(tau);
    if (v > best_val) {
      best_val = v;
      best_tau = tau;
    }
  }
  // golden refinement around the best sample
  double a = best_tau / ratio;
  double b = best_tau * ratio;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = power(x1);
  double f2 = power(x2);
  for (int i = 0; i < 80 && b - a > 1e-10 * (a + b); ++i) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = power(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = power(x1);
    }
  }
  best_val = std::max(best_val, std::max(f1, f2));
  return best_val > std::max(p_limit, 0.0) * (1.0 + 1e-9) + 1e-15;
}

}  // namespace

std::pair<std::size_t, std::vector<PeakAuditCell>> peak_audit(double omega, unsigned jobs) {
  constexpr int kN = 50;
  std::vector<PeakAuditCell> cells;
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j < kN; ++j) {
      const double delta = -0.95 + 1.9 * static_cast<double>(i) / (kN - 1);
      const double eps = (static_cast<double>(j) + 0.5) / kN;
      if (eps > std::abs(delta)) {
        cells.push_back({delta, eps, false, false});
      }
    }
  }
  std::vector<bool> mismatch(cells.size(), false);
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    PeakAuditCell& cell = cells[i];
    const Params params = Params::from_epsilon(cell.epsilon, omega, 1.0, cell.delta);
    cell.criterion = peak_criterion(params);
    const SeriesCoeffs series = theta_series(params);
    cell.brute_force = brute_force_peak(params, eraser_power_limit(params, series));
    mismatch[i] = cell.criterion != cell.brute_force;
  });

  std::vector<PeakAuditCell> mismatches;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (mismatch[i]) mismatches.push_back(cells[i]);
  }
  return {cells.size(), std::move(mismatches)};
}

ValidationReport run_validation(std::size_t count, std::uint64_t seed, unsigned jobs) {
  ValidationReport report;
  report.count = count;
  report.seed = seed;
  if (count == 0) {
    return report;
  }

  struct DrawResult {
    double sandwich_lo, sandwich_hi, sign, theta_lo;
    double eta = std::numeric_limits<double>::quiet_NaN();
    double eq8_lo = 0.0, eq8_hi = 0.0, trade = 0.0;
    bool eraser = false, refrigerator = false;
  };
  std::vector<DrawResult> draws(count);

  parallel_for(count, jobs, [&](std::size_t i) {
    SplitMix64 stream(seed ^ (0x51ed2701du + i * 0x9e3779b97f4a7c15ull));
    const double p0 = stream.next_unit();
    const double omega = 0.2 + 0.6 * stream.next_unit();
    const double sigma = omega * (1.0 - stream.next_unit());  // [0, omega)
    const double tau = 0.01 * std::exp(std::log(1e4) * stream.next_unit());
    const Params params = Params::from_sigma(sigma, omega, 1.0, delta_from_p0(p0));
    const double eps = params.epsilon();

    const Observables obs = observables(params, tau);
    DrawResult& r = draws[i];
    r.sandwich_lo = obs.sigma_tau - obs.dkl_inst;
    r.sandwich_hi = obs.dkl_asymp - obs.sigma_tau;
    const double gap = params.delta() - eps;
    r.sign = gap == 0.0 ? 0.0 : obs.dq * (gap > 0.0 ? 1.0 : -1.0);
    r.theta_lo = std::min(obs.theta, 1.0 - obs.theta);

    const auto perf = perf_metrics(obs, params);
    if (perf) {
      r.eta = perf->efficiency;
      r.eraser = perf->theta_sign == -1;
      r.refrigerator = perf->theta_sign == +1;
      if (r.eraser && std::abs(obs.dsb) > 1e-13) {
        const EfficiencyBounds bounds = efficiency_bounds(obs);
        const double ratio = (1.0 - perf->efficiency) / perf->efficiency;
        r.eq8_lo = ratio - bounds.lower;
        r.eq8_hi = bounds.upper - ratio;
        const TradeoffBound bound = tradeoff_bound(obs, *perf);
        r.trade = bound.rhs - bound.lhs;
      }
    }
  });

  for (const DrawResult& r : draws) {
    report.sandwich_lower.update(r.sandwich_lo, 1e-10);
    report.sandwich_upper.update(r.sandwich_hi, 1e-10);
    report.sign_dq.update(r.sign, 1e-12);
    report.theta_range.update(r.theta_lo, 1e-10);
    if (r.eraser || r.refrigerator) {
      report.eta_range.update(std::min(r.eta, 1.0 - r.eta), 1e-10);
      report.eraser_draws += r.eraser;
      report.refrigerator_draws += r.refrigerator;
      if (r.eraser && r.eq8_lo != 0.0) {
        report.eq8_lower.update(r.eq8_lo, 1e-10);
        report.eq8_upper.update(r.eq8_hi, 1e-10);
        report.tradeoff.update(r.trade, 1e-12);
      }
    }
  }

  auto [cells, mismatches] = peak_audit(0.5, jobs);
  report.audit_cells = cells;
  report.audit_mismatches = std::move(mismatches);
  return report;
}

}  // namespace demontape::sweep
