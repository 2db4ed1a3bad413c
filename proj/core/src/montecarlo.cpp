#include "demontape/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "demontape/cycle.hpp"

namespace demontape {

namespace {

constexpr std::uint64_t kStreamSalt = 0x7c15d4a6'1c8e3b05ull;

std::uint64_t interval_stream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer(seed ^ (kStreamSalt + index * 0x9e3779b97f4a7c15ull));
  return mixer.next();
}

// accumulates one per-interval statistic and its batch-means standard error
class BlockAccumulator {
 public:
  BlockAccumulator(std::uint64_t total, std::uint64_t n_blocks)
      : block_size_(std::max<std::uint64_t>(1, total / n_blocks)) {}

  void add(double value) {
    sum_ += value;
    count_ += 1;
    block_sum_ += value;
    block_count_ += 1;
    if (block_count_ == block_size_) {
      block_means_.push_back(block_sum_ / static_cast<double>(block_count_));
      block_sum_ = 0.0;
      block_count_ = 0;
    }
  }

  [[nodiscard]] double mean() const { return sum_ / static_cast<double>(count_); }

  [[nodiscard]] double stderr_mean() const {
    if (block_means_.size() < 2) return 0.0;
    const double n = static_cast<double>(block_means_.size());
    double m = 0.0;
    for (const double b : block_means_) m += b;
    m /= n;
    double var = 0.0;
    for (const double b : block_means_) var += (b - m) * (b - m);
    var /= (n - 1.0);
    return std::sqrt(var / n);
  }

 private:
  std::uint64_t block_size_;
  double sum_ = 0.0;
  std::uint64_t count_ = 0;
  double block_sum_ = 0.0;
  std::uint64_t block_count_ = 0;
  std::vector<double> block_means_;
};

}  // namespace

void McConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be finite and > 0");
  }
  if (n_bits <= burn_in) {
    throw std::invalid_argument("n_bits must exceed burn_in");
  }
}

McResult simulate_tape(const McConfig& cfg) {
  cfg.validate();
  const Params& p = cfg.params;
  const double rate_ud = p.gamma() * (1.0 + p.sigma());  // u -> d
  const double rate_du = p.gamma() * (1.0 - p.sigma());  // d -> u
  const double coop_fast = 1.0 + p.omega();              // 1u -> 0d
  const double coop_slow = 1.0 - p.omega();              // 0d -> 1u
  const double p1_in = 0.5 * (1.0 - p.delta());

  const std::uint64_t used = cfg.n_bits - cfg.burn_in;
  const std::uint64_t n_blocks = std::min<std::uint64_t>(100, std::max<std::uint64_t>(2, used));
  BlockAccumulator bit_acc(used, n_blocks);
  BlockAccumulator dq_acc(used, n_blocks);
  BlockAccumulator demon_acc(used, n_blocks);

  // demon state: 0 = u, 1 = d; drawn once from its bare equilibrium, then
  // carried across intervals. Stream index 0 is reserved for this draw.
  SplitMix64 init_stream(interval_stream_seed(cfg.seed, 0));
  int demon = init_stream.next_unit() <= 0.5 * (1.0 - p.sigma()) ? 0 : 1;

  for (std::uint64_t interval = 1; interval <= cfg.n_bits; ++interval) {
    SplitMix64 stream(interval_stream_seed(cfg.seed, interval));
    int bit = stream.next_unit() <= p1_in ? 1 : 0;
    const int demon_start = demon;

    double t = 0.0;
    int net_flips = 0;
    while (true) {
      // joint state and its outgoing channels (at most two)
      double r_first = 0.0, r_second = 0.0;
      if (demon == 0) {                       // u
        r_first = rate_ud;                    // -> d
        if (bit == 1) r_second = coop_fast;   // 1u -> 0d
      } else {                                // d
        r_first = rate_du;                    // -> u
        if (bit == 0) r_second = coop_slow;   // 0d -> 1u
      }
      const double total = r_first + r_second;
      const double dt = -std::log(stream.next_unit()) / total;
      if (t + dt >= cfg.tau) break;  // frozen at tau; memorylessness makes this exact
      t += dt;
      if (stream.next_unit() * total <= r_first) {
        demon = 1 - demon;
      } else if (demon == 0) {  // 1u -> 0d
        demon = 1;
        bit = 0;
        net_flips -= 1;
      } else {  // 0d -> 1u
        demon = 0;
        bit = 1;
        net_flips += 1;
      }
    }

    if (interval > cfg.burn_in) {
      bit_acc.add(static_cast<double>(bit));
      dq_acc.add(static_cast<double>(net_flips));
      demon_acc.add(demon_start == 0 ? 1.0 : 0.0);
    }
  }

  McResult out;
  out.intervals_used = used;
  out.p1_out = bit_acc.mean();
  out.p0_out = 1.0 - out.p1_out;
  out.se_bit = bit_acc.stderr_mean();
  out.dq = dq_acc.mean();
  out.se_dq = dq_acc.stderr_mean();
  out.demon_u = demon_acc.mean();
  out.se_demon = demon_acc.stderr_mean();
  return out;
}

McComparison compare_with_analytic(const McConfig& cfg) {
  cfg.validate();
  McComparison cmp;
  cmp.mc = simulate_tape(cfg);

  const Observables obs = observables(cfg.params, cfg.tau);
  const CycleState cs = periodic_steady_state(cfg.params, cfg.tau);
  cmp.p1_analytic = 0.5 * (1.0 - obs.delta_prime);
  cmp.dq_analytic = obs.dq;
  cmp.d_star_analytic = cs.d_star;

  const auto z = [](double est, double truth, double se) {
    const double diff = est - truth;
    if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / se;
  };
  cmp.z_bit = z(cmp.mc.p1_out, cmp.p1_analytic, cmp.mc.se_bit);
  cmp.z_dq = z(cmp.mc.dq, cmp.dq_analytic, cmp.mc.se_dq);
  cmp.z_demon = z(cmp.mc.demon_u, cmp.d_star_analytic, cmp.mc.se_demon);
  cmp.pass = std::abs(cmp.z_bit) < 4.0 && std::abs(cmp.z_dq) < 4.0 && std::abs(cmp.z_demon) < 4.0;
  return cmp;
}

}  // namespace demontape
