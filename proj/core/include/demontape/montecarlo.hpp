#pragma once

#include <cstdint>

#include "demontape/params.hpp"

namespace demontape {

/// Configuration of a stochastic tape simulation. Each interval draws a fresh
/// bit from the incoming distribution, the demon state carries over, and the
/// joint state evolves by exact exponential-clock jumps until tau.
struct McConfig {
  Params params;
  double tau = 1.0;
  std::uint64_t n_bits = 100000;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 1000;

  /// Throws std::invalid_argument unless tau > 0 and n_bits > burn_in.
  void validate() const;
};

/// Empirical estimates over the intervals after burn-in. dq counts net
/// cooperative 0d->1u flips per interval (each extracts dE from the cold
/// reservoir). Standard errors come from batch means over up to 100 blocks,
/// which absorbs the serial correlation the demon carry-over induces.
struct McResult {
  double p0_out = 0.0;
  double p1_out = 0.0;
  double se_bit = 0.0;
  double dq = 0.0;
  double se_dq = 0.0;
  double demon_u = 0.0;   // demon u-frequency at interval starts
  double se_demon = 0.0;
  std::uint64_t intervals_used = 0;
};

/// Deterministic for a fixed config (counter-based per-interval streams).
McResult simulate_tape(const McConfig& cfg);

/// z-scores of the stochastic estimates against the analytic periodic steady
/// state; pass means all |z| < 4.
struct McComparison {
  McResult mc;
  double p1_analytic = 0.0;
  double dq_analytic = 0.0;
  double d_star_analytic = 0.0;
  double z_bit = 0.0;
  double z_dq = 0.0;
  double z_demon = 0.0;
  bool pass = false;
};

McComparison compare_with_analytic(const McConfig& cfg);

/// SplitMix64; used to derive independent per-interval streams from one seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]; never zero, so -log stays finite.
  double next_unit() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace demontape
