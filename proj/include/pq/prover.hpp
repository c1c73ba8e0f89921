#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pq/ntcf.hpp"
#include "pq/oracle.hpp"
#include "pq/protocol.hpp"

namespace pq {

enum class StrategyKind { honest, random_guess, half_claw, trapdoor_cheat };

inline bool needs_trapdoor(StrategyKind k) {
  return k == StrategyKind::honest || k == StrategyKind::trapdoor_cheat;
}

inline const char* strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::honest: return "honest";
    case StrategyKind::random_guess: return "random_guess";
    case StrategyKind::half_claw: return "half_claw";
    case StrategyKind::trapdoor_cheat: return "trapdoor_cheat";
  }
  return "?";
}

// Probability that the Hadamard measurement of alpha0|0,x0> + alpha1|1,x1>
// (after phase kickback of H) yields an equation-satisfying (m, d); d itself
// is exactly uniform regardless of the amplitudes.
inline double correct_m_probability(long double alpha0, long double alpha1) {
  if (alpha0 < 0 || alpha1 < 0) throw std::domain_error("amplitudes must be nonnegative");
  long double ss = alpha0 * alpha0 + alpha1 * alpha1;
  if (ss <= 0) throw std::domain_error("at least one amplitude must be positive");
  long double sum = alpha0 + alpha1;
  return static_cast<double>(sum * sum / (2.0L * ss));
}

// Trapdoor-assisted emulator of the honest quantum prover's exact output law:
// sample an image, recover the claw, and draw (m, d) from the closed-form
// measurement distribution (d uniform; m correct with the amplitude-dependent
// probability). The trapdoor stands in for the quantum device.
inline std::vector<ProverTuple> prove_honest(const NtcfTrapdoor& td, RandomOracle& oracle,
                                             std::mt19937_64& rng) {
  const NtcfKey& key = td.key;
  const Params& p = key.params;
  std::vector<ProverTuple> tuples;
  tuples.reserve(p.lambda);
  for (uint64_t i = 0; i < p.lambda; i++) {
    int b = rand_bit(rng) ? 1 : 0;
    RingElement x = ring_uniform(p.q, p.n, rng);
    RingVector y = sample_image(key, b, x, rng);
    auto claw = claw_pair(td, y);
    if (!claw) throw std::logic_error("honest image failed to invert; parameters inconsistent");
    long double l0 = log_density_fprime(key, 0, claw->first, y);
    long double l1 = log_density_fprime(key, 1, claw->second, y);
    // normalize in log-space; a truncated-away branch contributes amplitude 0
    long double mx = std::max(l0, l1);
    long double a0 = std::isinf(l0) ? 0.0L : expl((l0 - mx) / 2);
    long double a1 = std::isinf(l1) ? 0.0L : expl((l1 - mx) / 2);
    ProverTuple t;
    t.y = std::move(y);
    t.d = random_bits(p.w, rng);
    int h0 = oracle.query(oracle_input(claw->first));
    int h1 = oracle.query(oracle_input(claw->second));
    int m_sat = dot_mod2(t.d, bits_xor(bit_decomp(claw->first), bit_decomp(claw->second))) ^
                h0 ^ h1;
    bool correct = rand_unit(rng) <= correct_m_probability(a0, a1);
    t.m = static_cast<uint8_t>(correct ? m_sat : m_sat ^ 1);
    tuples.push_back(std::move(t));
  }
  return tuples;
}

// Classical cheating strategies for the soundness lab.
inline std::vector<ProverTuple> prove_cheat(StrategyKind strategy, const NtcfKey& key,
                                            RandomOracle& oracle, const NtcfTrapdoor* td,
                                            std::mt19937_64& rng) {
  const Params& p = key.params;
  if (strategy == StrategyKind::honest) {
    if (!td) throw std::invalid_argument("honest strategy requires the trapdoor");
    return prove_honest(*td, oracle, rng);
  }
  if (strategy == StrategyKind::trapdoor_cheat && !td)
    throw std::invalid_argument("trapdoor_cheat requires the trapdoor");
  std::vector<ProverTuple> tuples;
  tuples.reserve(p.lambda);
  for (uint64_t i = 0; i < p.lambda; i++) {
    int b = rand_bit(rng) ? 1 : 0;
    RingElement x = ring_uniform(p.q, p.n, rng);
    ProverTuple t;
    t.d = random_bits(p.w, rng);
    switch (strategy) {
      case StrategyKind::random_guess:
        t.y = sample_image(key, b, x, rng);
        t.m = rand_bit(rng) ? 1 : 0;
        break;
      case StrategyKind::half_claw: {
        // Best effort knowing one branch: the other branch's hash bit stays uniform.
        t.y = sample_image(key, b, x, rng);
        int h = oracle.query(oracle_input(x));
        t.m = static_cast<uint8_t>(dot_mod2(t.d, bit_decomp(x)) ^ h);
        break;
      }
      case StrategyKind::trapdoor_cheat: {
        t.y = sample_image(key, 0, x, rng);
        RingElement x1 = ring_sub(x, td->s);
        int h0 = oracle.query(oracle_input(x));
        int h1 = oracle.query(oracle_input(x1));
        t.m = static_cast<uint8_t>(dot_mod2(t.d, bits_xor(bit_decomp(x), bit_decomp(x1))) ^
                                   h0 ^ h1);
        break;
      }
      default:
        throw std::logic_error("unreachable");
    }
    tuples.push_back(std::move(t));
  }
  return tuples;
}

}  // namespace pq
