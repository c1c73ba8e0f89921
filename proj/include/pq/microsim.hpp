#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

// Toy claw-pair function over Z_N: f_b(x) = x + b*s mod N. Injective per branch
// with claw relation x0 = x1 + s; no claw-freeness claimed -- this is a
// functional test double for the completeness derivation.
struct ToyTcf {
  uint32_t N = 0;
  uint32_t s = 0;
};

struct MicroOutcome {
  uint32_t y = 0;
  uint8_t m = 0;
  uint32_t d = 0;
  uint8_t m_prime = 0;
  double prob = 0.0;
};

namespace microsim {

inline uint32_t domain_bits(uint32_t N) {
  uint32_t w = 0;
  while ((uint32_t(1) << w) < N) w++;
  return w == 0 ? 1 : w;
}

inline int parity(uint32_t x) { return std::popcount(x) & 1; }

// Real statevector over qubits (b | u[w] | t), index = b*2^(w+1) + u*2 + t.
using State = std::vector<double>;

inline double state_norm_sq(const State& psi) {
  double s = 0.0;
  for (double a : psi) s += a * a;
  return s;
}

inline void check_unit(const State& psi, const char* stage) {
  if (std::abs(state_norm_sq(psi) - 1.0) > 1e-12)
    throw std::logic_error(std::string("microsim: norm lost at stage ") + stage);
}

// State after the image measurement: alpha0|0,x0bar> + alpha1|1,x1bar>, target |->.
inline State post_image_state(double alpha0, double alpha1, uint32_t x0bar, uint32_t x1bar,
                              uint32_t w) {
  State psi(size_t(1) << (w + 2), 0.0);
  const double inv_sqrt2 = std::sqrt(0.5);
  auto idx = [w](uint32_t b, uint32_t u, uint32_t t) {
    return (size_t(b) << (w + 1)) | (size_t(u) << 1) | t;
  };
  psi[idx(0, x0bar, 0)] = alpha0 * inv_sqrt2;
  psi[idx(0, x0bar, 1)] = -alpha0 * inv_sqrt2;
  psi[idx(1, x1bar, 0)] = alpha1 * inv_sqrt2;
  psi[idx(1, x1bar, 1)] = -alpha1 * inv_sqrt2;
  return psi;
}

// U_H on registers 2,3: |u>|t> -> |u>|t + H(u)>. h(u) must be defined for all
// u the state touches; codes outside the domain carry zero amplitude.
template <typename HashFn>
inline void apply_oracle_phase(State& psi, uint32_t w, HashFn&& h) {
  for (uint32_t u = 0; u < (uint32_t(1) << w); u++) {
    if (!h(u)) continue;
    for (uint32_t b = 0; b < 2; b++) {
      size_t base = (size_t(b) << (w + 1)) | (size_t(u) << 1);
      std::swap(psi[base], psi[base + 1]);
    }
  }
}

// Hadamard on every qubit: in-place Walsh-Hadamard transform.
inline void hadamard_all(State& psi) {
  const size_t dim = psi.size();
  for (size_t len = 1; len < dim; len <<= 1)
    for (size_t i = 0; i < dim; i += len << 1)
      for (size_t j = i; j < i + len; j++) {
        double a = psi[j], b = psi[j + len];
        psi[j] = a + b;
        psi[j + len] = a - b;
      }
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& a : psi) a *= norm;
}

// Full Hadamard-measurement distribution of alpha0|0,x0bar> + alpha1|1,x1bar>
// after phase kickback of H. Requires alpha0^2 + alpha1^2 = 1.
template <typename HashFn>
inline std::vector<MicroOutcome> measure_two_point_state(double alpha0, double alpha1,
                                                         uint32_t x0bar, uint32_t x1bar,
                                                         uint32_t w, HashFn&& h) {
  if (std::abs(alpha0 * alpha0 + alpha1 * alpha1 - 1.0) > 1e-9)
    throw std::invalid_argument("amplitudes must be normalized");
  State psi = post_image_state(alpha0, alpha1, x0bar, x1bar, w);
  check_unit(psi, "prep");
  apply_oracle_phase(psi, w, h);
  check_unit(psi, "oracle");
  hadamard_all(psi);
  check_unit(psi, "hadamard");
  std::vector<MicroOutcome> out;
  for (size_t i = 0; i < psi.size(); i++) {
    double p = psi[i] * psi[i];
    if (p == 0.0) continue;
    MicroOutcome o;
    o.m_prime = static_cast<uint8_t>(i & 1);
    o.d = static_cast<uint32_t>((i >> 1) & ((size_t(1) << w) - 1));
    o.m = static_cast<uint8_t>(i >> (w + 1));
    o.prob = p;
    out.push_back(o);
  }
  return out;
}

}  // namespace microsim

// Exhaustive outcome distribution of the honest prover circuit on the toy
// function: uniform image measurement, oracle phase, Hadamard layer. h_table
// supplies H on all of Z_N.
inline std::vector<MicroOutcome> run_honest_circuit(const ToyTcf& toy,
                                                    const std::vector<uint8_t>& h_table) {
  if (toy.N == 0 || toy.N > 1024) throw std::invalid_argument("toy domain too large");
  if (h_table.size() != toy.N) throw std::invalid_argument("h_table must cover Z_N");
  const uint32_t w = microsim::domain_bits(toy.N);
  auto h = [&](uint32_t u) -> int { return u < toy.N ? (h_table[u] & 1) : 0; };
  std::vector<MicroOutcome> all;
  const double py = 1.0 / toy.N;  // each y has exactly one preimage per branch
  const double inv_sqrt2 = std::sqrt(0.5);
  for (uint32_t y = 0; y < toy.N; y++) {
    uint32_t x0 = y % toy.N;
    uint32_t x1 = (y + toy.N - toy.s % toy.N) % toy.N;
    auto outcomes = microsim::measure_two_point_state(inv_sqrt2, inv_sqrt2, x0, x1, w, h);
    for (auto& o : outcomes) {
      o.y = y;
      o.prob *= py;
      all.push_back(o);
    }
  }
  return all;
}

// Generalization of the equal-amplitude derivation to a two-term superposition;
// this is the ground-truth oracle for the closed-form m-probability.
inline std::vector<MicroOutcome> run_unequal_amplitudes(double alpha0, double alpha1,
                                                        uint32_t x0, uint32_t x1, uint32_t w,
                                                        int h0, int h1) {
  auto h = [&](uint32_t u) -> int {
    if (u == x0) return h0;
    if (u == x1) return h1;
    return 0;
  };
  return microsim::measure_two_point_state(alpha0, alpha1, x0, x1, w, h);
}

// The verification equation m = d.(x0bar ^ x1bar) ^ h0 ^ h1 on toy encodings.
inline bool toy_equation_holds(const MicroOutcome& o, uint32_t x0, uint32_t x1, int h0, int h1) {
  return o.m == ((microsim::parity(o.d & (x0 ^ x1)) ^ h0 ^ h1) & 1);
}

}  // namespace pq
