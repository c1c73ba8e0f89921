#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pq/params.hpp"
#include "pq/ring.hpp"

namespace pq {

// MP12-style gadget trapdoor in the ring setting, specialized to q = 2^k_g and
// gadget g_j = 2^(j-1). r has ternary coefficients stored mod q.
struct GadgetTrapdoor {
  uint64_t m_bar = 0;
  uint64_t k_g = 0;
  std::vector<RingElement> r;  // m_bar x k_g, row-major: r[i*k_g + j]

  const RingElement& at(uint64_t i, uint64_t j) const { return r[i * k_g + j]; }
};

inline RingElement ring_ternary(uint64_t q, size_t n, std::mt19937_64& rng) {
  RingElement r(q, n);
  for (size_t i = 0; i < n; i++) {
    // uniform over {-1, 0, +1}
    uint64_t u;
    do {
      u = rng() & 3;
    } while (u == 3);
    r.coeffs[i] = u == 2 ? q - 1 : u;
  }
  return r;
}

// a = [a_bar | g_j - a_bar . r_j], so that combining with [r; I] isolates g_j*s.
inline std::pair<RingVector, GadgetTrapdoor> gen_trap(const Params& p, std::mt19937_64& rng) {
  GadgetTrapdoor t;
  t.m_bar = p.m_bar;
  t.k_g = p.k_g;
  t.r.reserve(p.m_bar * p.k_g);
  RingVector a;
  a.reserve(p.m);
  for (uint64_t i = 0; i < p.m_bar; i++) a.push_back(ring_uniform(p.q, p.n, rng));
  for (uint64_t i = 0; i < p.m_bar; i++)
    for (uint64_t j = 0; j < p.k_g; j++) t.r.push_back(ring_ternary(p.q, p.n, rng));
  for (uint64_t j = 0; j < p.k_g; j++) {
    RingElement g = ring_const(p.q, p.n, uint64_t(1) << j);
    for (uint64_t i = 0; i < p.m_bar; i++) g = ring_sub(g, ring_mul(a[i], t.at(i, j)));
    a.push_back(std::move(g));
  }
  return {std::move(a), std::move(t)};
}

// u_j = c_{m_bar+j} + sum_i c_i * r_{i,j}; for c = a*s + e this is g_j*s + e~_j.
inline std::vector<RingElement> gadget_combine(const RingVector& c, const GadgetTrapdoor& t) {
  if (c.size() != t.m_bar + t.k_g)
    throw std::invalid_argument("gadget_combine: vector length does not match trapdoor");
  std::vector<RingElement> u;
  u.reserve(t.k_g);
  for (uint64_t j = 0; j < t.k_g; j++) {
    RingElement acc = c[t.m_bar + j];
    for (uint64_t i = 0; i < t.m_bar; i++) acc = ring_add(acc, ring_mul(c[i], t.at(i, j)));
    u.push_back(std::move(acc));
  }
  return u;
}

// Recovers s from u_j = 2^(j-1)*s + e~_j, bit by bit from the top gadget level;
// exact whenever every centered |e~_j| < q/4. Returns nullopt on a level whose
// residual exceeds q/4 after subtracting the recovered bits.
inline std::optional<RingElement> gadget_decode(const std::vector<RingElement>& u,
                                                const Params& p) {
  if (u.size() != p.k_g) throw std::invalid_argument("gadget_decode: need k_g elements");
  const uint64_t q = p.q;
  const int64_t quarter = static_cast<int64_t>(q / 4);
  RingElement s(q, p.n);
  for (size_t pos = 0; pos < p.n; pos++) {
    uint64_t sc = 0;  // recovered low bits of this coefficient
    for (uint64_t t = 0; t < p.k_g; t++) {
      uint64_t j = p.k_g - 1 - t;  // level with gadget 2^j
      uint64_t shifted = (u[j].coeffs[pos] - ((uint64_t(1) << j) * sc)) & (q - 1);
      int64_t c = centered(shifted, q);
      uint64_t bit = (c > quarter || c < -quarter) ? 1 : 0;
      sc |= bit << t;
    }
    // consistency: every level's residual noise must stay below q/4
    for (uint64_t j = 0; j < p.k_g; j++) {
      uint64_t noise = (u[j].coeffs[pos] - ((uint64_t(1) << j) * sc)) & (q - 1);
      int64_t c = centered(noise, q);
      if (c > quarter || c < -quarter) return std::nullopt;
    }
    s.coeffs[pos] = sc;
  }
  return s;
}

// Invert(a, tau, a*s + e) = s, accepting only if the residual c - a*s has
// squared centered norm at most norm_bound_sq.
inline std::optional<RingElement> trap_invert(const RingVector& a, const GadgetTrapdoor& t,
                                              const RingVector& c, const Params& p,
                                              u128 norm_bound_sq) {
  auto s = gadget_decode(gadget_combine(c, t), p);
  if (!s) return std::nullopt;
  if (centered_norm_sq(vec_sub(c, scalar_mul_vec(a, *s))) > norm_bound_sq) return std::nullopt;
  return s;
}

// Serialization: m_bar and k_g as 2-byte LE, then r packed as 2-bit codes per
// coefficient (00=0, 01=+1, 10=-1), coefficient-major.
inline void serialize_trapdoor(const GadgetTrapdoor& t, uint64_t q, std::vector<uint8_t>& out) {
  out.push_back(static_cast<uint8_t>(t.m_bar));
  out.push_back(static_cast<uint8_t>(t.m_bar >> 8));
  out.push_back(static_cast<uint8_t>(t.k_g));
  out.push_back(static_cast<uint8_t>(t.k_g >> 8));
  uint8_t cur = 0;
  int filled = 0;
  for (const auto& e : t.r) {
    for (uint64_t c : e.coeffs) {
      uint8_t code = c == 0 ? 0 : (c == 1 ? 1 : 2);
      cur |= uint8_t(code << filled);
      filled += 2;
      if (filled == 8) {
        out.push_back(cur);
        cur = 0;
        filled = 0;
      }
    }
  }
  if (filled) out.push_back(cur);
  (void)q;
}

}  // namespace pq
