#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

#include "pq/dgauss.hpp"
#include "pq/gadget.hpp"
#include "pq/params.hpp"
#include "pq/ring.hpp"

namespace pq {

// Public key of the RLWE noisy trapdoor claw-free family: k = (a, a*s + e).
struct NtcfKey {
  Params params;
  RingVector a;
  RingVector v;
};

// kappa = (tau, k, s)
struct NtcfTrapdoor {
  GadgetTrapdoor gadget;
  NtcfKey key;
  RingElement s;
};

namespace detail {

// Centered residual of a ring vector as a flat integer vector of length n*m.
inline std::vector<int64_t> centered_coeffs(const RingVector& v) {
  std::vector<int64_t> out;
  if (v.empty()) return out;
  out.reserve(v.size() * v[0].n());
  for (const auto& e : v)
    for (uint64_t c : e.coeffs) out.push_back(centered(c, e.q));
  return out;
}

inline RingVector shift_target(const NtcfKey& k, int b, const RingElement& x) {
  RingVector t = scalar_mul_vec(k.a, x);
  if (b) t = vec_add(t, k.v);
  return t;
}

}  // namespace detail

inline std::pair<NtcfKey, NtcfTrapdoor> gen_f(const Params& p, std::mt19937_64& rng) {
  auto [a, tau] = gen_trap(p, rng);
  RingElement s = ring_uniform(p.q, p.n, rng);
  GaussParams chi{p.B_V, p.n * p.m};
  std::vector<int64_t> e = dgauss_sample(chi, rng);
  RingVector v = scalar_mul_vec(a, s);
  size_t idx = 0;
  for (auto& ve : v)
    for (auto& c : ve.coeffs) c = (c + static_cast<uint64_t>(e[idx++])) & (p.q - 1);
  NtcfKey key{p, std::move(a), std::move(v)};
  NtcfTrapdoor td{std::move(tau), key, std::move(s)};
  return {std::move(key), std::move(td)};
}

// log of the unnormalized density (f'_{k,b}(x))(y); -inf outside the support.
// Computable from the public key alone: the b=1 shift is exactly v.
inline long double log_density_fprime(const NtcfKey& k, int b, const RingElement& x,
                                      const RingVector& y) {
  RingVector r = vec_sub(y, detail::shift_target(k, b, x));
  GaussParams g{k.params.B_P, k.params.n * k.params.m};
  auto flat = detail::centered_coeffs(r);
  return dgauss_log_rho(g, flat);
}

inline long double density_fprime(const NtcfKey& k, int b, const RingElement& x,
                                  const RingVector& y) {
  long double lr = log_density_fprime(k, b, x, y);
  return std::isinf(lr) ? 0.0L : expl(lr);
}

// y = a*x + b*v + e'', e'' from the truncated Gaussian of width B_P.
inline RingVector sample_image(const NtcfKey& k, int b, const RingElement& x,
                               std::mt19937_64& rng) {
  GaussParams g{k.params.B_P, k.params.n * k.params.m};
  std::vector<int64_t> e = dgauss_sample(g, rng);
  RingVector y = detail::shift_target(k, b, x);
  size_t idx = 0;
  for (auto& ye : y)
    for (auto& c : ye.coeffs) c = (c + static_cast<uint64_t>(e[idx++])) & (k.params.q - 1);
  return y;
}

// Chk_F: exact integer test |y - a*x - b*v|^2 <= B_P^2 * n * m. No trapdoor.
inline bool chk_f(const NtcfKey& k, int b, const RingElement& x, const RingVector& y) {
  const Params& p = k.params;
  u128 bound_sq = u128(p.B_P) * p.B_P * (p.n * p.m);
  return centered_norm_sq(vec_sub(y, detail::shift_target(k, b, x))) <= bound_sq;
}

inline u128 inv_norm_bound_sq(const Params& p) {
  // residual bound 2*B_P*sqrt(n*m), squared
  return u128(4) * p.B_P * p.B_P * (p.n * p.m);
}

// Inv_F(kappa, b, y) = Invert(a, tau, y) - b*s, or nullopt when y has no
// admissible preimage within the 2*B_P*sqrt(n*m) residual.
inline std::optional<RingElement> inv_f(const NtcfTrapdoor& td, int b, const RingVector& y) {
  const Params& p = td.key.params;
  auto t = trap_invert(td.key.a, td.gadget, y, p, inv_norm_bound_sq(p));
  if (!t) return std::nullopt;
  return b ? ring_sub(*t, td.s) : *t;
}

// Both preimages of y; the pair satisfies x0 = x1 + s.
inline std::optional<std::pair<RingElement, RingElement>> claw_pair(const NtcfTrapdoor& td,
                                                                    const RingVector& y) {
  const Params& p = td.key.params;
  auto t = trap_invert(td.key.a, td.gadget, y, p, inv_norm_bound_sq(p));
  if (!t) return std::nullopt;
  RingElement x0 = *t;
  RingElement x1 = ring_sub(x0, td.s);
  return std::make_pair(std::move(x0), std::move(x1));
}

}  // namespace pq
