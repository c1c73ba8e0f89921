#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pq {

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All scheme parameters. q = 2^k_g so gadget decoding is exact binary peeling;
// the Omega constant in the B_P rule is fixed at 320 (puts the Hellinger bound
// under 1/50 with margin).
struct Params {
  uint64_t lambda = 0;  // tuple count
  uint64_t n = 0;       // ring dimension, power of two
  uint64_t k_g = 0;     // log2 q
  uint64_t q = 0;       // modulus, 2^k_g
  uint64_t m_bar = 0;
  uint64_t m = 0;       // m_bar + k_g
  uint64_t B_V = 0;     // key-noise width
  uint64_t B_P = 0;     // evaluation-noise width
  uint64_t C_T = 0;     // inversion constant
  uint64_t w = 0;       // n * k_g, bit length of a domain element

  bool operator==(const Params&) const = default;
};

inline double hellinger_bound(const Params& p) {
  return 1.0 - std::exp(-2.0 * M_PI * static_cast<double>(p.m) * static_cast<double>(p.n) *
                        static_cast<double>(p.B_V) / static_cast<double>(p.B_P));
}

namespace detail {

// 2^k_g >= 2*B_P*sqrt(n*m)*C_T*sqrt(n*k_g), compared with both sides squared
// so the check is exact in integers.
inline bool modulus_large_enough(uint64_t k_g, uint64_t n, uint64_t m, uint64_t B_P,
                                 uint64_t C_T) {
  if (2 * k_g >= 124) return true;
  unsigned __int128 lhs = static_cast<unsigned __int128>(1) << (2 * k_g);
  unsigned __int128 rhs = 4;
  rhs *= static_cast<unsigned __int128>(B_P) * B_P;
  rhs *= n * m;
  rhs *= static_cast<unsigned __int128>(C_T) * C_T;
  rhs *= n * k_g;
  return lhs >= rhs;
}

}  // namespace detail

inline void validate_params(const Params& p) {
  auto fail = [](const std::string& msg) { throw ParamError("invalid params: " + msg); };
  if (p.n == 0 || (p.n & (p.n - 1)) != 0) fail("n must be a positive power of two");
  if (p.k_g == 0 || p.k_g > 62) fail("k_g out of range");
  if (p.q != (uint64_t(1) << p.k_g)) fail("q must equal 2^k_g");
  if (p.m != p.m_bar + p.k_g) fail("m must equal m_bar + k_g");
  if (p.m_bar == 0 || p.B_V == 0 || p.C_T == 0 || p.lambda == 0) fail("zero parameter");
  if (p.w != p.n * p.k_g) fail("w must equal n*k_g");
  if (static_cast<unsigned __int128>(p.B_P) <
      static_cast<unsigned __int128>(320) * p.n * p.m * p.B_V)
    fail("B_P below 320*n*m*B_V");
  if (!detail::modulus_large_enough(p.k_g, p.n, p.m, p.B_P, p.C_T))
    fail("2*B_P*sqrt(n*m) exceeds q/(C_T*sqrt(n*log q))");
  if (hellinger_bound(p) > 0.02) fail("Hellinger bound above 1/50");
}

// Fixed-point search for the smallest k_g that fits B_P = 320*n*m*B_V.
inline Params build_params(uint64_t n, uint64_t m_bar, uint64_t B_V, uint64_t lambda,
                           uint64_t C_T) {
  if (n == 0 || (n & (n - 1)) != 0) throw ParamError("n must be a positive power of two");
  if (m_bar == 0 || B_V == 0 || lambda == 0 || C_T == 0)
    throw ParamError("all builder inputs must be positive");
  for (uint64_t k_g = 2; k_g <= 62; k_g++) {
    uint64_t m = m_bar + k_g;
    unsigned __int128 bp = static_cast<unsigned __int128>(320) * n * m * B_V;
    if (bp >= (static_cast<unsigned __int128>(1) << 62))
      throw ParamError("no feasible k_g <= 62 for the requested inputs");
    uint64_t B_P = static_cast<uint64_t>(bp);
    if (!detail::modulus_large_enough(k_g, n, m, B_P, C_T)) continue;
    Params p;
    p.lambda = lambda;
    p.n = n;
    p.k_g = k_g;
    p.q = uint64_t(1) << k_g;
    p.m_bar = m_bar;
    p.m = m;
    p.B_V = B_V;
    p.B_P = B_P;
    p.C_T = C_T;
    p.w = n * k_g;
    validate_params(p);
    return p;
  }
  throw ParamError("no feasible k_g <= 62 for the requested inputs");
}

}  // namespace pq
