#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "pq/rng.hpp"

namespace pq {

using u128 = unsigned __int128;

// Element of R_q = Z_q[X]/(X^n + 1), coefficients kept in [0, q). The protocol
// always uses q = 2^k_g; general q is supported for the arithmetic itself.
struct RingElement {
  uint64_t q = 0;
  std::vector<uint64_t> coeffs;

  RingElement() = default;
  RingElement(uint64_t q_, size_t n) : q(q_), coeffs(n, 0) {}
  RingElement(uint64_t q_, std::vector<uint64_t> c) : q(q_), coeffs(std::move(c)) {
    for (auto& x : coeffs) x %= q;
  }

  size_t n() const { return coeffs.size(); }

  bool operator==(const RingElement&) const = default;
};

using RingVector = std::vector<RingElement>;

// Bits packed little-endian within bytes; unused high bits of the last byte are zero.
struct BitString {
  size_t nbits = 0;
  std::vector<uint8_t> bytes;

  BitString() = default;
  explicit BitString(size_t w) : nbits(w), bytes((w + 7) / 8, 0) {}

  bool get(size_t i) const { return (bytes[i / 8] >> (i % 8)) & 1; }
  void set(size_t i, bool v) {
    if (v)
      bytes[i / 8] |= uint8_t(1u << (i % 8));
    else
      bytes[i / 8] &= uint8_t(~(1u << (i % 8)));
  }

  bool operator==(const BitString&) const = default;
};

inline void require_same_ring(const RingElement& a, const RingElement& b) {
  if (a.q != b.q || a.n() != b.n())
    throw std::invalid_argument("ring parameter mismatch (n or q differ)");
}

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
  require_same_ring(a, b);
  RingElement r(a.q, a.n());
  for (size_t i = 0; i < a.n(); i++) {
    uint64_t s = a.coeffs[i] + b.coeffs[i];
    r.coeffs[i] = s >= a.q ? s - a.q : s;
  }
  return r;
}

inline RingElement ring_sub(const RingElement& a, const RingElement& b) {
  require_same_ring(a, b);
  RingElement r(a.q, a.n());
  for (size_t i = 0; i < a.n(); i++) {
    uint64_t s = a.coeffs[i] + a.q - b.coeffs[i];
    r.coeffs[i] = s >= a.q ? s - a.q : s;
  }
  return r;
}

inline RingElement ring_neg(const RingElement& a) {
  RingElement r(a.q, a.n());
  for (size_t i = 0; i < a.n(); i++)
    r.coeffs[i] = a.coeffs[i] == 0 ? 0 : a.q - a.coeffs[i];
  return r;
}

// Schoolbook negacyclic convolution, X^n == -1. Products accumulate in 128-bit
// so there is no overflow for q up to 2^40 and n up to 2^16. For q a power of
// two the final reduction is a mask (2^64 is a multiple of q, so the wrapped
// difference pos - neg is already exact mod q).
inline RingElement ring_mul(const RingElement& a, const RingElement& b) {
  require_same_ring(a, b);
  const size_t n = a.n();
  const uint64_t q = a.q;
  std::vector<u128> pos(n, 0), neg(n, 0);
  for (size_t i = 0; i < n; i++) {
    const uint64_t ai = a.coeffs[i];
    if (ai == 0) continue;
    size_t j = 0;
    for (size_t k = i; k < n; k++, j++) pos[k] += u128(ai) * b.coeffs[j];
    for (size_t k = 0; j < n; k++, j++) neg[k] += u128(ai) * b.coeffs[j];
  }
  RingElement r(q, n);
  if ((q & (q - 1)) == 0) {
    const uint64_t mask = q - 1;
    for (size_t k = 0; k < n; k++)
      r.coeffs[k] = (static_cast<uint64_t>(pos[k]) - static_cast<uint64_t>(neg[k])) & mask;
  } else {
    for (size_t k = 0; k < n; k++) {
      uint64_t p = static_cast<uint64_t>(pos[k] % q);
      uint64_t m = static_cast<uint64_t>(neg[k] % q);
      r.coeffs[k] = p >= m ? p - m : p + q - m;
    }
  }
  return r;
}

inline RingElement ring_const(uint64_t q, size_t n, uint64_t c) {
  RingElement r(q, n);
  r.coeffs[0] = c % q;
  return r;
}

inline RingElement ring_uniform(uint64_t q, size_t n, std::mt19937_64& rng) {
  RingElement r(q, n);
  if ((q & (q - 1)) == 0) {
    for (size_t i = 0; i < n; i++) r.coeffs[i] = rand_below_pow2(rng, q);
  } else {
    std::uniform_int_distribution<uint64_t> dist(0, q - 1);
    for (size_t i = 0; i < n; i++) r.coeffs[i] = dist(rng);
  }
  return r;
}

inline RingVector scalar_mul_vec(const RingVector& a, const RingElement& x) {
  RingVector r;
  r.reserve(a.size());
  for (const auto& ai : a) r.push_back(ring_mul(ai, x));
  return r;
}

inline RingVector vec_add(const RingVector& a, const RingVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ring vector length mismatch");
  RingVector r;
  r.reserve(a.size());
  for (size_t i = 0; i < a.size(); i++) r.push_back(ring_add(a[i], b[i]));
  return r;
}

inline RingVector vec_sub(const RingVector& a, const RingVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ring vector length mismatch");
  RingVector r;
  r.reserve(a.size());
  for (size_t i = 0; i < a.size(); i++) r.push_back(ring_sub(a[i], b[i]));
  return r;
}

// Centered representative in (-q/2, q/2].
inline int64_t centered(uint64_t c, uint64_t q) {
  return c <= q / 2 ? static_cast<int64_t>(c) : static_cast<int64_t>(c) - static_cast<int64_t>(q);
}

inline u128 centered_norm_sq(const RingElement& a) {
  u128 s = 0;
  for (uint64_t c : a.coeffs) {
    int64_t v = centered(c, a.q);
    uint64_t av = v < 0 ? static_cast<uint64_t>(-v) : static_cast<uint64_t>(v);
    s += u128(av) * av;
  }
  return s;
}

inline u128 centered_norm_sq(const RingVector& v) {
  u128 s = 0;
  for (const auto& e : v) s += centered_norm_sq(e);
  return s;
}

inline double centered_norm(const RingVector& v) {
  long double s = static_cast<long double>(centered_norm_sq(v));
  return static_cast<double>(sqrtl(s));
}

inline size_t bits_per_coeff(uint64_t q) {
  // ceil(log2 q)
  return static_cast<size_t>(std::bit_width(q - 1));
}

// Coefficient-major, little-endian within each coefficient; w = n * log2(q) bits.
inline BitString bit_decomp(const RingElement& x) {
  const size_t kb = bits_per_coeff(x.q);
  BitString d(x.n() * kb);
  size_t pos = 0;
  for (uint64_t c : x.coeffs)
    for (size_t t = 0; t < kb; t++, pos++)
      if ((c >> t) & 1) d.set(pos, true);
  return d;
}

// Inverse of bit_decomp. Throws if the bit length does not match n * log2(q).
inline RingElement bit_decomp_inverse(const BitString& d, uint64_t q, size_t n) {
  const size_t kb = bits_per_coeff(q);
  if (d.nbits != n * kb) throw std::invalid_argument("bit string length does not match ring");
  RingElement x(q, n);
  size_t pos = 0;
  for (size_t i = 0; i < n; i++) {
    uint64_t c = 0;
    for (size_t t = 0; t < kb; t++, pos++)
      if (d.get(pos)) c |= uint64_t(1) << t;
    if (c >= q) throw std::invalid_argument("decoded coefficient out of range");
    x.coeffs[i] = c;
  }
  return x;
}

inline BitString bits_xor(const BitString& a, const BitString& b) {
  if (a.nbits != b.nbits) throw std::invalid_argument("bit string length mismatch");
  BitString r(a.nbits);
  for (size_t i = 0; i < a.bytes.size(); i++) r.bytes[i] = a.bytes[i] ^ b.bytes[i];
  return r;
}

// Parity of the bitwise AND, i.e. d^T u over GF(2).
inline int dot_mod2(const BitString& d, const BitString& u) {
  if (d.nbits != u.nbits) throw std::invalid_argument("bit string length mismatch");
  unsigned acc = 0;
  for (size_t i = 0; i < d.bytes.size(); i++)
    acc ^= static_cast<unsigned>(std::popcount(static_cast<unsigned>(d.bytes[i] & u.bytes[i])));
  return static_cast<int>(acc & 1);
}

inline BitString random_bits(size_t w, std::mt19937_64& rng) {
  BitString d(w);
  for (auto& b : d.bytes) b = static_cast<uint8_t>(rng());
  if (w % 8) d.bytes.back() &= uint8_t((1u << (w % 8)) - 1);
  return d;
}

// Canonical byte encoding: each coefficient as 8-byte little-endian.
inline void encode_ring_element(const RingElement& x, std::vector<uint8_t>& out) {
  for (uint64_t c : x.coeffs)
    for (int i = 0; i < 8; i++) out.push_back(static_cast<uint8_t>(c >> (8 * i)));
}

inline std::vector<uint8_t> encode_ring_element(const RingElement& x) {
  std::vector<uint8_t> out;
  out.reserve(8 * x.n());
  encode_ring_element(x, out);
  return out;
}

inline std::vector<uint8_t> encode_ring_vector(const RingVector& v) {
  std::vector<uint8_t> out;
  for (const auto& e : v) encode_ring_element(e, out);
  return out;
}

}  // namespace pq
