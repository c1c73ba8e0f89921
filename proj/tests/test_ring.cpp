#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "pq/ring.hpp"
#include "pq/rng.hpp"

using namespace pq;

namespace {

// Independent O(n^2) negacyclic convolution oracle: signed integer arithmetic
// with explicit sign tracking, reduced at the very end.
RingElement schoolbook_oracle(const RingElement& a, const RingElement& b) {
  const size_t n = a.n();
  const __int128 q = a.q;
  std::vector<__int128> acc(n, 0);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      size_t k = (i + j) % n;
      int sign = (i + j) < n ? 1 : -1;
      acc[k] += sign * static_cast<__int128>(a.coeffs[i]) * static_cast<__int128>(b.coeffs[j]);
    }
  RingElement r(a.q, n);
  for (size_t k = 0; k < n; k++) {
    __int128 v = acc[k] % q;
    if (v < 0) v += q;
    r.coeffs[k] = static_cast<uint64_t>(v);
  }
  return r;
}

}  // namespace

TEST_CASE("ring_add identity and wraparound") {
  auto rng = make_rng(1);
  RingElement a(8, std::vector<uint64_t>{3, 5});
  RingElement b(8, std::vector<uint64_t>{5, 3});
  CHECK(ring_add(a, b) == RingElement(8, std::vector<uint64_t>{0, 0}));
  RingElement zero(8, 2);
  CHECK(ring_add(a, zero) == a);
}

TEST_CASE("ring_add matches integer-vector addition oracle") {
  auto rng = make_rng(2);
  for (int trial = 0; trial < 200; trial++) {
    auto a = ring_uniform(1 << 20, 16, rng);
    auto b = ring_uniform(1 << 20, 16, rng);
    auto c = ring_add(a, b);
    for (size_t i = 0; i < 16; i++)
      CHECK(c.coeffs[i] == (a.coeffs[i] + b.coeffs[i]) % (1 << 20));
  }
}

TEST_CASE("ring_add rejects mismatched parameters") {
  RingElement a(8, 2), b(16, 2), c(8, 4);
  CHECK_THROWS_AS(ring_add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(ring_add(a, c), std::invalid_argument);
  CHECK_THROWS_AS(ring_mul(a, b), std::invalid_argument);
}

TEST_CASE("ring_mul negacyclic wrap: X*X = -1 at n=2, q=17") {
  RingElement x(17, std::vector<uint64_t>{0, 1});
  auto r = ring_mul(x, x);
  CHECK(r == RingElement(17, std::vector<uint64_t>{16, 0}));
}

TEST_CASE("ring_mul multiplicative identity") {
  auto rng = make_rng(3);
  auto a = ring_uniform(uint64_t(1) << 35, 64, rng);
  auto one = ring_const(uint64_t(1) << 35, 64, 1);
  CHECK(ring_mul(a, one) == a);
}

TEST_CASE("ring_mul equals schoolbook sign-tracking oracle") {
  auto rng = make_rng(4);
  for (uint64_t q : {uint64_t(17), uint64_t(1) << 13, uint64_t(1) << 35}) {
    for (size_t n : {size_t(2), size_t(4), size_t(64)}) {
      for (int trial = 0; trial < 25; trial++) {
        auto a = ring_uniform(q, n, rng);
        auto b = ring_uniform(q, n, rng);
        REQUIRE(ring_mul(a, b) == schoolbook_oracle(a, b));
      }
    }
  }
}

TEST_CASE("ring_mul is commutative, associative, distributive") {
  auto rng = make_rng(5);
  for (size_t n : {size_t(2), size_t(4), size_t(64)}) {
    for (int trial = 0; trial < 20; trial++) {
      uint64_t q = uint64_t(1) << 30;
      auto a = ring_uniform(q, n, rng);
      auto b = ring_uniform(q, n, rng);
      auto c = ring_uniform(q, n, rng);
      CHECK(ring_mul(a, b) == ring_mul(b, a));
      CHECK(ring_mul(ring_mul(a, b), c) == ring_mul(a, ring_mul(b, c)));
      CHECK(ring_mul(a, ring_add(b, c)) == ring_add(ring_mul(a, b), ring_mul(a, c)));
    }
  }
}

TEST_CASE("scalar_mul_vec basics and componentwise oracle") {
  auto rng = make_rng(6);
  uint64_t q = uint64_t(1) << 20;
  RingVector a;
  for (int i = 0; i < 5; i++) a.push_back(ring_uniform(q, 8, rng));
  auto zero = RingElement(q, 8);
  auto one = ring_const(q, 8, 1);
  for (const auto& e : scalar_mul_vec(a, zero)) CHECK(e == zero);
  CHECK(scalar_mul_vec(a, one) == a);
  auto x = ring_uniform(q, 8, rng);
  auto prod = scalar_mul_vec(a, x);
  for (size_t i = 0; i < a.size(); i++) CHECK(prod[i] == schoolbook_oracle(a[i], x));
}

TEST_CASE("centered_norm zero, centering, and naive-summation oracle") {
  uint64_t q = uint64_t(1) << 16;
  RingVector zero{RingElement(q, 4)};
  CHECK(centered_norm(zero) == 0.0);

  RingElement e(q, 4);
  e.coeffs[2] = q - 1;  // centers to -1
  CHECK(centered_norm(RingVector{e}) == 1.0);
  CHECK(centered(q / 2, q) == static_cast<int64_t>(q / 2));
  CHECK(centered(q / 2 + 1, q) == -static_cast<int64_t>(q / 2) + 1);

  auto rng = make_rng(7);
  for (int trial = 0; trial < 50; trial++) {
    RingVector v{ring_uniform(q, 32, rng), ring_uniform(q, 32, rng)};
    long double acc = 0;
    for (const auto& el : v)
      for (uint64_t c : el.coeffs) {
        long double cc = static_cast<long double>(centered(c, q));
        acc += cc * cc;
      }
    double expect = static_cast<double>(sqrtl(acc));
    CHECK(centered_norm(v) == Catch::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("bit_decomp layout, round trip, injectivity") {
  // n=2, q=8 (3 bits/coeff), x=(5,1) -> bits 1,0,1, 1,0,0
  RingElement x(8, std::vector<uint64_t>{5, 1});
  auto d = bit_decomp(x);
  REQUIRE(d.nbits == 6);
  std::vector<int> expect{1, 0, 1, 1, 0, 0};
  for (size_t i = 0; i < 6; i++) CHECK(int(d.get(i)) == expect[i]);

  RingElement zero(8, 2);
  auto dz = bit_decomp(zero);
  for (size_t i = 0; i < dz.nbits; i++) CHECK_FALSE(dz.get(i));

  auto rng = make_rng(8);
  uint64_t q = uint64_t(1) << 12;
  std::set<std::vector<uint8_t>> seen;
  for (int trial = 0; trial < 1000; trial++) {
    auto r = ring_uniform(q, 8, rng);
    auto bits = bit_decomp(r);
    CHECK(bit_decomp_inverse(bits, q, 8) == r);
    seen.insert(bits.bytes);
  }
  // injective: distinct inputs map to distinct encodings (collision in 1000
  // uniform draws from 2^96 values would itself be a failure)
  CHECK(seen.size() >= 998);
}

TEST_CASE("dot_mod2 basics, oracle, linearity") {
  BitString z(16), u(16);
  CHECK(dot_mod2(z, u) == 0);
  z.set(7, true);
  u.set(7, true);
  CHECK(dot_mod2(z, u) == 1);

  auto rng = make_rng(9);
  for (int trial = 0; trial < 200; trial++) {
    auto d = random_bits(37, rng);
    auto a = random_bits(37, rng);
    auto b = random_bits(37, rng);
    int oracle = 0;
    for (size_t i = 0; i < 37; i++) oracle += int(d.get(i)) * int(a.get(i));
    CHECK(dot_mod2(d, a) == oracle % 2);
    CHECK(dot_mod2(d, bits_xor(a, b)) == (dot_mod2(d, a) ^ dot_mod2(d, b)));
  }
  BitString shorter(8);
  CHECK_THROWS_AS(dot_mod2(z, shorter), std::invalid_argument);
}
