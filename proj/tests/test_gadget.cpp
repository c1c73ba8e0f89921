#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "pq/dgauss.hpp"
#include "pq/gadget.hpp"
#include "pq/params.hpp"
#include "pq/rng.hpp"

using namespace pq;

namespace {

// Small unvalidated parameter set for scalar (n=1) decode experiments.
Params toy_params(uint64_t k_g, uint64_t n = 1) {
  Params p;
  p.lambda = 1;
  p.n = n;
  p.k_g = k_g;
  p.q = uint64_t(1) << k_g;
  p.m_bar = 1;
  p.m = p.m_bar + k_g;
  p.B_V = 1;
  p.B_P = 1;
  p.C_T = 1;
  p.w = n * k_g;
  return p;
}

// u_j = 2^j * s + e_j over Z_q, as scalar ring elements.
std::vector<RingElement> noisy_gadget(uint64_t s, const std::vector<int64_t>& e, uint64_t q,
                                      uint64_t k_g) {
  std::vector<RingElement> u;
  for (uint64_t j = 0; j < k_g; j++) {
    uint64_t v = ((uint64_t(1) << j) * s + static_cast<uint64_t>(e[j])) & (q - 1);
    u.push_back(RingElement(q, std::vector<uint64_t>{v}));
  }
  return u;
}

// Walk all noise vectors with each |e_j| < q/4; calls f(s, e) for every combo.
template <typename F>
void for_all_small_noise(uint64_t k_g, F f) {
  const uint64_t q = uint64_t(1) << k_g;
  const int64_t lim = static_cast<int64_t>(q / 4) - 1;
  std::vector<int64_t> e(k_g, -lim);
  for (uint64_t s = 0; s < q; s++) {
    std::fill(e.begin(), e.end(), -lim);
    for (;;) {
      f(s, e);
      size_t i = 0;
      while (i < k_g && ++e[i] > lim) e[i++] = -lim;
      if (i == k_g) break;
    }
  }
}

}  // namespace

TEST_CASE("exhaustive scalar decode recovers s for all noise < q/4") {
  for (uint64_t k_g : {uint64_t(3), uint64_t(4)}) {
    auto p = toy_params(k_g);
    for_all_small_noise(k_g, [&](uint64_t s, const std::vector<int64_t>& e) {
      auto dec = gadget_decode(noisy_gadget(s, e, p.q, k_g), p);
      REQUIRE(dec.has_value());
      REQUIRE(dec->coeffs[0] == s);
    });
  }
}

TEST_CASE("sampled scalar decode at k_g = 5") {
  auto p = toy_params(5);
  auto rng = make_rng(21);
  const int64_t lim = static_cast<int64_t>(p.q / 4) - 1;
  std::uniform_int_distribution<int64_t> noise(-lim, lim);
  for (int trial = 0; trial < 100000; trial++) {
    uint64_t s = rng() & (p.q - 1);
    std::vector<int64_t> e(p.k_g);
    for (auto& v : e) v = noise(rng);
    auto dec = gadget_decode(noisy_gadget(s, e, p.q, p.k_g), p);
    REQUIRE(dec.has_value());
    REQUIRE(dec->coeffs[0] == s);
  }
}

TEST_CASE("exhaustive decode contract over every input vector") {
  // For any u: if some s has all residuals strictly below q/4, decode must
  // return it; whatever decode returns must have all residuals <= q/4; and
  // decode may return nullopt only when no strict solution exists.
  for (uint64_t k_g : {uint64_t(3), uint64_t(4)}) {
    auto p = toy_params(k_g);
    const uint64_t q = p.q;
    const int64_t quarter = static_cast<int64_t>(q / 4);
    std::vector<uint64_t> u(k_g, 0);
    for (;;) {
      std::vector<RingElement> uv;
      for (uint64_t j = 0; j < k_g; j++) uv.push_back(RingElement(q, std::vector<uint64_t>{u[j]}));

      auto residual_ok = [&](uint64_t s, bool strict) {
        for (uint64_t j = 0; j < k_g; j++) {
          int64_t c = centered((u[j] - ((uint64_t(1) << j) * s)) & (q - 1), q);
          int64_t a = c < 0 ? -c : c;
          if (strict ? a >= quarter : a > quarter) return false;
        }
        return true;
      };
      int64_t strict_s = -1;
      for (uint64_t s = 0; s < q; s++)
        if (residual_ok(s, true)) strict_s = static_cast<int64_t>(s);

      auto dec = gadget_decode(uv, p);
      if (strict_s >= 0) {
        REQUIRE(dec.has_value());
        REQUIRE(dec->coeffs[0] == static_cast<uint64_t>(strict_s));
      }
      if (dec) REQUIRE(residual_ok(dec->coeffs[0], false));

      size_t i = 0;
      while (i < k_g && ++u[i] == q) u[i++] = 0;
      if (i == k_g) break;
    }
  }
}

TEST_CASE("gen_trap structural identity: a_{m_bar+j} + sum a_i r_ij = 2^j") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(22);
  auto [a, t] = gen_trap(p, rng);
  REQUIRE(a.size() == p.m);
  REQUIRE(t.r.size() == p.m_bar * p.k_g);
  for (uint64_t j = 0; j < p.k_g; j++) {
    RingElement acc = a[p.m_bar + j];
    for (uint64_t i = 0; i < p.m_bar; i++) acc = ring_add(acc, ring_mul(a[i], t.at(i, j)));
    CHECK(acc == ring_const(p.q, p.n, uint64_t(1) << j));
  }
  // trapdoor entries are ternary
  for (const auto& e : t.r)
    for (uint64_t c : e.coeffs) CHECK((c == 0 || c == 1 || c == p.q - 1));
}

TEST_CASE("gadget_combine on a*s is exactly g_j*s") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(23);
  auto [a, t] = gen_trap(p, rng);
  auto s = ring_uniform(p.q, p.n, rng);
  auto u = gadget_combine(scalar_mul_vec(a, s), t);
  REQUIRE(u.size() == p.k_g);
  for (uint64_t j = 0; j < p.k_g; j++)
    CHECK(u[j] == ring_mul(ring_const(p.q, p.n, uint64_t(1) << j), s));
}

TEST_CASE("gadget_combine is linear") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(24);
  auto [a, t] = gen_trap(p, rng);
  RingVector c1, c2;
  for (uint64_t i = 0; i < p.m; i++) {
    c1.push_back(ring_uniform(p.q, p.n, rng));
    c2.push_back(ring_uniform(p.q, p.n, rng));
  }
  auto u1 = gadget_combine(c1, t);
  auto u2 = gadget_combine(c2, t);
  auto u12 = gadget_combine(vec_add(c1, c2), t);
  for (uint64_t j = 0; j < p.k_g; j++) CHECK(u12[j] == ring_add(u1[j], u2[j]));
  RingVector wrong(p.m_bar);  // short vector
  CHECK_THROWS_AS(gadget_combine(wrong, t), std::invalid_argument);
}

TEST_CASE("trap_invert round trip at desk parameters") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(25);
  auto [a, t] = gen_trap(p, rng);
  GaussParams g{2 * p.B_P, p.n * p.m};
  u128 bound_sq = u128(2 * p.B_P) * (2 * p.B_P) * p.n * p.m;
  for (int trial = 0; trial < 300; trial++) {
    auto s = ring_uniform(p.q, p.n, rng);
    auto e = dgauss_sample(g, rng);
    RingVector c = scalar_mul_vec(a, s);
    size_t pos = 0;
    for (auto& el : c)
      for (auto& cc : el.coeffs) {
        cc = (cc + static_cast<uint64_t>(e[pos++])) & (p.q - 1);
      }
    auto dec = trap_invert(a, t, c, p, bound_sq);
    REQUIRE(dec.has_value());
    REQUIRE(*dec == s);
  }
}

TEST_CASE("trap_invert rejects vectors far from the lattice") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(26);
  auto [a, t] = gen_trap(p, rng);
  u128 bound_sq = u128(2 * p.B_P) * (2 * p.B_P) * p.n * p.m;
  int rejects = 0;
  for (int trial = 0; trial < 50; trial++) {
    RingVector c;
    for (uint64_t i = 0; i < p.m; i++) c.push_back(ring_uniform(p.q, p.n, rng));
    if (!trap_invert(a, t, c, p, bound_sq)) rejects++;
  }
  CHECK(rejects == 50);
}

TEST_CASE("uniform a_bar columns look uniform (chi-squared on low bits)") {
  auto p = build_params(64, 3, 1, 120, 8);
  auto rng = make_rng(27);
  // pool low 4 bits of all coefficients of the uniform block across keys
  std::vector<int64_t> counts(16, 0);
  int64_t total = 0;
  for (int key = 0; key < 40; key++) {
    auto [a, t] = gen_trap(p, rng);
    for (uint64_t i = 0; i < p.m_bar; i++)
      for (uint64_t c : a[i].coeffs) {
        counts[c & 15]++;
        total++;
      }
  }
  double expect = double(total) / 16.0;
  double chi2 = 0;
  for (auto c : counts) {
    double d = double(c) - expect;
    chi2 += d * d / expect;
  }
  CHECK(chi2 < 15 + 3.1 * std::sqrt(30.0) + 10);  // dof 15, far tail
}
