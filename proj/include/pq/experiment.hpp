#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "pq/ntcf.hpp"
#include "pq/oracle.hpp"
#include "pq/protocol.hpp"
#include "pq/prover.hpp"

namespace pq {

struct ExperimentStats {
  int variant = 1;
  StrategyKind strategy = StrategyKind::random_guess;
  uint64_t trials = 0;
  uint64_t passes = 0;            // trials where the challenger output 1
  uint64_t tuple_total = 0;
  uint64_t tuple_passes = 0;
  std::array<uint64_t, 3> db_hits{};  // tuples with 0/1/2 claw preimages in the db
  uint64_t seed = 0;

  double pass_rate() const { return trials ? double(passes) / double(trials) : 0.0; }
  double per_tuple_rate() const {
    return tuple_total ? double(tuple_passes) / double(tuple_total) : 0.0;
  }
  // half-width of the normal-approximation 95% interval
  double pass_ci() const {
    if (!trials) return 0.0;
    double p = pass_rate();
    return 1.96 * std::sqrt(p * (1.0 - p) / double(trials));
  }
  double per_tuple_ci() const {
    if (!tuple_total) return 0.0;
    double p = per_tuple_rate();
    return 1.96 * std::sqrt(p * (1.0 - p) / double(tuple_total));
  }
};

namespace detail {

// Chk_F with a precomputed a*x, early-exiting the squared-norm accumulation;
// mismatched candidates blow past the bound within a coefficient or two.
inline bool chk_with_ax(const NtcfKey& k, int b, const RingVector& ax, const RingVector& y,
                        u128 bound_sq) {
  const uint64_t q = k.params.q;
  u128 acc = 0;
  for (size_t e = 0; e < y.size(); e++) {
    const auto& ye = y[e].coeffs;
    const auto& axe = ax[e].coeffs;
    const auto& ve = k.v[e].coeffs;
    for (size_t i = 0; i < ye.size(); i++) {
      uint64_t r = (ye[i] - axe[i] - (b ? ve[i] : 0)) & (q - 1);
      int64_t c = centered(r, q);
      uint64_t a = c < 0 ? uint64_t(-c) : uint64_t(c);
      acc += u128(a) * a;
      if (acc > bound_sq) return false;
    }
  }
  return true;
}

struct DbEntry {
  RingElement x;
  RingVector ax;
  int h;
};

// Distinct oracle-database entries that decode to a domain element, in
// first-query order, with a*x precomputed for the Chk scans.
inline std::vector<DbEntry> decode_database(const RandomOracle& oracle, const NtcfKey& key) {
  const Params& p = key.params;
  std::vector<DbEntry> out;
  std::set<std::vector<uint8_t>> seen;
  const size_t want = (p.w + 7) / 8;
  for (const auto& q : oracle.query_log()) {
    if (q.size() != want || !seen.insert(q).second) continue;
    BitString bits(p.w);
    bits.bytes.assign(q.begin(), q.end());
    if (p.w % 8 && (bits.bytes.back() >> (p.w % 8)) != 0) continue;
    auto h = oracle.lookup(q);
    if (!h) continue;
    DbEntry e;
    e.x = bit_decomp_inverse(bits, p.q, p.n);
    e.ax = scalar_mul_vec(key.a, e.x);
    e.h = *h;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

// Scans the oracle database for a pair passing Chk_F on both branches of some
// submitted y_i -- the extraction step of the claw-freeness reduction. Needs
// only the public key, exactly like the reduction itself.
inline std::optional<std::pair<RingElement, RingElement>> extract_claw_attempt(
    const RandomOracle& oracle, const NtcfKey& key, std::span<const ProverTuple> tuples) {
  auto db = detail::decode_database(oracle, key);
  const Params& p = key.params;
  u128 bound_sq = u128(p.B_P) * p.B_P * (p.n * p.m);
  for (const auto& t : tuples) {
    const detail::DbEntry* x0 = nullptr;
    const detail::DbEntry* x1 = nullptr;
    for (const auto& e : db) {
      if (!x0 && detail::chk_with_ax(key, 0, e.ax, t.y, bound_sq)) x0 = &e;
      if (!x1 && detail::chk_with_ax(key, 1, e.ax, t.y, bound_sq)) x1 = &e;
      if (x0 && x1) return std::make_pair(x0->x, x1->x);
    }
  }
  return std::nullopt;
}

// Experiments 1-3: the challenger's side of the random-oracle security game.
// Variant 1 inverts with the trapdoor; variants 2-3 only inspect the lazy
// database, substituting a fresh uniform bit for any incomplete pair.
inline ExperimentStats run_experiment(int variant, StrategyKind strategy, const Params& params,
                                      uint64_t trials, uint64_t seed) {
  if (variant < 1 || variant > 3) throw std::invalid_argument("experiment variant must be 1..3");
  ExperimentStats st;
  st.variant = variant;
  st.strategy = strategy;
  st.trials = trials;
  st.seed = seed;
  u128 bound_sq = u128(params.B_P) * params.B_P * (params.n * params.m);
  for (uint64_t trial = 0; trial < trials; trial++) {
    auto rng = make_rng(seed, 2 * trial);
    auto chal_rng = make_rng(seed, 2 * trial + 1);
    RandomOracle oracle(OracleMode::lazy, seed ^ (trial * 0x9e3779b97f4a7c15ull));
    auto [key, td] = gen_f(params, rng);
    auto tuples = prove_cheat(strategy, key, oracle,
                              needs_trapdoor(strategy) ? &td : nullptr, rng);
    st.tuple_total += tuples.size();
    if (variant == 1) {
      Verdict v = verify(td, tuples, oracle);
      for (auto f : v.per_tuple) st.tuple_passes += f;
      st.passes += v.accepted ? 1 : 0;
      continue;
    }
    auto db = detail::decode_database(oracle, key);
    uint64_t count = 0;
    bool any_complete = false;
    for (const auto& t : tuples) {
      const detail::DbEntry* e0 = nullptr;
      const detail::DbEntry* e1 = nullptr;
      for (const auto& e : db) {  // earliest-queried entry wins
        if (!e0 && detail::chk_with_ax(key, 0, e.ax, t.y, bound_sq)) e0 = &e;
        if (!e1 && detail::chk_with_ax(key, 1, e.ax, t.y, bound_sq)) e1 = &e;
        if (e0 && e1) break;
      }
      st.db_hits[(e0 ? 1 : 0) + (e1 ? 1 : 0)]++;
      bool pass;
      if (e0 && e1) {
        any_complete = true;
        pass = equation_holds(t, e0->x, e1->x, e0->h, e1->h);
      } else {
        pass = rand_bit(chal_rng);  // incomplete pair: a fresh uniform bit decides
      }
      if (pass) {
        count++;
        st.tuple_passes++;
      }
    }
    bool out = 4 * count > 3 * params.lambda;
    if (variant == 3 && !any_complete) out = false;
    st.passes += out ? 1 : 0;
  }
  return st;
}

}  // namespace pq
