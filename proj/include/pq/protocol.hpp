#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "pq/ntcf.hpp"
#include "pq/oracle.hpp"
#include "pq/serialize.hpp"

namespace pq {

struct ProverTuple {
  RingVector y;
  uint8_t m = 0;   // one bit
  BitString d;     // length w
};

struct Verdict {
  bool accepted = false;
  uint32_t count = 0;
  std::vector<uint8_t> per_tuple;  // pass/fail flags
};

struct MalformedResponse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::pair<NtcfKey, NtcfTrapdoor> make_challenge(const Params& p, std::mt19937_64& rng) {
  return gen_f(p, rng);
}

// The oracle hashes the canonical w-bit packed encoding of BitDecomp(x); fixed
// width keeps the encoding prefix-free without a separator.
inline std::vector<uint8_t> oracle_input(const RingElement& x) { return bit_decomp(x).bytes; }

// One tuple's equation check given both preimages. All additions are over GF(2).
inline bool equation_holds(const ProverTuple& t, const RingElement& x0, const RingElement& x1,
                           int h0, int h1) {
  int lhs = t.m & 1;
  int rhs = dot_mod2(t.d, bits_xor(bit_decomp(x0), bit_decomp(x1))) ^ (h0 & 1) ^ (h1 & 1);
  return lhs == rhs;
}

// Protocol step 2: distinctness of the y_i under canonical encoding, then the
// per-tuple verification equation via trapdoor inversion and oracle queries.
// An inversion failure fails that tuple; it never aborts the run.
inline Verdict verify(const NtcfTrapdoor& td, std::span<const ProverTuple> tuples,
                      RandomOracle& oracle) {
  const Params& p = td.key.params;
  if (tuples.size() != p.lambda)
    throw MalformedResponse("expected exactly lambda tuples, got " +
                            std::to_string(tuples.size()));
  Verdict v;
  v.per_tuple.assign(tuples.size(), 0);
  std::set<std::vector<uint8_t>> seen;
  for (const auto& t : tuples)
    if (!seen.insert(encode_ring_vector(t.y)).second) return v;  // duplicate y => reject
  for (size_t i = 0; i < tuples.size(); i++) {
    const auto& t = tuples[i];
    if (t.d.nbits != p.w || t.y.size() != p.m) continue;
    auto claw = claw_pair(td, t.y);  // (inv_f(.,0,y), inv_f(.,1,y)) in one inversion
    if (!claw) continue;
    int h0 = oracle.query(oracle_input(claw->first));
    int h1 = oracle.query(oracle_input(claw->second));
    if (equation_holds(t, claw->first, claw->second, h0, h1)) {
      v.per_tuple[i] = 1;
      v.count++;
    }
  }
  v.accepted = 4 * uint64_t(v.count) > 3 * p.lambda;  // count > 0.75*lambda
  return v;
}

// --- wire messages: 4-byte big-endian length of (type + body), 1-byte type ---

enum class MsgType : uint8_t { challenge = 0x01, response = 0x02, verdict = 0x03 };

inline std::vector<uint8_t> frame_message(MsgType type, std::span<const uint8_t> body) {
  std::vector<uint8_t> out;
  uint32_t len = static_cast<uint32_t>(body.size() + 1);
  out.push_back(static_cast<uint8_t>(len >> 24));
  out.push_back(static_cast<uint8_t>(len >> 16));
  out.push_back(static_cast<uint8_t>(len >> 8));
  out.push_back(static_cast<uint8_t>(len));
  out.push_back(static_cast<uint8_t>(type));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline std::vector<uint8_t> serialize_challenge(const NtcfKey& k) {
  return frame_message(MsgType::challenge, serialize_public_key(k));
}

inline std::vector<uint8_t> serialize_response(std::span<const ProverTuple> tuples) {
  std::vector<uint8_t> body;
  put_u32le(body, static_cast<uint32_t>(tuples.size()));
  for (const auto& t : tuples) {
    for (const auto& e : t.y) encode_ring_element(e, body);
    body.push_back(t.m & 1);
    body.insert(body.end(), t.d.bytes.begin(), t.d.bytes.end());
  }
  return frame_message(MsgType::response, body);
}

inline std::vector<uint8_t> serialize_verdict(const Verdict& v) {
  std::vector<uint8_t> body;
  body.push_back(v.accepted ? 1 : 0);
  put_u32le(body, v.count);
  return frame_message(MsgType::verdict, body);
}

// Splits one framed message off `data`; returns (type, body reader consumed by caller).
inline std::pair<MsgType, std::span<const uint8_t>> parse_frame(Reader& r) {
  uint32_t len = 0;
  for (int i = 0; i < 4; i++) len = (len << 8) | r.u8();
  if (len == 0) r.fail("empty frame");
  if (len > (uint32_t(1) << 28)) r.fail("frame length overflow");
  auto payload = r.bytes(len);
  auto type = static_cast<MsgType>(payload[0]);
  if (type != MsgType::challenge && type != MsgType::response && type != MsgType::verdict)
    r.fail("unknown message type");
  return {type, payload.subspan(1)};
}

inline NtcfKey parse_challenge(std::span<const uint8_t> msg) {
  Reader r(msg);
  auto [type, body] = parse_frame(r);
  r.expect_end();
  if (type != MsgType::challenge) throw ParseError(4, "expected CHALLENGE");
  return parse_public_key(body);
}

inline std::vector<ProverTuple> parse_response_body(std::span<const uint8_t> body,
                                                    const Params& p) {
  Reader r(body);
  uint32_t count = r.u32le();
  if (count > (uint32_t(1) << 20)) r.fail("tuple count overflow");
  std::vector<ProverTuple> tuples;
  tuples.reserve(count);
  for (uint32_t i = 0; i < count; i++) {
    ProverTuple t;
    t.y = parse_ring_vector(r, p.q, p.n, p.m);
    uint8_t m = r.u8();
    if (m > 1) r.fail("m must be a bit");
    t.m = m;
    t.d = parse_bit_string(r, p.w);
    tuples.push_back(std::move(t));
  }
  r.expect_end();
  return tuples;
}

inline std::vector<ProverTuple> parse_response(std::span<const uint8_t> msg, const Params& p) {
  Reader r(msg);
  auto [type, body] = parse_frame(r);
  r.expect_end();
  if (type != MsgType::response) throw ParseError(4, "expected RESPONSE");
  return parse_response_body(body, p);
}

inline Verdict parse_verdict(std::span<const uint8_t> msg) {
  Reader r(msg);
  auto [type, body] = parse_frame(r);
  r.expect_end();
  if (type != MsgType::verdict) throw ParseError(4, "expected VERDICT");
  Reader br(body);
  uint8_t acc = br.u8();
  if (acc > 1) br.fail("accepted must be a bit");
  Verdict v;
  v.accepted = acc == 1;
  v.count = br.u32le();
  br.expect_end();
  return v;
}

}  // namespace pq
