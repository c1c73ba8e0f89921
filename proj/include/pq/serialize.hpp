#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pq/gadget.hpp"
#include "pq/ntcf.hpp"
#include "pq/params.hpp"
#include "pq/ring.hpp"

namespace pq {

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(size_t off, const std::string& what)
      : std::runtime_error("parse error at offset " + std::to_string(off) + ": " + what),
        offset(off) {}
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> data) : data_(data) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

  uint8_t u8() {
    need(1, "u8");
    return data_[pos_++];
  }

  uint64_t u64le() {
    need(8, "u64le");
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  uint16_t u16le() {
    need(2, "u16le");
    uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  uint32_t u32le() {
    need(4, "u32le");
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= uint32_t(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::span<const uint8_t> bytes(size_t len) {
    need(len, "byte block");
    auto s = data_.subspan(pos_, len);
    pos_ += len;
    return s;
  }

  void expect_end() const {
    if (pos_ != data_.size()) throw ParseError(pos_, "trailing bytes");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

 private:
  void need(size_t len, const char* what) const {
    if (data_.size() - pos_ < len)
      throw ParseError(pos_, std::string("truncated input while reading ") + what);
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

inline void put_u64le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; i++) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// --- params block: n, k_g, m_bar, B_V, B_P, C_T, lambda, each 8-byte LE ---

inline void serialize_params(const Params& p, std::vector<uint8_t>& out) {
  put_u64le(out, p.n);
  put_u64le(out, p.k_g);
  put_u64le(out, p.m_bar);
  put_u64le(out, p.B_V);
  put_u64le(out, p.B_P);
  put_u64le(out, p.C_T);
  put_u64le(out, p.lambda);
}

inline Params parse_params(Reader& r) {
  Params p;
  p.n = r.u64le();
  p.k_g = r.u64le();
  p.m_bar = r.u64le();
  p.B_V = r.u64le();
  p.B_P = r.u64le();
  p.C_T = r.u64le();
  p.lambda = r.u64le();
  if (p.k_g == 0 || p.k_g > 62) r.fail("k_g out of range");
  p.q = uint64_t(1) << p.k_g;
  p.m = p.m_bar + p.k_g;
  p.w = p.n * p.k_g;
  try {
    validate_params(p);
  } catch (const ParamError& e) {
    r.fail(e.what());
  }
  return p;
}

inline RingElement parse_ring_element(Reader& r, uint64_t q, size_t n) {
  RingElement x(q, n);
  for (size_t i = 0; i < n; i++) {
    uint64_t c = r.u64le();
    if (c >= q) r.fail("coefficient not reduced mod q");
    x.coeffs[i] = c;
  }
  return x;
}

inline RingVector parse_ring_vector(Reader& r, uint64_t q, size_t n, size_t len) {
  RingVector v;
  v.reserve(len);
  for (size_t i = 0; i < len; i++) v.push_back(parse_ring_element(r, q, n));
  return v;
}

inline BitString parse_bit_string(Reader& r, size_t w) {
  BitString d(w);
  auto raw = r.bytes(d.bytes.size());
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  if (w % 8 && (d.bytes.back() >> (w % 8)) != 0) r.fail("nonzero padding bits");
  return d;
}

// --- key files: magic "PQNT", version 0x01, params block, then a and v;
//     the secret file appends s and the serialized gadget trapdoor ---

inline constexpr uint8_t kKeyVersion = 0x01;

inline std::vector<uint8_t> serialize_public_key(const NtcfKey& k) {
  std::vector<uint8_t> out{'P', 'Q', 'N', 'T', kKeyVersion};
  serialize_params(k.params, out);
  for (const auto& e : k.a) encode_ring_element(e, out);
  for (const auto& e : k.v) encode_ring_element(e, out);
  return out;
}

inline std::vector<uint8_t> serialize_secret_key(const NtcfTrapdoor& td) {
  std::vector<uint8_t> out = serialize_public_key(td.key);
  encode_ring_element(td.s, out);
  serialize_trapdoor(td.gadget, td.key.params.q, out);
  return out;
}

inline NtcfKey parse_public_key_body(Reader& r) {
  auto magic = r.bytes(4);
  if (!(magic[0] == 'P' && magic[1] == 'Q' && magic[2] == 'N' && magic[3] == 'T'))
    r.fail("bad magic");
  if (r.u8() != kKeyVersion) r.fail("unsupported version");
  Params p = parse_params(r);
  NtcfKey k;
  k.params = p;
  k.a = parse_ring_vector(r, p.q, p.n, p.m);
  k.v = parse_ring_vector(r, p.q, p.n, p.m);
  return k;
}

inline NtcfKey parse_public_key(std::span<const uint8_t> data) {
  Reader r(data);
  NtcfKey k = parse_public_key_body(r);
  r.expect_end();
  return k;
}

inline GadgetTrapdoor parse_trapdoor(Reader& r, const Params& p) {
  GadgetTrapdoor t;
  t.m_bar = r.u16le();
  t.k_g = r.u16le();
  if (t.m_bar != p.m_bar || t.k_g != p.k_g) r.fail("trapdoor shape does not match params");
  size_t ncoeffs = size_t(t.m_bar) * t.k_g * p.n;
  auto raw = r.bytes((2 * ncoeffs + 7) / 8);
  t.r.reserve(size_t(t.m_bar) * t.k_g);
  size_t bitpos = 0;
  for (size_t e = 0; e < size_t(t.m_bar) * t.k_g; e++) {
    RingElement x(p.q, p.n);
    for (size_t i = 0; i < p.n; i++, bitpos += 2) {
      uint8_t code = (raw[bitpos / 8] >> (bitpos % 8)) & 3;
      if (code == 3) r.fail("invalid ternary code");
      x.coeffs[i] = code == 2 ? p.q - 1 : code;
    }
    t.r.push_back(std::move(x));
  }
  return t;
}

inline NtcfTrapdoor parse_secret_key(std::span<const uint8_t> data) {
  Reader r(data);
  NtcfTrapdoor td;
  td.key = parse_public_key_body(r);
  td.s = parse_ring_element(r, td.key.params.q, td.key.params.n);
  td.gadget = parse_trapdoor(r, td.key.params);
  r.expect_end();
  return td;
}

}  // namespace pq
