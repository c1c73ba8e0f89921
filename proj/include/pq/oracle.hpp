#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>

#include "pq/rng.hpp"

namespace pq {

enum class OracleMode { deterministic, lazy };

inline std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != 32)
    throw std::runtime_error("sha256 failed");
  return digest;
}

// One-bit hash H. Deterministic mode: LSB(SHA-256(input)), the normative
// instantiation for transcripts. Lazy mode: inspectable table of uniform bits,
// used by the soundness experiments. Every query is logged in order.
class RandomOracle {
 public:
  explicit RandomOracle(OracleMode mode, uint64_t seed = 0)
      : mode_(mode), rng_(make_rng(seed, 0x6f7261636c65ull)) {}

  int query(std::span<const uint8_t> input) {
    query_log_.emplace_back(input.begin(), input.end());
    if (mode_ == OracleMode::deterministic) return sha256(input)[31] & 1;
    auto [it, fresh] = table_.try_emplace(query_log_.back(), 0);
    if (fresh) it->second = rand_bit(rng_) ? 1 : 0;
    return it->second;
  }

  // Non-mutating table probe; lazy mode only.
  std::optional<int> lookup(std::span<const uint8_t> input) const {
    if (mode_ != OracleMode::lazy)
      throw std::logic_error("lookup is unsupported on the deterministic backend");
    auto it = table_.find(std::vector<uint8_t>(input.begin(), input.end()));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  OracleMode mode() const { return mode_; }
  const std::map<std::vector<uint8_t>, int>& table() const { return table_; }
  const std::vector<std::vector<uint8_t>>& query_log() const { return query_log_; }

 private:
  OracleMode mode_;
  std::mt19937_64 rng_;
  std::map<std::vector<uint8_t>, int> table_;
  std::vector<std::vector<uint8_t>> query_log_;
};

}  // namespace pq
