#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "pq/protocol.hpp"
#include "pq/prover.hpp"

namespace pq {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SessionResult {
  Verdict verdict;
  std::vector<uint8_t> transcript;  // the raw messages, concatenated
  std::string error;                // empty on a clean session
};

namespace net {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Socket& operator=(Socket&& o) noexcept {
    if (this != &o) {
      close_fd();
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close_fd(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }

  void set_timeout(int ms) const {
    timeval tv{ms / 1000, (ms % 1000) * 1000};
    setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
  }

 private:
  void close_fd() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  int fd_ = -1;
};

inline void send_all(const Socket& s, std::span<const uint8_t> data) {
  size_t off = 0;
  while (off < data.size()) {
    ssize_t k = ::send(s.fd(), data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (k <= 0) throw NetError("send failed");
    off += static_cast<size_t>(k);
  }
}

inline bool recv_exact(const Socket& s, uint8_t* buf, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t k = ::recv(s.fd(), buf + off, len - off, 0);
    if (k <= 0) return false;
    off += static_cast<size_t>(k);
  }
  return true;
}

// Reads one length-prefixed message, returning the raw bytes including header.
inline std::optional<std::vector<uint8_t>> recv_frame(const Socket& s) {
  uint8_t hdr[4];
  if (!recv_exact(s, hdr, 4)) return std::nullopt;
  uint32_t len = (uint32_t(hdr[0]) << 24) | (uint32_t(hdr[1]) << 16) | (uint32_t(hdr[2]) << 8) |
                 uint32_t(hdr[3]);
  if (len == 0 || len > (uint32_t(1) << 28)) return std::nullopt;
  std::vector<uint8_t> msg(4 + len);
  std::memcpy(msg.data(), hdr, 4);
  if (!recv_exact(s, msg.data() + 4, len)) return std::nullopt;
  return msg;
}

}  // namespace net

// Listening endpoint for the verifier; port 0 binds an ephemeral port.
class TcpServer {
 public:
  explicit TcpServer(uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw NetError("socket failed");
    listener_ = net::Socket(fd);
    int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
      throw NetError("bind failed on port " + std::to_string(port));
    if (::listen(fd, 8) != 0) throw NetError("listen failed");
    socklen_t alen = sizeof(addr);
    getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &alen);
    port_ = ntohs(addr.sin_port);
  }

  uint16_t port() const { return port_; }

  // One full protocol session: send CHALLENGE, await RESPONSE, send VERDICT.
  // A malformed or timed-out response yields a reject verdict, not an abort.
  SessionResult serve_once(const NtcfTrapdoor& td, RandomOracle& oracle,
                           int timeout_ms = 30000) const {
    int cfd = ::accept(listener_.fd(), nullptr, nullptr);
    if (cfd < 0) throw NetError("accept failed");
    net::Socket conn(cfd);
    conn.set_timeout(timeout_ms);
    SessionResult res;
    auto challenge = serialize_challenge(td.key);
    net::send_all(conn, challenge);
    res.transcript = challenge;
    auto raw = net::recv_frame(conn);
    if (raw) res.transcript.insert(res.transcript.end(), raw->begin(), raw->end());
    if (!raw) {
      res.error = "no response (timeout or disconnect)";
    } else {
      try {
        auto tuples = parse_response(*raw, td.key.params);
        res.verdict = verify(td, tuples, oracle);
      } catch (const ParseError& e) {
        res.error = e.what();
      } catch (const MalformedResponse& e) {
        res.error = e.what();
      }
    }
    auto verdict_msg = serialize_verdict(res.verdict);
    try {
      net::send_all(conn, verdict_msg);
    } catch (const NetError&) {
      if (res.error.empty()) res.error = "peer closed before verdict";
    }
    res.transcript.insert(res.transcript.end(), verdict_msg.begin(), verdict_msg.end());
    return res;
  }

 private:
  net::Socket listener_;
  uint16_t port_ = 0;
};

// Prover side: connect, receive the challenge, answer with the chosen strategy.
// td may be null for strategies that do not need the trapdoor.
inline SessionResult run_prover_session(const std::string& host, uint16_t port,
                                        StrategyKind strategy, const NtcfTrapdoor* td,
                                        RandomOracle& oracle, std::mt19937_64& rng,
                                        int timeout_ms = 30000) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw NetError("socket failed");
  net::Socket conn(fd);
  conn.set_timeout(timeout_ms);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw NetError("bad address: " + host);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw NetError("connect failed to " + host + ":" + std::to_string(port));
  SessionResult res;
  auto raw_challenge = net::recv_frame(conn);
  if (!raw_challenge) throw NetError("no challenge received");
  res.transcript = *raw_challenge;
  NtcfKey key = parse_challenge(*raw_challenge);
  auto tuples = prove_cheat(strategy, key, oracle, td, rng);
  auto response = serialize_response(tuples);
  net::send_all(conn, response);
  res.transcript.insert(res.transcript.end(), response.begin(), response.end());
  auto raw_verdict = net::recv_frame(conn);
  if (!raw_verdict) {
    res.error = "no verdict received";
    return res;
  }
  res.transcript.insert(res.transcript.end(), raw_verdict->begin(), raw_verdict->end());
  res.verdict = parse_verdict(*raw_verdict);
  return res;
}

}  // namespace pq
