#include <catch2/catch_amalgamated.hpp>

#include <thread>

#include "pq/net.hpp"
#include "pq/rng.hpp"

using namespace pq;

namespace {

Params desk() { return build_params(64, 3, 1, 120, 8); }

}  // namespace

TEST_CASE("loopback session with the honest strategy is accepted") {
  auto p = desk();
  auto rng = make_rng(101);
  auto [key, td] = gen_f(p, rng);
  TcpServer server(0);
  REQUIRE(server.port() != 0);

  RandomOracle server_oracle(OracleMode::deterministic);
  SessionResult server_res;
  std::thread srv([&] { server_res = server.serve_once(td, server_oracle, 20000); });

  RandomOracle client_oracle(OracleMode::deterministic);
  auto client_rng = make_rng(102);
  auto client_res = run_prover_session("127.0.0.1", server.port(), StrategyKind::honest, &td,
                                       client_oracle, client_rng, 20000);
  srv.join();

  CHECK(server_res.error.empty());
  CHECK(client_res.error.empty());
  CHECK(server_res.verdict.accepted);
  CHECK(client_res.verdict.accepted);
  CHECK(client_res.verdict.count == server_res.verdict.count);
  CHECK(client_res.transcript == server_res.transcript);
}

TEST_CASE("garbage response yields a reject verdict, not a crash") {
  auto p = desk();
  auto rng = make_rng(103);
  auto [key, td] = gen_f(p, rng);
  TcpServer server(0);
  RandomOracle oracle(OracleMode::deterministic);
  SessionResult res;
  std::thread srv([&] { res = server.serve_once(td, oracle, 20000); });

  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  net::Socket conn(fd);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(server.port());
  inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  auto challenge = net::recv_frame(conn);
  REQUIRE(challenge.has_value());
  // valid frame header, RESPONSE type, nonsense body
  std::vector<uint8_t> junk{0, 0, 0, 5, 0x02, 0xde, 0xad, 0xbe, 0xef};
  net::send_all(conn, junk);
  auto verdict = net::recv_frame(conn);
  srv.join();

  REQUIRE(verdict.has_value());
  auto v = parse_verdict(*verdict);
  CHECK_FALSE(v.accepted);
  CHECK(v.count == 0);
  CHECK_FALSE(res.error.empty());
}

TEST_CASE("disconnect before responding is a clean reject") {
  auto p = desk();
  auto rng = make_rng(104);
  auto [key, td] = gen_f(p, rng);
  TcpServer server(0);
  RandomOracle oracle(OracleMode::deterministic);
  SessionResult res;
  std::thread srv([&] { res = server.serve_once(td, oracle, 20000); });

  {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    net::Socket conn(fd);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(server.port());
    inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    auto challenge = net::recv_frame(conn);
    REQUIRE(challenge.has_value());
  }  // socket closes here
  srv.join();
  CHECK_FALSE(res.verdict.accepted);
  CHECK_FALSE(res.error.empty());
}

TEST_CASE("two sequential sessions on one server port stay isolated") {
  auto p = desk();
  auto rng = make_rng(105);
  auto [key, td] = gen_f(p, rng);
  TcpServer server(0);

  for (auto strat : {StrategyKind::random_guess, StrategyKind::honest}) {
    RandomOracle server_oracle(OracleMode::deterministic);
    SessionResult res;
    std::thread srv([&] { res = server.serve_once(td, server_oracle, 20000); });
    RandomOracle client_oracle(OracleMode::deterministic);
    auto client_rng = make_rng(106);
    auto cres = run_prover_session("127.0.0.1", server.port(), strat,
                                   needs_trapdoor(strat) ? &td : nullptr, client_oracle,
                                   client_rng, 20000);
    srv.join();
    CHECK(cres.verdict.accepted == (strat == StrategyKind::honest));
    CHECK(cres.verdict.accepted == res.verdict.accepted);
  }
}

TEST_CASE("connecting to a dead port raises NetError") {
  RandomOracle oracle(OracleMode::deterministic);
  auto rng = make_rng(107);
  // bind-then-close to find a port that is very likely unused
  uint16_t port;
  {
    TcpServer tmp(0);
    port = tmp.port();
  }
  CHECK_THROWS_AS(run_prover_session("127.0.0.1", port, StrategyKind::random_guess, nullptr,
                                     oracle, rng, 2000),
                  NetError);
}
