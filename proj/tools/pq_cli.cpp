// Command-line front end: key management, offline protocol runs, TCP sessions,
// soundness experiments, the toy-circuit simulator, and a benchmark.
//
// Exit codes: 0 ok/accept, 1 verification reject, 2 argument or message parse
// error, 3 infeasible parameters, 4 I/O failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pq/experiment.hpp"
#include "pq/microsim.hpp"
#include "pq/net.hpp"
#include "pq/protocol.hpp"
#include "pq/prover.hpp"
#include "pq/rng.hpp"
#include "pq/serialize.hpp"

using namespace pq;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return data;
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

// Plain-text key=value config; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (!k.empty()) kv[k] = v;
  }
  return kv;
}

// Builder inputs shared by several subcommands.
struct ParamArgs {
  uint64_t n = 64, m_bar = 3, B_V = 1, lambda = 120, C_T = 8;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "ring dimension (power of two)");
    cmd->add_option("--m-bar", m_bar, "uniform block length");
    cmd->add_option("--key-noise", B_V, "key-noise width B_V");
    cmd->add_option("--lambda", lambda, "tuple count per run");
    cmd->add_option("--c-t", C_T, "inversion constant C_T");
    cmd->add_option("--config", config, "key=value config file");
  }

  Params build() {
    if (!config.empty()) {
      auto kv = load_config(config);
      auto take = [&](const char* key, uint64_t& slot) {
        if (auto it = kv.find(key); it != kv.end()) slot = std::stoull(it->second);
      };
      take("n", n);
      take("m_bar", m_bar);
      take("B_V", B_V);
      take("lambda", lambda);
      take("C_T", C_T);
    }
    return build_params(n, m_bar, B_V, lambda, C_T);
  }
};

uint64_t resolve_seed(uint64_t flag_seed) {
  if (const char* env = std::getenv("PQ_SEED")) return std::stoull(env);
  return flag_seed;
}

std::string params_text(const Params& p) {
  std::ostringstream os;
  os << "n=" << p.n << "\nk_g=" << p.k_g << "\nq=2^" << p.k_g << "\nm_bar=" << p.m_bar
     << "\nm=" << p.m << "\nB_V=" << p.B_V << "\nB_P=" << p.B_P << "\nC_T=" << p.C_T
     << "\nlambda=" << p.lambda << "\nw=" << p.w << "\nhellinger_bound=" << hellinger_bound(p)
     << "\n";
  return os.str();
}

StrategyKind parse_strategy(const std::string& name) {
  if (name == "honest") return StrategyKind::honest;
  if (name == "random_guess") return StrategyKind::random_guess;
  if (name == "half_claw") return StrategyKind::half_claw;
  if (name == "trapdoor_cheat") return StrategyKind::trapdoor_cheat;
  throw CLI::ValidationError("--strategy",
                             "unknown strategy (honest|random_guess|half_claw|trapdoor_cheat)");
}

void emulation_notice(StrategyKind s) {
  if (needs_trapdoor(s))
    std::cerr << "[notice] strategy '" << strategy_name(s)
              << "' is a trapdoor-assisted EMULATION of the prover; it does not\n"
              << "         constitute a classical attack on the protocol.\n";
}

int cmd_params(ParamArgs& pa, const std::string& out) {
  Params p = pa.build();
  std::string text = params_text(p);
  std::cout << text;
  if (!out.empty()) write_text(out, text);
  return 0;
}

int cmd_keygen(ParamArgs& pa, uint64_t seed, const std::string& pub, const std::string& sec) {
  Params p = pa.build();
  auto rng = make_rng(resolve_seed(seed));
  auto [key, td] = gen_f(p, rng);
  write_file(pub, serialize_public_key(key));
  write_file(sec, serialize_secret_key(td));
  std::cout << "wrote " << pub << " and " << sec << "\n";
  return 0;
}

int cmd_challenge(const std::string& pub, const std::string& out) {
  auto key = parse_public_key(read_file(pub));
  write_file(out, serialize_challenge(key));
  std::cout << "wrote " << out << " (lambda=" << key.params.lambda << ")\n";
  return 0;
}

int cmd_prove(const std::string& challenge_path, const std::string& strategy_name_,
              const std::string& sec, uint64_t seed, const std::string& out) {
  auto strategy = parse_strategy(strategy_name_);
  auto key = parse_challenge(read_file(challenge_path));
  std::optional<NtcfTrapdoor> td;
  if (needs_trapdoor(strategy)) {
    if (sec.empty())
      throw CLI::ValidationError("--secret-key", "this strategy needs the secret key");
    td = parse_secret_key(read_file(sec));
    emulation_notice(strategy);
  }
  RandomOracle oracle(OracleMode::deterministic);
  auto rng = make_rng(resolve_seed(seed));
  auto tuples = prove_cheat(strategy, td ? td->key : key, oracle, td ? &*td : nullptr, rng);
  write_file(out, serialize_response(tuples));
  std::cout << "wrote " << out << " (" << tuples.size() << " tuples)\n";
  return 0;
}

int cmd_verify(const std::string& sec, const std::string& response_path) {
  auto td = parse_secret_key(read_file(sec));
  auto tuples = parse_response(read_file(response_path), td.key.params);
  RandomOracle oracle(OracleMode::deterministic);
  auto v = verify(td, tuples, oracle);
  std::cout << (v.accepted ? "accept" : "reject") << ", count=" << v.count << "/"
            << td.key.params.lambda << "\n";
  return v.accepted ? 0 : 1;
}

int cmd_serve(const std::string& sec, uint16_t port, int sessions, int timeout_ms,
              const std::string& transcript) {
  auto td = parse_secret_key(read_file(sec));
  TcpServer server(port);
  std::cout << "listening on port " << server.port() << "\n" << std::flush;
  int last = 0;
  for (int i = 0; i < sessions; i++) {
    RandomOracle oracle(OracleMode::deterministic);
    auto res = server.serve_once(td, oracle, timeout_ms);
    std::cout << "session " << i << ": " << (res.verdict.accepted ? "accept" : "reject")
              << ", count=" << res.verdict.count;
    if (!res.error.empty()) std::cout << " [" << res.error << "]";
    std::cout << "\n" << std::flush;
    if (!transcript.empty()) {
      std::string path = sessions == 1 ? transcript : transcript + "." + std::to_string(i);
      write_file(path, res.transcript);
      if (!res.error.empty()) write_text(path + ".err", res.error + "\n");
    }
    last = res.verdict.accepted ? 0 : 1;
  }
  return last;
}

int cmd_respond(const std::string& host, uint16_t port, const std::string& strategy_name_,
                const std::string& sec, uint64_t seed, int timeout_ms,
                const std::string& transcript) {
  auto strategy = parse_strategy(strategy_name_);
  std::optional<NtcfTrapdoor> td;
  if (needs_trapdoor(strategy)) {
    if (sec.empty())
      throw CLI::ValidationError("--secret-key", "this strategy needs the secret key");
    td = parse_secret_key(read_file(sec));
    emulation_notice(strategy);
  }
  RandomOracle oracle(OracleMode::deterministic);
  auto rng = make_rng(resolve_seed(seed));
  auto res =
      run_prover_session(host, port, strategy, td ? &*td : nullptr, oracle, rng, timeout_ms);
  std::cout << (res.verdict.accepted ? "accept" : "reject") << ", count=" << res.verdict.count;
  if (!res.error.empty()) std::cout << " [" << res.error << "]";
  std::cout << "\n";
  if (!transcript.empty()) write_file(transcript, res.transcript);
  return res.verdict.accepted ? 0 : 1;
}

int cmd_experiment(ParamArgs& pa, int variant, const std::string& strategy_name_,
                   uint64_t trials, uint64_t seed) {
  Params p = pa.build();
  auto strategy = parse_strategy(strategy_name_);
  emulation_notice(strategy);
  auto st = run_experiment(variant, strategy, p, trials, resolve_seed(seed));
  std::cout << "variant=" << st.variant << " strategy=" << strategy_name(st.strategy)
            << " trials=" << st.trials << " seed=" << st.seed << "\n"
            << "pass_rate=" << st.pass_rate() << " +- " << st.pass_ci() << "\n"
            << "per_tuple_rate=" << st.per_tuple_rate() << " +- " << st.per_tuple_ci() << "\n"
            << "db_hits (0/1/2 preimages) = " << st.db_hits[0] << "/" << st.db_hits[1] << "/"
            << st.db_hits[2] << "\n";
  return 0;
}

int cmd_microsim(uint64_t seed, int tables) {
  auto rng = make_rng(resolve_seed(seed));
  uint64_t checked = 0;
  for (uint32_t N : {2u, 4u, 8u, 16u, 64u}) {
    for (uint32_t s : {0u, 1u, N - 1}) {
      for (int tbl = 0; tbl < tables; tbl++) {
        std::vector<uint8_t> h(N);
        for (auto& b : h) b = rand_bit(rng) ? 1 : 0;
        ToyTcf toy{N, s};
        double total = 0.0;
        for (const auto& o : run_honest_circuit(toy, h)) {
          uint32_t x0 = o.y;
          uint32_t x1 = (o.y + N - s % N) % N;
          if (o.m_prime != 1 || !toy_equation_holds(o, x0, x1, h[x0], h[x1])) {
            std::cout << "FAIL at N=" << N << " s=" << s << " table " << tbl << "\n";
            return 1;
          }
          total += o.prob;
          checked++;
        }
        if (std::abs(total - 1.0) > 1e-12) {
          std::cout << "FAIL probability mass " << total << " at N=" << N << " s=" << s << "\n";
          return 1;
        }
      }
    }
  }
  std::cout << "microsim ok: " << checked
            << " outcomes satisfy the verification equation with m'=1\n";
  return 0;
}

int cmd_bench(ParamArgs& pa, uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  Params p = pa.build();
  std::cout << params_text(p);
  auto rng = make_rng(resolve_seed(seed));
  auto t0 = Clock::now();
  auto [key, td] = gen_f(p, rng);
  auto t1 = Clock::now();
  RandomOracle oracle(OracleMode::deterministic);
  auto tuples = prove_honest(td, oracle, rng);
  auto t2 = Clock::now();
  auto v = verify(td, tuples, oracle);
  auto t3 = Clock::now();
  std::cout << "keygen: " << ms(t0, t1) << " ms\n"
            << "prove (honest, lambda=" << p.lambda << "): " << ms(t1, t2) << " ms\n"
            << "verify: " << ms(t2, t3) << " ms\n"
            << "verdict: " << (v.accepted ? "accept" : "reject") << ", count=" << v.count
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-message claw-based proof-of-quantumness toolkit"};
  app.require_subcommand(1);

  ParamArgs pa_params, pa_keygen, pa_exp, pa_bench;
  uint64_t seed = 0;
  std::string out, pub = "pq_pub.key", sec = "pq_sec.key";

  auto* c_params = app.add_subcommand("params", "derive and validate a parameter set");
  pa_params.attach(c_params);
  std::string params_out;
  c_params->add_option("--out", params_out, "also write the table to a file");

  auto* c_keygen = app.add_subcommand("keygen", "generate a key pair");
  pa_keygen.attach(c_keygen);
  uint64_t keygen_seed = 1;
  c_keygen->add_option("--seed", keygen_seed, "rng seed (PQ_SEED overrides)");
  c_keygen->add_option("--public-key", pub, "public key output path");
  c_keygen->add_option("--secret-key", sec, "secret key output path");

  auto* c_chal = app.add_subcommand("challenge", "emit a CHALLENGE message from a public key");
  std::string chal_pub = "pq_pub.key", chal_out = "challenge.bin";
  c_chal->add_option("--public-key", chal_pub, "public key path");
  c_chal->add_option("--out", chal_out, "challenge message output path");

  auto* c_prove = app.add_subcommand("prove", "answer a CHALLENGE with a strategy");
  std::string prove_chal = "challenge.bin", prove_strat = "honest", prove_sec,
              prove_out = "response.bin";
  uint64_t prove_seed = 2;
  c_prove->add_option("--challenge", prove_chal, "challenge message path");
  c_prove->add_option("--strategy", prove_strat,
                      "honest|random_guess|half_claw|trapdoor_cheat");
  c_prove->add_option("--secret-key", prove_sec, "secret key (trapdoor strategies only)");
  c_prove->add_option("--seed", prove_seed, "rng seed (PQ_SEED overrides)");
  c_prove->add_option("--out", prove_out, "response message output path");

  auto* c_verify = app.add_subcommand("verify", "check a RESPONSE against the secret key");
  std::string verify_sec = "pq_sec.key", verify_resp = "response.bin";
  c_verify->add_option("--secret-key", verify_sec, "secret key path");
  c_verify->add_option("--response", verify_resp, "response message path");

  auto* c_serve = app.add_subcommand("serve", "run the verifier over TCP");
  std::string serve_sec = "pq_sec.key", serve_tx;
  uint16_t serve_port = 0;
  int serve_sessions = 1, serve_timeout = 30000;
  c_serve->add_option("--secret-key", serve_sec, "secret key path");
  c_serve->add_option("--port", serve_port, "listen port (0 = ephemeral)");
  c_serve->add_option("--sessions", serve_sessions, "number of sessions to serve");
  c_serve->add_option("--timeout-ms", serve_timeout, "per-session socket timeout");
  c_serve->add_option("--transcript", serve_tx, "write the session transcript here");

  auto* c_respond = app.add_subcommand("respond", "run the prover over TCP");
  std::string resp_host = "127.0.0.1", resp_strat = "honest", resp_sec, resp_tx;
  uint16_t resp_port = 0;
  uint64_t resp_seed = 3;
  int resp_timeout = 30000;
  c_respond->add_option("--host", resp_host, "verifier address");
  c_respond->add_option("--port", resp_port, "verifier port")->required();
  c_respond->add_option("--strategy", resp_strat,
                        "honest|random_guess|half_claw|trapdoor_cheat");
  c_respond->add_option("--secret-key", resp_sec, "secret key (trapdoor strategies only)");
  c_respond->add_option("--seed", resp_seed, "rng seed (PQ_SEED overrides)");
  c_respond->add_option("--timeout-ms", resp_timeout, "socket timeout");
  c_respond->add_option("--transcript", resp_tx, "write the session transcript here");

  auto* c_exp = app.add_subcommand("experiment", "run a soundness experiment");
  pa_exp.attach(c_exp);
  int exp_variant = 1;
  std::string exp_strat = "random_guess";
  uint64_t exp_trials = 100, exp_seed = 4;
  c_exp->add_option("--variant", exp_variant, "experiment variant 1..3");
  c_exp->add_option("--strategy", exp_strat, "prover strategy");
  c_exp->add_option("--trials", exp_trials, "number of trials");
  c_exp->add_option("--seed", exp_seed, "rng seed (PQ_SEED overrides)");

  auto* c_micro = app.add_subcommand("microsim", "exhaustive toy-circuit validation");
  uint64_t micro_seed = 5;
  int micro_tables = 20;
  c_micro->add_option("--seed", micro_seed, "rng seed (PQ_SEED overrides)");
  c_micro->add_option("--tables", micro_tables, "random oracle tables per instance");

  auto* c_bench = app.add_subcommand("bench", "time keygen/prove/verify");
  pa_bench.attach(c_bench);
  uint64_t bench_seed = 6;
  c_bench->add_option("--seed", bench_seed, "rng seed (PQ_SEED overrides)");

  try {
    app.parse(argc, argv);
    if (*c_params) return cmd_params(pa_params, params_out);
    if (*c_keygen) return cmd_keygen(pa_keygen, keygen_seed, pub, sec);
    if (*c_chal) return cmd_challenge(chal_pub, chal_out);
    if (*c_prove) return cmd_prove(prove_chal, prove_strat, prove_sec, prove_seed, prove_out);
    if (*c_verify) return cmd_verify(verify_sec, verify_resp);
    if (*c_serve)
      return cmd_serve(serve_sec, serve_port, serve_sessions, serve_timeout, serve_tx);
    if (*c_respond)
      return cmd_respond(resp_host, resp_port, resp_strat, resp_sec, resp_seed, resp_timeout,
                         resp_tx);
    if (*c_exp) return cmd_experiment(pa_exp, exp_variant, exp_strat, exp_trials, exp_seed);
    if (*c_micro) return cmd_microsim(micro_seed, micro_tables);
    if (*c_bench) return cmd_bench(pa_bench, bench_seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const MalformedResponse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
