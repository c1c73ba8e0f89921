#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "pq/distances.hpp"
#include "pq/rng.hpp"

using namespace pq;

namespace {

std::vector<double> random_density(size_t dim, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> f(dim);
  double z = 0;
  for (auto& v : f) {
    v = ex(rng);
    z += v;
  }
  for (auto& v : f) v /= z;
  return f;
}

std::vector<double> amplitudes(const std::vector<double>& f) {
  std::vector<double> psi(f.size());
  for (size_t i = 0; i < f.size(); i++) psi[i] = std::sqrt(f[i]);
  return psi;
}

}  // namespace

TEST_CASE("identical densities have zero distance everywhere") {
  auto rng = make_rng(41);
  auto f = random_density(16, rng);
  CHECK(hellinger_sq(f, f) == Catch::Approx(0.0).margin(1e-12));
  CHECK(tv_distance(f, f) == 0.0);
  CHECK(trace_distance(amplitudes(f), amplitudes(f)) == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("disjoint densities are at maximal distance") {
  std::vector<double> f1{1.0, 0.0};
  std::vector<double> f2{0.0, 1.0};
  CHECK(hellinger_sq(f1, f2) == 1.0);
  CHECK(tv_distance(f1, f2) == 1.0);
  CHECK(trace_distance(amplitudes(f1), amplitudes(f2)) == 1.0);
}

TEST_CASE("hand-computed pair: point mass vs fair coin") {
  std::vector<double> f1{1.0, 0.0};
  std::vector<double> f2{0.5, 0.5};
  CHECK(hellinger_sq(f1, f2) == Catch::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
  CHECK(tv_distance(f1, f2) == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(trace_distance(amplitudes(f1), amplitudes(f2)) ==
        Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("TV <= sqrt(2 H^2) and trace <= sqrt(1-(1-H^2)^2) on random pairs") {
  auto rng = make_rng(42);
  for (int trial = 0; trial < 1000; trial++) {
    size_t dim = 2 + (rng() % 31);
    auto f1 = random_density(dim, rng);
    auto f2 = random_density(dim, rng);
    double h2 = hellinger_sq(f1, f2);
    double tv = tv_distance(f1, f2);
    double tr = trace_distance(amplitudes(f1), amplitudes(f2));
    REQUIRE(h2 >= -1e-12);
    REQUIRE(h2 <= 1.0 + 1e-12);
    REQUIRE(std::sqrt(2.0 * std::max(0.0, h2)) - tv >= -1e-12);
    REQUIRE(std::sqrt(1.0 - (1.0 - h2) * (1.0 - h2)) - tr >= -1e-12);
  }
}

TEST_CASE("dimension mismatch throws") {
  std::vector<double> a{1.0};
  std::vector<double> b{0.5, 0.5};
  CHECK_THROWS_AS(hellinger_sq(a, b), std::invalid_argument);
  CHECK_THROWS_AS(tv_distance(a, b), std::invalid_argument);
  CHECK_THROWS_AS(trace_distance(a, b), std::invalid_argument);
}
