#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pq/rng.hpp"

namespace pq {

// Truncated discrete Gaussian on Z^dim: density proportional to exp(-pi*|x|^2/B^2),
// restricted to |x| <= B*sqrt(dim).
struct GaussParams {
  uint64_t B = 1;
  uint64_t dim = 1;
};

namespace detail {

// One coordinate of the untruncated discrete Gaussian on Z, by rejection from a
// discrete Laplace proposal with rate beta = sqrt(2*pi)/B.
inline int64_t dgauss_sample_1d(double B, std::mt19937_64& rng) {
  const double beta = std::sqrt(2.0 * M_PI) / B;
  const double log_peak = beta * beta * B * B / (4.0 * M_PI);  // = 1/2 for this beta
  for (;;) {
    // Geometric magnitude: P(k) ~ exp(-beta*k), via inverse CDF.
    double k = std::floor(-std::log(rand_unit(rng)) / beta);
    if (k > 9.0e15) continue;  // out of exactly representable range; try again
    auto mag = static_cast<int64_t>(k);
    bool negative = rand_bit(rng);
    if (mag == 0 && negative) continue;  // keep the proposal symmetric at 0
    double x = k;
    double log_accept = -M_PI * x * x / (B * B) + beta * x - log_peak;
    if (std::log(rand_unit(rng)) <= log_accept) return negative ? -mag : mag;
  }
}

}  // namespace detail

// Exact sample from the truncated joint law: independent 1-D coordinates, then
// whole-vector rejection on the norm bound (the untruncated joint density factors).
inline std::vector<int64_t> dgauss_sample(const GaussParams& g, std::mt19937_64& rng) {
  const unsigned __int128 bound_sq =
      static_cast<unsigned __int128>(g.B) * g.B * g.dim;
  std::vector<int64_t> v(g.dim);
  for (;;) {
    unsigned __int128 norm_sq = 0;
    for (uint64_t i = 0; i < g.dim; i++) {
      v[i] = detail::dgauss_sample_1d(static_cast<double>(g.B), rng);
      uint64_t a = v[i] < 0 ? static_cast<uint64_t>(-v[i]) : static_cast<uint64_t>(v[i]);
      norm_sq += static_cast<unsigned __int128>(a) * a;
    }
    if (norm_sq <= bound_sq) return v;
  }
}

// log of the unnormalized density; -inf outside the support. Support membership
// is decided in exact integer arithmetic.
inline long double dgauss_log_rho(const GaussParams& g, std::span<const int64_t> v) {
  if (v.size() != g.dim) throw std::invalid_argument("dgauss_log_rho: dimension mismatch");
  unsigned __int128 norm_sq = 0;
  for (int64_t x : v) {
    uint64_t a = x < 0 ? static_cast<uint64_t>(-x) : static_cast<uint64_t>(x);
    norm_sq += static_cast<unsigned __int128>(a) * a;
  }
  const unsigned __int128 bound_sq =
      static_cast<unsigned __int128>(g.B) * g.B * g.dim;
  if (norm_sq > bound_sq) return -std::numeric_limits<long double>::infinity();
  long double b = static_cast<long double>(g.B);
  return -static_cast<long double>(M_PI) * static_cast<long double>(norm_sq) / (b * b);
}

inline long double dgauss_rho(const GaussParams& g, std::span<const int64_t> v) {
  long double lr = dgauss_log_rho(g, v);
  return std::isinf(lr) ? 0.0L : expl(lr);
}

}  // namespace pq
