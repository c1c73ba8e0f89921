#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace pq {

// H^2(f1, f2) = 1 - sum sqrt(f1(x) f2(x))
inline double hellinger_sq(std::span<const double> f1, std::span<const double> f2) {
  if (f1.size() != f2.size()) throw std::invalid_argument("hellinger_sq: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < f1.size(); i++) s += std::sqrt(f1[i] * f2[i]);
  return 1.0 - s;
}

inline double tv_distance(std::span<const double> f1, std::span<const double> f2) {
  if (f1.size() != f2.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < f1.size(); i++) s += std::abs(f1[i] - f2[i]);
  return 0.5 * s;
}

// Trace distance of the pure states psi_b = sum_x sqrt(f_b(x)) |x>, i.e.
// sqrt(1 - <psi1|psi2>^2) for real unit vectors.
inline double trace_distance(std::span<const double> psi1, std::span<const double> psi2) {
  if (psi1.size() != psi2.size()) throw std::invalid_argument("trace_distance: dimension mismatch");
  double ip = 0.0;
  for (size_t i = 0; i < psi1.size(); i++) ip += psi1[i] * psi2[i];
  return std::sqrt(std::max(0.0, 1.0 - ip * ip));
}

}  // namespace pq
