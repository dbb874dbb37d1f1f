#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "minimax/errors.hpp"

namespace minimax {

// All numeric state is 64-bit IEEE-754. Every reduction in this header runs
// strictly left-to-right (index 0 upward) so that replays are bit-exact; do not
// "optimize" the loops into pairwise or vectorized reductions.
using Vector = std::vector<double>;

inline bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void check_finite(const Vector& v, const char* who) {
  MM_CHECK(all_finite(v), std::string(who) + ": non-finite entry");
}

inline void check_dim(const Vector& v, std::size_t d, const char* who) {
  MM_CHECK(v.size() == d, std::string(who) + ": dimension mismatch");
}

// left-to-right sum of a_i * b_i
inline double dot(const Vector& a, const Vector& b) {
  MM_CHECK(a.size() == b.size(), "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2_sq(const Vector& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double norm2(const Vector& a) { return std::sqrt(norm2_sq(a)); }

inline double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

// y += c * x
inline void axpy(double c, const Vector& x, Vector& y) {
  MM_CHECK(x.size() == y.size(), "axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vector scaled(const Vector& x, double c) {
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
  return r;
}

inline Vector vsub(const Vector& a, const Vector& b) {
  MM_CHECK(a.size() == b.size(), "vsub: dimension mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector vadd(const Vector& a, const Vector& b) {
  MM_CHECK(a.size() == b.size(), "vadd: dimension mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector zeros(std::size_t d) { return Vector(d, 0.0); }

inline Vector ones(std::size_t d) { return Vector(d, 1.0); }

}  // namespace minimax
