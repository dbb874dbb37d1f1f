#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "minimax/vec.hpp"

namespace minimax {

// Small dense row-major matrix. Everything here is desk-scale (dims under ~60),
// so plain loops and a Jacobi eigensolver are fast enough and, unlike BLAS
// paths, keep the arithmetic order fixed.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline Vector matvec(const Matrix& m, const Vector& x) {
  MM_CHECK(x.size() == m.cols, "matvec: dimension mismatch");
  Vector r(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

// m^T x
inline Vector mat_t_vec(const Matrix& m, const Vector& x) {
  MM_CHECK(x.size() == m.rows, "mat_t_vec: dimension mismatch");
  Vector r(m.cols, 0.0);
  for (std::size_t j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, j) * x[i];
    r[j] = s;
  }
  return r;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  MM_CHECK(a.cols == b.rows, "matmul: dimension mismatch");
  Matrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

inline Matrix transpose(const Matrix& m) {
  Matrix r(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
  return r;
}

// solve A x = b by LU with partial pivoting; A square, copied
inline Vector solve_linear(Matrix m, Vector b) {
  MM_CHECK(m.rows == m.cols, "solve_linear: matrix not square");
  MM_CHECK(b.size() == m.rows, "solve_linear: dimension mismatch");
  const std::size_t n = m.rows;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(m.at(i, k)) > std::fabs(m.at(p, k))) p = i;
    MM_CHECK(std::fabs(m.at(p, k)) > 1e-14, "solve_linear: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(k, j));
      std::swap(b[p], b[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m.at(i, k) / m.at(k, k);
      m.at(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= m.at(ii, j) * x[j];
    x[ii] = s / m.at(ii, ii);
  }
  return x;
}

// eigenvalues of a symmetric matrix by cyclic Jacobi rotations; returned sorted
// ascending. Converges quadratically; 50 sweeps is far beyond what desk-scale
// matrices need.
inline Vector sym_eigenvalues(Matrix s) {
  MM_CHECK(s.rows == s.cols, "sym_eigenvalues: matrix not square");
  const std::size_t n = s.rows;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += s.at(i, j) * s.at(i, j);
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s.at(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (s.at(q, q) - s.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s.at(k, p), skq = s.at(k, q);
          s.at(k, p) = c * skp - sn * skq;
          s.at(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s.at(p, k), sqk = s.at(q, k);
          s.at(p, k) = c * spk - sn * sqk;
          s.at(q, k) = sn * spk + c * sqk;
        }
      }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// largest singular value, computed exactly via the spectrum of m^T m
inline double spectral_norm(const Matrix& m) {
  const Matrix g = matmul(transpose(m), m);
  const Vector ev = sym_eigenvalues(g);
  return std::sqrt(std::max(0.0, ev.back()));
}

}  // namespace minimax
