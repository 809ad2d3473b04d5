#pragma once

// Reference linear algebra for oracles: plain loops, no shortcuts shared with
// the library.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "homonym/matrix.hpp"

namespace ref {

using homonym::DenseMatrix;

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline DenseMatrix identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

/// Stationary distribution by power iteration on pi <- pi P.
inline std::vector<double> stationary(const DenseMatrix& p, double tol = 1e-15,
                                      std::size_t max_iter = 1000000) {
  const std::size_t n = p.rows();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * p(i, j);
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
    pi.swap(next);
    if (diff < tol) break;
  }
  return pi;
}

/// Gauss-Jordan inverse with partial pivoting.
inline DenseMatrix inverse(DenseMatrix a) {
  const std::size_t n = a.rows();
  DenseMatrix inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) throw std::runtime_error("singular");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(c, j), a(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const double d = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace ref
