#pragma once

// Small hand-rolled generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "homonym/corpus.hpp"
#include "homonym/matrix.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline std::size_t uniform_int(Engine& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

inline double uniform(Engine& g, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Random corpus over names "a0".."a{pool-1}".
inline std::vector<homonym::PaperRecord> corpus(Engine& g, std::size_t papers, std::size_t pool,
                                                std::size_t max_authors,
                                                const std::string& id_prefix = "p") {
  std::vector<homonym::PaperRecord> out;
  for (std::size_t p = 0; p < papers; ++p) {
    std::vector<std::string> names;
    const auto m = uniform_int(g, 1, max_authors);
    for (std::size_t a = 0; a < m; ++a) names.push_back("a" + std::to_string(uniform_int(g, 0, pool - 1)));
    out.push_back(homonym::make_record(id_prefix + std::to_string(p), names));
  }
  return out;
}

/// Dense row-stochastic matrix with U(0,1) entries, every entry positive.
inline homonym::DenseMatrix dense_stochastic(Engine& g, std::size_t n) {
  homonym::DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += p(i, j) = uniform(g, 0.01, 1.0);
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= s;
  }
  return p;
}

/// Row-stochastic matrix on a random sparse support; each row has at least one
/// entry.
inline homonym::DenseMatrix sparse_stochastic(Engine& g, std::size_t n, double density) {
  homonym::DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (uniform(g) < density) s += p(i, j) = uniform(g, 0.01, 1.0);
    if (s == 0.0) s = p(i, uniform_int(g, 0, n - 1)) = 1.0;
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= s;
  }
  return p;
}

/// Symmetric nonnegative weights with zero diagonal; connected via a random
/// spanning path plus extra edges.
inline homonym::DenseMatrix connected_weights(Engine& g, std::size_t n, double density,
                                              bool unit = false) {
  homonym::DenseMatrix a(n, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), g);
  auto w = [&] { return unit ? 1.0 : uniform(g, 0.1, 2.0); };
  for (std::size_t i = 1; i < n; ++i) a(order[i - 1], order[i]) = a(order[i], order[i - 1]) = w();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) == 0.0 && uniform(g) < density) a(i, j) = a(j, i) = w();
  return a;
}

}  // namespace gen
