#include "homonym/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>

#include "homonym/error.hpp"
#include "homonym/rng.hpp"
#include "text.hpp"

namespace homonym {

void RowStochasticMatrix::push_row(
    const std::vector<std::pair<std::size_t, double>>& entries) {
  if (row_ptr_.empty()) row_ptr_.push_back(0);
  for (const auto& [j, v] : entries) {
    cols_.push_back(j);
    vals_.push_back(v);
  }
  row_ptr_.push_back(cols_.size());
}

RowStochasticMatrix RowStochasticMatrix::from_dense(const DenseMatrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0)
    throw ContractError("transition matrix must be square and nonempty");
  RowStochasticMatrix out;
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    entries.clear();
    double sum = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      double v = p(i, j);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ContractError("transition matrix has a negative or non-finite entry in row " +
                            std::to_string(i));
      if (v > 0.0) entries.emplace_back(j, v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTolerance)
      throw ContractError("transition matrix row " + std::to_string(i) + " sums to " +
                          text::fmt(sum));
    out.push_row(entries);
  }
  return out;
}

double RowStochasticMatrix::operator()(std::size_t i, std::size_t j) const {
  auto cols = row_columns(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

void RowStochasticMatrix::propagate(std::span<const double> in, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = dimension();
  for (std::size_t u = 0; u < n; ++u) {
    const double mass = in[u];
    if (mass == 0.0) continue;
    for (std::size_t e = row_ptr_[u]; e < row_ptr_[u + 1]; ++e) out[cols_[e]] += mass * vals_[e];
  }
}

DenseMatrix RowStochasticMatrix::to_dense() const {
  DenseMatrix d(dimension(), dimension());
  for (std::size_t i = 0; i < dimension(); ++i) {
    auto cols = row_columns(i);
    auto vals = row_values(i);
    for (std::size_t e = 0; e < cols.size(); ++e) d(i, cols[e]) = vals[e];
  }
  return d;
}

RowStochasticMatrix normalize_transition(const CollaborationGraph& graph) {
  if (graph.node_count() == 0) throw ContractError("cannot normalise an empty graph");
  RowStochasticMatrix p;
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    entries.clear();
    const double deg = graph.degree(i);
    if (deg > 0.0) {
      for (const auto& [j, w] : graph.neighbors(i)) entries.emplace_back(j, w / deg);
    } else {
      entries.emplace_back(i, 1.0);
    }
    p.push_row(entries);
  }
  return p;
}

namespace {

void check_walk(const RowStochasticMatrix& p, std::size_t source, std::size_t walk_length) {
  if (walk_length == 0) throw ContractError("walk length must be at least 1");
  if (source >= p.dimension())
    throw ContractError("source node " + std::to_string(source) + " out of range");
}

}  // namespace

ForwardTable forward_variables(const RowStochasticMatrix& p, std::size_t source,
                               std::size_t walk_length) {
  check_walk(p, source, walk_length);
  const std::size_t n = p.dimension();
  ForwardTable table{source, walk_length, DenseMatrix(walk_length, n)};
  std::vector<double> start(n, 0.0);
  start[source] = 1.0;
  p.propagate(start, table.values.row(0));
  for (std::size_t t = 1; t < walk_length; ++t) {
    auto prev = table.values.row(t - 1);
    p.propagate({prev.data(), prev.size()}, table.values.row(t));
  }
  return table;
}

std::vector<double> passage_row(const RowStochasticMatrix& p, std::size_t source,
                                std::size_t walk_length, std::size_t repetitions) {
  check_walk(p, source, walk_length);
  if (repetitions == 0) throw ContractError("repetitions must be at least 1");
  const std::size_t n = p.dimension();
  std::vector<double> alpha(n, 0.0), next(n), acc(n, 0.0);
  alpha[source] = 1.0;
  for (std::size_t t = 0; t < walk_length; ++t) {
    p.propagate(alpha, next);
    for (std::size_t v = 0; v < n; ++v) acc[v] += next[v];
    alpha.swap(next);
  }
  if (repetitions != 1) {
    const double r = static_cast<double>(repetitions);
    for (auto& a : acc) a *= r;
  }
  return acc;
}

SimilarityMatrix passage_similarity(const RowStochasticMatrix& p, std::size_t walk_length,
                                    std::size_t repetitions) {
  const std::size_t n = p.dimension();
  SimilarityMatrix out{DenseMatrix(n, n), walk_length, repetitions};
  for (std::size_t s = 0; s < n; ++s) {
    auto row = passage_row(p, s, walk_length, repetitions);
    std::copy(row.begin(), row.end(), out.values.row(s).begin());
  }
  return out;
}

std::vector<std::uint64_t> monte_carlo_passage(const RowStochasticMatrix& p,
                                               std::size_t source, std::size_t walk_length,
                                               std::size_t repetitions, std::uint64_t seed) {
  check_walk(p, source, walk_length);
  const std::size_t n = p.dimension();
  // Cumulative distribution per row for inverse-CDF sampling.
  std::vector<std::vector<double>> cdf(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto vals = p.row_values(i);
    cdf[i].resize(vals.size());
    std::partial_sum(vals.begin(), vals.end(), cdf[i].begin());
  }
  auto rng = make_stream({seed, source});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t walk = 0; walk < repetitions; ++walk) {
    std::size_t at = source;
    for (std::size_t t = 0; t < walk_length; ++t) {
      const auto& c = cdf[at];
      double u = unit(rng) * c.back();
      auto k = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
      if (k >= c.size()) k = c.size() - 1;
      at = p.row_columns(at)[k];
      ++counts[at];
    }
  }
  return counts;
}

namespace {

std::vector<std::size_t> masked_indices(const std::vector<bool>& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) idx.push_back(i);
  if (idx.size() < 2)
    throw DataError("network reduction needs at least 2 ambiguous nodes, got " +
                    std::to_string(idx.size()));
  return idx;
}

void symmetrize_zero_diagonal(DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = 0.0;
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
}

}  // namespace

SimilarityMatrix reduce_network(const SimilarityMatrix& a, const std::vector<bool>& mask) {
  if (mask.size() != a.dimension())
    throw DataError("ambiguity mask size does not match the similarity matrix");
  auto idx = masked_indices(mask);
  SimilarityMatrix out{DenseMatrix(idx.size(), idx.size()), a.walk_length, a.repetitions};
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out.values(i, j) = a.values(idx[i], idx[j]);
  symmetrize_zero_diagonal(out.values);
  return out;
}

SimilarityMatrix reduced_passage_similarity(const RowStochasticMatrix& p,
                                            const std::vector<bool>& mask,
                                            std::size_t walk_length,
                                            std::size_t repetitions) {
  if (mask.size() != p.dimension())
    throw DataError("ambiguity mask size does not match the transition matrix");
  auto idx = masked_indices(mask);
  SimilarityMatrix out{DenseMatrix(idx.size(), idx.size()), walk_length, repetitions};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto row = passage_row(p, idx[i], walk_length, repetitions);
    for (std::size_t j = 0; j < idx.size(); ++j) out.values(i, j) = row[idx[j]];
  }
  symmetrize_zero_diagonal(out.values);
  return out;
}

// ---------------------------------------------------------------------------

SparsifyMode SparsifyMode::parse(const std::string& spec) {
  auto t = std::string(text::trim(spec));
  if (t.empty() || t == "none") return none();
  auto colon = t.find(':');
  if (colon != std::string::npos) {
    auto kind = t.substr(0, colon);
    auto arg = std::string_view(t).substr(colon + 1);
    if (kind == "threshold") {
      double tau = 0.0;
      if (text::parse_number(arg, tau) && tau >= 0.0) return threshold_at(tau);
    } else if (kind == "knn") {
      std::size_t k = 0;
      if (text::parse_number(arg, k) && k >= 1) return knn(k);
    }
  }
  throw DataError("invalid sparsify mode '" + spec +
                  "' (expected none, threshold:<tau>=0> or knn:<k>=1>)");
}

std::string SparsifyMode::to_string() const {
  switch (kind) {
    case Kind::kThreshold: return "threshold:" + text::fmt(threshold);
    case Kind::kKnn: return "knn:" + std::to_string(neighbors);
    case Kind::kNone: break;
  }
  return "none";
}

bool is_connected(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    auto i = q.front();
    q.pop();
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j] || (a(i, j) <= 0.0 && a(j, i) <= 0.0)) continue;
      seen[j] = true;
      ++reached;
      q.push(j);
    }
  }
  return reached == n;
}

SparsifyResult sparsify(const SimilarityMatrix& a, const SparsifyMode& mode) {
  SparsifyResult res{a, true, std::nullopt};
  const std::size_t n = a.dimension();
  auto& m = res.matrix.values;
  switch (mode.kind) {
    case SparsifyMode::Kind::kNone:
      break;
    case SparsifyMode::Kind::kThreshold:
      if (mode.threshold < 0.0) throw ContractError("sparsify threshold must be >= 0");
      for (auto& v : m.data())
        if (v < mode.threshold) v = 0.0;
      break;
    case SparsifyMode::Kind::kKnn: {
      if (mode.neighbors == 0) throw ContractError("sparsify kNN needs k >= 1");
      if (mode.neighbors >= n) {
        res.warning = "kNN k=" + std::to_string(mode.neighbors) +
                      " >= dimension " + std::to_string(n) + "; matrix left unchanged";
        break;
      }
      DenseMatrix kept(n, n);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < n; ++i) {
        kept(i, i) = a.values(i, i);
        order.clear();
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) order.push_back(j);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
          return a.values(i, x) > a.values(i, y);
        });
        for (std::size_t r = 0; r < mode.neighbors; ++r) kept(i, order[r]) = a.values(i, order[r]);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = std::max(kept(i, j), kept(j, i));
      break;
    }
  }
  res.connected = is_connected(m);
  return res;
}

// ---------------------------------------------------------------------------

void write_similarity(const SimilarityMatrix& a, std::ostream& out) {
  const std::size_t n = a.dimension();
  out << "SIM " << n << ' ' << a.walk_length << ' ' << a.repetitions << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.values(i, j) != 0.0) out << i << '\t' << j << '\t' << text::fmt(a.values(i, j)) << '\n';
}

SimilarityMatrix read_similarity(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  SimilarityMatrix a;
  bool header = false;
  while (!header && std::getline(in, line)) {
    ++lineno;
    auto t = text::trim(line);
    if (t.empty()) continue;
    auto f = text::split(t, ' ');
    if (f.size() != 4 || f[0] != "SIM")
      throw DataError("similarity line " + std::to_string(lineno) +
                      ": expected 'SIM <dim> <l> <r>' header");
    auto n = text::parse_or_throw<std::size_t>(f[1], "similarity header");
    a.walk_length = text::parse_or_throw<std::size_t>(f[2], "similarity header");
    a.repetitions = text::parse_or_throw<std::size_t>(f[3], "similarity header");
    a.values = DenseMatrix(n, n);
    header = true;
  }
  if (!header) throw DataError("similarity file: missing 'SIM' header");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto where = "similarity line " + std::to_string(lineno);
    auto f = text::split(line, '\t');
    if (f.size() != 3) throw DataError(where + ": expected 'i<TAB>j<TAB>value'");
    auto i = text::parse_or_throw<std::size_t>(f[0], where);
    auto j = text::parse_or_throw<std::size_t>(f[1], where);
    auto v = text::parse_or_throw<double>(f[2], where);
    if (i >= a.dimension() || j >= a.dimension()) throw DataError(where + ": index out of range");
    if (v < 0.0) throw DataError(where + ": negative similarity");
    if (!seen.emplace(i, j).second) throw DataError(where + ": duplicate entry");
    a.values(i, j) = v;
  }
  return a;
}

}  // namespace homonym
