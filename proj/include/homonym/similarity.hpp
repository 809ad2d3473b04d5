#pragma once

// Truncated passage-time similarity: expected visit counts of l-step random
// walks, computed with forward variables, plus a Monte Carlo estimator used as
// an independent check, and reduction onto the ambiguous nodes.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homonym/corpus.hpp"
#include "homonym/matrix.hpp"

namespace homonym {

/// Sparse (CSR) Markov transition matrix; every row sums to 1.
class RowStochasticMatrix {
 public:
  static constexpr double kRowTolerance = 1e-9;

  RowStochasticMatrix() = default;
  /// Validates nonnegativity and unit row sums; throws ContractError otherwise.
  static RowStochasticMatrix from_dense(const DenseMatrix& p);

  std::size_t dimension() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  double operator()(std::size_t i, std::size_t j) const;

  std::span<const std::size_t> row_columns(std::size_t i) const {
    return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {vals_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// out = in * P (row vector times matrix). `out` is overwritten.
  void propagate(std::span<const double> in, std::span<double> out) const;

  DenseMatrix to_dense() const;

 private:
  friend RowStochasticMatrix normalize_transition(const CollaborationGraph&);
  void push_row(const std::vector<std::pair<std::size_t, double>>& entries);

  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

/// P(i,j) = w_ij / sum_u w_iu; zero-degree nodes get P(i,i) = 1.
RowStochasticMatrix normalize_transition(const CollaborationGraph& graph);

/// alpha(v, t) for t = 1..horizon: probability of occupying v after t steps
/// from `source`.
struct ForwardTable {
  std::size_t source = 0;
  std::size_t horizon = 0;
  DenseMatrix values;  // horizon x V, row t-1 holds alpha(., t)

  double at(std::size_t v, std::size_t t) const { return values(t - 1, v); }
};

ForwardTable forward_variables(const RowStochasticMatrix& p, std::size_t source,
                               std::size_t walk_length);

struct SimilarityMatrix {
  DenseMatrix values;
  std::size_t walk_length = 1;
  std::size_t repetitions = 1;

  std::size_t dimension() const { return values.rows(); }
};

/// A(source, .) = r * sum_{t=1..l} alpha(., t), without materialising alpha.
std::vector<double> passage_row(const RowStochasticMatrix& p, std::size_t source,
                                std::size_t walk_length, std::size_t repetitions);

/// Dense V x V expected-visit matrix. Intended for V up to ~1e4; for larger
/// graphs use reduced_passage_similarity, which only walks from ambiguous nodes.
SimilarityMatrix passage_similarity(const RowStochasticMatrix& p, std::size_t walk_length,
                                    std::size_t repetitions);

/// Simulates `repetitions` walks of `walk_length` steps from `source` and
/// returns visit counts at steps 1..l (the start occupancy is not counted).
std::vector<std::uint64_t> monte_carlo_passage(const RowStochasticMatrix& p,
                                               std::size_t source, std::size_t walk_length,
                                               std::size_t repetitions, std::uint64_t seed);

/// Restricts A to the masked rows/columns, symmetrises as (A + A^T)/2 and
/// zeroes the diagonal. Throws DataError with fewer than two masked nodes.
SimilarityMatrix reduce_network(const SimilarityMatrix& a, const std::vector<bool>& mask);

/// Same result as reduce_network(passage_similarity(p, l, r), mask) but only
/// computes the rows of masked sources.
SimilarityMatrix reduced_passage_similarity(const RowStochasticMatrix& p,
                                            const std::vector<bool>& mask,
                                            std::size_t walk_length,
                                            std::size_t repetitions);

struct SparsifyMode {
  enum class Kind { kNone, kThreshold, kKnn };
  Kind kind = Kind::kNone;
  double threshold = 0.0;
  std::size_t neighbors = 1;

  static SparsifyMode none() { return {}; }
  static SparsifyMode threshold_at(double tau) { return {Kind::kThreshold, tau, 1}; }
  static SparsifyMode knn(std::size_t k) { return {Kind::kKnn, 0.0, k}; }
  /// "none", "threshold:<tau>" or "knn:<k>".
  static SparsifyMode parse(const std::string& text);
  std::string to_string() const;
};

struct SparsifyResult {
  SimilarityMatrix matrix;
  bool connected = true;
  std::optional<std::string> warning;
};

/// Threshold mode zeroes entries below tau. kNN mode keeps each row's k largest
/// off-diagonal entries and symmetrises by max(a_ij, a_ji).
SparsifyResult sparsify(const SimilarityMatrix& a, const SparsifyMode& mode);

/// True if the graph of positive entries (treated as undirected) is connected.
bool is_connected(const DenseMatrix& a);

// "SIM <dim> <l> <r>" then "i\tj\tvalue" for every nonzero entry.
void write_similarity(const SimilarityMatrix& a, std::ostream& out);
SimilarityMatrix read_similarity(std::istream& in);

}  // namespace homonym
