#pragma once

// Scoring against ground truth, the sign-test p-value, neighbour-vector
// baselines (K-Means, greedy modularity) and synthetic ambiguity benchmarks.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "homonym/corpus.hpp"
#include "homonym/matrix.hpp"

namespace homonym {

struct ScoreReport {
  double precision = 1.0;
  double recall = 1.0;
  double f = 1.0;
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
};

/// Pair-counting precision/recall over all unordered node pairs. An empty
/// predicted (resp. true) pair set scores precision (resp. recall) 1.
/// Throws DataError on mismatched sizes or fewer than two nodes.
ScoreReport pairwise_scores(const std::vector<std::size_t>& predicted,
                            const std::vector<std::size_t>& truth);
/// Keyed variant; both maps must have identical key sets.
ScoreReport pairwise_scores(const std::map<std::string, std::string>& predicted,
                            const std::map<std::string, std::string>& truth);

/// P[X >= wins] for X ~ Binomial(trials, chance).
double sign_test_pvalue(std::size_t wins, std::size_t trials = 10, double chance = 1.0 / 6.0);

/// Binary presence vectors of non-ambiguous collaborators, one row per
/// ambiguous node (in node order).
struct NeighborFeatureMatrix {
  std::vector<std::size_t> row_nodes;
  std::vector<std::size_t> column_nodes;
  DenseMatrix values;
};

NeighborFeatureMatrix neighbor_features(const CollaborationGraph& graph);

struct KMeansResult {
  std::vector<std::size_t> labels;
  DenseMatrix centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// Lloyd iterations from k-means++ seeding; stops after 300 iterations or when
/// no centroid moves more than 1e-6.
KMeansResult kmeans_baseline(const DenseMatrix& features, std::size_t k, std::uint64_t seed);

/// Agglomerative merging of the pair with the largest weighted modularity gain
/// until no merge improves modularity. Labels are compacted in node order.
std::vector<std::size_t> modularity_greedy_baseline(const DenseMatrix& weights);

/// Weighted Newman modularity of a labelling (diagonal ignored).
double modularity(const DenseMatrix& weights, const std::vector<std::size_t>& labels);

struct SynthSpec {
  std::size_t eta = 2;
  std::size_t papers_per_entity = 12;
  std::size_t coauthor_pool = 5;
  std::size_t coauthors_per_paper = 3;
  double p_cross = 0.0;
  std::uint64_t seed = 1;
  std::string ambiguous_name = "Lee";
};

struct SynthBenchmark {
  std::vector<PaperRecord> records;
  AmbiguitySpec ambiguity;
  std::map<std::string, std::size_t> truth;  // paper id -> entity
};

/// eta entities share one name; each writes papers_per_entity papers with
/// coauthors drawn from its own pool. With probability p_cross a paper swaps
/// one coauthor for a member of another entity's pool.
SynthBenchmark synth_ambiguity_benchmark(const SynthSpec& spec);

/// One evaluated (dataset, method, seed) cell.
struct ScoreRecord {
  std::string dataset;
  std::string method;
  std::size_t eta = 0;
  std::uint64_t seed = 0;
  ScoreReport score;
};

struct AggregateRow {
  std::string method;
  std::size_t eta = 0;
  std::size_t count = 0;
  double mean_f = 0.0;
  double sd_f = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
};

/// Mean and sample standard deviation of f per (method, eta).
std::vector<AggregateRow> aggregate(const std::vector<ScoreRecord>& records);

void write_score_records(const std::vector<ScoreRecord>& records, std::ostream& out);
void write_aggregate(const std::vector<AggregateRow>& rows, std::ostream& out);

}  // namespace homonym
