#pragma once

// End-to-end disambiguation: corpus -> collaboration graph -> transition
// matrix -> truncated passage-time similarity on ambiguous nodes -> particle
// competition -> labels (and scores when ground truth is known).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homonym/competition.hpp"
#include "homonym/corpus.hpp"
#include "homonym/evaluation.hpp"
#include "homonym/similarity.hpp"

namespace homonym {

struct PipelineOptions {
  std::size_t walk_length = 3;
  std::size_t repetitions = 1;
  SparsifyMode sparsify;
  CompetitionParams competition;
  std::vector<std::uint64_t> ensemble_seeds;  // empty: single run with competition.seed
};

struct PipelineResult {
  NodeRegistry registry;
  CollaborationGraph graph;
  std::vector<std::size_t> reduced_nodes;  // graph node of each reduced index
  SimilarityMatrix reduced;
  bool connected = true;
  std::optional<std::string> sparsify_warning;
  /// Reduced nodes with no similarity to any other; they get a self-loop so
  /// the particles can still leave them.
  std::vector<std::size_t> isolated;
  std::optional<std::vector<std::size_t>> truth;  // class per reduced node
  ClusterAssignment assignment;
  std::optional<ScoreReport> score;
};

/// Class id per reduced node from a paper -> entity map, compacted in order of
/// first appearance. A grouped node takes the entity of its first mention.
std::vector<std::size_t> reduced_truth(const NodeRegistry& registry,
                                       const std::vector<std::size_t>& reduced_nodes,
                                       const std::map<std::string, std::string>& paper_truth);

/// Adds a unit self-loop to every row that has no positive entry; returns
/// the affected indices.
std::vector<std::size_t> attach_self_loops(DenseMatrix& adjacency);

/// Connected component id per node (positive entries in either direction),
/// numbered in order of each component's lowest node.
std::vector<std::size_t> component_ids(const DenseMatrix& adjacency);

/// Start positions for a graph with several components: one particle in each
/// component (uniform within it), the rest uniform over the remaining nodes.
/// Empty when the graph is connected or has more components than particles.
std::optional<std::vector<std::size_t>> spread_positions(const DenseMatrix& adjacency,
                                                         std::size_t particles,
                                                         std::uint64_t seed);

PipelineResult disambiguate(const std::vector<PaperRecord>& records, const AmbiguitySpec& ambiguity,
                            const PipelineOptions& options,
                            const std::map<std::string, std::string>* paper_truth = nullptr);

/// Competition only, on a ready-made adjacency (e.g. the demo network).
ClusterAssignment cluster_network(const DenseMatrix& adjacency, const PipelineOptions& options,
                                  const std::vector<std::size_t>* truth = nullptr);

/// K-Means on neighbour vectors and greedy modularity on the shared-coauthor
/// graph, scored against the same truth as the particle run.
struct BaselineScores {
  ScoreReport kmeans;
  ScoreReport modularity;
};
BaselineScores score_baselines(const PipelineResult& result, std::size_t k, std::uint64_t seed);

}  // namespace homonym
