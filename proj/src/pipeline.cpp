#include "homonym/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "homonym/error.hpp"

namespace homonym {

std::vector<std::size_t> reduced_truth(const NodeRegistry& registry,
                                       const std::vector<std::size_t>& reduced_nodes,
                                       const std::map<std::string, std::string>& paper_truth) {
  std::map<std::string, std::size_t> ids;
  std::vector<std::size_t> out;
  for (auto node : reduced_nodes) {
    const auto& papers = registry.mentions(node);
    if (papers.empty())
      throw DataError("node '" + registry.display_name(node) + "' has no recorded mention");
    auto it = paper_truth.find(papers.front());
    if (it == paper_truth.end())
      throw DataError("no ground truth for paper '" + papers.front() + "'");
    out.push_back(ids.try_emplace(it->second, ids.size()).first->second);
  }
  return out;
}

std::vector<std::size_t> attach_self_loops(DenseMatrix& adjacency) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    auto r = adjacency.row(i);
    if (std::none_of(r.begin(), r.end(), [](double v) { return v > 0.0; })) {
      adjacency(i, i) = 1.0;
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> component_ids(const DenseMatrix& adjacency) {
  const std::size_t n = adjacency.rows();
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, kUnseen);
  std::size_t next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (comp[root] != kUnseen) continue;
    std::queue<std::size_t> q;
    q.push(root);
    comp[root] = next;
    while (!q.empty()) {
      auto i = q.front();
      q.pop();
      for (std::size_t j = 0; j < n; ++j)
        if (comp[j] == kUnseen && (adjacency(i, j) > 0.0 || adjacency(j, i) > 0.0)) {
          comp[j] = next;
          q.push(j);
        }
    }
    ++next;
  }
  return comp;
}

std::optional<std::vector<std::size_t>> spread_positions(const DenseMatrix& adjacency,
                                                         std::size_t particles,
                                                         std::uint64_t seed) {
  const auto comp = component_ids(adjacency);
  const std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  if (count <= 1 || count > particles || particles > comp.size()) return std::nullopt;
  auto rng = make_stream({seed, 0x5eedu});
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < comp.size(); ++i) members[comp[i]].push_back(i);
  std::vector<std::size_t> positions;
  std::vector<bool> taken(comp.size(), false);
  for (const auto& m : members) {
    auto pick = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
    positions.push_back(pick);
    taken[pick] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (!taken[i]) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  positions.insert(positions.end(), rest.begin(),
                   rest.begin() + static_cast<std::ptrdiff_t>(particles - count));
  return positions;
}

ClusterAssignment cluster_network(const DenseMatrix& adjacency, const PipelineOptions& options,
                                  const std::vector<std::size_t>* truth) {
  Adjacency adj(adjacency);
  auto params = options.competition;
  if (!params.initial_positions)
    params.initial_positions = spread_positions(adjacency, params.particles, params.seed);
  // Without ground truth the trajectory still logs one class spanning every node.
  const std::vector<std::size_t> one_class(adjacency.rows(), 0);
  if (options.ensemble_seeds.empty()) return run(adj, params, truth ? truth : &one_class);
  return run_ensemble(adj, params, options.ensemble_seeds);
}

PipelineResult disambiguate(const std::vector<PaperRecord>& records, const AmbiguitySpec& ambiguity,
                            const PipelineOptions& options,
                            const std::map<std::string, std::string>* paper_truth) {
  PipelineResult res;
  res.registry = expand_mentions(records, ambiguity);
  res.graph = build_collaboration_graph(records, res.registry);
  res.reduced_nodes = res.registry.ambiguous_nodes();
  if (options.competition.particles > res.reduced_nodes.size())
    throw DataError("more particles (" + std::to_string(options.competition.particles) +
                    ") than ambiguous nodes (" + std::to_string(res.reduced_nodes.size()) + ")");

  const auto p = normalize_transition(res.graph);
  auto reduced = reduced_passage_similarity(p, res.graph.ambiguous_mask(), options.walk_length,
                                            options.repetitions);
  auto sparse = sparsify(reduced, options.sparsify);
  res.reduced = std::move(sparse.matrix);
  res.connected = sparse.connected;
  res.sparsify_warning = std::move(sparse.warning);

  DenseMatrix adjacency = res.reduced.values;
  res.isolated = attach_self_loops(adjacency);

  if (paper_truth) res.truth = reduced_truth(res.registry, res.reduced_nodes, *paper_truth);
  res.assignment = cluster_network(adjacency, options, res.truth ? &*res.truth : nullptr);
  if (res.truth) res.score = pairwise_scores(res.assignment.labels, *res.truth);
  return res;
}

BaselineScores score_baselines(const PipelineResult& result, std::size_t k, std::uint64_t seed) {
  if (!result.truth) throw DataError("baselines need ground truth");
  auto features = neighbor_features(result.graph);
  BaselineScores out;
  out.kmeans = pairwise_scores(kmeans_baseline(features.values, k, seed).labels, *result.truth);

  // Shared-coauthor counts between ambiguous nodes.
  const auto& f = features.values;
  DenseMatrix shared(f.rows(), f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = i + 1; j < f.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < f.cols(); ++c) s += f(i, c) * f(j, c);
      shared(i, j) = shared(j, i) = s;
    }
  out.modularity = pairwise_scores(modularity_greedy_baseline(shared), *result.truth);
  return out;
}

}  // namespace homonym
