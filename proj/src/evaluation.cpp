#include "homonym/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "homonym/error.hpp"
#include "homonym/rng.hpp"
#include "text.hpp"

namespace homonym {

namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

ScoreReport finish(std::uint64_t tp, std::uint64_t predicted_pairs, std::uint64_t true_pairs) {
  ScoreReport r;
  r.true_positives = tp;
  r.false_positives = predicted_pairs - tp;
  r.false_negatives = true_pairs - tp;
  r.precision = predicted_pairs ? static_cast<double>(tp) / static_cast<double>(predicted_pairs) : 1.0;
  r.recall = true_pairs ? static_cast<double>(tp) / static_cast<double>(true_pairs) : 1.0;
  const double denom = r.precision + r.recall;
  r.f = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

}  // namespace

ScoreReport pairwise_scores(const std::vector<std::size_t>& predicted,
                            const std::vector<std::size_t>& truth) {
  if (predicted.size() != truth.size())
    throw DataError("predicted and true partitions cover different node sets");
  if (predicted.size() < 2) throw DataError("pairwise scores need at least two nodes");
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> joint;
  std::map<std::size_t, std::uint64_t> pred_sizes, true_sizes;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ++joint[{predicted[i], truth[i]}];
    ++pred_sizes[predicted[i]];
    ++true_sizes[truth[i]];
  }
  std::uint64_t tp = 0, pp = 0, tpairs = 0;
  for (const auto& [key, n] : joint) tp += pairs_of(n);
  for (const auto& [key, n] : pred_sizes) pp += pairs_of(n);
  for (const auto& [key, n] : true_sizes) tpairs += pairs_of(n);
  return finish(tp, pp, tpairs);
}

ScoreReport pairwise_scores(const std::map<std::string, std::string>& predicted,
                            const std::map<std::string, std::string>& truth) {
  if (predicted.size() != truth.size())
    throw DataError("predicted and true partitions cover different node sets");
  std::map<std::string, std::size_t> pred_ids, true_ids;
  std::vector<std::size_t> p, t;
  auto it = truth.begin();
  for (const auto& [node, cluster] : predicted) {
    if (it->first != node)
      throw DataError("node '" + node + "' is missing from the true partition");
    p.push_back(pred_ids.try_emplace(cluster, pred_ids.size()).first->second);
    t.push_back(true_ids.try_emplace(it->second, true_ids.size()).first->second);
    ++it;
  }
  return pairwise_scores(p, t);
}

double sign_test_pvalue(std::size_t wins, std::size_t trials, double chance) {
  if (wins > trials)
    throw ContractError("wins (" + std::to_string(wins) + ") exceed trials (" +
                        std::to_string(trials) + ")");
  if (!(chance >= 0.0 && chance <= 1.0)) throw ContractError("chance must lie in [0, 1]");
  if (wins == 0) return 1.0;
  if (chance == 0.0) return 0.0;
  if (chance == 1.0) return 1.0;
  const double log_p = std::log(chance);
  const double log_q = std::log1p(-chance);
  const double lg_trials = std::lgamma(static_cast<double>(trials) + 1.0);
  // Largest n first: for chance < 1/2 those are the smallest terms.
  double sum = 0.0;
  for (std::size_t n = trials + 1; n-- > wins;) {
    const double dn = static_cast<double>(n);
    const double log_term = lg_trials - std::lgamma(dn + 1.0) -
                            std::lgamma(static_cast<double>(trials - n) + 1.0) + dn * log_p +
                            static_cast<double>(trials - n) * log_q;
    sum += std::exp(log_term);
  }
  return std::min(sum, 1.0);
}

NeighborFeatureMatrix neighbor_features(const CollaborationGraph& graph) {
  NeighborFeatureMatrix out;
  std::vector<bool> is_column(graph.node_count(), false);
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (!graph.is_ambiguous(i)) continue;
    out.row_nodes.push_back(i);
    for (const auto& [j, w] : graph.neighbors(i))
      if (!graph.is_ambiguous(j) && w > 0.0) is_column[j] = true;
  }
  if (out.row_nodes.empty()) throw DataError("neighbour features need an ambiguous node");
  for (std::size_t j = 0; j < graph.node_count(); ++j)
    if (is_column[j]) out.column_nodes.push_back(j);
  std::stable_sort(out.column_nodes.begin(), out.column_nodes.end(),
                   [&](std::size_t a, std::size_t b) { return graph.label(a) < graph.label(b); });
  std::map<std::size_t, std::size_t> column_of;
  for (std::size_t c = 0; c < out.column_nodes.size(); ++c) column_of[out.column_nodes[c]] = c;
  out.values = DenseMatrix(out.row_nodes.size(), out.column_nodes.size());
  for (std::size_t r = 0; r < out.row_nodes.size(); ++r)
    for (const auto& [j, w] : graph.neighbors(out.row_nodes[r]))
      if (auto c = column_of.find(j); c != column_of.end() && w > 0.0) out.values(r, c->second) = 1.0;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

}  // namespace

KMeansResult kmeans_baseline(const DenseMatrix& features, std::size_t k, std::uint64_t seed) {
  const std::size_t n = features.rows();
  const std::size_t dim = features.cols();
  if (k == 0) throw ContractError("k-means needs k >= 1");
  if (k > n)
    throw DataError("k-means: k (" + std::to_string(k) + ") exceeds row count (" +
                    std::to_string(n) + ")");
  constexpr std::size_t kMaxIters = 300;
  constexpr double kShiftTol = 1e-6;

  auto rng = make_stream({seed});
  KMeansResult res;
  res.centroids = DenseMatrix(k, dim);

  // k-means++ seeding.
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += d2[i];
      if (total > 0.0) {
        pick = sample_index(d2, rng);
      } else {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i)
          if (!chosen[i]) free.push_back(i);
        pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      }
    }
    chosen[pick] = true;
    std::copy_n(features.row(pick).begin(), dim, res.centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(features.row(i), res.centroids.row(c)));
  }

  res.labels.assign(n, 0);
  auto assign = [&] {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(features.row(i), res.centroids.row(c));
        if (d < best) {
          best = d;
          res.labels[i] = c;
        }
      }
      inertia += best;
    }
    return inertia;
  };

  for (res.iterations = 0; res.iterations < kMaxIters;) {
    assign();
    ++res.iterations;
    DenseMatrix next(k, dim);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[res.labels[i]];
      auto dst = next.row(res.labels[i]);
      auto src = features.row(i);
      for (std::size_t j = 0; j < dim; ++j) dst[j] += src[j];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        std::copy_n(res.centroids.row(c).begin(), dim, next.row(c).begin());
        continue;
      }
      for (auto& v : next.row(c)) v /= static_cast<double>(sizes[c]);
      shift = std::max(shift, std::sqrt(squared_distance(next.row(c), res.centroids.row(c))));
    }
    res.centroids = std::move(next);
    if (shift < kShiftTol) break;
  }
  res.inertia = assign();
  return res;
}

double modularity(const DenseMatrix& weights, const std::vector<std::size_t>& labels) {
  const std::size_t n = weights.rows();
  double two_m = 0.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        deg[i] += weights(i, j);
        two_m += weights(i, j);
      }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (labels[i] == labels[j])
        q += (i != j ? weights(i, j) : 0.0) - deg[i] * deg[j] / two_m;
  return q / two_m;
}

std::vector<std::size_t> modularity_greedy_baseline(const DenseMatrix& weights) {
  const std::size_t n = weights.rows();
  if (weights.cols() != n) throw ContractError("modularity: weight matrix must be square");
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) two_m += weights(i, j);

  std::vector<std::size_t> community(n);
  std::iota(community.begin(), community.end(), 0);
  if (two_m > 0.0) {
    // e[c][d]: fraction of edge ends from c to d; a[c]: fraction of ends in c.
    std::vector<std::map<std::size_t, double>> e(n);
    std::vector<double> a(n, 0.0);
    std::vector<bool> alive(n, true);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || weights(i, j) == 0.0) continue;
        const double w = 0.5 * (weights(i, j) + weights(j, i)) / two_m;
        e[i][j] = w;
        a[i] += weights(i, j) / two_m;
      }
    while (true) {
      double best = 1e-12;
      std::size_t bc = n, bd = n;
      for (std::size_t c = 0; c < n; ++c) {
        if (!alive[c]) continue;
        for (const auto& [d, ecd] : e[c]) {
          if (d <= c) continue;
          const double gain = 2.0 * (ecd - a[c] * a[d]);
          if (gain > best) {
            best = gain;
            bc = c;
            bd = d;
          }
        }
      }
      if (bc == n) break;
      // Merge bd into bc.
      for (const auto& [x, w] : e[bd]) {
        if (x == bc) continue;
        e[bc][x] += w;
        e[x][bc] += w;
        e[x].erase(bd);
      }
      e[bc].erase(bd);
      e[bd].clear();
      a[bc] += a[bd];
      alive[bd] = false;
      for (auto& c : community)
        if (c == bd) c = bc;
    }
  }
  std::map<std::size_t, std::size_t> compact;
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = compact.try_emplace(community[i], compact.size()).first->second;
  return out;
}

// ---------------------------------------------------------------------------

SynthBenchmark synth_ambiguity_benchmark(const SynthSpec& spec) {
  if (spec.eta < 2) throw ContractError("synthetic benchmark needs eta >= 2");
  if (spec.papers_per_entity == 0) throw ContractError("papers_per_entity must be >= 1");
  if (spec.coauthors_per_paper == 0 || spec.coauthor_pool < spec.coauthors_per_paper)
    throw ContractError("coauthor_pool must be >= coauthors_per_paper >= 1");
  if (!(spec.p_cross >= 0.0 && spec.p_cross <= 1.0))
    throw ContractError("p_cross must lie in [0, 1]");

  auto rng = make_stream({spec.seed, spec.eta});
  auto pool_name = [](std::size_t entity, std::size_t i) {
    return "E" + std::to_string(entity) + ".C" + std::to_string(i);
  };
  std::vector<std::size_t> pool(spec.coauthor_pool);
  std::iota(pool.begin(), pool.end(), 0);
  std::bernoulli_distribution cross(spec.p_cross);
  std::uniform_int_distribution<std::size_t> pick_other(0, spec.eta - 2);
  std::uniform_int_distribution<std::size_t> pick_member(0, spec.coauthor_pool - 1);
  std::uniform_int_distribution<std::size_t> pick_slot(0, spec.coauthors_per_paper - 1);

  struct Draft {
    std::size_t entity;
    std::vector<std::string> authors;
  };
  std::vector<Draft> drafts;
  for (std::size_t e = 0; e < spec.eta; ++e) {
    for (std::size_t p = 0; p < spec.papers_per_entity; ++p) {
      std::shuffle(pool.begin(), pool.end(), rng);
      Draft d{e, {spec.ambiguous_name}};
      for (std::size_t c = 0; c < spec.coauthors_per_paper; ++c)
        d.authors.push_back(pool_name(e, pool[c]));
      if (cross(rng)) {
        std::size_t other = pick_other(rng);
        if (other >= e) ++other;
        d.authors[1 + pick_slot(rng)] = pool_name(other, pick_member(rng));
      }
      drafts.push_back(std::move(d));
    }
  }
  std::shuffle(drafts.begin(), drafts.end(), rng);

  SynthBenchmark out;
  out.ambiguity.names.insert(spec.ambiguous_name);
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    std::string id = "p" + std::to_string(i + 1);
    out.truth[id] = drafts[i].entity;
    out.records.push_back(make_record(std::move(id), drafts[i].authors));
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<ScoreRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const ScoreRecord*>> groups;
  for (const auto& r : records) groups[{r.method, r.eta}].push_back(&r);
  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    AggregateRow row{key.first, key.second, members.size()};
    for (const auto* m : members) {
      row.mean_f += m->score.f;
      row.mean_precision += m->score.precision;
      row.mean_recall += m->score.recall;
    }
    const double n = static_cast<double>(members.size());
    row.mean_f /= n;
    row.mean_precision /= n;
    row.mean_recall /= n;
    if (members.size() > 1) {
      double ss = 0.0;
      for (const auto* m : members) ss += (m->score.f - row.mean_f) * (m->score.f - row.mean_f);
      row.sd_f = std::sqrt(ss / (n - 1.0));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_score_records(const std::vector<ScoreRecord>& records, std::ostream& out) {
  out << "dataset,method,eta,seed,precision,recall,f,tp,fp,fn\n";
  for (const auto& r : records)
    out << r.dataset << ',' << r.method << ',' << r.eta << ',' << r.seed << ','
        << text::fmt(r.score.precision) << ',' << text::fmt(r.score.recall) << ','
        << text::fmt(r.score.f) << ',' << r.score.true_positives << ','
        << r.score.false_positives << ',' << r.score.false_negatives << '\n';
}

void write_aggregate(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "method,eta,count,mean_f,sd_f,mean_precision,mean_recall\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.eta << ',' << r.count << ',' << text::fmt(r.mean_f) << ','
        << text::fmt(r.sd_f) << ',' << text::fmt(r.mean_precision) << ','
        << text::fmt(r.mean_recall) << '\n';
}

}  // namespace homonym
