#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "homonym/error.hpp"
#include "homonym/evaluation.hpp"
#include "homonym/fixtures.hpp"
#include "homonym/pipeline.hpp"

using namespace homonym;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace {

struct PairCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

PairCounts brute_pairs(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& truth) {
  PairCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool p = pred[i] == pred[j], t = truth[i] == truth[j];
      c.tp += p && t;
      c.fp += p && !t;
      c.fn += !p && t;
    }
  return c;
}

std::vector<std::size_t> random_labels(gen::Engine& g, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out(n);
  for (auto& v : out) v = gen::uniform_int(g, 0, k - 1);
  return out;
}

// Exact binomial tail with rational arithmetic.
Rational exact_tail(unsigned wins, unsigned trials, const Rational& chance) {
  Rational total = 0;
  for (unsigned n = wins; n <= trials; ++n) {
    BigInt binom = 1;
    for (unsigned i = 0; i < n; ++i) binom = binom * (trials - i) / (i + 1);
    Rational term = Rational(binom);
    for (unsigned i = 0; i < n; ++i) term *= chance;
    for (unsigned i = n; i < trials; ++i) term *= (1 - chance);
    total += term;
  }
  return total;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

DenseMatrix two_cliques_bridge(std::size_t m) {
  DenseMatrix w(2 * m, 2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j)
      if (i != j && (i < m) == (j < m)) w(i, j) = 1.0;
  w(m - 1, m) = w(m, m - 1) = 1.0;
  return w;
}

}  // namespace

TEST_CASE("identical partitions score 1") {
  auto s = pairwise_scores(std::vector<std::size_t>{0, 0, 1, 2, 2}, {5, 5, 3, 9, 9});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f == 1.0);
}

TEST_CASE("everything merged against two pairs") {
  auto s = pairwise_scores(std::vector<std::size_t>{0, 0, 0, 0}, {0, 0, 1, 1});
  CHECK(s.precision == doctest::Approx(1.0 / 3.0));
  CHECK(s.recall == 1.0);
  CHECK(s.f == doctest::Approx(0.5));
  CHECK(s.true_positives == 2);
  CHECK(s.false_positives == 4);
  CHECK(s.false_negatives == 0);
}

TEST_CASE("all singletons against a nontrivial truth") {
  auto s = pairwise_scores(std::vector<std::size_t>{0, 1, 2, 3}, {0, 0, 1, 1});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f == 0.0);
}

TEST_CASE("score preconditions") {
  CHECK_THROWS_AS(pairwise_scores(std::vector<std::size_t>{0, 1}, {0, 1, 2}), DataError);
  CHECK_THROWS_AS(pairwise_scores(std::vector<std::size_t>{0}, {0}), DataError);
  std::map<std::string, std::string> a{{"x", "1"}, {"y", "1"}}, b{{"x", "1"}, {"z", "1"}};
  CHECK_THROWS_AS(pairwise_scores(a, b), DataError);
  std::map<std::string, std::string> c{{"x", "a"}, {"y", "b"}};
  auto s = pairwise_scores(a, c);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 1.0);
}

TEST_CASE("property: pair counts, symmetry and relabelling") {
  gen::Engine rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = gen::uniform_int(rng, 2, 30);
    auto pred = random_labels(rng, n, gen::uniform_int(rng, 1, 6));
    auto truth = random_labels(rng, n, gen::uniform_int(rng, 1, 6));
    auto s = pairwise_scores(pred, truth);
    auto c = brute_pairs(pred, truth);
    CHECK(s.true_positives == c.tp);
    CHECK(s.false_positives == c.fp);
    CHECK(s.false_negatives == c.fn);
    CHECK(s.precision >= 0.0);
    CHECK(s.precision <= 1.0);
    CHECK(s.recall >= 0.0);
    CHECK(s.recall <= 1.0);
    if (s.precision + s.recall > 0)
      CHECK(s.f == doctest::Approx(2 * s.precision * s.recall / (s.precision + s.recall)));
    else
      CHECK(s.f == 0.0);

    auto swapped = pairwise_scores(truth, pred);
    CHECK(swapped.precision == s.recall);
    CHECK(swapped.recall == s.precision);
    CHECK(swapped.f == doctest::Approx(s.f).epsilon(1e-15));

    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 100);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabelled = pred;
    for (auto& v : relabelled) v = perm[v];
    auto r = pairwise_scores(relabelled, truth);
    CHECK(r.precision == s.precision);
    CHECK(r.recall == s.recall);
    CHECK(r.f == s.f);
  }
}

TEST_CASE("sign test table values") {
  CHECK(sign_test_pvalue(7) == doctest::Approx(2.7e-4).epsilon(0.02));
  CHECK(sign_test_pvalue(8) == doctest::Approx(1.9e-5).epsilon(0.03));
  CHECK(sign_test_pvalue(5) == doctest::Approx(1.5e-2).epsilon(0.04));
  CHECK(sign_test_pvalue(0) == 1.0);
  CHECK_THROWS_AS(sign_test_pvalue(11), ContractError);
  CHECK_THROWS_AS(sign_test_pvalue(1, 10, 1.5), ContractError);
}

TEST_CASE("sign test against exact rationals, 12 significant digits") {
  const Rational chance(1, 6);
  for (unsigned n = 0; n <= 10; ++n) {
    const double want = static_cast<double>(exact_tail(n, 10, chance));
    const double got = sign_test_pvalue(n);
    CHECK(std::abs(got - want) <= 1e-12 * want);
  }
  for (unsigned trials : {1u, 5u, 20u, 40u})
    for (unsigned n = 0; n <= trials; ++n) {
      const double want = static_cast<double>(exact_tail(n, trials, Rational(1, 4)));
      CHECK(std::abs(sign_test_pvalue(n, trials, 0.25) - want) <= 1e-11 * want);
    }
}

TEST_CASE("sign test is strictly decreasing in wins") {
  for (std::size_t n = 0; n < 10; ++n) CHECK(sign_test_pvalue(n + 1) < sign_test_pvalue(n));
}

TEST_CASE("neighbour features on the toy database") {
  auto recs = fixtures::toy_corpus();
  auto reg = expand_mentions(recs, fixtures::toy_ambiguity());
  auto g = build_collaboration_graph(recs, reg);
  auto f = neighbor_features(g);
  REQUIRE(f.values.rows() == 4);
  CHECK(f.values.cols() == 7);  // Shi never writes with Kim
  const auto kim4 = reg.resolve("Kim", "6");
  const auto kong = reg.resolve("Kong", "6");
  std::size_t row = 0;
  while (f.row_nodes[row] != kim4) ++row;
  for (std::size_t c = 0; c < f.values.cols(); ++c)
    CHECK(f.values(row, c) == (f.column_nodes[c] == kong ? 1.0 : 0.0));
  for (double v : f.values.data()) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("ambiguous node with only ambiguous coauthors has an empty row") {
  std::vector<PaperRecord> recs{make_record("1", {"A", "B"}), make_record("2", {"A", "C"})};
  AmbiguitySpec spec;
  spec.names = {"A", "B"};
  auto g = build_collaboration_graph(recs, expand_mentions(recs, spec));
  auto f = neighbor_features(g);
  REQUIRE(f.values.rows() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < f.values.cols(); ++c) sum += f.values(r, c);
    CHECK(sum == (g.label(f.row_nodes[r]) == "A@2" ? 1.0 : 0.0));
  }
}

TEST_CASE("neighbour features do not depend on paper order") {
  gen::Engine rng(52);
  auto recs = fixtures::toy_corpus();
  auto reference = neighbor_features(build_collaboration_graph(recs, expand_mentions(recs, fixtures::toy_ambiguity())));
  auto g0 = build_collaboration_graph(recs, expand_mentions(recs, fixtures::toy_ambiguity()));
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(recs.begin(), recs.end(), rng);
    auto g = build_collaboration_graph(recs, expand_mentions(recs, fixtures::toy_ambiguity()));
    auto f = neighbor_features(g);
    std::map<std::pair<std::string, std::string>, double> a, b;
    for (std::size_t r = 0; r < f.values.rows(); ++r)
      for (std::size_t c = 0; c < f.values.cols(); ++c) {
        a[{g.label(f.row_nodes[r]), g.label(f.column_nodes[c])}] = f.values(r, c);
        b[{g0.label(reference.row_nodes[r]), g0.label(reference.column_nodes[c])}] = reference.values(r, c);
      }
    CHECK(a == b);
  }
}

TEST_CASE("k-means recovers two separated blocks") {
  DenseMatrix x(8, 6);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t c = 0; c < 6; ++c) x(i, c) = ((i < 4) == (c < 3)) ? 1.0 : 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto res = kmeans_baseline(x, 2, seed);
    CHECK(same_partition(res.labels, {0, 0, 0, 0, 1, 1, 1, 1}));
    CHECK(res.inertia == doctest::Approx(0.0));
  }
}

TEST_CASE("k-means with k equal to the row count") {
  gen::Engine rng(53);
  DenseMatrix x(6, 3);
  for (auto& v : x.data()) v = gen::uniform(rng);
  auto res = kmeans_baseline(x, 6, 4);
  CHECK(std::set<std::size_t>(res.labels.begin(), res.labels.end()).size() == 6);
  CHECK(res.inertia == doctest::Approx(0.0));
}

TEST_CASE("k-means on identical rows") {
  DenseMatrix x(5, 3, 1.0);
  auto a = kmeans_baseline(x, 2, 7);
  auto b = kmeans_baseline(x, 2, 7);
  CHECK(a.inertia == 0.0);
  CHECK(a.labels == b.labels);
  CHECK_THROWS_AS(kmeans_baseline(x, 6, 1), DataError);
  CHECK_THROWS_AS(kmeans_baseline(x, 0, 1), ContractError);
}

TEST_CASE("property: k-means is seed-deterministic and never worse than one cluster") {
  gen::Engine rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = gen::uniform_int(rng, 3, 25);
    DenseMatrix x(n, 4);
    for (auto& v : x.data()) v = gen::uniform(rng) < 0.4 ? 1.0 : 0.0;
    const auto k = gen::uniform_int(rng, 1, std::min<std::size_t>(n, 4));
    auto a = kmeans_baseline(x, k, trial);
    auto b = kmeans_baseline(x, k, trial);
    CHECK(a.labels == b.labels);
    CHECK(a.centroids == b.centroids);
    CHECK(a.iterations <= 300);
    auto one = kmeans_baseline(x, 1, trial);
    CHECK(a.inertia <= one.inertia + 1e-9);
  }
}

TEST_CASE("greedy modularity: two cliques with a bridge") {
  auto labels = modularity_greedy_baseline(two_cliques_bridge(5));
  std::vector<std::size_t> want{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(labels == want);
  CHECK(modularity(two_cliques_bridge(5), labels) > 0.4);
}

TEST_CASE("greedy modularity: complete and empty graphs") {
  DenseMatrix full(6, 6, 1.0);
  for (std::size_t i = 0; i < 6; ++i) full(i, i) = 0.0;
  CHECK(modularity_greedy_baseline(full) == std::vector<std::size_t>(6, 0));
  auto empty = modularity_greedy_baseline(DenseMatrix(4, 4));
  CHECK(empty == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("modularity value against the textbook formula") {
  gen::Engine rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = gen::uniform_int(rng, 3, 12);
    auto w = gen::connected_weights(rng, n, 0.3);
    auto labels = random_labels(rng, n, 3);
    double m2 = 0.0;
    std::vector<double> k(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        k[i] += w(i, j);
        m2 += w(i, j);
      }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (labels[i] == labels[j]) q += w(i, j) - k[i] * k[j] / m2;
    q /= m2;
    CHECK(modularity(w, labels) == doctest::Approx(q).epsilon(1e-12));

    auto greedy = modularity_greedy_baseline(w);
    CHECK(greedy == modularity_greedy_baseline(w));
    CHECK(modularity(w, greedy) >= modularity(w, std::vector<std::size_t>(n, 0)) - 1e-12);
  }
}

TEST_CASE("synthetic benchmark shape") {
  SynthSpec spec;
  spec.eta = 3;
  spec.papers_per_entity = 7;
  spec.seed = 4;
  auto b = synth_ambiguity_benchmark(spec);
  CHECK(b.records.size() == 21);
  CHECK(b.ambiguity.names == std::set<std::string>{spec.ambiguous_name});
  std::set<std::size_t> entities;
  for (const auto& [id, e] : b.truth) entities.insert(e);
  CHECK(entities == std::set<std::size_t>{0, 1, 2});
  for (const auto& r : b.records) {
    CHECK(b.truth.count(r.id) == 1);
    CHECK(std::find(r.authors.begin(), r.authors.end(), spec.ambiguous_name) != r.authors.end());
  }
  auto again = synth_ambiguity_benchmark(spec);
  CHECK(again.records.size() == b.records.size());
  for (std::size_t i = 0; i < b.records.size(); ++i) {
    CHECK(again.records[i].id == b.records[i].id);
    CHECK(again.records[i].authors == b.records[i].authors);
  }
  spec.eta = 1;
  CHECK_THROWS_AS(synth_ambiguity_benchmark(spec), ContractError);
}

TEST_CASE("separable benchmark is solved exactly by every method") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SynthSpec spec;
    spec.eta = 2;
    spec.seed = seed;
    auto b = synth_ambiguity_benchmark(spec);
    std::map<std::string, std::string> truth;
    for (const auto& [id, e] : b.truth) truth[id] = std::to_string(e);
    PipelineOptions opts;
    opts.competition.particles = 2;
    opts.competition.seed = seed;
    auto res = disambiguate(b.records, b.ambiguity, opts, &truth);
    REQUIRE(res.score);
    CHECK(res.score->f == 1.0);
    auto base = score_baselines(res, 2, seed);
    CHECK(base.kmeans.f == 1.0);
    CHECK(base.modularity.f == 1.0);
  }
}

TEST_CASE("aggregate: mean and sample deviation per method and eta") {
  auto rec = [](std::string m, std::size_t eta, double f) {
    ScoreRecord r;
    r.method = std::move(m);
    r.eta = eta;
    r.score.f = f;
    r.score.precision = f;
    r.score.recall = 1.0;
    return r;
  };
  auto rows = aggregate({rec("a", 2, 0.5), rec("a", 2, 0.7), rec("a", 2, 0.9), rec("b", 3, 0.4)});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "a");
  CHECK(rows[0].count == 3);
  CHECK(rows[0].mean_f == doctest::Approx(0.7));
  CHECK(rows[0].sd_f == doctest::Approx(0.2));
  CHECK(rows[1].count == 1);
  CHECK(rows[1].sd_f == 0.0);

  std::ostringstream out;
  write_aggregate(rows, out);
  CHECK(out.str().rfind("method,eta,count,mean_f,sd_f,mean_precision,mean_recall\n", 0) == 0);
  std::ostringstream recs;
  write_score_records({rec("a", 2, 0.5)}, recs);
  CHECK(recs.str().rfind("dataset,method,eta,seed,precision,recall,f,tp,fp,fn\n", 0) == 0);
}
