#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "homonym/competition.hpp"
#include "homonym/corpus.hpp"
#include "homonym/error.hpp"
#include "homonym/evaluation.hpp"
#include "homonym/fixtures.hpp"
#include "homonym/pipeline.hpp"
#include "homonym/similarity.hpp"

namespace py = pybind11;
using namespace homonym;

namespace {

using Rows = std::vector<std::vector<double>>;

DenseMatrix to_matrix(const Rows& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows[0].size() : 0;
  DenseMatrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != m) throw py::value_error("ragged matrix");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

Rows to_rows(const DenseMatrix& a) {
  Rows out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i].assign(a.row(i).begin(), a.row(i).end());
  return out;
}

std::vector<PaperRecord> records_from(const std::vector<std::pair<std::string, std::vector<std::string>>>& papers) {
  std::vector<PaperRecord> out;
  for (const auto& [id, authors] : papers) out.push_back(make_record(id, authors));
  return out;
}

AmbiguitySpec ambiguity_from(const std::string& json) {
  std::istringstream in(json);
  return parse_ambiguity(in);
}

CompetitionParams params_from(std::size_t k, double lambda, double delta, double omega_min,
                              double omega_max, std::size_t max_iters, std::uint64_t seed,
                              std::optional<std::vector<std::size_t>> positions) {
  CompetitionParams p;
  p.particles = k;
  p.lambda = lambda;
  p.delta = delta;
  p.omega_min = omega_min;
  p.omega_max = omega_max;
  p.max_iters = max_iters;
  p.seed = seed;
  p.initial_positions = std::move(positions);
  return p;
}

py::dict assignment_dict(const ClusterAssignment& a) {
  py::dict d;
  d["labels"] = a.labels;
  d["domination"] = to_rows(a.domination.values());
  d["iterations"] = a.iterations;
  d["converged"] = a.converged;
  return d;
}

py::dict score_dict(const ScoreReport& s) {
  py::dict d;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["f"] = s.f;
  d["tp"] = s.true_positives;
  d["fp"] = s.false_positives;
  d["fn"] = s.false_negatives;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Name disambiguation by particle competition";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ArithmeticError);

  m.def(
      "collaboration_graph",
      [](const std::vector<std::pair<std::string, std::vector<std::string>>>& papers,
         const std::string& ambiguity_json) {
        auto records = records_from(papers);
        auto registry = expand_mentions(records, ambiguity_from(ambiguity_json));
        auto g = build_collaboration_graph(records, registry);
        DenseMatrix w(g.node_count(), g.node_count());
        std::vector<std::string> names;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          names.push_back(g.label(i));
          for (const auto& [j, v] : g.neighbors(i)) w(i, j) = v;
        }
        return py::make_tuple(names, to_rows(w), g.ambiguous_mask());
      },
      py::arg("papers"), py::arg("ambiguity_json") = "{}",
      "Node names, weight matrix and ambiguous mask of the collaboration graph.");

  m.def(
      "transition_matrix",
      [](const Rows& weights) {
        auto w = to_matrix(weights);
        if (w.rows() != w.cols()) throw py::value_error("weights must be square");
        CollaborationGraph g(std::vector<std::string>(w.rows()), std::vector<bool>(w.rows(), false));
        for (std::size_t i = 0; i < w.rows(); ++i)
          for (std::size_t j = i + 1; j < w.cols(); ++j) {
            if (w(i, j) != w(j, i)) throw py::value_error("weights must be symmetric");
            if (w(i, j) > 0) g.add_weight(i, j, w(i, j));
          }
        return to_rows(normalize_transition(g).to_dense());
      },
      py::arg("weights"));

  m.def(
      "forward_variables",
      [](const Rows& p, std::size_t source, std::size_t l) {
        return to_rows(forward_variables(RowStochasticMatrix::from_dense(to_matrix(p)), source, l).values);
      },
      py::arg("p"), py::arg("source"), py::arg("l"),
      "Row t-1 holds the occupancy distribution after t steps.");

  m.def(
      "passage_similarity",
      [](const Rows& p, std::size_t l, std::size_t r) {
        return to_rows(passage_similarity(RowStochasticMatrix::from_dense(to_matrix(p)), l, r).values);
      },
      py::arg("p"), py::arg("l"), py::arg("r") = 1);

  m.def(
      "monte_carlo_passage",
      [](const Rows& p, std::size_t source, std::size_t l, std::size_t r, std::uint64_t seed) {
        return monte_carlo_passage(RowStochasticMatrix::from_dense(to_matrix(p)), source, l, r, seed);
      },
      py::arg("p"), py::arg("source"), py::arg("l"), py::arg("r"), py::arg("seed") = 1);

  m.def(
      "reduce_network",
      [](const Rows& a, const std::vector<bool>& mask) {
        SimilarityMatrix s{to_matrix(a), 1, 1};
        return to_rows(reduce_network(s, mask).values);
      },
      py::arg("a"), py::arg("mask"));

  m.def(
      "sparsify",
      [](const Rows& a, const std::string& mode) {
        auto res = sparsify(SimilarityMatrix{to_matrix(a), 1, 1}, SparsifyMode::parse(mode));
        return py::make_tuple(to_rows(res.matrix.values), res.connected, res.warning);
      },
      py::arg("a"), py::arg("mode"));

  m.def(
      "run_competition",
      [](const Rows& adjacency, std::size_t k, double lambda, double delta, double omega_min,
         double omega_max, std::size_t max_iters, std::uint64_t seed,
         std::optional<std::vector<std::size_t>> positions) {
        auto params = params_from(k, lambda, delta, omega_min, omega_max, max_iters, seed, positions);
        params.validate();
        Adjacency adj(to_matrix(adjacency));
        ClusterAssignment a;
        {
          py::gil_scoped_release release;
          a = run(adj, params);
        }
        return assignment_dict(a);
      },
      py::arg("adjacency"), py::arg("k"), py::arg("lambda_") = 0.6, py::arg("delta") = 0.05,
      py::arg("omega_min") = 0.0, py::arg("omega_max") = 1.0, py::arg("max_iters") = 1000,
      py::arg("seed") = 1, py::arg("positions") = py::none());

  m.def(
      "disambiguate",
      [](const std::vector<std::pair<std::string, std::vector<std::string>>>& papers,
         const std::string& ambiguity_json, std::size_t k, std::size_t l, double lambda,
         std::uint64_t seed, std::optional<std::map<std::string, std::string>> truth) {
        PipelineOptions opts;
        opts.walk_length = l;
        opts.competition.particles = k;
        opts.competition.lambda = lambda;
        opts.competition.seed = seed;
        auto res = disambiguate(records_from(papers), ambiguity_from(ambiguity_json), opts,
                                truth ? &*truth : nullptr);
        py::dict out = assignment_dict(res.assignment);
        std::vector<std::string> names;
        for (auto node : res.reduced_nodes) names.push_back(res.graph.label(node));
        out["nodes"] = names;
        out["similarity"] = to_rows(res.reduced.values);
        if (res.score) out["score"] = score_dict(*res.score);
        return out;
      },
      py::arg("papers"), py::arg("ambiguity_json"), py::arg("k"), py::arg("l") = 3,
      py::arg("lambda_") = 0.6, py::arg("seed") = 1, py::arg("truth") = py::none());

  m.def(
      "pairwise_scores",
      [](const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth) {
        return score_dict(pairwise_scores(predicted, truth));
      },
      py::arg("predicted"), py::arg("truth"));

  m.def("sign_test_pvalue", &sign_test_pvalue, py::arg("wins"), py::arg("trials") = 10,
        py::arg("chance") = 1.0 / 6.0);

  m.def("demo_network", [] {
    auto net = fixtures::demo_network();
    return py::make_tuple(to_rows(net.adjacency), net.truth);
  });

  m.def("toy_corpus", [] {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& r : fixtures::toy_corpus()) out.emplace_back(r.id, r.authors);
    return out;
  });

  m.def(
      "synthetic_benchmark",
      [](std::size_t eta, std::uint64_t seed, double p_cross) {
        SynthSpec spec;
        spec.eta = eta;
        spec.seed = seed;
        spec.p_cross = p_cross;
        auto b = synth_ambiguity_benchmark(spec);
        std::vector<std::pair<std::string, std::vector<std::string>>> papers;
        for (const auto& r : b.records) papers.emplace_back(r.id, r.authors);
        std::map<std::string, std::string> truth;
        for (const auto& [id, e] : b.truth) truth[id] = std::to_string(e);
        return py::make_tuple(papers, spec.ambiguous_name, truth);
      },
      py::arg("eta"), py::arg("seed") = 1, py::arg("p_cross") = 0.0);
}
