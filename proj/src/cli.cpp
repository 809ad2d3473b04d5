#include "homonym/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "homonym/fixtures.hpp"
#include "json.hpp"
#include "text.hpp"

namespace homonym::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T v{};
  if (!text::parse_number(value, v))
    throw UsageError("config key '" + key + "': cannot parse '" + value + "'");
  return v;
}

std::vector<std::size_t> parse_index_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (auto part : text::split(value, ',')) {
    auto t = text::trim(part);
    if (t.empty()) continue;
    auto dots = t.find("..");
    if (dots != std::string_view::npos) {
      auto lo = parse_value<std::size_t>(key, std::string(t.substr(0, dots)));
      auto hi = parse_value<std::size_t>(key, std::string(t.substr(dots + 2)));
      if (hi < lo) throw UsageError("config key '" + key + "': empty range '" + std::string(t) + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_value<std::size_t>(key, std::string(t)));
    }
  }
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::ifstream open_input(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError("missing " + what + " path");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + what + " '" + path + "'");
  return in;
}

// Writes through a temporary file and renames, so readers never see a
// partially written output.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw UsageError("missing --out directory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
}

// Two-column CSV with a header row: id,class.
std::map<std::string, std::string> read_truth(const std::string& path) {
  auto in = open_input(path, "truth file");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || text::trim(line).empty()) continue;
    auto f = text::split(line, ',');
    if (f.size() != 2)
      throw DataError(path + " line " + std::to_string(lineno) + ": expected 'id,class'");
    out[std::string(text::trim(f[0]))] = std::string(text::trim(f[1]));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "lambda", "delta", "omega_min", "omega_max", "k", "l", "r", "max_iters", "conv_tol",
      "conv_window", "seed", "positions", "sparsify", "ensemble", "workers", "out", "corpus",
      "ambiguous", "truth", "network", "verbosity", "eta", "papers_per_entity",
      "coauthor_pool", "coauthors_per_paper", "p_cross", "sign_chance"};
  return k;
}

void RunConfig::set(std::string key, const std::string& raw) {
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value(text::trim(raw));
  auto& c = pipeline.competition;
  if (key == "lambda") c.lambda = parse_value<double>(key, value);
  else if (key == "delta") c.delta = parse_value<double>(key, value);
  else if (key == "omega_min") c.omega_min = parse_value<double>(key, value);
  else if (key == "omega_max") c.omega_max = parse_value<double>(key, value);
  else if (key == "k") c.particles = parse_value<std::size_t>(key, value);
  else if (key == "l") pipeline.walk_length = parse_value<std::size_t>(key, value);
  else if (key == "r") pipeline.repetitions = parse_value<std::size_t>(key, value);
  else if (key == "max_iters") c.max_iters = parse_value<std::size_t>(key, value);
  else if (key == "conv_tol") c.conv_tol = parse_value<double>(key, value);
  else if (key == "conv_window") c.conv_window = parse_value<std::size_t>(key, value);
  else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "positions") {
    if (value.empty() || value == "random") c.initial_positions.reset();
    else c.initial_positions = parse_index_list(key, value);
  } else if (key == "sparsify") {
    try {
      pipeline.sparsify = SparsifyMode::parse(value);
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  } else if (key == "ensemble") ensemble = parse_value<std::size_t>(key, value);
  else if (key == "workers") workers = parse_value<std::size_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "corpus") corpus = value;
  else if (key == "ambiguous") ambiguous = value;
  else if (key == "truth") truth = value;
  else if (key == "network") network = value;
  else if (key == "verbosity") verbosity = parse_value<int>(key, value);
  else if (key == "eta") synth.eta = parse_value<std::size_t>(key, value);
  else if (key == "papers_per_entity") synth.papers_per_entity = parse_value<std::size_t>(key, value);
  else if (key == "coauthor_pool") synth.coauthor_pool = parse_value<std::size_t>(key, value);
  else if (key == "coauthors_per_paper") synth.coauthors_per_paper = parse_value<std::size_t>(key, value);
  else if (key == "p_cross") synth.p_cross = parse_value<double>(key, value);
  else if (key == "sign_chance") sign_chance = parse_value<double>(key, value);
  else throw UsageError("unknown config key '" + key + "'");
}

void RunConfig::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto t = text::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    set(std::string(text::trim(t.substr(0, eq))), std::string(t.substr(eq + 1)));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  load(in);
}

std::string RunConfig::dump() const {
  const auto& c = pipeline.competition;
  std::ostringstream o;
  o << "lambda = " << text::fmt(c.lambda) << '\n'
    << "delta = " << text::fmt(c.delta) << '\n'
    << "omega_min = " << text::fmt(c.omega_min) << '\n'
    << "omega_max = " << text::fmt(c.omega_max) << '\n'
    << "k = " << c.particles << '\n'
    << "l = " << pipeline.walk_length << '\n'
    << "r = " << pipeline.repetitions << '\n'
    << "max_iters = " << c.max_iters << '\n'
    << "conv_tol = " << text::fmt(c.conv_tol) << '\n'
    << "conv_window = " << c.conv_window << '\n'
    << "seed = " << c.seed << '\n'
    << "positions = " << (c.initial_positions ? join(*c.initial_positions) : "random") << '\n'
    << "sparsify = " << pipeline.sparsify.to_string() << '\n'
    << "ensemble = " << ensemble << '\n'
    << "workers = " << workers << '\n'
    << "verbosity = " << verbosity << '\n';
  auto path = [&](const char* key, const std::string& v) {
    if (!v.empty()) o << key << " = " << v << '\n';
  };
  path("out", out);
  path("corpus", corpus);
  path("ambiguous", ambiguous);
  path("truth", truth);
  path("network", network);
  o << "eta = " << synth.eta << '\n'
    << "papers_per_entity = " << synth.papers_per_entity << '\n'
    << "coauthor_pool = " << synth.coauthor_pool << '\n'
    << "coauthors_per_paper = " << synth.coauthors_per_paper << '\n'
    << "p_cross = " << text::fmt(synth.p_cross) << '\n'
    << "sign_chance = " << text::fmt(sign_chance) << '\n';
  return o.str();
}

void RunConfig::validate(bool need_inputs) const {
  try {
    pipeline.competition.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  if (pipeline.walk_length == 0) throw UsageError("l must be >= 1");
  if (pipeline.repetitions == 0) throw UsageError("r must be >= 1");
  if (workers == 0) throw UsageError("workers must be >= 1");
  if (!(synth.p_cross >= 0.0 && synth.p_cross <= 1.0)) throw UsageError("p_cross must lie in [0, 1]");
  if (!(sign_chance > 0.0 && sign_chance < 1.0)) throw UsageError("sign_chance must lie in (0, 1)");
  if (!need_inputs) return;
  auto check = [](const std::string& p, const char* what) {
    if (!p.empty() && !fs::exists(p)) throw DataError(std::string(what) + " not found: '" + p + "'");
  };
  check(corpus, "corpus");
  check(ambiguous, "ambiguity file");
  check(truth, "truth file");
  check(network, "network");
  if (network.empty() && (corpus.empty() || ambiguous.empty()))
    throw UsageError("need either --network or both --corpus and --ambiguous");
}

// ---------------------------------------------------------------------------

int cmd_build_net(const std::string& corpus, const std::string& ambiguous,
                  const std::string& out, std::ostream& log) {
  auto cin = open_input(corpus, "corpus");
  std::vector<PaperRecord> records;
  try {
    records = parse_corpus(cin);
  } catch (const DataError& e) {
    throw DataError(corpus + ": " + e.what());
  }
  AmbiguitySpec spec;
  if (!ambiguous.empty()) {
    auto ain = open_input(ambiguous, "ambiguity file");
    try {
      spec = parse_ambiguity(ain);
    } catch (const DataError& e) {
      throw DataError(ambiguous + ": " + e.what());
    }
  }
  auto registry = expand_mentions(records, spec);
  auto graph = build_collaboration_graph(records, registry);
  ensure_dir(out);
  write_file(fs::path(out) / "graph.tsv", [&](std::ostream& o) { write_edge_list(graph, o); });
  write_file(fs::path(out) / "nodes.tsv", [&](std::ostream& o) { write_node_table(graph, o); });
  log << "V=" << graph.node_count() << " E=" << graph.edge_count()
      << " ambiguous=" << graph.ambiguous_count() << '\n';
  return kOk;
}

namespace {

PipelineOptions resolved_options(const RunConfig& config) {
  auto opts = config.pipeline;
  opts.ensemble_seeds.clear();
  for (std::size_t i = 0; i < config.ensemble; ++i)
    opts.ensemble_seeds.push_back(opts.competition.seed + i);
  return opts;
}

}  // namespace

int cmd_disambiguate(const RunConfig& config, std::ostream& log) {
  config.validate(true);
  const auto opts = resolved_options(config);
  ensure_dir(config.out);
  const fs::path out(config.out);
  write_file(out / "config.txt", [&](std::ostream& o) { o << config.dump(); });

  ClusterAssignment assignment;
  std::optional<std::vector<std::size_t>> truth;
  std::string dataset;

  if (!config.network.empty()) {
    auto in = open_input(config.network, "network");
    auto graph = read_graph(in);
    DenseMatrix adjacency(graph.node_count(), graph.node_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i)
      for (const auto& [j, w] : graph.neighbors(i)) adjacency(i, j) = w;
    if (!config.truth.empty()) {
      auto labels = read_truth(config.truth);
      std::map<std::string, std::size_t> ids;
      truth.emplace();
      for (std::size_t i = 0; i < graph.node_count(); ++i) {
        auto it = labels.find(std::to_string(i));
        if (it == labels.end()) throw DataError("truth file has no class for node " + std::to_string(i));
        truth->push_back(ids.try_emplace(it->second, ids.size()).first->second);
      }
    }
    assignment = cluster_network(adjacency, opts, truth ? &*truth : nullptr);
    dataset = fs::path(config.network).stem().string();
    log << "V=" << graph.node_count() << " E=" << graph.edge_count() << '\n';
  } else {
    auto cin = open_input(config.corpus, "corpus");
    auto records = parse_corpus(cin);
    auto ain = open_input(config.ambiguous, "ambiguity file");
    auto spec = parse_ambiguity(ain);
    std::optional<std::map<std::string, std::string>> paper_truth;
    if (!config.truth.empty()) paper_truth = read_truth(config.truth);
    auto res = disambiguate(records, spec, opts, paper_truth ? &*paper_truth : nullptr);
    write_file(out / "reduced.sim", [&](std::ostream& o) { write_similarity(res.reduced, o); });
    write_file(out / "reduced_nodes.csv", [&](std::ostream& o) {
      o << "reduced_index,graph_node,name\n";
      for (std::size_t i = 0; i < res.reduced_nodes.size(); ++i)
        o << i << ',' << res.reduced_nodes[i] << ',' << res.graph.label(res.reduced_nodes[i]) << '\n';
    });
    if (res.sparsify_warning) log << "warning: " << *res.sparsify_warning << '\n';
    if (!res.connected) log << "note: reduced similarity graph is disconnected\n";
    if (!res.isolated.empty())
      log << "note: " << res.isolated.size() << " reduced node(s) had no similarity and got self-loops\n";
    log << "V=" << res.graph.node_count() << " E=" << res.graph.edge_count()
        << " ambiguous=" << res.reduced_nodes.size() << '\n';
    assignment = std::move(res.assignment);
    truth = res.truth;
    dataset = fs::path(config.corpus).stem().string();
  }

  write_file(out / "assignment.tsv", [&](std::ostream& o) { write_assignment(assignment, o); });
  write_file(out / "domination.csv", [&](std::ostream& o) { write_domination(assignment.domination, o); });
  if (assignment.trajectory)
    write_file(out / "trajectory.csv", [&](std::ostream& o) { write_trajectory(*assignment.trajectory, o); });
  if (truth) {
    auto score = pairwise_scores(assignment.labels, *truth);
    const std::size_t classes = *std::max_element(truth->begin(), truth->end()) + 1;
    ScoreRecord rec{dataset, "particles", classes, opts.competition.seed, score};
    write_file(out / "scores.csv", [&](std::ostream& o) { write_score_records({rec}, o); });
    log << "precision=" << text::fmt(score.precision) << " recall=" << text::fmt(score.recall)
        << " f=" << text::fmt(score.f) << '\n';
  }
  if (config.verbosity > 0)
    log << "iterations=" << assignment.iterations << (assignment.converged ? " (converged)" : "") << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

void SweepGrid::add(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("grid entry '" + assignment + "' needs key=values");
  auto key = std::string(text::trim(std::string_view(assignment).substr(0, eq)));
  auto values = assignment.substr(eq + 1);
  if (key == "l") walk_lengths = parse_index_list(key, values);
  else if (key == "k") particles = parse_index_list(key, values);
  else if (key == "eta") etas = parse_index_list(key, values);
  else if (key == "seeds" || key == "seed") {
    seeds.clear();
    for (auto v : parse_index_list(key, values)) seeds.push_back(v);
  } else if (key == "lambda") {
    lambdas.clear();
    for (auto part : text::split(values, ','))
      if (!text::trim(part).empty()) lambdas.push_back(parse_value<double>(key, std::string(part)));
  } else {
    throw UsageError("unknown grid key '" + key + "' (expected l, k, lambda, eta, seeds)");
  }
  if (walk_lengths.empty() && etas.empty() && seeds.empty() && lambdas.empty() && particles.empty())
    throw UsageError("grid entry '" + assignment + "' lists no values");
}

void SweepGrid::complete(const RunConfig& config) {
  if (walk_lengths.empty()) walk_lengths = {config.pipeline.walk_length};
  if (lambdas.empty()) lambdas = {config.pipeline.competition.lambda};
  if (etas.empty()) etas = {config.synth.eta};
  if (seeds.empty()) seeds = {config.pipeline.competition.seed};
  auto bad = [](const auto& v) { return v.empty(); };
  if (bad(walk_lengths) || bad(lambdas) || bad(etas) || bad(seeds))
    throw UsageError("empty sweep grid");
  for (auto l : walk_lengths)
    if (l == 0) throw UsageError("grid walk length must be >= 1");
  for (auto e : etas)
    if (e < 2) throw UsageError("grid eta must be >= 2");
}

namespace {

std::string cell_tag(const SweepCell& c) {
  return "l=" + std::to_string(c.walk_length) + ";k=" + std::to_string(c.particles) +
         ";lambda=" + text::fmt(c.lambda);
}

}  // namespace

SweepResult run_sweep(const RunConfig& config, const SweepGrid& raw_grid) {
  SweepGrid grid = raw_grid;
  grid.complete(config);
  std::vector<SweepCell> cells;
  for (auto l : grid.walk_lengths)
    for (auto lambda : grid.lambdas)
      for (auto eta : grid.etas) {
        if (grid.particles.empty()) {
          cells.push_back({l, eta, lambda, eta});
        } else {
          for (auto k : grid.particles) cells.push_back({l, k, lambda, eta});
        }
      }

  struct JobResult {
    ScoreReport particles, kmeans, modularity;
  };
  const std::size_t n_seeds = grid.seeds.size();
  std::vector<JobResult> results(cells.size() * n_seeds);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= results.size()) return;
      try {
        const auto& cell = cells[job / n_seeds];
        const auto seed = grid.seeds[job % n_seeds];
        auto spec = config.synth;
        spec.eta = cell.eta;
        spec.seed = seed;
        auto bench = synth_ambiguity_benchmark(spec);
        std::map<std::string, std::string> truth;
        for (const auto& [paper, entity] : bench.truth) truth[paper] = std::to_string(entity);
        auto opts = resolved_options(config);
        opts.walk_length = cell.walk_length;
        opts.competition.particles = cell.particles;
        opts.competition.lambda = cell.lambda;
        opts.competition.seed = seed;
        opts.competition.initial_positions.reset();
        for (std::size_t i = 0; i < opts.ensemble_seeds.size(); ++i) opts.ensemble_seeds[i] = seed + i;
        auto res = disambiguate(bench.records, bench.ambiguity, opts, &truth);
        auto base = score_baselines(res, cell.particles, seed);
        results[job] = {*res.score, base.kmeans, base.modularity};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = results.size();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(config.workers, results.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  SweepResult out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    const auto tag = cell_tag(cell);
    std::size_t wins_km = 0, wins_mod = 0, wins_best = 0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto& r = results[c * n_seeds + s];
      const auto seed = grid.seeds[s];
      const auto dataset = "eta" + std::to_string(cell.eta) + "-seed" + std::to_string(seed);
      out.records.push_back({dataset, "particles[" + tag + "]", cell.eta, seed, r.particles});
      out.records.push_back({dataset, "kmeans[k=" + std::to_string(cell.particles) + "]", cell.eta, seed, r.kmeans});
      out.records.push_back({dataset, "modularity", cell.eta, seed, r.modularity});
      wins_km += r.particles.f > r.kmeans.f;
      wins_mod += r.particles.f > r.modularity.f;
      wins_best += r.particles.f > std::max(r.kmeans.f, r.modularity.f);
    }
    for (auto [name, wins] : {std::pair{"kmeans", wins_km}, std::pair{"modularity", wins_mod},
                              std::pair{"best", wins_best}})
      out.sign_tests.push_back({cell, name, wins, n_seeds, sign_test_pvalue(wins, n_seeds, config.sign_chance)});
  }
  // Baseline rows repeat across l/lambda cells; keep one copy per dataset.
  std::vector<ScoreRecord> unique;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : out.records)
    if (seen.emplace(r.dataset, r.method).second) unique.push_back(r);
  out.records = std::move(unique);
  out.aggregate = aggregate(out.records);
  return out;
}

int cmd_sweep(const RunConfig& config, const SweepGrid& grid, std::ostream& log) {
  config.validate(false);
  ensure_dir(config.out);
  const fs::path out(config.out);
  write_file(out / "config.txt", [&](std::ostream& o) { o << config.dump(); });
  auto res = run_sweep(config, grid);

  fs::create_directories(out / "cells");
  std::map<std::string, std::vector<ScoreRecord>> by_dataset;
  for (const auto& r : res.records) by_dataset[r.dataset].push_back(r);
  for (const auto& [dataset, recs] : by_dataset)
    write_file(out / "cells" / (dataset + ".csv"), [&](std::ostream& o) { write_score_records(recs, o); });

  write_file(out / "records.csv", [&](std::ostream& o) { write_score_records(res.records, o); });
  write_file(out / "aggregate.csv", [&](std::ostream& o) { write_aggregate(res.aggregate, o); });
  write_file(out / "signtest.csv", [&](std::ostream& o) {
    o << "l,k,lambda,eta,baseline,wins,trials,p_value\n";
    for (const auto& s : res.sign_tests)
      o << s.cell.walk_length << ',' << s.cell.particles << ',' << text::fmt(s.cell.lambda) << ','
        << s.cell.eta << ',' << s.baseline << ',' << s.wins << ',' << s.trials << ','
        << text::fmt(s.p_value) << '\n';
  });
  for (const auto& row : res.aggregate)
    log << row.method << " eta=" << row.eta << " f=" << text::fmt(row.mean_f) << " +- "
        << text::fmt(row.sd_f) << " (n=" << row.count << ")\n";
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& kind, const RunConfig& config, std::ostream& log) {
  ensure_dir(config.out);
  const fs::path out(config.out);
  if (kind == "demo") {
    auto net = fixtures::demo_network();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < net.truth.size(); ++i) labels.push_back("n" + std::to_string(i + 1));
    CollaborationGraph g(labels, std::vector<bool>(labels.size(), true));
    for (auto [a, b] : net.edges) g.add_weight(a, b, 1.0);
    write_file(out / "network.tsv", [&](std::ostream& o) { write_edge_list(g, o); });
    write_file(out / "nodes.tsv", [&](std::ostream& o) { write_node_table(g, o); });
    write_file(out / "truth.csv", [&](std::ostream& o) {
      o << "node,class\n";
      for (std::size_t i = 0; i < net.truth.size(); ++i) o << i << ',' << net.truth[i] << '\n';
    });
    write_file(out / "demo.conf", [&](std::ostream& o) {
      o << "# Three particles, two of them starting in the first community.\n"
        << "network = network.tsv\ntruth = truth.csv\n"
        << "k = 3\nlambda = 0.6\ndelta = 0.05\nomega_min = 0\nomega_max = 1\n"
        << "max_iters = 1000\npositions = 1,3,12\nseed = 1\n";
    });
    log << "demo network: V=15 E=" << net.edges.size() << " classes=3\n";
    return kOk;
  }
  if (kind == "ambiguity") {
    auto bench = synth_ambiguity_benchmark(config.synth);
    write_file(out / "corpus.jsonl", [&](std::ostream& o) {
      for (const auto& r : bench.records)
        o << nlohmann::json{{"id", r.id}, {"authors", r.authors}}.dump() << '\n';
    });
    write_file(out / "ambiguous.json", [&](std::ostream& o) {
      nlohmann::json doc = nlohmann::json::object();
      for (const auto& name : bench.ambiguity.names) doc[name] = nlohmann::json::array();
      o << doc.dump(2) << '\n';
    });
    write_file(out / "truth.csv", [&](std::ostream& o) {
      o << "paper_id,entity\n";
      for (const auto& r : bench.records) o << r.id << ',' << bench.truth.at(r.id) << '\n';
    });
    log << "synthetic benchmark: eta=" << config.synth.eta << " papers=" << bench.records.size() << '\n';
    return kOk;
  }
  throw UsageError("unknown synth kind '" + kind + "' (expected demo or ambiguity)");
}

// ---------------------------------------------------------------------------

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homonym disambiguation by particle competition on co-authorship networks"};
  app.require_subcommand(1);

  std::string corpus, ambiguous, net_out;
  auto* build = app.add_subcommand("build-net", "Build the collaboration graph of a corpus");
  build->add_option("--corpus", corpus, "JSON-lines corpus")->required();
  build->add_option("--ambiguous", ambiguous, "Ambiguous-name file (JSON)");
  build->add_option("--out", net_out, "Output directory")->required();

  std::map<std::string, std::string> flag_values;
  std::string config_path;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat key = value config file");
    for (const auto& key : RunConfig::keys()) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option_function<std::string>(
          "--" + flag, [&flag_values, key](const std::string& v) { flag_values[key] = v; },
          "Overrides config key '" + key + "'");
    }
  };
  auto* dis = app.add_subcommand("disambiguate", "Run the full pipeline and write labels");
  add_run_flags(dis);
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over synthetic benchmarks");
  add_run_flags(sweep);
  std::vector<std::string> grid_entries;
  sweep->add_option("--grid", grid_entries, "key=v1,v2 over l, k, lambda, eta, seeds");
  auto* synth = app.add_subcommand("synth", "Write benchmark inputs");
  add_run_flags(synth);
  std::string synth_kind = "ambiguity";
  synth->add_option("kind", synth_kind, "demo | ambiguity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  auto resolve = [&] {
    RunConfig config;
    if (!config_path.empty()) {
      config.load_file(config_path);
      // Relative input paths in a config file are relative to that file.
      const auto base = fs::path(config_path).parent_path();
      for (auto* p : {&config.corpus, &config.ambiguous, &config.truth, &config.network})
        if (!p->empty() && fs::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
    }
    for (const auto& [k, v] : flag_values) config.set(k, v);
    return config;
  };

  try {
    if (*build) return cmd_build_net(corpus, ambiguous, net_out, out);
    if (*dis) return cmd_disambiguate(resolve(), out);
    if (*sweep) {
      SweepGrid grid;
      for (const auto& g : grid_entries) grid.add(g);
      return cmd_sweep(resolve(), grid, out);
    }
    if (*synth) return cmd_synth(synth_kind, resolve(), out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    err << "numerical contract violation: " << e.what() << '\n';
    return kNumericError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace homonym::cli
