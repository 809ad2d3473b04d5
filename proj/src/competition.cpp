#include "homonym/competition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "homonym/error.hpp"
#include "text.hpp"

namespace homonym {

void CompetitionParams::validate() const {
  if (particles == 0) throw ContractError("need at least one particle");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("lambda must lie in [0, 1]");
  if (!(delta > 0.0)) throw ContractError("delta must be positive");
  if (!(omega_max >= omega_min)) throw ContractError("omega_max must be >= omega_min");
  if (conv_window == 0) throw ContractError("conv_window must be at least 1");
  if (!(conv_tol >= 0.0)) throw ContractError("conv_tol must be >= 0");
  if (initial_positions && initial_positions->size() != particles)
    throw ContractError("initial_positions must list one node per particle");
}

Adjacency::Adjacency(DenseMatrix weights)
    : weights_(std::move(weights)), neighbors_(weights_.rows()), degree_(weights_.rows(), 0.0) {
  if (weights_.rows() != weights_.cols()) throw ContractError("adjacency must be square");
  for (std::size_t i = 0; i < weights_.rows(); ++i) {
    for (std::size_t j = 0; j < weights_.cols(); ++j) {
      const double w = weights_(i, j);
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ContractError("adjacency weights must be finite and nonnegative");
      if (w > 0.0) {
        neighbors_[i].emplace_back(j, w);
        degree_[i] += w;
      }
    }
  }
}

std::uint64_t CompetitionState::total_visits() const {
  return std::accumulate(visits.begin(), visits.end(), std::uint64_t{0});
}

void CompetitionState::save(std::ostream& out) const {
  out << "STATE 1\n" << node_count << ' ' << particles << ' ' << t << '\n';
  for (std::size_t k = 0; k < particles; ++k)
    out << positions[k] << ' ' << text::fmt(energy[k]) << ' ' << (exhausted[k] ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < node_count; ++i) {
    for (std::size_t k = 0; k < particles; ++k) out << (k ? " " : "") << visit(i, k);
    out << '\n';
  }
  out << rng << '\n';
}

CompetitionState CompetitionState::load(std::istream& in) {
  auto fail = [](const std::string& what) -> CompetitionState {
    throw DataError("competition state: " + what);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "STATE" || version != 1) return fail("bad header");
  CompetitionState s;
  if (!(in >> s.node_count >> s.particles >> s.t)) return fail("bad dimensions");
  s.positions.resize(s.particles);
  s.energy.resize(s.particles);
  s.exhausted.resize(s.particles);
  for (std::size_t k = 0; k < s.particles; ++k) {
    std::string e;
    int flag = 0;
    if (!(in >> s.positions[k] >> e >> flag)) return fail("bad particle line");
    s.energy[k] = text::parse_or_throw<double>(e, "competition state energy");
    s.exhausted[k] = flag != 0;
    if (s.positions[k] >= s.node_count) return fail("position out of range");
  }
  s.visits.resize(s.node_count * s.particles);
  for (auto& v : s.visits)
    if (!(in >> v)) return fail("bad visit counts");
  if (!(in >> s.rng)) return fail("bad rng state");
  return s;
}

CompetitionState init_state(const Adjacency& adj, const CompetitionParams& params) {
  params.validate();
  const std::size_t n = adj.node_count();
  const std::size_t k = params.particles;
  if (k > n)
    throw DataError("more particles (" + std::to_string(k) + ") than nodes (" +
                    std::to_string(n) + ")");
  CompetitionState s;
  s.node_count = n;
  s.particles = k;
  s.rng = make_stream({params.seed});
  if (params.initial_positions) {
    s.positions = *params.initial_positions;
    for (auto p : s.positions)
      if (p >= n) throw DataError("initial position " + std::to_string(p) + " out of range");
  } else {
    std::vector<std::size_t> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    std::shuffle(nodes.begin(), nodes.end(), s.rng);
    s.positions.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(k));
  }
  s.visits.assign(n * k, 1);
  for (std::size_t p = 0; p < k; ++p) s.visit(s.positions[p], p) += 1;
  s.energy.assign(k, params.omega_max);
  s.exhausted.assign(k, params.omega_max == params.omega_min);
  return s;
}

std::vector<double> random_row(const Adjacency& adj, std::size_t node) {
  const double deg = adj.degree(node);
  if (!(deg > 0.0))
    throw ContractError("node " + std::to_string(node) + " has no neighbours or self-loop");
  std::vector<double> row(adj.node_count(), 0.0);
  for (const auto& [j, w] : adj.neighbors(node)) row[j] = w / deg;
  return row;
}

DominationMatrix domination_levels(std::span<const std::uint64_t> visits, std::size_t nodes,
                                   std::size_t particles) {
  DenseMatrix d(nodes, particles);
  for (std::size_t i = 0; i < nodes; ++i) {
    auto counts = visits.subspan(i * particles, particles);
    const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total == 0) throw ContractError("node " + std::to_string(i) + " has no visits");
    for (std::size_t k = 0; k < particles; ++k)
      d(i, k) = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return DominationMatrix(std::move(d));
}

DominationMatrix domination_levels(const CompetitionState& state) {
  return domination_levels(state.visits, state.node_count, state.particles);
}

std::vector<double> preferential_row(const Adjacency& adj, const DominationMatrix& dom,
                                     std::size_t particle, std::size_t node) {
  std::vector<double> row(adj.node_count(), 0.0);
  double total = 0.0;
  for (const auto& [j, w] : adj.neighbors(node)) {
    row[j] = w * dom(j, particle);
    total += row[j];
  }
  if (!(total > 0.0)) return random_row(adj, node);
  for (auto& v : row) v /= total;
  return row;
}

std::size_t owner(const DominationMatrix& dom, std::size_t node) {
  auto r = dom.row(node);
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

std::vector<double> reanimation_row(const DominationMatrix& dom, std::size_t particle) {
  const std::size_t n = dom.node_count();
  std::vector<double> row(n, 0.0);
  std::size_t owned = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (owner(dom, i) == particle) {
      row[i] = 1.0;
      ++owned;
    }
  if (owned == 0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(n));
    return row;
  }
  for (auto& v : row) v /= static_cast<double>(owned);
  return row;
}

std::vector<double> transition_row(const Adjacency& adj, const DominationMatrix& dom,
                                   const CompetitionState& state, std::size_t particle,
                                   double lambda) {
  if (state.exhausted[particle]) return reanimation_row(dom, particle);
  const std::size_t at = state.positions[particle];
  auto rand = random_row(adj, at);
  if (lambda == 0.0) return rand;
  auto pref = preferential_row(adj, dom, particle, at);
  for (std::size_t j = 0; j < rand.size(); ++j) rand[j] = lambda * pref[j] + (1.0 - lambda) * rand[j];
  return rand;
}

void step(CompetitionState& state, const Adjacency& adj, const CompetitionParams& params) {
  const auto dom = domination_levels(state);
  for (std::size_t k = 0; k < state.particles; ++k) {
    const auto row = transition_row(adj, dom, state, k, params.lambda);
    const std::size_t next = sample_index(row, state.rng);
    state.positions[k] = next;
    state.visit(next, k) += 1;
    double& e = state.energy[k];
    e = owner(dom, next) == k ? std::min(params.omega_max, e + params.delta)
                              : std::max(params.omega_min, e - params.delta);
    state.exhausted[k] = e == params.omega_min;
  }
  ++state.t;
}

std::vector<std::size_t> labels(const DominationMatrix& dom) {
  std::vector<std::size_t> out(dom.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = owner(dom, i);
  return out;
}

namespace {

void log_trajectory(Trajectory& tr, const DominationMatrix& dom,
                    const std::vector<std::size_t>& truth, std::size_t t) {
  std::vector<double> sums(tr.classes * tr.particles, 0.0);
  std::vector<std::size_t> sizes(tr.classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++sizes[truth[i]];
    for (std::size_t k = 0; k < tr.particles; ++k) sums[truth[i] * tr.particles + k] += dom(i, k);
  }
  for (std::size_t c = 0; c < tr.classes; ++c)
    for (std::size_t k = 0; k < tr.particles; ++k)
      if (sizes[c]) sums[c * tr.particles + k] /= static_cast<double>(sizes[c]);
  tr.steps.push_back(t);
  tr.values.insert(tr.values.end(), sums.begin(), sums.end());
}

double max_abs_diff(const DominationMatrix& a, const DominationMatrix& b) {
  double m = 0.0;
  auto x = a.values().data();
  auto y = b.values().data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace

bool advance(CompetitionState& state, const Adjacency& adj, const CompetitionParams& params,
             const std::vector<std::size_t>* truth, Trajectory* trajectory) {
  params.validate();
  if (state.node_count != adj.node_count())
    throw ContractError("state and adjacency disagree on the node count");
  const bool logging = truth && trajectory;
  if (logging) {
    if (truth->size() != state.node_count)
      throw DataError("truth labels must cover every node");
    if (trajectory->steps.empty()) {
      trajectory->nodes = state.node_count;
      trajectory->particles = state.particles;
      trajectory->classes = truth->empty() ? 0 : *std::max_element(truth->begin(), truth->end()) + 1;
      log_trajectory(*trajectory, domination_levels(state), *truth, state.t);
    }
  }
  std::optional<DominationMatrix> snapshot;
  if (params.conv_tol > 0.0) snapshot = domination_levels(state);
  std::size_t since_snapshot = 0;
  while (state.t < params.max_iters) {
    step(state, adj, params);
    if (logging) log_trajectory(*trajectory, domination_levels(state), *truth, state.t);
    if (snapshot && ++since_snapshot == params.conv_window) {
      auto now = domination_levels(state);
      if (max_abs_diff(now, *snapshot) < params.conv_tol) return true;
      snapshot = std::move(now);
      since_snapshot = 0;
    }
  }
  return false;
}

ClusterAssignment run(const Adjacency& adj, const CompetitionParams& params,
                      const std::vector<std::size_t>* truth) {
  auto state = init_state(adj, params);
  ClusterAssignment out;
  Trajectory tr;
  out.converged = advance(state, adj, params, truth, truth ? &tr : nullptr);
  out.domination = domination_levels(state);
  out.labels = labels(out.domination);
  out.iterations = state.t;
  if (truth) out.trajectory = std::move(tr);
  return out;
}

namespace {

// perm[k] = reference id for particle k, chosen greedily by overlap size.
std::vector<std::size_t> align_to(const std::vector<std::size_t>& ref,
                                  const std::vector<std::size_t>& run, std::size_t k) {
  std::vector<std::size_t> overlap(k * k, 0);
  for (std::size_t i = 0; i < ref.size(); ++i) ++overlap[run[i] * k + ref[i]];
  std::vector<std::size_t> perm(k, k);
  std::vector<bool> used(k, false);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best_a = k, best_b = k, best = 0;
    for (std::size_t a = 0; a < k; ++a) {
      if (perm[a] != k) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (used[b]) continue;
        const auto o = overlap[a * k + b];
        if (best_a == k || o > best) {
          best = o;
          best_a = a;
          best_b = b;
        }
      }
    }
    perm[best_a] = best_b;
    used[best_b] = true;
  }
  return perm;
}

}  // namespace

ClusterAssignment run_ensemble(const Adjacency& adj, const CompetitionParams& params,
                               const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ContractError("ensemble needs at least one seed");
  const std::size_t k = params.particles;
  const std::size_t n = adj.node_count();
  std::vector<std::size_t> reference;
  DenseMatrix mean_dom(n, k);
  std::vector<std::size_t> votes(n * k, 0);
  ClusterAssignment out;
  for (auto seed : seeds) {
    auto p = params;
    p.seed = seed;
    auto one = run(adj, p);
    out.iterations = std::max(out.iterations, one.iterations);
    if (reference.empty()) reference = one.labels;
    auto perm = align_to(reference, one.labels, k);
    for (std::size_t i = 0; i < n; ++i) {
      ++votes[i * k + perm[one.labels[i]]];
      for (std::size_t q = 0; q < k; ++q) mean_dom(i, perm[q]) += one.domination(i, q);
    }
  }
  for (auto& v : mean_dom.data()) v /= static_cast<double>(seeds.size());
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto begin = votes.begin() + static_cast<std::ptrdiff_t>(i * k);
    out.labels[i] = static_cast<std::size_t>(std::max_element(begin, begin + static_cast<std::ptrdiff_t>(k)) - begin);
  }
  out.domination = DominationMatrix(std::move(mean_dom));
  return out;
}

void write_assignment(const ClusterAssignment& a, std::ostream& out) {
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    out << i << '\t' << a.labels[i] << '\t' << text::fmt(a.domination(i, a.labels[i])) << '\n';
}

void write_domination(const DominationMatrix& d, std::ostream& out) {
  out << "node";
  for (std::size_t k = 0; k < d.particles(); ++k) out << ",p" << k;
  out << '\n';
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    out << i;
    for (std::size_t k = 0; k < d.particles(); ++k) out << ',' << text::fmt(d(i, k));
    out << '\n';
  }
}

void write_trajectory(const Trajectory& tr, std::ostream& out) {
  out << "TRAJ " << tr.nodes << ' ' << tr.particles << ' ' << tr.classes << '\n';
  const std::size_t width = tr.classes * tr.particles;
  for (std::size_t e = 0; e < tr.steps.size(); ++e) {
    out << tr.steps[e];
    for (std::size_t x = 0; x < width; ++x) out << ',' << text::fmt(tr.values[e * width + x]);
    out << '\n';
  }
}

}  // namespace homonym
