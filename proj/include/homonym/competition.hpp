#pragma once

// Stochastic particle competition on a weighted network.
//
// K particles walk the graph. An active particle moves by the mixture
//   lambda * preferential + (1 - lambda) * random,
// where the preferential rule weighs each neighbour by the particle's own
// domination level there. Visiting an owned node recharges energy by delta,
// visiting a rival's node drains it; a particle whose energy reaches
// omega_min is exhausted and teleports uniformly into its own territory on
// the next move. Cluster labels are the per-node argmax of domination.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "homonym/matrix.hpp"
#include "homonym/rng.hpp"

namespace homonym {

struct CompetitionParams {
  std::size_t particles = 2;
  double lambda = 0.6;
  double delta = 0.05;
  double omega_min = 0.0;
  double omega_max = 1.0;
  std::size_t max_iters = 1000;
  double conv_tol = 0.0;  // 0 disables the early stop; the run lasts max_iters steps
  std::size_t conv_window = 100;
  std::uint64_t seed = 1;
  std::optional<std::vector<std::size_t>> initial_positions;

  /// Throws ContractError on out-of-range values.
  void validate() const;
};

/// Nonnegative weighted adjacency with cached neighbour lists. Need not be
/// symmetric; row i drives moves out of node i.
class Adjacency {
 public:
  explicit Adjacency(DenseMatrix weights);

  std::size_t node_count() const { return weights_.rows(); }
  const DenseMatrix& weights() const { return weights_; }
  std::span<const std::pair<std::size_t, double>> neighbors(std::size_t i) const {
    return neighbors_.at(i);
  }
  double degree(std::size_t i) const { return degree_.at(i); }

 private:
  DenseMatrix weights_;
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors_;
  std::vector<double> degree_;
};

/// Relative visit frequencies N_i^(k) / sum_u N_i^(u); V x K.
class DominationMatrix {
 public:
  DominationMatrix() = default;
  explicit DominationMatrix(DenseMatrix values) : values_(std::move(values)) {}

  std::size_t node_count() const { return values_.rows(); }
  std::size_t particles() const { return values_.cols(); }
  double operator()(std::size_t node, std::size_t particle) const {
    return values_(node, particle);
  }
  std::span<const double> row(std::size_t node) const { return values_.row(node); }
  const DenseMatrix& values() const { return values_; }

 private:
  DenseMatrix values_;
};

struct CompetitionState {
  std::size_t node_count = 0;
  std::size_t particles = 0;
  std::size_t t = 0;
  std::vector<std::size_t> positions;
  std::vector<std::uint64_t> visits;  // node-major: visits[i * K + k]
  std::vector<double> energy;
  std::vector<bool> exhausted;
  Rng rng;

  std::uint64_t& visit(std::size_t node, std::size_t k) { return visits[node * particles + k]; }
  std::uint64_t visit(std::size_t node, std::size_t k) const {
    return visits[node * particles + k];
  }
  std::uint64_t total_visits() const;

  /// Text snapshot including the RNG state; load(save(s)) == s.
  void save(std::ostream& out) const;
  static CompetitionState load(std::istream& in);

  friend bool operator==(const CompetitionState&, const CompetitionState&) = default;
};

/// N = 1 everywhere plus one visit at each particle's start node; E = omega_max;
/// nobody exhausted. Positions come from params.initial_positions (duplicates
/// allowed) or are drawn without replacement. Throws DataError if K > V.
CompetitionState init_state(const Adjacency& adj, const CompetitionParams& params);

std::vector<double> random_row(const Adjacency& adj, std::size_t node);

DominationMatrix domination_levels(const CompetitionState& state);
DominationMatrix domination_levels(std::span<const std::uint64_t> visits, std::size_t nodes,
                                   std::size_t particles);

/// a_ij N_j^(k) / sum_u a_iu N_u^(k); falls back to random_row when the
/// denominator vanishes.
std::vector<double> preferential_row(const Adjacency& adj, const DominationMatrix& dom,
                                     std::size_t particle, std::size_t node);

/// argmax over particles, lowest index wins ties.
std::size_t owner(const DominationMatrix& dom, std::size_t node);

/// Uniform over the nodes `particle` owns, or over every node if it owns none.
std::vector<double> reanimation_row(const DominationMatrix& dom, std::size_t particle);

std::vector<double> transition_row(const Adjacency& adj, const DominationMatrix& dom,
                                   const CompetitionState& state, std::size_t particle,
                                   double lambda);

/// One application of the dynamical system. Every particle reads the
/// domination levels from the start of the step; particles move in index order.
void step(CompetitionState& state, const Adjacency& adj, const CompetitionParams& params);

std::vector<std::size_t> labels(const DominationMatrix& dom);

/// Mean domination per (true class, particle) at each logged step.
struct Trajectory {
  std::size_t nodes = 0;
  std::size_t classes = 0;
  std::size_t particles = 0;
  std::vector<std::size_t> steps;
  std::vector<double> values;  // per step: classes x particles, row-major

  double at(std::size_t entry, std::size_t cls, std::size_t particle) const {
    return values[(entry * classes + cls) * particles + particle];
  }
};

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  DominationMatrix domination;
  std::optional<Trajectory> trajectory;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Steps `state` until t == params.max_iters or the domination levels move
/// less than conv_tol over conv_window steps. When `truth` is given (class id
/// per node), the per-step class means are appended to `trajectory`.
bool advance(CompetitionState& state, const Adjacency& adj, const CompetitionParams& params,
             const std::vector<std::size_t>* truth = nullptr,
             Trajectory* trajectory = nullptr);

ClusterAssignment run(const Adjacency& adj, const CompetitionParams& params,
                      const std::vector<std::size_t>* truth = nullptr);

/// Runs once per seed, aligns each run's particle ids to the first run by
/// maximum label overlap, then takes a per-node majority vote (ties go to the
/// lower id). The returned domination is the aligned mean.
ClusterAssignment run_ensemble(const Adjacency& adj, const CompetitionParams& params,
                               const std::vector<std::uint64_t>& seeds);

// "node_index\tparticle\tdomination_of_winner", one line per node.
void write_assignment(const ClusterAssignment& a, std::ostream& out);
// CSV: node,p0,p1,...
void write_domination(const DominationMatrix& d, std::ostream& out);
// "TRAJ <V> <K> <classes>" then "t,m[c0][p0],m[c0][p1],..." per logged step.
void write_trajectory(const Trajectory& tr, std::ostream& out);

}  // namespace homonym
