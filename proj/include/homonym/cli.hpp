#pragma once

// Command-line front end. Commands live in the library so tests can call
// them without spawning a process.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "homonym/error.hpp"
#include "homonym/evaluation.hpp"
#include "homonym/pipeline.hpp"

namespace homonym::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Every tunable of a run. Serialised as flat "key = value" lines.
struct RunConfig {
  PipelineOptions pipeline;
  std::size_t ensemble = 0;  // >0: majority vote over seeds seed..seed+ensemble-1

  std::string corpus;
  std::string ambiguous;
  std::string truth;
  std::string network;
  std::string out;
  std::size_t workers = 1;
  int verbosity = 1;

  SynthSpec synth;
  double sign_chance = 1.0 / 6.0;

  /// Applies one key. Dashes in keys are read as underscores. Throws
  /// UsageError on unknown keys or unparsable values.
  void set(std::string key, const std::string& value);
  /// Reads "key = value" lines; '#' starts a comment.
  void load(std::istream& in);
  void load_file(const std::string& path);
  /// Fully resolved config, loadable by load().
  std::string dump() const;
  /// Numeric ranges, then path existence.
  void validate(bool need_inputs) const;

  static const std::vector<std::string>& keys();
};

int cmd_build_net(const std::string& corpus, const std::string& ambiguous,
                  const std::string& out, std::ostream& log);
int cmd_disambiguate(const RunConfig& config, std::ostream& log);

/// Cartesian sweep over walk length, particle count, lambda, eta and seeds on
/// synthetic ambiguity benchmarks.
struct SweepGrid {
  std::vector<std::size_t> walk_lengths;
  std::vector<std::size_t> particles;  // empty: K = eta
  std::vector<double> lambdas;
  std::vector<std::size_t> etas;
  std::vector<std::uint64_t> seeds;

  /// "key=v1,v2,..." with key in {l, k, lambda, eta, seeds}; integer lists
  /// also accept "a..b".
  void add(const std::string& assignment);
  /// Fills unset axes from the config; throws UsageError if a list is empty
  /// after that.
  void complete(const RunConfig& config);
};

struct SweepCell {
  std::size_t walk_length = 0;
  std::size_t particles = 0;
  double lambda = 0.0;
  std::size_t eta = 0;
};

struct SignTestRow {
  SweepCell cell;
  std::string baseline;
  std::size_t wins = 0;
  std::size_t trials = 0;
  double p_value = 1.0;
};

struct SweepResult {
  std::vector<ScoreRecord> records;
  std::vector<AggregateRow> aggregate;
  std::vector<SignTestRow> sign_tests;
};

/// Runs the sweep in memory (parallel over `config.workers`).
SweepResult run_sweep(const RunConfig& config, const SweepGrid& grid);
int cmd_sweep(const RunConfig& config, const SweepGrid& grid, std::ostream& log);

/// kind: "demo" (15-node network) or "ambiguity" (synthetic corpus).
int cmd_synth(const std::string& kind, const RunConfig& config, std::ostream& log);

/// Full argv entry point with exit-code mapping.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace homonym::cli
