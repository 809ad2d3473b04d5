#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "homonym/corpus.hpp"
#include "homonym/matrix.hpp"

namespace homonym::fixtures {

/// The ten-paper toy database with "Kim" as the ambiguous name. Paper ids are
/// "1".."10".
std::vector<PaperRecord> toy_corpus();
/// Kim mentions grouped as {1,5}, {2}, {3,4}, {6}.
AmbiguitySpec toy_ambiguity();

/// 15-node network with three unbalanced communities: nodes 0-3, 4-9 and
/// 10-14 (1-4, 5-10, 11-15 in one-based numbering). Unit weights.
struct DemoNetwork {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> truth;
  DenseMatrix adjacency;
};
DemoNetwork demo_network();

}  // namespace homonym::fixtures
