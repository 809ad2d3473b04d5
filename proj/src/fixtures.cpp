#include "homonym/fixtures.hpp"

namespace homonym::fixtures {

std::vector<PaperRecord> toy_corpus() {
  return {
      make_record("1", {"Kim", "Rocha", "Simas"}),
      make_record("2", {"Kim", "Xu", "Abe"}),
      make_record("3", {"Kim", "Xu", "Lind"}),
      make_record("4", {"Kim", "Hou", "Xu"}),
      make_record("5", {"Kim", "Rocha"}),
      make_record("6", {"Kim", "Kong"}),
      make_record("7", {"Simas", "Hou"}),
      make_record("8", {"Kong", "Shi"}),
      make_record("9", {"Shi", "Kong"}),
      make_record("10", {"Lind", "Xu", "Shi"}),
  };
}

AmbiguitySpec toy_ambiguity() {
  AmbiguitySpec spec;
  spec.names.insert("Kim");
  spec.grouping = {
      {{"Kim", "1"}, "1"}, {{"Kim", "5"}, "1"}, {{"Kim", "2"}, "2"},
      {{"Kim", "3"}, "3"}, {{"Kim", "4"}, "3"}, {{"Kim", "6"}, "4"},
  };
  return spec;
}

DemoNetwork demo_network() {
  // One-based.
  const std::vector<std::pair<std::size_t, std::size_t>> drawn = {
      // 1-4
      {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4},
      // 5-10
      {5, 6}, {5, 7}, {6, 7}, {6, 8}, {7, 8}, {7, 9}, {8, 9}, {8, 10}, {9, 10}, {5, 10}, {6, 9},
      // 11-15
      {11, 12}, {11, 13}, {12, 13}, {12, 14}, {13, 14}, {13, 15}, {14, 15}, {11, 15},
      // bridges
      {4, 5}, {10, 11}, {3, 13},
  };
  DemoNetwork net;
  net.adjacency = DenseMatrix(15, 15);
  for (auto [a, b] : drawn) {
    net.edges.emplace_back(a - 1, b - 1);
    net.adjacency(a - 1, b - 1) = 1.0;
    net.adjacency(b - 1, a - 1) = 1.0;
  }
  net.truth = {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
  return net;
}

}  // namespace homonym::fixtures
