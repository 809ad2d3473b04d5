#pragma once

// Co-authorship corpus: paper records, ambiguous-mention expansion and the
// weighted collaboration graph w_ij = sum_k delta_ijk / |k|.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace homonym {

struct PaperRecord {
  std::string id;
  std::vector<std::string> authors;  // distinct, trimmed, nonempty

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// Reads one JSON object per line: {"id": "...", "authors": ["...", ...]}.
/// Blank lines are skipped. Throws DataError naming the 1-based line number.
std::vector<PaperRecord> parse_corpus(std::istream& in);

/// Builds a record, trimming names and collapsing duplicates (first occurrence
/// wins). Throws DataError on an empty author list or an empty name.
PaperRecord make_record(std::string id, const std::vector<std::string>& authors);

/// Which names to split into per-mention nodes, and optionally how mentions of
/// the same name are grouped: (name, paper_id) -> group id.
struct AmbiguitySpec {
  std::set<std::string> names;
  std::map<std::pair<std::string, std::string>, std::string> grouping;
};

/// JSON object keyed by name; each value is a (possibly empty) list of
/// {"paper_id": ..., "group": ...}.
AmbiguitySpec parse_ambiguity(std::istream& in);

class NodeRegistry {
 public:
  std::size_t size() const { return names_.size(); }

  /// Node of `name` as it occurs in paper `paper_id`. Throws DataError if the
  /// occurrence was never registered.
  std::size_t resolve(const std::string& name, const std::string& paper_id) const;

  const std::string& display_name(std::size_t node) const { return names_.at(node); }
  const std::string& base_name(std::size_t node) const { return base_.at(node); }
  bool is_ambiguous(std::size_t node) const { return ambiguous_.at(node); }
  /// Papers in which an ambiguous node was observed, in corpus order.
  const std::vector<std::string>& mentions(std::size_t node) const {
    return mentions_.at(node);
  }
  std::vector<std::size_t> ambiguous_nodes() const;

 private:
  friend NodeRegistry expand_mentions(const std::vector<PaperRecord>&,
                                      const AmbiguitySpec&);
  std::size_t intern(const std::string& name, const std::string& key,
                     std::string display, bool ambiguous);

  std::map<std::pair<std::string, std::string>, std::size_t> entries_;
  std::map<std::string, bool> ambiguous_names_;
  std::map<std::pair<std::string, std::string>, std::string> grouping_;
  std::vector<std::string> names_;
  std::vector<std::string> base_;
  std::vector<bool> ambiguous_;
  std::vector<std::vector<std::string>> mentions_;
};

/// Assigns dense node indices in order of first appearance. Ambiguous names get
/// one node per mention group, or one per paper when no group is given.
/// Throws DataError on duplicate paper ids or a grouping that names an unknown
/// paper (or a paper in which that name does not appear).
NodeRegistry expand_mentions(const std::vector<PaperRecord>& records,
                             const AmbiguitySpec& spec);

/// Undirected weighted graph with w_ii = 0, stored as symmetric sorted rows.
class CollaborationGraph {
 public:
  CollaborationGraph() = default;
  CollaborationGraph(std::vector<std::string> labels, std::vector<bool> ambiguous);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const;
  double weight(std::size_t i, std::size_t j) const;
  const std::map<std::size_t, double>& neighbors(std::size_t i) const {
    return rows_.at(i);
  }
  double degree(std::size_t i) const;

  const std::string& label(std::size_t i) const { return labels_.at(i); }
  bool is_ambiguous(std::size_t i) const { return ambiguous_.at(i); }
  const std::vector<bool>& ambiguous_mask() const { return ambiguous_; }
  std::size_t ambiguous_count() const;

  /// Adds w to both (i,j) and (j,i). Self-loops are rejected.
  void add_weight(std::size_t i, std::size_t j, double w);

 private:
  std::vector<std::string> labels_;
  std::vector<bool> ambiguous_;
  std::vector<std::map<std::size_t, double>> rows_;
};

CollaborationGraph build_collaboration_graph(const std::vector<PaperRecord>& records,
                                             const NodeRegistry& registry);

// Edge list: "V <n>" then "i\tj\tweight" for i < j.
void write_edge_list(const CollaborationGraph& g, std::ostream& out);
// Node table: "index\tname\tambiguous(0|1)".
void write_node_table(const CollaborationGraph& g, std::ostream& out);
/// Reads an edge list, and optionally a node table to restore labels/mask.
CollaborationGraph read_graph(std::istream& edges, std::istream* nodes = nullptr);

}  // namespace homonym
