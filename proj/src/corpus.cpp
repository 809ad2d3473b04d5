#include "homonym/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "homonym/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace homonym {

using json = nlohmann::json;

PaperRecord make_record(std::string id, const std::vector<std::string>& authors) {
  PaperRecord rec{std::move(id), {}};
  for (const auto& raw : authors) {
    std::string name(text::trim(raw));
    if (name.empty()) throw DataError("paper '" + rec.id + "': empty author name");
    if (std::find(rec.authors.begin(), rec.authors.end(), name) == rec.authors.end())
      rec.authors.push_back(std::move(name));
  }
  if (rec.authors.empty()) throw DataError("paper '" + rec.id + "': empty author list");
  return rec;
}

std::vector<PaperRecord> parse_corpus(std::istream& in) {
  std::vector<PaperRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto where = "line " + std::to_string(lineno);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("authors"))
      throw DataError(where + ": expected an object with 'id' and 'authors'");
    const auto& id = obj["id"];
    const auto& authors = obj["authors"];
    if (!id.is_string() && !id.is_number_integer())
      throw DataError(where + ": 'id' must be a string");
    if (!authors.is_array()) throw DataError(where + ": 'authors' must be an array");
    std::vector<std::string> names;
    for (const auto& a : authors) {
      if (!a.is_string()) throw DataError(where + ": author names must be strings");
      names.push_back(a.get<std::string>());
    }
    try {
      out.push_back(make_record(id.is_string() ? id.get<std::string>() : id.dump(), names));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

AmbiguitySpec parse_ambiguity(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("ambiguity file: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("ambiguity file: top level must be an object");
  AmbiguitySpec spec;
  for (const auto& [raw_name, groups] : doc.items()) {
    std::string name(text::trim(raw_name));
    if (name.empty()) throw DataError("ambiguity file: empty name");
    spec.names.insert(name);
    if (groups.is_null()) continue;
    if (!groups.is_array())
      throw DataError("ambiguity file: '" + name + "' must map to a list");
    for (const auto& g : groups) {
      if (!g.is_object() || !g.contains("paper_id") || !g.contains("group"))
        throw DataError("ambiguity file: '" + name +
                        "' entries need 'paper_id' and 'group'");
      auto as_text = [](const json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
      spec.grouping[{name, as_text(g["paper_id"])}] = as_text(g["group"]);
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------

std::size_t NodeRegistry::intern(const std::string& name, const std::string& key,
                                 std::string display, bool ambiguous) {
  auto [it, inserted] = entries_.try_emplace({name, key}, names_.size());
  if (inserted) {
    names_.push_back(std::move(display));
    base_.push_back(name);
    ambiguous_.push_back(ambiguous);
    mentions_.emplace_back();
  }
  return it->second;
}

std::size_t NodeRegistry::resolve(const std::string& name,
                                  const std::string& paper_id) const {
  std::string key;
  auto amb = ambiguous_names_.find(name);
  if (amb != ambiguous_names_.end()) {
    auto g = grouping_.find({name, paper_id});
    key = g != grouping_.end() ? "g:" + g->second : "p:" + paper_id;
  }
  auto it = entries_.find({name, key});
  if (it == entries_.end())
    throw DataError("unresolved author '" + name + "' in paper '" + paper_id + "'");
  return it->second;
}

std::vector<std::size_t> NodeRegistry::ambiguous_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ambiguous_.size(); ++i)
    if (ambiguous_[i]) out.push_back(i);
  return out;
}

NodeRegistry expand_mentions(const std::vector<PaperRecord>& records,
                             const AmbiguitySpec& spec) {
  NodeRegistry reg;
  for (const auto& n : spec.names) reg.ambiguous_names_[n] = true;

  std::map<std::string, const PaperRecord*> by_id;
  for (const auto& r : records)
    if (!by_id.emplace(r.id, &r).second)
      throw DataError("duplicate paper id '" + r.id + "'");

  for (const auto& [key, group] : spec.grouping) {
    const auto& [name, paper] = key;
    if (!spec.names.contains(name))
      throw DataError("grouping for non-ambiguous name '" + name + "'");
    auto it = by_id.find(paper);
    if (it == by_id.end())
      throw DataError("grouping for '" + name + "' references unknown paper '" + paper + "'");
    const auto& authors = it->second->authors;
    if (std::find(authors.begin(), authors.end(), name) == authors.end())
      throw DataError("grouping places '" + name + "' in paper '" + paper +
                      "', which does not list it");
  }
  reg.grouping_ = spec.grouping;

  for (const auto& r : records) {
    for (const auto& name : r.authors) {
      if (!spec.names.contains(name)) {
        reg.intern(name, "", name, false);
        continue;
      }
      auto g = spec.grouping.find({name, r.id});
      std::size_t node = g != spec.grouping.end()
                             ? reg.intern(name, "g:" + g->second, name + "#" + g->second, true)
                             : reg.intern(name, "p:" + r.id, name + "@" + r.id, true);
      reg.mentions_[node].push_back(r.id);
    }
  }
  return reg;
}

// ---------------------------------------------------------------------------

CollaborationGraph::CollaborationGraph(std::vector<std::string> labels,
                                       std::vector<bool> ambiguous)
    : labels_(std::move(labels)), ambiguous_(std::move(ambiguous)), rows_(labels_.size()) {
  if (ambiguous_.size() != labels_.size())
    throw DataError("graph: label and ambiguity mask sizes differ");
}

std::size_t CollaborationGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n / 2;
}

double CollaborationGraph::weight(std::size_t i, std::size_t j) const {
  const auto& r = rows_.at(i);
  auto it = r.find(j);
  return it == r.end() ? 0.0 : it->second;
}

double CollaborationGraph::degree(std::size_t i) const {
  double d = 0.0;
  for (const auto& [j, w] : rows_.at(i)) d += w;
  return d;
}

std::size_t CollaborationGraph::ambiguous_count() const {
  return static_cast<std::size_t>(std::count(ambiguous_.begin(), ambiguous_.end(), true));
}

void CollaborationGraph::add_weight(std::size_t i, std::size_t j, double w) {
  if (i >= node_count() || j >= node_count())
    throw DataError("graph: node index out of range");
  if (i == j) throw DataError("graph: self-loop on node " + std::to_string(i));
  rows_[i][j] += w;
  rows_[j][i] += w;
}

CollaborationGraph build_collaboration_graph(const std::vector<PaperRecord>& records,
                                             const NodeRegistry& registry) {
  std::vector<std::string> labels;
  std::vector<bool> mask;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    labels.push_back(registry.display_name(i));
    mask.push_back(registry.is_ambiguous(i));
  }
  CollaborationGraph g(std::move(labels), std::move(mask));

  std::vector<std::size_t> nodes;
  for (const auto& r : records) {
    nodes.clear();
    for (const auto& name : r.authors) nodes.push_back(registry.resolve(name, r.id));
    const double share = 1.0 / static_cast<double>(r.authors.size());
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b) g.add_weight(nodes[a], nodes[b], share);
  }
  return g;
}

void write_edge_list(const CollaborationGraph& g, std::ostream& out) {
  out << "V " << g.node_count() << '\n';
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (const auto& [j, w] : g.neighbors(i))
      if (i < j) out << i << '\t' << j << '\t' << text::fmt(w) << '\n';
}

void write_node_table(const CollaborationGraph& g, std::ostream& out) {
  for (std::size_t i = 0; i < g.node_count(); ++i)
    out << i << '\t' << g.label(i) << '\t' << (g.is_ambiguous(i) ? 1 : 0) << '\n';
}

CollaborationGraph read_graph(std::istream& edges, std::istream* nodes) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool header = false;
  while (!header && std::getline(edges, line)) {
    ++lineno;
    auto t = text::trim(line);
    if (t.empty()) continue;
    if (t.substr(0, 2) != "V ") throw DataError("edge list line " + std::to_string(lineno) + ": expected 'V <count>' header");
    n = text::parse_or_throw<std::size_t>(t.substr(2), "edge list header");
    header = true;
  }
  if (!header) throw DataError("edge list: missing 'V <count>' header");

  std::vector<std::string> labels(n);
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  if (nodes) {
    std::size_t nl = 0;
    while (std::getline(*nodes, line)) {
      ++nl;
      if (text::trim(line).empty()) continue;
      auto f = text::split(line, '\t');
      const auto where = "node table line " + std::to_string(nl);
      if (f.size() != 3) throw DataError(where + ": expected 3 tab-separated fields");
      auto idx = text::parse_or_throw<std::size_t>(f[0], where);
      if (idx >= n) throw DataError(where + ": index out of range");
      labels[idx] = std::string(f[1]);
      auto flag = text::trim(f[2]);
      if (flag != "0" && flag != "1") throw DataError(where + ": ambiguous flag must be 0 or 1");
      mask[idx] = flag == "1";
    }
  }
  CollaborationGraph g(std::move(labels), std::move(mask));
  while (std::getline(edges, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto where = "edge list line " + std::to_string(lineno);
    auto f = text::split(line, '\t');
    if (f.size() != 3) throw DataError(where + ": expected 'i<TAB>j<TAB>weight'");
    auto i = text::parse_or_throw<std::size_t>(f[0], where);
    auto j = text::parse_or_throw<std::size_t>(f[1], where);
    auto w = text::parse_or_throw<double>(f[2], where);
    if (i >= n || j >= n) throw DataError(where + ": node index out of range");
    if (!(w > 0.0)) throw DataError(where + ": weight must be positive");
    if (g.weight(i, j) != 0.0) throw DataError(where + ": duplicate edge");
    g.add_weight(i, j, w);
  }
  return g;
}

}  // namespace homonym
