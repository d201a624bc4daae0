#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace aged {

using NodeId = std::uint64_t;     // external id from the nodes file
using NodeIndex = std::uint32_t;  // dense index, ascending in external id
using LabelId = std::uint32_t;

inline constexpr std::string_view kWildcard = "*";

// Two labels match if they are equal or either one is the wildcard.
inline bool labels_match(std::string_view a, std::string_view b) {
  return a == b || a == kWildcard || b == kWildcard;
}

struct NodeRecord {
  NodeId id = 0;
  std::string label;
  std::map<std::string, std::string> attrs;  // name -> value, names unique

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct AdjEdge {
  NodeIndex other;  // dst for out-edges, src for in-edges
  LabelId label;

  friend auto operator<=>(const AdjEdge&, const AdjEdge&) = default;
};

// Directed labeled multigraph with per-node attribute maps. Immutable after
// load; parallel edges with identical (src,label,dst) are collapsed.
class PropertyGraph {
 public:
  static PropertyGraph load(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path);
  void save(const std::filesystem::path& nodes_path,
            const std::filesystem::path& edges_path) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const NodeRecord& node(NodeIndex i) const { return nodes_[i]; }
  LabelId node_label_id(NodeIndex i) const { return node_label_ids_[i]; }
  std::optional<NodeIndex> index_of(NodeId id) const;

  std::span<const AdjEdge> out_edges(NodeIndex i) const { return out_[i]; }
  std::span<const AdjEdge> in_edges(NodeIndex i) const { return in_[i]; }

  // label is a concrete label id, or nullopt for "any label".
  bool has_edge(NodeIndex src, std::optional<LabelId> label,
                NodeIndex dst) const;

  std::optional<LabelId> find_label(std::string_view name) const;
  const std::string& label_name(LabelId id) const { return label_names_[id]; }
  // Nodes carrying the given concrete label, ascending by index.
  std::span<const NodeIndex> nodes_with_label(LabelId id) const;

  // Distinct (src label, edge label, dst label) triples present in the graph.
  std::vector<std::tuple<std::string, std::string, std::string>>
  edge_signatures() const;

  // Attribute names ranked by number of nodes carrying them (desc, then name).
  std::vector<std::pair<std::string, std::size_t>> attribute_frequencies()
      const;

  friend bool operator==(const PropertyGraph& a, const PropertyGraph& b);

  // Test/builder entry: construct from records. Validates the same invariants
  // as load(). Edges reference external node ids.
  static PropertyGraph from_records(
      std::vector<NodeRecord> nodes,
      const std::vector<std::tuple<NodeId, std::string, NodeId>>& edges);

 private:
  LabelId intern_label(const std::string& name);
  void finalize_edges();

  std::vector<NodeRecord> nodes_;  // sorted by external id
  std::vector<LabelId> node_label_ids_;
  std::unordered_map<NodeId, NodeIndex> id_to_index_;
  std::vector<std::vector<AdjEdge>> out_;
  std::vector<std::vector<AdjEdge>> in_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> label_names_;
  std::unordered_map<std::string, LabelId> label_ids_;
  std::vector<std::vector<NodeIndex>> nodes_by_label_;
};

struct PatternVar {
  std::string name;
  std::string label;  // may be the wildcard

  friend bool operator==(const PatternVar&, const PatternVar&) = default;
};

// Small directed pattern with labeled variables and edges. Connected as an
// undirected graph; a single variable with no edges is the degenerate case.
struct GraphPattern {
  struct Edge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::string label;

    friend auto operator<=>(const Edge& a, const Edge& b) {
      return std::tie(a.src, a.label, a.dst) <=> std::tie(b.src, b.label, b.dst);
    }
    friend bool operator==(const Edge& a, const Edge& b) {
      return a.src == b.src && a.dst == b.dst && a.label == b.label;
    }
  };

  std::string name;
  std::vector<PatternVar> vars;
  std::vector<Edge> edges;

  std::optional<std::uint32_t> var_index(std::string_view name) const;
  std::size_t degree(std::uint32_t var) const;
  bool is_connected() const;
  // Sorts and collapses duplicate edges; validates endpoints.
  void normalize();

  // Compact form: "x:company,y:product|x create y;x create y'"
  std::string serialize() const;

  friend bool operator==(const GraphPattern&, const GraphPattern&) = default;
};

GraphPattern load_pattern(const std::filesystem::path& path);
// A pattern file may hold several patterns, each introduced by a "vars:" line.
std::vector<GraphPattern> load_patterns(const std::filesystem::path& path);

}  // namespace aged
