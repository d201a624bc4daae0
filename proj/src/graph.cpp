#include "aged/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "aged/errors.hpp"
#include "aged/log.hpp"

namespace aged {

namespace {

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

NodeId parse_node_id(std::string_view s, const std::filesystem::path& path,
                     std::size_t line) {
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError(path, line, "invalid node id '" + std::string(s) + "'");
  return value;
}

void validate_label(std::string_view label, bool allow_wildcard,
                    const std::filesystem::path& path, std::size_t line) {
  if (label.empty()) throw FormatError(path, line, "empty label");
  if (!allow_wildcard && label == kWildcard)
    throw FormatError(path, line, "wildcard label not allowed here");
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == ',' || c == ':' || c == ';' || c == '=')
      throw FormatError(path, line,
                        "label contains forbidden character: '" +
                            std::string(label) + "'");
  }
}

void validate_var_name(std::string_view name, const std::filesystem::path& path,
                       std::size_t line) {
  if (name.empty()) throw FormatError(path, line, "empty variable name");
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == ',' || c == ':' || c == ';' ||
        c == '=' || c == '.' || c == '#')
      throw FormatError(path, line,
                        "variable name contains forbidden character: '" +
                            std::string(name) + "'");
  }
}

// Lines are yielded with their 1-based number; comments and blanks skipped.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(line, lineno);
  }
}

std::map<std::string, std::string> parse_attrs(std::string_view field,
                                               const std::filesystem::path& path,
                                               std::size_t line) {
  std::map<std::string, std::string> attrs;
  if (field.empty()) return attrs;
  for (const std::string& pair : split(field, ';')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos)
      throw FormatError(path, line, "attribute pair without '=': '" + pair + "'");
    std::string name = pair.substr(0, eq);
    std::string value = pair.substr(eq + 1);
    if (name.empty())
      throw FormatError(path, line, "empty attribute name");
    if (value.find('=') != std::string::npos)
      throw FormatError(path, line, "attribute value contains '='");
    if (name == "id")
      throw FormatError(path, line, "attribute name 'id' is reserved");
    if (!attrs.emplace(std::move(name), std::move(value)).second)
      throw FormatError(path, line,
                        "attribute name repeated on one node: '" +
                            pair.substr(0, eq) + "'");
  }
  return attrs;
}

}  // namespace

LabelId PropertyGraph::intern_label(const std::string& name) {
  auto it = label_ids_.find(name);
  if (it != label_ids_.end()) return it->second;
  LabelId id = static_cast<LabelId>(label_names_.size());
  label_names_.push_back(name);
  label_ids_.emplace(name, id);
  nodes_by_label_.emplace_back();
  return id;
}

std::optional<NodeIndex> PropertyGraph::index_of(NodeId id) const {
  auto it = id_to_index_.find(id);
  if (it == id_to_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LabelId> PropertyGraph::find_label(std::string_view name) const {
  auto it = label_ids_.find(std::string(name));
  if (it == label_ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeIndex> PropertyGraph::nodes_with_label(LabelId id) const {
  return nodes_by_label_[id];
}

bool PropertyGraph::has_edge(NodeIndex src, std::optional<LabelId> label,
                             NodeIndex dst) const {
  const auto& edges = out_[src];
  auto lo = std::lower_bound(edges.begin(), edges.end(),
                             AdjEdge{dst, 0});
  for (auto it = lo; it != edges.end() && it->other == dst; ++it) {
    if (!label || it->label == *label) return true;
  }
  return false;
}

void PropertyGraph::finalize_edges() {
  edge_count_ = 0;
  for (auto& v : out_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    edge_count_ += v.size();
  }
  for (auto& v : in_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

PropertyGraph PropertyGraph::from_records(
    std::vector<NodeRecord> nodes,
    const std::vector<std::tuple<NodeId, std::string, NodeId>>& edges) {
  PropertyGraph g;
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  g.nodes_ = std::move(nodes);
  for (NodeIndex i = 0; i < g.nodes_.size(); ++i) {
    const NodeRecord& n = g.nodes_[i];
    if (n.label.empty() || n.label == kWildcard)
      throw FormatError("node " + std::to_string(n.id) + ": invalid label");
    if (!g.id_to_index_.emplace(n.id, i).second)
      throw FormatError("duplicate node id " + std::to_string(n.id));
    LabelId lid = g.intern_label(n.label);
    g.node_label_ids_.push_back(lid);
    g.nodes_by_label_[lid].push_back(i);
  }
  g.out_.resize(g.nodes_.size());
  g.in_.resize(g.nodes_.size());
  for (const auto& [src, label, dst] : edges) {
    auto si = g.index_of(src), di = g.index_of(dst);
    if (!si || !di)
      throw FormatError("edge references unknown node id");
    if (label.empty() || label == kWildcard)
      throw FormatError("invalid edge label");
    LabelId lid = g.intern_label(label);
    g.out_[*si].push_back({*di, lid});
    g.in_[*di].push_back({*si, lid});
  }
  g.finalize_edges();
  return g;
}

PropertyGraph PropertyGraph::load(const std::filesystem::path& nodes_path,
                                  const std::filesystem::path& edges_path) {
  PropertyGraph g;
  struct Row {
    NodeRecord rec;
    std::size_t line;
  };
  std::vector<Row> rows;
  for_each_line(nodes_path, [&](const std::string& line, std::size_t lineno) {
    auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3)
      throw FormatError(nodes_path, lineno,
                        "expected <id>\\t<label>\\t<attrs>, got " +
                            std::to_string(fields.size()) + " fields");
    NodeRecord rec;
    rec.id = parse_node_id(fields[0], nodes_path, lineno);
    validate_label(fields[1], false, nodes_path, lineno);
    rec.label = fields[1];
    if (fields.size() == 3)
      rec.attrs = parse_attrs(fields[2], nodes_path, lineno);
    rows.push_back({std::move(rec), lineno});
  });

  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.rec.id < b.rec.id; });
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].rec.id == rows[i + 1].rec.id)
      throw FormatError(nodes_path, rows[i + 1].line,
                        "duplicate node id " + std::to_string(rows[i].rec.id));
  }
  g.nodes_.reserve(rows.size());
  for (auto& r : rows) g.nodes_.push_back(std::move(r.rec));
  for (NodeIndex i = 0; i < g.nodes_.size(); ++i) {
    g.id_to_index_.emplace(g.nodes_[i].id, i);
    LabelId lid = g.intern_label(g.nodes_[i].label);
    g.node_label_ids_.push_back(lid);
    g.nodes_by_label_[lid].push_back(i);
  }

  g.out_.resize(g.nodes_.size());
  g.in_.resize(g.nodes_.size());
  for_each_line(edges_path, [&](const std::string& line, std::size_t lineno) {
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      throw FormatError(edges_path, lineno,
                        "expected <src-id>\\t<label>\\t<dst-id>");
    NodeId src = parse_node_id(fields[0], edges_path, lineno);
    NodeId dst = parse_node_id(fields[2], edges_path, lineno);
    validate_label(fields[1], false, edges_path, lineno);
    auto si = g.index_of(src);
    auto di = g.index_of(dst);
    if (!si)
      throw FormatError(edges_path, lineno,
                        "edge references unknown node id " + std::to_string(src));
    if (!di)
      throw FormatError(edges_path, lineno,
                        "edge references unknown node id " + std::to_string(dst));
    LabelId lid = g.intern_label(fields[1]);
    g.out_[*si].push_back({*di, lid});
    g.in_[*di].push_back({*si, lid});
  });
  g.finalize_edges();
  log_info("loaded graph: " + std::to_string(g.node_count()) + " nodes, " +
           std::to_string(g.edge_count()) + " edges");
  return g;
}

void PropertyGraph::save(const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path) const {
  std::ofstream nf(nodes_path);
  if (!nf) throw Error("cannot write " + nodes_path.string());
  for (const NodeRecord& n : nodes_) {
    nf << n.id << '\t' << n.label << '\t';
    bool first = true;
    for (const auto& [k, v] : n.attrs) {
      if (!first) nf << ';';
      nf << k << '=' << v;
      first = false;
    }
    nf << '\n';
  }
  std::ofstream ef(edges_path);
  if (!ef) throw Error("cannot write " + edges_path.string());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    for (const AdjEdge& e : out_[i])
      ef << nodes_[i].id << '\t' << label_names_[e.label] << '\t'
         << nodes_[e.other].id << '\n';
  }
}

std::vector<std::tuple<std::string, std::string, std::string>>
PropertyGraph::edge_signatures() const {
  std::set<std::tuple<std::string, std::string, std::string>> sigs;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    for (const AdjEdge& e : out_[i])
      sigs.insert({label_names_[node_label_ids_[i]], label_names_[e.label],
                   label_names_[node_label_ids_[e.other]]});
  }
  return {sigs.begin(), sigs.end()};
}

std::vector<std::pair<std::string, std::size_t>>
PropertyGraph::attribute_frequencies() const {
  std::map<std::string, std::size_t> counts;
  for (const NodeRecord& n : nodes_)
    for (const auto& [k, v] : n.attrs) ++counts[k];
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(),
                                                       counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

bool operator==(const PropertyGraph& a, const PropertyGraph& b) {
  if (a.nodes_ != b.nodes_) return false;
  // Compare edges as (src id, label, dst id) sets.
  auto edges_of = [](const PropertyGraph& g) {
    std::set<std::tuple<NodeId, std::string, NodeId>> s;
    for (NodeIndex i = 0; i < g.nodes_.size(); ++i)
      for (const AdjEdge& e : g.out_[i])
        s.insert({g.nodes_[i].id, g.label_names_[e.label], g.nodes_[e.other].id});
    return s;
  };
  return edges_of(a) == edges_of(b);
}

std::optional<std::uint32_t> GraphPattern::var_index(
    std::string_view name) const {
  for (std::uint32_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return i;
  return std::nullopt;
}

std::size_t GraphPattern::degree(std::uint32_t var) const {
  std::size_t d = 0;
  for (const Edge& e : edges) d += (e.src == var) + (e.dst == var);
  return d;
}

bool GraphPattern::is_connected() const {
  if (vars.empty()) return false;
  std::vector<bool> seen(vars.size(), false);
  std::vector<std::uint32_t> stack{0};
  seen[0] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    for (const Edge& e : edges) {
      std::uint32_t other;
      if (e.src == v) other = e.dst;
      else if (e.dst == v) other = e.src;
      else continue;
      if (!seen[other]) {
        seen[other] = true;
        ++visited;
        stack.push_back(other);
      }
    }
  }
  return visited == vars.size();
}

void GraphPattern::normalize() {
  for (const Edge& e : edges) {
    if (e.src >= vars.size() || e.dst >= vars.size())
      throw Error("pattern edge references undeclared variable");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::string GraphPattern::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ',';
    out += vars[i].name;
    out += ':';
    out += vars[i].label;
  }
  out += '|';
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ';';
    out += vars[edges[i].src].name;
    out += ' ';
    out += edges[i].label;
    out += ' ';
    out += vars[edges[i].dst].name;
  }
  return out;
}

namespace {

GraphPattern finish_pattern(GraphPattern p, const std::filesystem::path& path,
                            std::size_t header_line) {
  if (p.vars.empty())
    throw FormatError(path, header_line, "pattern declares no variables");
  p.normalize();
  if (!p.is_connected())
    throw FormatError(path, header_line, "pattern is not connected");
  return p;
}

}  // namespace

std::vector<GraphPattern> load_patterns(const std::filesystem::path& path) {
  std::vector<GraphPattern> out;
  GraphPattern current;
  bool open = false;
  std::size_t header_line = 0;
  std::string stem = path.stem().string();

  for_each_line(path, [&](const std::string& line, std::size_t lineno) {
    std::string_view sv = trim(line);
    if (sv.rfind("vars:", 0) == 0) {
      if (open) out.push_back(finish_pattern(std::move(current), path, header_line));
      current = GraphPattern{};
      open = true;
      header_line = lineno;
      std::string_view decls = trim(sv.substr(5));
      if (decls.empty())
        throw FormatError(path, lineno, "empty variable declaration list");
      for (const std::string& decl : split(decls, ',')) {
        std::string_view d = trim(decl);
        std::size_t colon = d.find(':');
        if (colon == std::string_view::npos)
          throw FormatError(path, lineno,
                            "variable declaration must be name:label");
        std::string_view name = trim(d.substr(0, colon));
        std::string_view label = trim(d.substr(colon + 1));
        validate_var_name(name, path, lineno);
        validate_label(label, true, path, lineno);
        if (current.var_index(name))
          throw FormatError(path, lineno,
                            "duplicate variable name '" + std::string(name) + "'");
        current.vars.push_back({std::string(name), std::string(label)});
      }
      return;
    }
    if (!open)
      throw FormatError(path, lineno, "expected a 'vars:' header line first");
    // Edge line: src label dst, whitespace separated.
    std::istringstream iss{std::string(sv)};
    std::string src, label, dst, extra;
    if (!(iss >> src >> label >> dst) || (iss >> extra))
      throw FormatError(path, lineno, "expected edge line 'src label dst'");
    validate_label(label, true, path, lineno);
    auto si = current.var_index(src);
    auto di = current.var_index(dst);
    if (!si)
      throw FormatError(path, lineno, "edge endpoint '" + src + "' not declared");
    if (!di)
      throw FormatError(path, lineno, "edge endpoint '" + dst + "' not declared");
    current.edges.push_back({*si, *di, label});
  });
  if (open) out.push_back(finish_pattern(std::move(current), path, header_line));
  if (out.empty()) throw FormatError(path, 0, "file declares no pattern");
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].name = out.size() == 1 ? stem : stem + "_" + std::to_string(i + 1);
  return out;
}

GraphPattern load_pattern(const std::filesystem::path& path) {
  return load_patterns(path).front();
}

}  // namespace aged
