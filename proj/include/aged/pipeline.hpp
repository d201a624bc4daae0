#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aged/engine.hpp"
#include "aged/graph.hpp"

namespace aged {

struct RunConfig {
  std::filesystem::path nodes_path;
  std::filesystem::path edges_path;
  std::filesystem::path patterns_path;  // empty: mine patterns
  std::filesystem::path out_path;       // empty: stdout
  std::size_t tau = 2;
  double epsilon = 0.0;
  std::size_t max_edges = 3;
  std::size_t max_lhs_size = 0;  // 0 = unbounded
  ApproxMode approx_mode = ApproxMode::Leaf;
  std::size_t min_const_support = 2;
  bool cross_kind = false;
  bool symmetry_breaking = true;
  std::size_t match_cap = kDefaultMatchCap;
  std::size_t attr_limit = 0;  // 0 = all attributes
  bool verify = false;
  bool report_timing = false;
  std::size_t workers = 0;  // 0 = hardware concurrency
};

struct PatternReport {
  std::string name;
  std::string serialized;
  std::size_t mni = 0;
  std::size_t match_count = 0;
  std::size_t rules_exact = 0;
  std::size_t rules_approx = 0;
};

struct RunReport {
  std::size_t patterns_mined = 0;
  std::size_t patterns_after_reduction = 0;
  std::vector<PatternReport> per_pattern;
  std::size_t rules_exact = 0;
  std::size_t rules_approx = 0;
  std::size_t rules_emitted = 0;
  double t_load = 0, t_patterns = 0, t_reduce = 0, t_deps = 0;
  double t_rule_reduce = 0, t_emit = 0, t_total = 0;
  std::size_t verify_checked = 0;
  std::size_t verify_failures = 0;

  std::string to_text(bool with_timing) const;
};

// Full discovery pipeline: load, obtain tau-frequent reduced patterns, match
// each, mine dependencies, reduce rules across patterns, emit. Output bytes
// depend only on the config, never on scheduling.
RunReport run(const RunConfig& config);

void emit_rules(const std::vector<DiscoveredRule>& rules, std::ostream& out);
void emit_rules(const std::vector<DiscoveredRule>& rules,
                const std::filesystem::path& path);
std::string rule_line(const DiscoveredRule& rule);

}  // namespace aged
