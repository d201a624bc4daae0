#include "aged/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "aged/errors.hpp"
#include "aged/log.hpp"
#include "aged/miner.hpp"
#include "aged/oracle.hpp"

namespace aged {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string json_str(const std::string& s) { return nlohmann::json(s).dump(); }

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void validate(const RunConfig& c) {
  if (c.epsilon < 0.0 || c.epsilon > 1.0)
    throw ConfigError("epsilon must lie in [0,1]");
  if (c.tau < 1) throw ConfigError("tau must be at least 1");
  if (c.max_edges < 1 || c.max_edges > 8)
    throw ConfigError("max-edges must lie in [1,8]");
  if (c.match_cap < 1) throw ConfigError("match-cap must be at least 1");
  if (c.nodes_path.empty() || c.edges_path.empty())
    throw ConfigError("nodes and edges paths are required");
}

struct PatternWork {
  GraphPattern pattern;
  std::size_t mni = 0;
  std::size_t match_count = 0;
  std::vector<DiscoveredRule> rules;
};

void verify_rules(const std::vector<DiscoveredRule>& rules,
                  const PropertyGraph& g, const RunConfig& config,
                  RunReport& report) {
  // Re-match per pattern and re-check every rule with the naive oracle path:
  // e3 within epsilon, plus mode-appropriate minimality (exact rules must
  // have no zero-violation proper subset; in eager mode no proper subset may
  // pass epsilon at all).
  std::map<std::string, std::pair<ItemUniverse, BinaryRelation>> cache;
  for (const DiscoveredRule& r : rules) {
    std::string key = r.pattern.serialize();
    auto it = cache.find(key);
    if (it == cache.end()) {
      MatchSet h = find_homomorphisms(
          r.pattern, g, {config.symmetry_breaking, config.match_cap});
      BuildItemOptions bo{config.min_const_support, config.cross_kind,
                          config.attr_limit};
      ItemUniverse u = build_items(r.pattern, h, g, bo);
      BinaryRelation b = build_binary_relation(u, h, g);
      it = cache.emplace(key, std::make_pair(std::move(u), std::move(b))).first;
    }
    const ItemUniverse& u = it->second.first;
    const BinaryRelation& b = it->second.second;

    auto index_of_item = [&](const Item& item) -> std::optional<std::uint32_t> {
      for (std::uint32_t i = 0; i < u.items.size(); ++i) {
        const Item& c = u.items[i];
        if (c.kind == item.kind && c.var1 == item.var1 && c.var2 == item.var2 &&
            c.attr1 == item.attr1 && c.attr2 == item.attr2 &&
            c.constant == item.constant)
          return i;
      }
      return std::nullopt;
    };

    ++report.verify_checked;
    auto rhs = index_of_item(r.rhs);
    if (!rhs) {
      ++report.verify_failures;
      log_warn("verify: rhs item missing for rule on " + key);
      continue;
    }
    Bitset lhs(u.items.size());
    bool ok = true;
    for (const Item& i : r.lhs) {
      auto idx = index_of_item(i);
      if (!idx) {
        ok = false;
        break;
      }
      lhs.set(*idx);
    }
    if (!ok) {
      ++report.verify_failures;
      continue;
    }
    ErrorReport er = oracle::naive_e3(lhs, *rhs, b, u);
    auto passes = [&](const ErrorReport& e) {
      if (e.denominator_degenerate) return e.e3 <= config.epsilon;
      return static_cast<double>(e.violations) <=
             config.epsilon * static_cast<double>(e.match_count - e.adom);
    };
    if (!passes(er) || er.violations != r.error.violations ||
        er.adom != r.error.adom) {
      ++report.verify_failures;
      log_warn("verify: e3 recheck failed for rule on " + key);
      continue;
    }
    // Minimality: walk all proper subsets of the lhs.
    std::vector<std::uint32_t> members;
    lhs.for_each_set(
        [&](std::size_t i) { members.push_back(static_cast<std::uint32_t>(i)); });
    bool minimal = true;
    for (std::size_t mask = 0;
         members.size() < 20 && mask + 1 < (std::size_t{1} << members.size());
         ++mask) {
      Bitset sub(u.items.size());
      for (std::size_t k = 0; k < members.size(); ++k)
        if (mask & (std::size_t{1} << k)) sub.set(members[k]);
      ErrorReport se = oracle::naive_e3(sub, *rhs, b, u);
      bool sub_passes = config.approx_mode == ApproxMode::Eager
                            ? passes(se)
                            : (r.exact && se.violations == 0);
      if (sub_passes) {
        minimal = false;
        break;
      }
    }
    if (!minimal) {
      ++report.verify_failures;
      log_warn("verify: minimality recheck failed for rule on " + key);
    }
  }
}

}  // namespace

std::string rule_line(const DiscoveredRule& rule) {
  std::string line = "{\"name\":" + json_str(rule.pattern.name);
  line += ",\"pattern\":" + json_str(rule.pattern.serialize());
  line += ",\"lhs\":[";
  for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
    if (i) line += ',';
    line += json_str(rule.lhs[i].display);
  }
  line += "],\"rhs\":" + json_str(rule.rhs.display);
  line += ",\"e3\":" + fixed6(rule.error.e3);
  line += ",\"E3\":" + std::to_string(rule.error.violations);
  line += ",\"H\":" + std::to_string(rule.error.match_count);
  line += ",\"adom\":" + std::to_string(rule.error.adom);
  line += ",\"mni\":" + std::to_string(rule.mni);
  line += std::string(",\"exact\":") + (rule.exact ? "true" : "false");
  line += "}";
  return line;
}

void emit_rules(const std::vector<DiscoveredRule>& rules, std::ostream& out) {
  for (const DiscoveredRule& r : rules) out << rule_line(r) << '\n';
}

void emit_rules(const std::vector<DiscoveredRule>& rules,
                const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  emit_rules(rules, f);
}

std::string RunReport::to_text(bool with_timing) const {
  std::ostringstream os;
  os << "patterns: " << patterns_mined << " frequent, "
     << patterns_after_reduction << " after reduction\n";
  for (const PatternReport& p : per_pattern) {
    os << "  " << p.name << "  mni=" << p.mni << "  matches=" << p.match_count
       << "  rules=" << (p.rules_exact + p.rules_approx) << " (exact="
       << p.rules_exact << ", approx=" << p.rules_approx << ")\n";
  }
  os << "rules emitted: " << rules_emitted << " (exact=" << rules_exact
     << ", approx=" << rules_approx << ")\n";
  if (verify_checked > 0)
    os << "verified: " << verify_checked << " rules, " << verify_failures
       << " failures\n";
  if (with_timing) {
    os << "phase seconds: load=" << fixed6(t_load)
       << " patterns=" << fixed6(t_patterns) << " reduce=" << fixed6(t_reduce)
       << " deps=" << fixed6(t_deps) << " rule-reduce=" << fixed6(t_rule_reduce)
       << " emit=" << fixed6(t_emit) << " total=" << fixed6(t_total) << "\n";
  }
  return os.str();
}

RunReport run(const RunConfig& config) {
  validate(config);
  RunReport report;
  auto t_start = std::chrono::steady_clock::now();

  auto t0 = std::chrono::steady_clock::now();
  PropertyGraph g = PropertyGraph::load(config.nodes_path, config.edges_path);
  report.t_load = seconds_since(t0);

  // Scope discovery: mined, or user-supplied via the patterns file.
  t0 = std::chrono::steady_clock::now();
  PatternSet patterns;
  if (!config.patterns_path.empty()) {
    for (GraphPattern& p : load_patterns(config.patterns_path)) {
      MniReport mni = compute_mni(p, g, config.match_cap);
      if (mni.mni < config.tau) {
        log_info("pattern " + p.name + " below tau (mni=" +
                 std::to_string(mni.mni) + "), skipped");
        continue;
      }
      patterns.patterns.push_back({std::move(p), std::move(mni)});
    }
  } else {
    patterns = mine_frequent_patterns(g, config.tau, config.max_edges,
                                      config.match_cap);
  }
  report.patterns_mined = patterns.patterns.size();
  report.t_patterns = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  patterns = reduce_patterns(std::move(patterns));
  report.patterns_after_reduction = patterns.patterns.size();
  report.t_reduce = seconds_since(t0);

  // Mined patterns get canonical names after reduction; user patterns keep
  // the names assigned at load.
  if (config.patterns_path.empty()) {
    for (std::size_t i = 0; i < patterns.patterns.size(); ++i)
      patterns.patterns[i].pattern.name = "Q" + std::to_string(i + 1);
  }

  t0 = std::chrono::steady_clock::now();
  std::vector<PatternWork> work(patterns.patterns.size());
  for (std::size_t i = 0; i < patterns.patterns.size(); ++i) {
    work[i].pattern = patterns.patterns[i].pattern;
    work[i].mni = patterns.patterns[i].mni.mni;
  }

  std::size_t workers = config.workers;
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  workers = std::min(workers, std::max<std::size_t>(work.size(), 1));

  MineOptions mopts;
  mopts.epsilon = config.epsilon;
  mopts.mode = config.approx_mode;
  mopts.items = {config.min_const_support, config.cross_kind, config.attr_limit};
  mopts.max_lhs_size = config.max_lhs_size;

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> task_errors(work.size());
  auto worker_fn = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) break;
      try {
        PatternWork& w = work[i];
        MatchSet h = find_homomorphisms(
            w.pattern, g, {config.symmetry_breaking, config.match_cap});
        w.match_count = h.matches.size();
        if (!h.matches.empty())
          w.rules = mine_dependencies(w.pattern, h, g, mopts, w.mni);
      } catch (...) {
        task_errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : task_errors)
    if (err) std::rethrow_exception(err);
  report.t_deps = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<DiscoveredRule> all_rules;
  for (PatternWork& w : work) {
    PatternReport pr;
    pr.name = w.pattern.name;
    pr.serialized = w.pattern.serialize();
    pr.mni = w.mni;
    pr.match_count = w.match_count;
    for (DiscoveredRule& r : w.rules) {
      (r.exact ? pr.rules_exact : pr.rules_approx)++;
      all_rules.push_back(std::move(r));
    }
    report.per_pattern.push_back(std::move(pr));
  }
  all_rules = reduce_rules(std::move(all_rules));
  std::sort(all_rules.begin(), all_rules.end(),
            [](const DiscoveredRule& a, const DiscoveredRule& b) {
              return rule_line(a) < rule_line(b);
            });
  report.t_rule_reduce = seconds_since(t0);

  for (const DiscoveredRule& r : all_rules)
    (r.exact ? report.rules_exact : report.rules_approx)++;
  report.rules_emitted = all_rules.size();

  t0 = std::chrono::steady_clock::now();
  if (config.out_path.empty()) {
    std::ostringstream os;
    emit_rules(all_rules, os);
    std::fputs(os.str().c_str(), stdout);
  } else {
    emit_rules(all_rules, config.out_path);
  }
  report.t_emit = seconds_since(t0);

  if (config.verify) verify_rules(all_rules, g, config, report);

  report.t_total = seconds_since(t_start);
  return report;
}

}  // namespace aged
