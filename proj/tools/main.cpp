#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "aged/errors.hpp"
#include "aged/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitCap = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aged: mines minimal exact and approximate entity dependencies over "
      "frequent patterns of a property graph"};

  aged::RunConfig cfg;
  std::string nodes, edges, patterns, out, mode = "leaf";

  app.add_option("--nodes", nodes, "nodes TSV file (<id>\\t<label>\\t<attrs>)")
      ->required();
  app.add_option("--edges", edges, "edges TSV file (<src>\\t<label>\\t<dst>)")
      ->required();
  app.add_option("--tau", cfg.tau, "minimum MNI support for patterns")
      ->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "error threshold in [0,1]")
      ->capture_default_str();
  app.add_option("--max-edges", cfg.max_edges, "largest mined pattern size")
      ->capture_default_str();
  app.add_option("--max-lhs-size", cfg.max_lhs_size,
                 "bound on rule LHS size (0 = unbounded)")
      ->capture_default_str();
  app.add_option("--approx-mode", mode, "leaf or eager")
      ->capture_default_str();
  app.add_option("--min-const-support", cfg.min_const_support,
                 "matches required before a constant becomes an item")
      ->capture_default_str();
  app.add_flag("--cross-kind", cfg.cross_kind,
               "also pair differently-labeled variables in variable items");
  app.add_option("--symmetry-breaking", cfg.symmetry_breaking,
                 "deduplicate interchangeable-variable matches (default on)")
      ->capture_default_str();
  app.add_option("--match-cap", cfg.match_cap,
                 "abort when a pattern enumerates more matches than this")
      ->capture_default_str();
  app.add_option("--patterns", patterns,
                 "pattern file: skip mining and use these scopes");
  app.add_option("--attr-limit", cfg.attr_limit,
                 "use only the k most frequent attributes (0 = all)")
      ->capture_default_str();
  app.add_option("--out", out, "rules output file (default: stdout)");
  app.add_flag("--verify", cfg.verify,
               "re-validate every emitted rule with the naive oracle");
  app.add_flag("--report-timing", cfg.report_timing, "print phase timings");
  app.add_option("--workers", cfg.workers,
                 "parallel pattern workers (0 = hardware)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "aged: [config] %s\n", e.what());
    return kExitConfig;
  }

  cfg.nodes_path = nodes;
  cfg.edges_path = edges;
  cfg.patterns_path = patterns;
  cfg.out_path = out;
  if (mode == "leaf") {
    cfg.approx_mode = aged::ApproxMode::Leaf;
  } else if (mode == "eager") {
    cfg.approx_mode = aged::ApproxMode::Eager;
  } else {
    std::fprintf(stderr, "aged: [config] --approx-mode must be leaf or eager\n");
    return kExitConfig;
  }

  try {
    aged::RunReport report = aged::run(cfg);
    std::fputs(report.to_text(cfg.report_timing).c_str(), stderr);
    if (cfg.verify && report.verify_failures > 0) {
      std::fprintf(stderr, "aged: [verify] %zu rule(s) failed re-validation\n",
                   report.verify_failures);
      return 1;
    }
    return kExitOk;
  } catch (const aged::ConfigError& e) {
    std::fprintf(stderr, "aged: [config] %s\n", e.what());
    return kExitConfig;
  } catch (const aged::FormatError& e) {
    std::fprintf(stderr, "aged: [input] %s\n", e.what());
    return kExitFormat;
  } catch (const aged::CapExceeded& e) {
    std::fprintf(stderr, "aged: [cap] %s\n", e.what());
    return kExitCap;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "aged: [error] %s\n", e.what());
    return 1;
  }
}
