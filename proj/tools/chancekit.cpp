// chancekit: co-occurrence maps, graph-based entropy, change reports and
// regional seismic entropy over event streams.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "chancekit/cli.hpp"

namespace {

using chancekit::ParseError;
using chancekit::RunConfig;
using chancekit::parse_runconfig;

struct CommandSpec {
  CLI::App* app = nullptr;
  std::string input;
  std::string config_path;
  std::string out_dir;
  bool strict = false;
  bool corrupt = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add_common() {
    app->add_option("input", input,
                    "input path, or - for stdin")->required();
    app->add_option("--config", config_path,
                    "flat key = value configuration file");
    app->add_option("--out", out_dir, "directory for the output files");
    app->add_flag("--strict", strict, "escalate warnings to exit code 1");
  }

  void add_value(const std::string& flag, const std::string& key,
                 const std::string& desc) {
    options[key] = app->add_option(flag, values[key], desc);
  }

  chancekit::cli::Invocation invocation() const {
    chancekit::cli::Invocation inv;
    inv.input = input;
    if (app->count("--out") > 0) inv.out_dir = out_dir;
    inv.strict = strict;
    if (app->count("--config") > 0) {
      std::ifstream file(config_path);
      if (!file)
        throw ParseError("cannot read config file \"" + config_path + "\"");
      inv.settings = parse_runconfig(file);
    }
    for (const auto& [key, option] : options)
      if (option->count() > 0) inv.settings.set(key, values.at(key));
    if (corrupt) inv.settings.set("corrupt", "on");
    return inv;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-occurrence maps and entropy-based change detection "
               "over event streams"};
  app.require_subcommand(1);

  CommandSpec keygraph;
  keygraph.app = app.add_subcommand(
      "keygraph", "extract a classified co-occurrence map (DOT + JSON)");
  keygraph.add_common();
  keygraph.add_value("--mode", "mode", "input kind: text or baskets");
  keygraph.add_value("--top-nodes", "top_nodes", "graph node budget N");
  keygraph.add_value("--top-edges", "top_edges",
                     "graph edge budget M (default N-1)");
  keygraph.add_value("--top-roofs", "top_roofs", "roof budget K");
  keygraph.add_value("--columns-per-roof", "columns_per_roof",
                     "dotted columns emitted per roof");
  keygraph.add_value("--lowercase", "lowercase",
                     "case-fold text tokens (on/off)");
  keygraph.add_value("--min-token-len", "min_token_len",
                     "minimum token length in bytes");
  keygraph.add_value("--stopwords", "stopwords",
                     "stopword file, one token per line");

  CommandSpec gbe;
  gbe.app = app.add_subcommand(
      "gbe", "graph-based entropy series and structural-change signs");
  gbe.add_common();
  gbe.add_value("--window-len", "window_len", "window length in ticks");
  gbe.add_value("--step", "step", "window step in ticks");
  gbe.add_value("--top-nodes", "top_nodes", "graph node budget N");
  gbe.add_value("--top-edges", "top_edges", "graph edge budget M");
  gbe.add_value("--membership", "membership",
                "cluster membership: any-item or all-items");
  gbe.add_value("--jaccard", "jaccard", "island matching threshold in (0,1]");
  gbe.add_value("--entropy-delta-threshold", "entropy_delta_threshold",
                "report |dHg| moves of at least this size (0: structural "
                "changes only)");
  gbe.add_value("--entropy-sign", "entropy_sign",
                "entropy convention: negated or raw");
  gbe.add_value("--threads", "threads", "worker threads for the windows");

  CommandSpec change;
  change.app = app.add_subcommand(
      "change", "market change points, trends and explanations");
  change.add_common();
  change.add_value("--delta-t", "delta_t", "window half-span in ticks");
  change.add_value("--q", "q", "change magnitude threshold Q");
  change.add_value("--metric", "metric", "vector metric: l1, l2 or cosine");
  change.add_value("--vocab-size", "vocab_size",
                   "tracked vocabulary size (most frequent items)");
  change.add_value("--nms", "nms", "non-maximum suppression (on/off)");
  change.add_value("--step", "step",
                   "candidate grid pitch (default delta_t)");

  CommandSpec resi;
  resi.app = app.add_subcommand(
      "resi", "regional seismic entropy series and precursor flags");
  resi.add_common();
  resi.add_value("--lat-min", "lat_min", "region south edge, degrees");
  resi.add_value("--lat-max", "lat_max", "region north edge, degrees");
  resi.add_value("--lon-min", "lon_min", "region west edge, degrees");
  resi.add_value("--lon-max", "lon_max", "region east edge, degrees");
  resi.add_value("--cell-deg", "cell_deg", "grid pitch in degrees");
  resi.add_value("--window", "window", "window length W in ticks");
  resi.add_value("--step", "step", "window step in ticks");
  resi.add_value("--neighborhood", "neighborhood",
                 "cell connectivity: 4 or 8");
  resi.add_value("--min-events", "min_events",
                 "minimum events per window; smaller windows are flagged");
  resi.add_value("--rise-lookback", "rise_lookback",
                 "L1, rise-phase windows");
  resi.add_value("--flat-lookback", "flat_lookback",
                 "L2, saturation-phase windows");
  resi.add_value("--theta-up", "theta_up", "rise slope threshold");
  resi.add_value("--theta-flat", "theta_flat", "saturation slope threshold");
  resi.add_value("--entropy-sign", "entropy_sign",
                 "entropy convention: negated or raw");
  resi.add_value("--min-mag", "min_mag",
                 "drop events with a magnitude below this");
  resi.add_value("--threads", "threads", "worker threads for the windows");

  CommandSpec oracle;
  oracle.app = app.add_subcommand(
      "oracle", "diff fast-path results against naive enumeration");
  oracle.add_common();
  oracle.add_value("--check", "check",
                   "which check decides the result: all, cooccur, clusters "
                   "or entropy");
  oracle.add_value("--top-nodes", "top_nodes", "graph node budget N");
  oracle.add_value("--top-edges", "top_edges", "graph edge budget M");
  oracle.add_value("--membership", "membership",
                   "cluster membership: any-item or all-items");
  oracle.app->add_flag("--corrupt", oracle.corrupt,
                       "perturb the fast path first (test seam)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chancekit::cli::kExitOk : chancekit::cli::kExitInput;
  }

  try {
    if (*keygraph.app)
      return chancekit::cli::run_keygraph(keygraph.invocation(), std::cin,
                                          std::cout, std::cerr);
    if (*gbe.app)
      return chancekit::cli::run_gbe(gbe.invocation(), std::cin, std::cout,
                                     std::cerr);
    if (*change.app)
      return chancekit::cli::run_change(change.invocation(), std::cin,
                                        std::cout, std::cerr);
    if (*resi.app)
      return chancekit::cli::run_resi(resi.invocation(), std::cin, std::cout,
                                      std::cerr);
    if (*oracle.app)
      return chancekit::cli::run_oracle(oracle.invocation(), std::cin,
                                        std::cout, std::cerr);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return chancekit::cli::kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return chancekit::cli::kExitInput;
  }
  return chancekit::cli::kExitInput;
}
