#ifndef CHANCEKIT_CLI_HPP
#define CHANCEKIT_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "chancekit/basket_io.hpp"
#include "chancekit/catalog_io.hpp"
#include "chancekit/change.hpp"
#include "chancekit/diversity.hpp"
#include "chancekit/keygraph.hpp"
#include "chancekit/oracle.hpp"
#include "chancekit/resi.hpp"
#include "chancekit/runconfig.hpp"
#include "chancekit/serialize.hpp"
#include "chancekit/tokenize.hpp"

namespace chancekit::cli {

// Exit codes: 0 success, 1 analysis-level failure or escalated warning
// (--strict), 2 input/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;
inline constexpr int kExitInput = 2;

struct Invocation {
  std::string input;  // path, or "-" for stdin
  std::optional<std::string> out_dir;
  bool strict = false;
  RunConfig settings;  // config file values with flag overrides applied
};

namespace detail {

inline std::string read_input(const std::string& path, std::istream& stdin_) {
  if (path == "-") {
    std::ostringstream buf;
    buf << stdin_.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot read input \"" + path + "\"");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write \"" + path.string() + "\"");
  file << content;
}

inline GraphConfig graph_config(const RunConfig& s) {
  GraphConfig cfg;
  cfg.top_nodes = static_cast<int>(s.get_int("top_nodes", cfg.top_nodes));
  if (s.has("top_edges"))
    cfg.top_edges = static_cast<int>(s.get_int("top_edges", 0));
  if (cfg.top_nodes < 1 || cfg.edge_budget() < 0)
    throw ParseError("top_nodes must be >= 1 and top_edges >= 0");
  return cfg;
}

inline ClusterMembership membership_of(const RunConfig& s) {
  const auto value = s.get_string("membership", "any-item");
  if (value == "any-item") return ClusterMembership::any_item;
  if (value == "all-items") return ClusterMembership::all_items;
  throw ParseError("membership must be any-item or all-items, got \"" +
                   value + "\"");
}

inline EntropySign entropy_sign_of(const RunConfig& s) {
  const auto value = s.get_string("entropy_sign", "negated");
  if (value == "negated") return EntropySign::negated;
  if (value == "raw") return EntropySign::raw;
  throw ParseError("entropy_sign must be negated or raw, got \"" + value +
                   "\"");
}

inline ChangeMetric metric_of(const RunConfig& s) {
  const auto value = s.get_string("metric", "l2");
  if (value == "l1") return ChangeMetric::l1;
  if (value == "l2") return ChangeMetric::l2;
  if (value == "cosine") return ChangeMetric::cosine;
  throw ParseError("metric must be l1, l2 or cosine, got \"" + value + "\"");
}

}  // namespace detail

// keygraph: DOT + JSON map of the input corpus.
inline int run_keygraph(const Invocation& inv, std::istream& stdin_,
                        std::ostream& out, std::ostream& err) {
  inv.settings.validate_keys({"mode", "top_nodes", "top_edges", "top_roofs",
                              "columns_per_roof", "lowercase",
                              "min_token_len", "stopwords"});
  const auto mode = inv.settings.get_string("mode", "text");
  if (mode != "text" && mode != "baskets")
    throw ParseError("mode must be text or baskets, got \"" + mode + "\"");

  KeyGraphConfig cfg;
  cfg.graph = detail::graph_config(inv.settings);
  cfg.top_roofs =
      static_cast<int>(inv.settings.get_int("top_roofs", cfg.top_roofs));
  cfg.columns_per_roof = static_cast<int>(
      inv.settings.get_int("columns_per_roof", cfg.columns_per_roof));
  if (cfg.top_roofs < 1 || cfg.columns_per_roof < 1)
    throw ParseError("top_roofs and columns_per_roof must be >= 1");

  const auto raw = detail::read_input(inv.input, stdin_);
  EventStream stream;
  if (mode == "text") {
    TokenizerConfig tok;
    tok.lowercase = inv.settings.get_bool("lowercase", tok.lowercase);
    tok.min_token_len = static_cast<int>(
        inv.settings.get_int("min_token_len", tok.min_token_len));
    if (tok.min_token_len < 1) throw ParseError("min_token_len must be >= 1");
    if (inv.settings.has("stopwords")) {
      std::ifstream file(inv.settings.get_string("stopwords", ""));
      if (!file)
        throw ParseError("cannot read stopwords file \"" +
                         inv.settings.get_string("stopwords", "") + "\"");
      tok.stopwords = load_stopwords(file);
    }
    stream = tokenize_text(raw, tok);
  } else {
    std::istringstream in(raw);
    stream = parse_basket_jsonl(in);
  }

  bool warned = false;
  if (stream.empty()) {
    err << "warning: empty input; emitting an empty map\n";
    warned = true;
  }

  const auto map = assemble_map(stream, cfg);
  const auto json = to_json(map).dump(2) + "\n";
  const auto dot = keygraph_dot(map);
  out << json;
  if (inv.out_dir) {
    detail::write_file(*inv.out_dir, "keygraph.json", json);
    detail::write_file(*inv.out_dir, "keygraph.dot", dot);
  }
  return warned && inv.strict ? kExitAnalysis : kExitOk;
}

// gbe: entropy series CSV + change-sign JSON over a basket stream.
inline int run_gbe(const Invocation& inv, std::istream& stdin_,
                   std::ostream& out, std::ostream& err) {
  inv.settings.validate_keys({"window_len", "step", "top_nodes", "top_edges",
                              "membership", "jaccard",
                              "entropy_delta_threshold", "entropy_sign",
                              "threads"});
  GbeConfig cfg;
  cfg.window_len =
      static_cast<Tick>(inv.settings.get_int("window_len", cfg.window_len));
  cfg.step = static_cast<Tick>(inv.settings.get_int("step", cfg.window_len));
  cfg.graph = detail::graph_config(inv.settings);
  cfg.membership = detail::membership_of(inv.settings);
  cfg.jaccard_match =
      inv.settings.get_double("jaccard", cfg.jaccard_match);
  cfg.entropy_delta_threshold = inv.settings.get_double(
      "entropy_delta_threshold", cfg.entropy_delta_threshold);
  cfg.sign = detail::entropy_sign_of(inv.settings);
  cfg.threads =
      static_cast<int>(inv.settings.get_int("threads", cfg.threads));
  if (cfg.window_len < 1 || cfg.step < 1)
    throw ParseError("window_len and step must be >= 1");
  if (!(cfg.jaccard_match > 0.0 && cfg.jaccard_match <= 1.0))
    throw ParseError("jaccard must lie in (0, 1]");
  if (cfg.entropy_delta_threshold < 0.0)
    throw ParseError("entropy_delta_threshold must be >= 0");

  bool warned = false;
  if (cfg.step > cfg.window_len) {
    err << "warning: step exceeds window_len; some events fall outside "
           "every window\n";
    warned = true;
  }

  const auto raw = detail::read_input(inv.input, stdin_);
  std::istringstream in(raw);
  const auto stream = parse_basket_jsonl(in);
  if (stream.empty()) {
    err << "warning: empty input; emitting an empty series\n";
    warned = true;
  }

  const auto series = gbe_series(stream, cfg);
  const auto signs = change_signs(series, cfg);
  const auto csv = gbe_series_csv(series, cfg.jaccard_match);
  const auto json = signs_json(signs).dump(2) + "\n";
  out << json;
  if (inv.out_dir) {
    detail::write_file(*inv.out_dir, "gbe_series.csv", csv);
    detail::write_file(*inv.out_dir, "gbe_signs.json", json);
  }
  return warned && inv.strict ? kExitAnalysis : kExitOk;
}

// change: Eq-style change report JSON + magnitude CSV.
inline int run_change(const Invocation& inv, std::istream& stdin_,
                      std::ostream& out, std::ostream& err) {
  inv.settings.validate_keys(
      {"delta_t", "q", "metric", "vocab_size", "nms", "step"});
  ChangeConfig cfg;
  cfg.delta_t =
      static_cast<Tick>(inv.settings.get_int("delta_t", cfg.delta_t));
  cfg.q = inv.settings.get_double("q", cfg.q);
  cfg.metric = detail::metric_of(inv.settings);
  cfg.vocab_size =
      static_cast<int>(inv.settings.get_int("vocab_size", cfg.vocab_size));
  cfg.nms = inv.settings.get_bool("nms", cfg.nms);
  cfg.step = static_cast<Tick>(inv.settings.get_int("step", 0));
  if (cfg.delta_t < 1 || !(cfg.q > 0) || cfg.vocab_size < 1 || cfg.step < 0)
    throw ParseError("need delta_t >= 1, q > 0, vocab_size >= 1, step >= 0");

  const auto raw = detail::read_input(inv.input, stdin_);
  std::istringstream in(raw);
  const auto stream = parse_basket_jsonl(in);

  const auto magnitudes = magnitude_series(stream, cfg);
  auto points = detect_changes(stream, cfg);
  const auto segments = segment_trends(stream, points, cfg);
  annotate_change_points(points, segments);
  std::vector<ChangeExplanation> explanations;
  explanations.reserve(points.size());
  for (const auto& p : points)
    explanations.push_back(explain_change(p, segments, {}, cfg));

  const auto json =
      change_report_json(points, segments, explanations).dump(2) + "\n";
  const auto csv = magnitude_csv(magnitudes);
  out << json;
  if (inv.out_dir) {
    detail::write_file(*inv.out_dir, "change_report.json", json);
    detail::write_file(*inv.out_dir, "change_magnitude.csv", csv);
  }
  return kExitOk;
}

// resi: regional entropy series CSV + precursor flags CSV.
inline int run_resi(const Invocation& inv, std::istream& stdin_,
                    std::ostream& out, std::ostream& err) {
  inv.settings.validate_keys(
      {"lat_min", "lat_max", "lon_min", "lon_max", "cell_deg", "window",
       "step", "neighborhood", "min_events", "rise_lookback",
       "flat_lookback", "theta_up", "theta_flat", "entropy_sign", "min_mag",
       "threads"});

  const auto raw = detail::read_input(inv.input, stdin_);
  std::istringstream in(raw);
  const auto catalog = parse_catalog_csv(in);

  ResiConfig cfg;
  cfg.window = static_cast<Tick>(inv.settings.get_int("window", cfg.window));
  cfg.step = static_cast<Tick>(inv.settings.get_int("step", cfg.step));
  cfg.neighborhood = static_cast<int>(
      inv.settings.get_int("neighborhood", cfg.neighborhood));
  cfg.min_events_per_window =
      inv.settings.get_int("min_events", cfg.min_events_per_window);
  cfg.rise_lookback = static_cast<int>(
      inv.settings.get_int("rise_lookback", cfg.rise_lookback));
  cfg.flat_lookback = static_cast<int>(
      inv.settings.get_int("flat_lookback", cfg.flat_lookback));
  cfg.theta_up = inv.settings.get_double("theta_up", cfg.theta_up);
  cfg.theta_flat = inv.settings.get_double("theta_flat", cfg.theta_flat);
  cfg.sign = detail::entropy_sign_of(inv.settings);
  if (inv.settings.has("min_mag"))
    cfg.min_mag = inv.settings.get_double("min_mag", 0.0);
  cfg.threads =
      static_cast<int>(inv.settings.get_int("threads", cfg.threads));

  const bool region_given =
      inv.settings.has("lat_min") || inv.settings.has("lat_max") ||
      inv.settings.has("lon_min") || inv.settings.has("lon_max");
  cfg.region.cell_deg = inv.settings.get_double("cell_deg", 1.0);
  if (region_given) {
    if (!(inv.settings.has("lat_min") && inv.settings.has("lat_max") &&
          inv.settings.has("lon_min") && inv.settings.has("lon_max")))
      throw ParseError(
          "a region needs all of lat_min, lat_max, lon_min, lon_max");
    cfg.region.lat_min = inv.settings.get_double("lat_min", 0);
    cfg.region.lat_max = inv.settings.get_double("lat_max", 0);
    cfg.region.lon_min = inv.settings.get_double("lon_min", 0);
    cfg.region.lon_max = inv.settings.get_double("lon_max", 0);
  } else if (!catalog.empty()) {
    // default region: the catalog's bounding box
    cfg.region.lat_min = cfg.region.lat_max = catalog.front().lat;
    cfg.region.lon_min = cfg.region.lon_max = catalog.front().lon;
    for (const auto& e : catalog) {
      cfg.region.lat_min = std::min(cfg.region.lat_min, e.lat);
      cfg.region.lat_max = std::max(cfg.region.lat_max, e.lat);
      cfg.region.lon_min = std::min(cfg.region.lon_min, e.lon);
      cfg.region.lon_max = std::max(cfg.region.lon_max, e.lon);
    }
    if (cfg.region.lat_min == cfg.region.lat_max)
      cfg.region.lat_max += cfg.region.cell_deg;
    if (cfg.region.lon_min == cfg.region.lon_max)
      cfg.region.lon_max += cfg.region.cell_deg;
  } else {
    cfg.region = {0, 1, 0, 1, cfg.region.cell_deg};
  }
  cfg.region.validate();

  bool warned = false;
  if (catalog.empty()) {
    err << "warning: empty catalog; emitting empty series\n";
    warned = true;
  }

  const auto series = resi_series(catalog, cfg);
  std::vector<PrecursorFlag> flags;
  long long usable = 0;
  for (const auto& r : series)
    if (!r.flagged && r.h) ++usable;
  if (usable >=
      static_cast<long long>(cfg.rise_lookback + cfg.flat_lookback)) {
    flags = detect_precursor(series, cfg);
  } else if (!series.empty()) {
    err << "warning: series too short for precursor detection; "
           "flags empty\n";
    warned = true;
  }

  const auto series_csv = resi_series_csv(series);
  const auto flags_csv = resi_flags_csv(flags);
  out << series_csv;
  if (inv.out_dir) {
    detail::write_file(*inv.out_dir, "resi_series.csv", series_csv);
    detail::write_file(*inv.out_dir, "resi_flags.csv", flags_csv);
  }
  return warned && inv.strict ? kExitAnalysis : kExitOk;
}

// oracle: diff fast-path results against naive enumeration.
inline int run_oracle(const Invocation& inv, std::istream& stdin_,
                      std::ostream& out, std::ostream& err) {
  inv.settings.validate_keys(
      {"top_nodes", "top_edges", "membership", "check", "corrupt"});
  const auto check = inv.settings.get_string("check", "all");
  if (check != "all" && check != "cooccur" && check != "clusters" &&
      check != "entropy")
    throw ParseError("check must be all, cooccur, clusters or entropy");
  const bool corrupt = inv.settings.get_bool("corrupt", false);

  const auto raw = detail::read_input(inv.input, stdin_);
  std::istringstream in(raw);
  const auto stream = parse_basket_jsonl(in);

  const auto report = oracle_verify(stream, detail::graph_config(inv.settings),
                                    detail::membership_of(inv.settings),
                                    corrupt);
  bool ok = true;
  if (check == "all")
    ok = report.passed();
  else if (check == "cooccur")
    ok = report.pair_mismatches == 0;
  else if (check == "clusters")
    ok = report.cluster_mismatches == 0;
  else
    ok = report.entropy_ok;

  const auto text = format_oracle_report(report, stream.empty());
  out << text;
  if (inv.out_dir) detail::write_file(*inv.out_dir, "oracle_report.txt", text);
  return ok ? kExitOk : kExitAnalysis;
}

}  // namespace chancekit::cli

#endif  // CHANCEKIT_CLI_HPP
