#ifndef CHANCEKIT_SERIALIZE_HPP
#define CHANCEKIT_SERIALIZE_HPP

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chancekit/change.hpp"
#include "chancekit/diversity.hpp"
#include "chancekit/keygraph.hpp"
#include "chancekit/resi.hpp"

namespace chancekit {

// Number formatting for the CSV views; JSON goes through nlohmann's
// shortest-round-trip dump. Both are byte-deterministic.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline nlohmann::json to_json(const KeyGraphMap& map) {
  nlohmann::json j;
  j["islands"] = nlohmann::json::array();
  for (const auto& island : map.islands)
    j["islands"].push_back(
        {{"id", island.id},
         {"items", std::vector<Item>(island.items.begin(),
                                     island.items.end())}});
  j["black_nodes"] =
      std::vector<Item>(map.black_nodes.begin(), map.black_nodes.end());
  j["red_nodes"] =
      std::vector<Item>(map.red_nodes.begin(), map.red_nodes.end());
  j["keyword_nodes"] =
      std::vector<Item>(map.keyword_nodes.begin(), map.keyword_nodes.end());
  j["roofs"] = nlohmann::json::array();
  for (const auto& [item, key] : map.roofs)
    j["roofs"].push_back({{"item", item}, {"key_score", key}});
  j["solid_edges"] = nlohmann::json::array();
  for (const auto& [pair, weight] : map.solid_edges)
    j["solid_edges"].push_back(
        {{"a", pair.first}, {"b", pair.second}, {"weight", weight}});
  j["dotted_edges"] = nlohmann::json::array();
  for (const auto& column : map.dotted_edges)
    j["dotted_edges"].push_back({{"word", column.word},
                                 {"island", column.island},
                                 {"strength", column.strength},
                                 {"anchor", column.anchor}});
  j["bridges"] = nlohmann::json::array();
  for (const auto& [a, b, via] : bridges(map))
    j["bridges"].push_back({{"from", a}, {"to", b}, {"via", via}});
  return j;
}

namespace detail {

inline std::string dot_quote(const std::string& id) {
  std::string quoted = "\"";
  for (const char c : id) {
    if (c == '"' || c == '\\') quoted.push_back('\\');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace detail

// DOT view: islands as subgraph clusters, black nodes filled, keywords
// double-circled (peripheries=2), red relay nodes red, island edges
// solid and columns dashed. Node order is lexicographic so the output
// is byte-stable.
inline std::string keygraph_dot(const KeyGraphMap& map) {
  std::ostringstream out;
  out << "graph keygraph {\n";
  out << "  node [shape=ellipse];\n";
  for (const auto& island : map.islands) {
    out << "  subgraph cluster_" << island.id << " {\n";
    out << "    label=\"island " << island.id << "\";\n";
    for (const auto& item : island.items) {
      out << "    " << detail::dot_quote(item)
          << " [style=filled, fillcolor=black, fontcolor=white";
      if (map.keyword_nodes.count(item)) out << ", peripheries=2";
      out << "];\n";
    }
    out << "  }\n";
  }
  for (const auto& item : map.red_nodes)
    out << "  " << detail::dot_quote(item)
        << " [color=red, fontcolor=red];\n";
  for (const auto& [pair, weight] : map.solid_edges)
    out << "  " << detail::dot_quote(pair.first) << " -- "
        << detail::dot_quote(pair.second) << " [weight=" << weight << "];\n";
  for (const auto& column : map.dotted_edges) {
    if (column.anchor.empty()) continue;
    out << "  " << detail::dot_quote(column.word) << " -- "
        << detail::dot_quote(column.anchor)
        << " [style=dashed, color=red];\n";
  }
  out << "}\n";
  return out.str();
}

// window_start,window_end,n_events,Hg,n_clusters,changes
// The changes column lists the structural-change kinds between the
// previous window and this one, semicolon-joined.
inline std::string gbe_series_csv(const std::vector<EntropyReading>& series,
                                  double tau) {
  const auto diffs = window_diffs(series, tau);
  std::ostringstream out;
  out << "window_start,window_end,n_events,Hg,n_clusters,changes\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& r = series[i];
    out << r.window_start << ',' << r.window_end << ',' << r.n_events << ',';
    if (r.hg) out << fmt_double(*r.hg);
    out << ',' << r.n_clusters << ',';
    for (std::size_t c = 0; c < diffs[i].size(); ++c) {
      if (c) out << ';';
      out << to_string(diffs[i][c].kind);
    }
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json to_json(const StructuralChange& change) {
  return {{"kind", to_string(change.kind)},
          {"before", std::vector<int>(change.before.begin(),
                                      change.before.end())},
          {"after",
           std::vector<int>(change.after.begin(), change.after.end())},
          {"window_end", change.window_end}};
}

inline nlohmann::json signs_json(const std::vector<ChangeSign>& signs) {
  nlohmann::json j;
  j["signs"] = nlohmann::json::array();
  for (const auto& sign : signs) {
    nlohmann::json s;
    s["window_start"] = sign.window_start;
    s["window_end"] = sign.window_end;
    if (sign.delta_hg)
      s["delta_hg"] = *sign.delta_hg;
    else
      s["delta_hg"] = nullptr;
    s["changes"] = nlohmann::json::array();
    for (const auto& change : sign.changes)
      s["changes"].push_back(to_json(change));
    j["signs"].push_back(std::move(s));
  }
  return j;
}

inline std::string magnitude_csv(
    const std::vector<std::pair<Tick, double>>& magnitudes) {
  std::ostringstream out;
  out << "t,magnitude\n";
  for (const auto& [t, m] : magnitudes)
    out << t << ',' << fmt_double(m) << '\n';
  return out.str();
}

inline nlohmann::json change_report_json(
    const std::vector<ChangePoint>& points,
    const std::vector<TrendSegment>& segments,
    const std::vector<ChangeExplanation>& explanations) {
  nlohmann::json j;
  j["change_points"] = nlohmann::json::array();
  for (const auto& p : points)
    j["change_points"].push_back({{"t", p.t},
                                  {"magnitude", p.magnitude},
                                  {"from_trend", p.from_trend},
                                  {"to_trend", p.to_trend}});
  j["segments"] = nlohmann::json::array();
  for (const auto& s : segments)
    j["segments"].push_back({{"trend_id", s.trend_id},
                             {"start", s.start},
                             {"end", s.end},
                             {"label_items", s.label_items}});
  j["explanations"] = nlohmann::json::array();
  for (const auto& e : explanations) {
    nlohmann::json x;
    x["t"] = e.point.t;
    x["from_trend"] = e.point.from_trend;
    x["to_trend"] = e.point.to_trend;
    x["from_labels"] = e.from_labels;
    x["to_labels"] = e.to_labels;
    x["rising"] = nlohmann::json::array();
    for (const auto& [item, d] : e.rising)
      x["rising"].push_back({{"item", item}, {"delta", d}});
    x["falling"] = nlohmann::json::array();
    for (const auto& [item, d] : e.falling)
      x["falling"].push_back({{"item", item}, {"delta", d}});
    x["structural_changes"] = nlohmann::json::array();
    for (const auto& change : e.nearby)
      x["structural_changes"].push_back(to_json(change));
    j["explanations"].push_back(std::move(x));
  }
  return j;
}

// t,H,n_clusters,n_events,flagged
inline std::string resi_series_csv(const std::vector<ResiReading>& series) {
  std::ostringstream out;
  out << "t,H,n_clusters,n_events,flagged\n";
  for (const auto& r : series) {
    out << r.t << ',';
    if (r.h) out << fmt_double(*r.h);
    out << ',' << r.n_clusters << ',' << r.n_events << ','
        << (r.flagged ? 1 : 0) << '\n';
  }
  return out.str();
}

// t,rise_slope,flat_slope
inline std::string resi_flags_csv(const std::vector<PrecursorFlag>& flags) {
  std::ostringstream out;
  out << "t,rise_slope,flat_slope\n";
  for (const auto& f : flags)
    out << f.t << ',' << fmt_double(f.rise_slope) << ','
        << fmt_double(f.flat_slope) << '\n';
  return out.str();
}

}  // namespace chancekit

#endif  // CHANCEKIT_SERIALIZE_HPP
