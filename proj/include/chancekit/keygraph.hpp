#ifndef CHANCEKIT_KEYGRAPH_HPP
#define CHANCEKIT_KEYGRAPH_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chancekit/cooccur.hpp"
#include "chancekit/core.hpp"

namespace chancekit {

// A connected cluster of top-graph nodes. Islands are pairwise disjoint.
struct Island {
  int id = 0;
  std::set<Item> items;

  friend bool operator==(const Island&, const Island&) = default;
};

// A dotted-edge relationship between a word and an island. The anchor
// is the island member the word co-occurs with most strongly; it is
// what the DOT view attaches the dashed edge to.
struct Column {
  Item word;
  int island = 0;
  double strength = 0;  // based(word, island), > 0 for emitted columns
  Item anchor;
};

struct KeyGraphConfig {
  GraphConfig graph;
  int top_roofs = 12;
  int columns_per_roof = 2;
};

// Classified map: black nodes are the graph's top-frequency items,
// grouped into islands by the solid edges. Roofs are the top key-score
// words; a roof that is itself a black node is a keyword (drawn
// double-circled), otherwise it is a red relay node. Dotted edges are
// the roofs' columns.
struct KeyGraphMap {
  std::vector<Island> islands;
  std::set<Item> black_nodes;
  std::set<Item> red_nodes;
  std::set<Item> keyword_nodes;
  std::map<std::pair<Item, Item>, long long> solid_edges;
  std::vector<Column> dotted_edges;
  std::vector<std::pair<Item, double>> roofs;  // ranked by key score
};

inline std::vector<Island> extract_bases(std::span<const Event> stream,
                                         const GraphConfig& cfg = {}) {
  const auto graph = build_graph(stream, cfg);
  auto components = connected_components(graph);
  std::vector<Island> islands;
  islands.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i)
    islands.push_back({static_cast<int>(i), std::move(components[i])});
  return islands;
}

// Column mass of w toward island g: per event, min of w's multiplicity
// and the total multiplicity of g's members other than w, summed.
inline long long based(const Item& w, const Island& g,
                       std::span<const Event> stream) {
  long long total = 0;
  for (const auto& event : stream) {
    const auto iw = event.items.find(w);
    if (iw == event.items.end()) continue;
    long long island_mass = 0;
    for (const auto& member : g.items) {
      if (member == w) continue;
      const auto im = event.items.find(member);
      if (im != event.items.end()) island_mass += im->second;
    }
    total += std::min<long long>(iw->second, island_mass);
  }
  return total;
}

namespace detail {

// based(w, g) for every word in the stream's vocabulary, plus
// neighbors(g) = the sum of that mass over the whole vocabulary.
struct ColumnMass {
  std::map<Item, std::vector<long long>> based;  // indexed by island id
  std::vector<long long> neighbors;
  std::map<Item, int> member_of;  // item -> island id, members only
};

inline ColumnMass column_mass(std::span<const Event> stream,
                              const std::vector<Island>& islands) {
  ColumnMass mass;
  mass.neighbors.assign(islands.size(), 0);
  for (const auto& island : islands)
    for (const auto& item : island.items) mass.member_of[item] = island.id;

  std::vector<long long> island_mass(islands.size());
  for (const auto& event : stream) {
    std::fill(island_mass.begin(), island_mass.end(), 0);
    for (const auto& [item, count] : event.items) {
      const auto member = mass.member_of.find(item);
      if (member != mass.member_of.end())
        island_mass[member->second] += count;
    }
    for (const auto& [item, count] : event.items) {
      auto& row = mass.based[item];
      if (row.empty()) row.assign(islands.size(), 0);
      const auto member = mass.member_of.find(item);
      for (std::size_t g = 0; g < islands.size(); ++g) {
        long long other = island_mass[g];
        if (member != mass.member_of.end() &&
            member->second == static_cast<int>(g))
          other -= count;
        if (other <= 0) continue;
        const long long c = std::min<long long>(count, other);
        row[g] += c;
        mass.neighbors[g] += c;
      }
    }
  }
  return mass;
}

// key = 1 - prod(1 - r) over the island ratios r.
inline double key_from_ratios(const std::vector<double>& ratios) {
  double miss = 1.0;
  for (const double r : ratios) miss *= 1.0 - std::clamp(r, 0.0, 1.0);
  return 1.0 - miss;
}

inline std::vector<double> island_ratios(const Item& w,
                                         const ColumnMass& mass,
                                         std::size_t n_islands) {
  std::vector<double> ratios;
  const auto row = mass.based.find(w);
  if (row == mass.based.end()) return ratios;
  const auto member = mass.member_of.find(w);
  for (std::size_t g = 0; g < n_islands; ++g) {
    if (member != mass.member_of.end() && member->second == static_cast<int>(g))
      continue;  // a word is not a column of its own island
    if (mass.neighbors[g] == 0) continue;
    ratios.push_back(static_cast<double>(row->second[g]) /
                     static_cast<double>(mass.neighbors[g]));
  }
  return ratios;
}

}  // namespace detail

// key(w) = 1 - prod_g (1 - based(w,g)/neighbors(g)) over the islands w
// does not belong to. Islands with zero neighbor mass are skipped;
// ratios are clamped to [0,1]. Result lies in [0,1].
inline double key_score(const Item& w, const std::vector<Island>& islands,
                        std::span<const Event> stream) {
  if (islands.empty()) return 0.0;
  const auto mass = detail::column_mass(stream, islands);
  return detail::key_from_ratios(
      detail::island_ratios(w, mass, islands.size()));
}

// Top-K words by key score (ties lexicographic), each with its
// columns_per_roof strongest columns. Words scoring zero never become
// roofs.
inline std::pair<std::vector<std::pair<Item, double>>, std::vector<Column>>
extract_roofs(std::span<const Event> stream,
              const std::vector<Island>& islands,
              const KeyGraphConfig& cfg = {}) {
  std::vector<std::pair<Item, double>> roofs;
  std::vector<Column> columns;
  if (islands.empty()) return {roofs, columns};

  const auto mass = detail::column_mass(stream, islands);
  for (const auto& [word, row] : mass.based) {
    const double key =
        detail::key_from_ratios(detail::island_ratios(word, mass,
                                                      islands.size()));
    if (key > 0.0) roofs.emplace_back(word, key);
  }
  std::sort(roofs.begin(), roofs.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (roofs.size() > static_cast<std::size_t>(std::max(0, cfg.top_roofs)))
    roofs.resize(std::max(0, cfg.top_roofs));

  for (const auto& [word, key] : roofs) {
    const auto& row = mass.based.at(word);
    const auto member = mass.member_of.find(word);
    std::vector<std::pair<long long, int>> ranked;  // (-strength, island)
    for (std::size_t g = 0; g < islands.size(); ++g) {
      if (member != mass.member_of.end() &&
          member->second == static_cast<int>(g))
        continue;
      if (row[g] > 0 && mass.neighbors[g] > 0)
        ranked.emplace_back(row[g], static_cast<int>(g));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const auto n =
        std::min<std::size_t>(ranked.size(), std::max(0, cfg.columns_per_roof));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& island = islands[ranked[i].second];
      Item anchor;
      long long anchor_weight = -1;
      for (const auto& item : island.items) {
        if (item == word) continue;
        const long long w_anchor = cooccurrence(stream, word, item);
        if (w_anchor > anchor_weight) {
          anchor_weight = w_anchor;
          anchor = item;
        }
      }
      columns.push_back({word, ranked[i].second,
                         static_cast<double>(ranked[i].first), anchor});
    }
  }
  return {roofs, columns};
}

inline KeyGraphMap assemble_map(std::span<const Event> stream,
                                const KeyGraphConfig& cfg = {}) {
  KeyGraphMap map;
  const auto graph = build_graph(stream, cfg.graph);
  auto components = connected_components(graph);
  for (std::size_t i = 0; i < components.size(); ++i)
    map.islands.push_back({static_cast<int>(i), std::move(components[i])});

  for (const auto& [item, freq] : graph.nodes) map.black_nodes.insert(item);
  map.solid_edges = graph.edges;

  auto [roofs, columns] = extract_roofs(stream, map.islands, cfg);
  map.roofs = std::move(roofs);
  map.dotted_edges = std::move(columns);
  for (const auto& [word, key] : map.roofs) {
    if (map.black_nodes.count(word))
      map.keyword_nodes.insert(word);
    else
      map.red_nodes.insert(word);
  }
  return map;
}

// All (island, island, via) triples where one roof holds columns to two
// distinct islands; ordered by (first island, second island, word).
inline std::vector<std::tuple<int, int, Item>> bridges(
    const KeyGraphMap& map) {
  std::map<Item, std::set<int>> touched;
  for (const auto& column : map.dotted_edges)
    touched[column.word].insert(column.island);

  std::vector<std::tuple<int, int, Item>> result;
  for (const auto& [word, islands] : touched) {
    for (auto a = islands.begin(); a != islands.end(); ++a) {
      for (auto b = std::next(a); b != islands.end(); ++b)
        result.emplace_back(*a, *b, word);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace chancekit

#endif  // CHANCEKIT_KEYGRAPH_HPP
