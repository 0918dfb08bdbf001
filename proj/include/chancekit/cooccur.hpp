#ifndef CHANCEKIT_COOCCUR_HPP
#define CHANCEKIT_COOCCUR_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chancekit/core.hpp"

namespace chancekit {

// item -> total occurrence count (summed multiplicity across events)
using FrequencyTable = std::map<Item, long long>;

struct GraphConfig {
  int top_nodes = 30;
  std::optional<int> top_edges;  // defaults to top_nodes - 1

  int edge_budget() const {
    return top_edges ? *top_edges : std::max(0, top_nodes - 1);
  }
};

// Top-frequency items plus the strongest co-occurrence links between
// them. Edges are stored with the canonical (smaller, larger) key; no
// self-loops, weights positive, endpoints always member nodes.
struct CooccurrenceGraph {
  std::map<Item, long long> nodes;
  std::map<std::pair<Item, Item>, long long> edges;
};

inline FrequencyTable item_frequencies(std::span<const Event> stream) {
  FrequencyTable counts;
  for (const auto& event : stream)
    for (const auto& [item, count] : event.items) counts[item] += count;
  return counts;
}

// Per-event min of the two multiplicities, summed. For set-valued
// baskets this is the number of baskets containing both items.
inline long long cooccurrence(std::span<const Event> stream, const Item& a,
                              const Item& b) {
  if (a == b) throw std::invalid_argument("cooccurrence: a and b must differ");
  long long total = 0;
  for (const auto& event : stream) {
    const auto ia = event.items.find(a);
    if (ia == event.items.end()) continue;
    const auto ib = event.items.find(b);
    if (ib == event.items.end()) continue;
    total += std::min(ia->second, ib->second);
  }
  return total;
}

// Nodes: top-N items by frequency (ties lexicographic ascending).
// Edges: top-M positive-weight pairs among those nodes (ties
// lexicographic on the canonical pair).
inline CooccurrenceGraph build_graph(std::span<const Event> stream,
                                     const GraphConfig& cfg = {}) {
  CooccurrenceGraph graph;
  const auto freqs = item_frequencies(stream);

  std::vector<std::pair<Item, long long>> ranked(freqs.begin(), freqs.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const auto n_nodes =
      std::min<std::size_t>(ranked.size(), std::max(0, cfg.top_nodes));
  for (std::size_t i = 0; i < n_nodes; ++i)
    graph.nodes.insert(ranked[i]);

  std::map<std::pair<Item, Item>, long long> weights;
  std::vector<std::pair<Item, int>> present;
  for (const auto& event : stream) {
    present.clear();
    for (const auto& [item, count] : event.items)
      if (graph.nodes.count(item)) present.emplace_back(item, count);
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = i + 1; j < present.size(); ++j)
        weights[{present[i].first, present[j].first}] +=
            std::min(present[i].second, present[j].second);
  }

  std::vector<std::pair<std::pair<Item, Item>, long long>> edge_rank(
      weights.begin(), weights.end());
  std::sort(edge_rank.begin(), edge_rank.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  const auto n_edges =
      std::min<std::size_t>(edge_rank.size(), std::max(0, cfg.edge_budget()));
  for (std::size_t i = 0; i < n_edges; ++i)
    graph.edges.insert(edge_rank[i]);

  return graph;
}

// Maximal connected node sets, ordered by smallest member. Isolated
// nodes form singleton components.
inline std::vector<std::set<Item>> connected_components(
    const CooccurrenceGraph& graph) {
  std::map<Item, std::vector<const Item*>> adjacency;
  for (const auto& [pair, weight] : graph.edges) {
    adjacency[pair.first].push_back(&pair.second);
    adjacency[pair.second].push_back(&pair.first);
  }

  std::vector<std::set<Item>> components;
  std::set<Item> seen;
  for (const auto& [item, freq] : graph.nodes) {
    if (seen.count(item)) continue;
    std::set<Item> component;
    std::vector<Item> stack{item};
    seen.insert(item);
    while (!stack.empty()) {
      Item current = std::move(stack.back());
      stack.pop_back();
      const auto adj = adjacency.find(current);
      component.insert(std::move(current));
      if (adj == adjacency.end()) continue;
      for (const Item* next : adj->second) {
        if (seen.insert(*next).second) stack.push_back(*next);
      }
    }
    components.push_back(std::move(component));
  }
  return components;
}

}  // namespace chancekit

#endif  // CHANCEKIT_COOCCUR_HPP
