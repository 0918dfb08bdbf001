#ifndef CHANCEKIT_DIVERSITY_HPP
#define CHANCEKIT_DIVERSITY_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "chancekit/core.hpp"
#include "chancekit/keygraph.hpp"
#include "chancekit/parallel.hpp"

namespace chancekit {

// Does an event belong to an island's cluster: sharing any item with
// the island (default), or containing every island item.
enum class ClusterMembership { any_item, all_items };

// Entropy sign convention: `negated` reports -sum p log2 p (entropy
// grows with diversity); `raw` reports the non-positive sum p log2 p.
enum class EntropySign { negated, raw };

struct ClusterDistribution {
  std::map<int, long long> freqs;  // cluster id -> event count (>= 1)
  std::map<int, double> probs;     // normalized by the freq total

  bool empty() const { return freqs.empty(); }
};

struct EntropyReading {
  Tick window_start = 0;
  Tick window_end = 0;
  std::optional<double> hg;  // unset when the window's distribution is empty
  std::vector<Island> islands;
  int n_clusters = 0;  // clusters with nonzero frequency
  long long n_events = 0;
};

enum class ChangeKind { appearance, disappearance, separation, unification };

inline const char* to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::appearance: return "appearance";
    case ChangeKind::disappearance: return "disappearance";
    case ChangeKind::separation: return "separation";
    case ChangeKind::unification: return "unification";
  }
  return "unknown";
}

struct StructuralChange {
  ChangeKind kind{};
  std::set<int> before;  // island ids in the earlier window
  std::set<int> after;   // island ids in the later window
  Tick window_end = 0;

  friend bool operator==(const StructuralChange&,
                         const StructuralChange&) = default;
};

struct GbeConfig {
  Tick window_len = 1;
  Tick step = 1;
  GraphConfig graph;
  ClusterMembership membership = ClusterMembership::any_item;
  double jaccard_match = 0.5;
  // 0 disables the entropy trigger: only structural changes are
  // reported. A positive value also reports pairs with |dHg| >= it.
  double entropy_delta_threshold = 0.0;
  EntropySign sign = EntropySign::negated;
  int threads = 1;
};

struct ChangeSign {
  Tick window_start = 0;  // the later window of the pair
  Tick window_end = 0;
  std::optional<double> delta_hg;
  std::vector<StructuralChange> changes;
};

// freq(cluster) = number of window events matching the island under the
// membership rule; an event may count toward several clusters. probs
// normalize by the total of the freqs.
inline ClusterDistribution event_cluster_distribution(
    std::span<const Event> events, const std::vector<Island>& islands,
    ClusterMembership membership = ClusterMembership::any_item) {
  ClusterDistribution dist;
  for (const auto& event : events) {
    for (const auto& island : islands) {
      bool matches;
      if (membership == ClusterMembership::any_item) {
        matches = std::any_of(island.items.begin(), island.items.end(),
                              [&](const Item& item) {
                                return event.items.count(item) > 0;
                              });
      } else {
        matches = std::all_of(island.items.begin(), island.items.end(),
                              [&](const Item& item) {
                                return event.items.count(item) > 0;
                              });
      }
      if (matches) dist.freqs[island.id] += 1;
    }
  }
  long long total = 0;
  for (const auto& [id, freq] : dist.freqs) total += freq;
  if (total > 0)
    for (const auto& [id, freq] : dist.freqs)
      dist.probs[id] =
          static_cast<double>(freq) / static_cast<double>(total);
  return dist;
}

// Graph-based entropy in bits, with 0*log 0 := 0.
inline double gbe(const ClusterDistribution& dist,
                  EntropySign sign = EntropySign::negated) {
  if (dist.empty()) throw std::domain_error("undefined entropy");
  double h = 0.0;
  for (const auto& [id, p] : dist.probs)
    if (p > 0.0) h -= p * std::log2(p);
  return sign == EntropySign::negated ? h : -h;
}

// Windows [t0 + k*step, t0 + k*step + window_len) while the window
// start lies within the stream span. Islands are rebuilt per window
// from that window's events. Windows with an empty distribution carry
// an unset hg.
inline std::vector<EntropyReading> gbe_series(std::span<const Event> stream,
                                              const GbeConfig& cfg) {
  if (cfg.window_len <= 0 || cfg.step <= 0)
    throw std::invalid_argument("gbe_series: window_len and step must be > 0");
  std::vector<EntropyReading> series;
  if (stream.empty()) return series;

  const Tick t0 = stream.front().t;
  const Tick t_last = stream.back().t;
  const auto n_windows =
      static_cast<std::size_t>((t_last - t0) / cfg.step) + 1;
  series.resize(n_windows);

  parallel_for(n_windows, cfg.threads, [&](std::size_t k) {
    const Tick start = t0 + static_cast<Tick>(k) * cfg.step;
    const Tick end = start + cfg.window_len;
    const auto lo = std::lower_bound(
        stream.begin(), stream.end(), start,
        [](const Event& e, Tick t) { return e.t < t; });
    const auto hi = std::lower_bound(
        stream.begin(), stream.end(), end,
        [](const Event& e, Tick t) { return e.t < t; });
    const auto window = stream.subspan(
        static_cast<std::size_t>(lo - stream.begin()),
        static_cast<std::size_t>(hi - lo));

    EntropyReading reading;
    reading.window_start = start;
    reading.window_end = end;
    reading.n_events = static_cast<long long>(window.size());
    reading.islands = extract_bases(window, cfg.graph);
    const auto dist =
        event_cluster_distribution(window, reading.islands, cfg.membership);
    reading.n_clusters = static_cast<int>(dist.freqs.size());
    if (!dist.empty()) reading.hg = gbe(dist, cfg.sign);
    series[k] = std::move(reading);
  });
  return series;
}

// Bipartite island matching at Jaccard >= tau, classified per side:
// unmatched next -> appearance, unmatched prev -> disappearance, one
// prev matching several next -> separation, several prev matching one
// next -> unification. One-to-one matches report nothing.
inline std::vector<StructuralChange> diff_clusters(
    const std::vector<Island>& prev, const std::vector<Island>& next,
    double tau) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("diff_clusters: tau must lie in (0, 1]");

  const auto jaccard = [](const std::set<Item>& a, const std::set<Item>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& item : a) inter += b.count(item);
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
  };

  std::map<int, std::set<int>> next_of_prev, prev_of_next;
  for (const auto& p : prev) {
    for (const auto& n : next) {
      if (jaccard(p.items, n.items) >= tau) {
        next_of_prev[p.id].insert(n.id);
        prev_of_next[n.id].insert(p.id);
      }
    }
  }

  std::vector<StructuralChange> changes;
  for (const auto& n : next)
    if (!prev_of_next.count(n.id))
      changes.push_back({ChangeKind::appearance, {}, {n.id}, 0});
  for (const auto& p : prev)
    if (!next_of_prev.count(p.id))
      changes.push_back({ChangeKind::disappearance, {p.id}, {}, 0});
  for (const auto& [p, ns] : next_of_prev)
    if (ns.size() >= 2)
      changes.push_back({ChangeKind::separation, {p}, ns, 0});
  for (const auto& [n, ps] : prev_of_next)
    if (ps.size() >= 2)
      changes.push_back({ChangeKind::unification, ps, {n}, 0});

  std::sort(changes.begin(), changes.end(),
            [](const StructuralChange& a, const StructuralChange& b) {
              if (a.kind != b.kind) return a.kind < b.kind;
              if (a.before != b.before) return a.before < b.before;
              return a.after < b.after;
            });
  return changes;
}

// Structural diffs for every consecutive window pair, stamped with the
// later window's end. Index k holds the diff between windows k-1 and k;
// index 0 is always empty.
inline std::vector<std::vector<StructuralChange>> window_diffs(
    const std::vector<EntropyReading>& series, double tau) {
  std::vector<std::vector<StructuralChange>> diffs(series.size());
  for (std::size_t i = 1; i < series.size(); ++i) {
    diffs[i] = diff_clusters(series[i - 1].islands, series[i].islands, tau);
    for (auto& change : diffs[i]) change.window_end = series[i].window_end;
  }
  return diffs;
}

// Consecutive-window pairs that carry a structural change, or (with a
// positive threshold) an entropy move of at least that size.
inline std::vector<ChangeSign> change_signs(
    const std::vector<EntropyReading>& series, const GbeConfig& cfg) {
  std::vector<ChangeSign> signs;
  const auto diffs = window_diffs(series, cfg.jaccard_match);
  for (std::size_t i = 1; i < series.size(); ++i) {
    std::optional<double> delta;
    if (series[i - 1].hg && series[i].hg)
      delta = *series[i].hg - *series[i - 1].hg;
    const bool entropy_trigger = cfg.entropy_delta_threshold > 0.0 && delta &&
                                 std::abs(*delta) >=
                                     cfg.entropy_delta_threshold;
    if (entropy_trigger || !diffs[i].empty())
      signs.push_back({series[i].window_start, series[i].window_end, delta,
                       diffs[i]});
  }
  return signs;
}

}  // namespace chancekit

#endif  // CHANCEKIT_DIVERSITY_HPP
