#ifndef CHANCEKIT_CHANGE_HPP
#define CHANCEKIT_CHANGE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chancekit/cooccur.hpp"
#include "chancekit/core.hpp"
#include "chancekit/diversity.hpp"

namespace chancekit {

enum class ChangeMetric { l1, l2, cosine };

inline const char* to_string(ChangeMetric metric) {
  switch (metric) {
    case ChangeMetric::l1: return "l1";
    case ChangeMetric::l2: return "l2";
    case ChangeMetric::cosine: return "cosine";
  }
  return "unknown";
}

// Relative item frequencies over a window, restricted to the tracked
// vocabulary. Every tracked item has an entry (possibly zero); weights
// sum to 1 unless the window contributed nothing, in which case the
// vector is zero and flagged via n_counted == 0.
struct MarketVector {
  Tick window_start = 0;
  Tick window_end = 0;
  std::map<Item, double> weights;
  long long n_counted = 0;  // occurrences that entered the normalization

  bool zero() const { return n_counted == 0; }
};

struct ChangeConfig {
  Tick delta_t = 1;
  double q = 0.1;
  ChangeMetric metric = ChangeMetric::l2;
  int vocab_size = 100;
  bool nms = true;
  Tick step = 0;  // candidate grid pitch; 0 means delta_t

  Tick step_or_default() const { return step > 0 ? step : delta_t; }
};

struct ChangePoint {
  Tick t = 0;
  double magnitude = 0;
  int from_trend = -1;  // filled by annotate_change_points
  int to_trend = -1;
};

struct TrendSegment {
  int trend_id = 0;  // 1-based; recurring trends share an id
  Tick start = 0;
  Tick end = 0;  // exclusive
  MarketVector centroid;
  std::vector<Item> label_items;
};

struct ChangeExplanation {
  ChangePoint point;
  std::vector<Item> from_labels;
  std::vector<Item> to_labels;
  std::vector<std::pair<Item, double>> rising;   // weight deltas, descending
  std::vector<std::pair<Item, double>> falling;  // most negative first
  std::vector<StructuralChange> nearby;  // GBE changes within [t-dt, t+dt]
};

inline constexpr int kTrendLabelItems = 5;
inline constexpr double kWeightDeltaTolerance = 1e-9;

// The vocab_size most frequent items overall, ties lexicographic.
inline std::set<Item> top_vocabulary(std::span<const Event> stream,
                                     int vocab_size) {
  const auto freqs = item_frequencies(stream);
  std::vector<std::pair<Item, long long>> ranked(freqs.begin(), freqs.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::set<Item> vocab;
  for (std::size_t i = 0;
       i < ranked.size() && i < static_cast<std::size_t>(std::max(0, vocab_size));
       ++i)
    vocab.insert(ranked[i].first);
  return vocab;
}

// Occurrence counts over [window_start, window_end) restricted to the
// vocabulary, normalized to sum 1. An empty window yields the zero
// vector.
inline MarketVector market_vector(std::span<const Event> stream,
                                  Tick window_start, Tick window_end,
                                  const std::set<Item>& vocab) {
  if (vocab.empty())
    throw std::invalid_argument("market_vector: empty vocabulary");
  MarketVector v;
  v.window_start = window_start;
  v.window_end = window_end;
  std::map<Item, long long> counts;
  for (const auto& item : vocab) counts[item] = 0;

  const auto lo = std::lower_bound(
      stream.begin(), stream.end(), window_start,
      [](const Event& e, Tick t) { return e.t < t; });
  const auto hi = std::lower_bound(
      stream.begin(), stream.end(), window_end,
      [](const Event& e, Tick t) { return e.t < t; });
  for (auto it = lo; it != hi; ++it) {
    for (const auto& [item, count] : it->items) {
      const auto slot = counts.find(item);
      if (slot != counts.end()) {
        slot->second += count;
        v.n_counted += count;
      }
    }
  }
  for (const auto& [item, count] : counts)
    v.weights[item] = v.n_counted > 0 ? static_cast<double>(count) /
                                            static_cast<double>(v.n_counted)
                                      : 0.0;
  return v;
}

// L1/L2 norm of the difference, or 1 - cosine similarity. Two zero
// vectors are identical (0); one zero vector against a nonzero one is
// maximally dissimilar under cosine (1).
inline double change_magnitude(const MarketVector& v1, const MarketVector& v2,
                               ChangeMetric metric) {
  if (v1.weights.size() != v2.weights.size() ||
      !std::equal(v1.weights.begin(), v1.weights.end(), v2.weights.begin(),
                  [](const auto& a, const auto& b) {
                    return a.first == b.first;
                  }))
    throw std::invalid_argument("change_magnitude: vocabulary mismatch");

  switch (metric) {
    case ChangeMetric::l1: {
      double sum = 0;
      auto it2 = v2.weights.begin();
      for (const auto& [item, w] : v1.weights)
        sum += std::abs(w - (it2++)->second);
      return sum;
    }
    case ChangeMetric::l2: {
      double sum = 0;
      auto it2 = v2.weights.begin();
      for (const auto& [item, w] : v1.weights) {
        const double d = w - (it2++)->second;
        sum += d * d;
      }
      return std::sqrt(sum);
    }
    case ChangeMetric::cosine: {
      double dot = 0, n1 = 0, n2 = 0;
      auto it2 = v2.weights.begin();
      for (const auto& [item, w] : v1.weights) {
        const double u = (it2++)->second;
        dot += w * u;
        n1 += w * w;
        n2 += u * u;
      }
      if (n1 == 0.0 && n2 == 0.0) return 0.0;
      if (n1 == 0.0 || n2 == 0.0) return 1.0;
      return 1.0 - dot / (std::sqrt(n1) * std::sqrt(n2));
    }
  }
  throw std::logic_error("change_magnitude: unhandled metric");
}

// Magnitude |market(t:t+dt) - market(t-dt:t)| for every candidate t on
// the step grid with both windows inside the stream span.
inline std::vector<std::pair<Tick, double>> magnitude_series(
    std::span<const Event> stream, const ChangeConfig& cfg) {
  if (cfg.delta_t <= 0)
    throw std::invalid_argument("magnitude_series: delta_t must be > 0");
  std::vector<std::pair<Tick, double>> magnitudes;
  if (stream.empty()) return magnitudes;
  const Tick t0 = stream.front().t;
  const Tick t_last = stream.back().t;
  if (t_last - t0 < 2 * cfg.delta_t)
    throw std::invalid_argument(
        "magnitude_series: stream span is shorter than 2*delta_t");

  const auto vocab = top_vocabulary(stream, cfg.vocab_size);
  const Tick step = cfg.step_or_default();
  for (Tick t = t0 + cfg.delta_t; t + cfg.delta_t <= t_last + 1; t += step) {
    const auto before = market_vector(stream, t - cfg.delta_t, t, vocab);
    const auto after = market_vector(stream, t, t + cfg.delta_t, vocab);
    magnitudes.emplace_back(t, change_magnitude(after, before, cfg.metric));
  }
  return magnitudes;
}

// Candidates with magnitude > Q; with nms only the greedy local maxima
// survive, suppressing detections closer than 2*delta_t to a stronger
// one (ties keep the earlier t).
inline std::vector<ChangePoint> detect_changes(std::span<const Event> stream,
                                               const ChangeConfig& cfg) {
  const auto magnitudes = magnitude_series(stream, cfg);
  std::vector<ChangePoint> detections;
  for (const auto& [t, m] : magnitudes)
    if (m > cfg.q) detections.push_back({t, m, -1, -1});

  if (cfg.nms && !detections.empty()) {
    std::vector<ChangePoint> order(detections);
    std::sort(order.begin(), order.end(),
              [](const ChangePoint& a, const ChangePoint& b) {
                if (a.magnitude != b.magnitude)
                  return a.magnitude > b.magnitude;
                return a.t < b.t;
              });
    std::vector<ChangePoint> kept;
    for (const auto& candidate : order) {
      const bool suppressed = std::any_of(
          kept.begin(), kept.end(), [&](const ChangePoint& k) {
            return std::abs(candidate.t - k.t) < 2 * cfg.delta_t;
          });
      if (!suppressed) kept.push_back(candidate);
    }
    std::sort(kept.begin(), kept.end(),
              [](const ChangePoint& a, const ChangePoint& b) {
                return a.t < b.t;
              });
    detections = std::move(kept);
  }
  return detections;
}

namespace detail {

inline std::vector<Item> label_items_of(const MarketVector& centroid) {
  std::vector<std::pair<Item, double>> ranked;
  for (const auto& [item, w] : centroid.weights)
    if (w > 0.0) ranked.emplace_back(item, w);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<Item> labels;
  for (std::size_t i = 0; i < ranked.size() && i < kTrendLabelItems; ++i)
    labels.push_back(ranked[i].first);
  return labels;
}

}  // namespace detail

// Segments between consecutive change points, tiling [t0, t_last + 1).
// The centroid averages the segment's delta_t-grid market vectors
// (empty windows skipped). Segments whose centroids lie within Q/2 of
// an earlier trend's centroid reuse that trend id.
inline std::vector<TrendSegment> segment_trends(
    std::span<const Event> stream, const std::vector<ChangePoint>& points,
    const ChangeConfig& cfg) {
  std::vector<TrendSegment> segments;
  if (stream.empty()) return segments;
  const Tick t0 = stream.front().t;
  const Tick t_end = stream.back().t + 1;
  const auto vocab = top_vocabulary(stream, cfg.vocab_size);

  std::vector<Tick> bounds{t0};
  for (const auto& p : points)
    if (p.t > bounds.back() && p.t < t_end) bounds.push_back(p.t);
  bounds.push_back(t_end);

  std::vector<MarketVector> representatives;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    TrendSegment segment;
    segment.start = bounds[s];
    segment.end = bounds[s + 1];

    MarketVector centroid;
    centroid.window_start = segment.start;
    centroid.window_end = segment.end;
    for (const auto& item : vocab) centroid.weights[item] = 0.0;
    int n_windows = 0;
    for (Tick w = segment.start; w + cfg.delta_t <= segment.end;
         w += cfg.delta_t) {
      const auto v = market_vector(stream, w, w + cfg.delta_t, vocab);
      if (v.zero()) continue;
      for (const auto& [item, weight] : v.weights)
        centroid.weights[item] += weight;
      centroid.n_counted += v.n_counted;
      ++n_windows;
    }
    if (n_windows > 0)
      for (auto& [item, weight] : centroid.weights)
        weight /= static_cast<double>(n_windows);

    int trend_id = -1;
    for (std::size_t r = 0; r < representatives.size(); ++r) {
      if (change_magnitude(centroid, representatives[r], cfg.metric) <
          cfg.q / 2.0) {
        trend_id = static_cast<int>(r) + 1;
        break;
      }
    }
    if (trend_id < 0) {
      representatives.push_back(centroid);
      trend_id = static_cast<int>(representatives.size());
    }
    segment.trend_id = trend_id;
    segment.label_items = detail::label_items_of(centroid);
    segment.centroid = std::move(centroid);
    segments.push_back(std::move(segment));
  }
  return segments;
}

// Fills from_trend/to_trend on each change point from the segments it
// borders.
inline void annotate_change_points(std::vector<ChangePoint>& points,
                                   const std::vector<TrendSegment>& segments) {
  for (auto& p : points) {
    for (const auto& s : segments) {
      if (s.end == p.t) p.from_trend = s.trend_id;
      if (s.start == p.t) p.to_trend = s.trend_id;
    }
  }
}

// Report of the trend transition at a change point: both trends'
// labels, the strongest weight gains and losses across the boundary,
// and any GBE structural changes within [t - dt, t + dt].
inline ChangeExplanation explain_change(
    const ChangePoint& point, const std::vector<TrendSegment>& segments,
    const std::vector<ChangeSign>& signs, const ChangeConfig& cfg) {
  const TrendSegment* from = nullptr;
  const TrendSegment* to = nullptr;
  for (const auto& s : segments) {
    if (s.end == point.t) from = &s;
    if (s.start == point.t) to = &s;
  }
  if (!from || !to)
    throw std::invalid_argument(
        "explain_change: change point is not on a segment boundary");

  ChangeExplanation explanation;
  explanation.point = point;
  explanation.point.from_trend = from->trend_id;
  explanation.point.to_trend = to->trend_id;
  explanation.from_labels = from->label_items;
  explanation.to_labels = to->label_items;

  std::vector<std::pair<Item, double>> deltas;
  auto it_from = from->centroid.weights.begin();
  for (const auto& [item, w_to] : to->centroid.weights)
    deltas.emplace_back(item, w_to - (it_from++)->second);
  std::sort(deltas.begin(), deltas.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [item, d] : deltas) {
    if (d > kWeightDeltaTolerance &&
        explanation.rising.size() < kTrendLabelItems)
      explanation.rising.emplace_back(item, d);
  }
  for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) {
    if (it->second < -kWeightDeltaTolerance &&
        explanation.falling.size() < kTrendLabelItems)
      explanation.falling.emplace_back(it->first, it->second);
  }

  for (const auto& sign : signs)
    for (const auto& change : sign.changes)
      if (change.window_end >= point.t - cfg.delta_t &&
          change.window_end <= point.t + cfg.delta_t)
        explanation.nearby.push_back(change);
  return explanation;
}

}  // namespace chancekit

#endif  // CHANCEKIT_CHANGE_HPP
