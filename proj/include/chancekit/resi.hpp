#ifndef CHANCEKIT_RESI_HPP
#define CHANCEKIT_RESI_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "chancekit/catalog_io.hpp"
#include "chancekit/core.hpp"
#include "chancekit/diversity.hpp"
#include "chancekit/parallel.hpp"

namespace chancekit {

struct RegionSpec {
  double lat_min = 0, lat_max = 1;
  double lon_min = 0, lon_max = 1;
  double cell_deg = 1;  // grid pitch, degrees

  int rows() const {
    return std::max(1, static_cast<int>(
                           std::ceil((lat_max - lat_min) / cell_deg - 1e-12)));
  }
  int cols() const {
    return std::max(1, static_cast<int>(
                           std::ceil((lon_max - lon_min) / cell_deg - 1e-12)));
  }
  void validate() const {
    if (!(lat_min < lat_max) || !(lon_min < lon_max) || !(cell_deg > 0))
      throw std::invalid_argument("invalid region: need min < max, cell > 0");
  }
};

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

struct GridCounts {
  std::map<Cell, long long> counts;  // occupied cells only
  long long dropped = 0;             // events outside region or window
};

struct EpicenterCluster {
  int id = 0;
  std::set<Cell> cells;  // connected under the configured neighborhood
  long long n_events = 0;
};

struct ResiReading {
  Tick t = 0;  // window end
  std::optional<double> h;  // bits; unset when the window has no events
  int n_clusters = 0;
  long long n_events = 0;
  bool flagged = false;  // below min_events_per_window; excluded from slopes
};

struct PrecursorFlag {
  Tick t = 0;  // reading at which the saturation phase begins
  double rise_slope = 0;
  double flat_slope = 0;
};

struct ResiConfig {
  RegionSpec region;
  Tick window = 1;
  Tick step = 1;
  int neighborhood = 8;  // 4 or 8
  long long min_events_per_window = 1;
  int rise_lookback = 4;   // L1, windows in the rise phase
  int flat_lookback = 3;   // L2, windows in the saturation phase
  double theta_up = 0.1;   // bits/window
  double theta_flat = 0.02;
  EntropySign sign = EntropySign::negated;
  std::optional<double> min_mag;  // events without magnitude are retained
  int threads = 1;
};

// Events inside the region and [t_start, t_end) binned by
// floor((coord - min)/cell_deg); coordinates exactly on the max edge
// land in the last row/column. Everything else counts as dropped.
inline GridCounts grid_events(std::span<const SeismicEvent> catalog,
                              const RegionSpec& region, Tick t_start,
                              Tick t_end) {
  region.validate();
  GridCounts grid;
  const int rows = region.rows();
  const int cols = region.cols();
  for (const auto& event : catalog) {
    if (event.t < t_start || event.t >= t_end || event.lat < region.lat_min ||
        event.lat > region.lat_max || event.lon < region.lon_min ||
        event.lon > region.lon_max) {
      ++grid.dropped;
      continue;
    }
    const int row = std::min(
        rows - 1, static_cast<int>(std::floor((event.lat - region.lat_min) /
                                              region.cell_deg)));
    const int col = std::min(
        cols - 1, static_cast<int>(std::floor((event.lon - region.lon_min) /
                                              region.cell_deg)));
    grid.counts[{row, col}] += 1;
  }
  return grid;
}

// Connected components of the occupied cells, 4- or 8-neighborhood,
// ordered by smallest cell.
inline std::vector<EpicenterCluster> cluster_epicenters(
    const GridCounts& grid, int neighborhood = 8) {
  if (neighborhood != 4 && neighborhood != 8)
    throw std::invalid_argument("cluster_epicenters: neighborhood is 4 or 8");

  std::vector<EpicenterCluster> clusters;
  std::set<Cell> seen;
  for (const auto& [cell, count] : grid.counts) {
    if (seen.count(cell)) continue;
    EpicenterCluster cluster;
    cluster.id = static_cast<int>(clusters.size());
    std::vector<Cell> stack{cell};
    seen.insert(cell);
    while (!stack.empty()) {
      const Cell current = stack.back();
      stack.pop_back();
      cluster.cells.insert(current);
      cluster.n_events += grid.counts.at(current);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (neighborhood == 4 && dr != 0 && dc != 0) continue;
          const Cell next{current.row + dr, current.col + dc};
          if (!grid.counts.count(next) || seen.count(next)) continue;
          seen.insert(next);
          stack.push_back(next);
        }
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

// Regional entropy in bits over the cluster event distribution:
// p(C_i) = n_events(C_i) / total.
inline double resi(const std::vector<EpicenterCluster>& clusters,
                   EntropySign sign = EntropySign::negated) {
  long long total = 0;
  for (const auto& c : clusters) total += c.n_events;
  if (total <= 0) throw std::domain_error("undefined entropy");
  double h = 0.0;
  for (const auto& c : clusters) {
    if (c.n_events <= 0) continue;
    const double p =
        static_cast<double>(c.n_events) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return sign == EntropySign::negated ? h : -h;
}

// Sliding windows [t - W, t) stepped from the first event while the
// window start still reaches the catalog. Windows under
// min_events_per_window are flagged.
inline std::vector<ResiReading> resi_series(
    std::span<const SeismicEvent> catalog, const ResiConfig& cfg) {
  cfg.region.validate();
  if (cfg.window <= 0 || cfg.step <= 0)
    throw std::invalid_argument("resi_series: window and step must be > 0");

  std::vector<SeismicEvent> events;
  events.reserve(catalog.size());
  for (const auto& e : catalog)
    if (!cfg.min_mag || !e.mag || *e.mag >= *cfg.min_mag) events.push_back(e);
  std::vector<ResiReading> series;
  if (events.empty()) return series;
  std::stable_sort(events.begin(), events.end(),
                   [](const SeismicEvent& a, const SeismicEvent& b) {
                     return a.t < b.t;
                   });

  const Tick t_first = events.front().t;
  const Tick t_last = events.back().t;
  // windows end at t_first + W + k*step while their start <= t_last
  const auto n_windows =
      static_cast<std::size_t>((t_last - t_first) / cfg.step) + 1;
  series.resize(n_windows);

  parallel_for(n_windows, cfg.threads, [&](std::size_t k) {
    const Tick end = t_first + cfg.window + static_cast<Tick>(k) * cfg.step;
    ResiReading reading;
    reading.t = end;
    const auto grid = grid_events(events, cfg.region, end - cfg.window, end);
    const auto clusters = cluster_epicenters(grid, cfg.neighborhood);
    reading.n_clusters = static_cast<int>(clusters.size());
    for (const auto& c : clusters) reading.n_events += c.n_events;
    reading.flagged = reading.n_events < cfg.min_events_per_window;
    if (reading.n_events > 0) reading.h = resi(clusters, cfg.sign);
    series[k] = std::move(reading);
  });
  return series;
}

namespace detail {

inline double least_squares_slope(const std::vector<double>& y) {
  const auto n = static_cast<double>(y.size());
  double mean_x = (n - 1.0) / 2.0, mean_y = 0.0;
  for (const double v : y) mean_y += v;
  mean_y /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    num += dx * (y[i] - mean_y);
    den += dx * dx;
  }
  return num / den;
}

}  // namespace detail

// Two-phase test over the unflagged readings: a least-squares rise of
// at least theta_up over the L1 windows before the saturation phase,
// then an absolute slope of at most theta_flat over the last L2
// windows. The flag's t is the first reading of the saturation phase.
// Overlapping candidates keep the earliest.
inline std::vector<PrecursorFlag> detect_precursor(
    const std::vector<ResiReading>& series, const ResiConfig& cfg) {
  if (cfg.rise_lookback < 2 || cfg.flat_lookback < 2)
    throw std::invalid_argument(
        "detect_precursor: lookbacks must be at least 2");
  if (!(cfg.theta_up > cfg.theta_flat) || cfg.theta_flat < 0)
    throw std::invalid_argument(
        "detect_precursor: need theta_up > theta_flat >= 0");

  std::vector<const ResiReading*> usable;
  for (const auto& r : series)
    if (!r.flagged && r.h) usable.push_back(&r);

  const std::size_t l1 = static_cast<std::size_t>(cfg.rise_lookback);
  const std::size_t l2 = static_cast<std::size_t>(cfg.flat_lookback);
  if (usable.size() < l1 + l2)
    throw std::invalid_argument("detect_precursor: series too short");

  std::vector<PrecursorFlag> flags;
  std::size_t suppressed_until = 0;
  for (std::size_t k = l1 + l2 - 1; k < usable.size(); ++k) {
    if (k < suppressed_until) continue;
    std::vector<double> rise, flat;
    for (std::size_t i = k - l1 - l2 + 1; i <= k - l2; ++i)
      rise.push_back(*usable[i]->h);
    for (std::size_t i = k - l2 + 1; i <= k; ++i)
      flat.push_back(*usable[i]->h);
    const double rise_slope = detail::least_squares_slope(rise);
    const double flat_slope = detail::least_squares_slope(flat);
    if (rise_slope >= cfg.theta_up &&
        std::abs(flat_slope) <= cfg.theta_flat) {
      flags.push_back({usable[k - l2 + 1]->t, rise_slope, flat_slope});
      suppressed_until = k + l1 + l2;  // merge overlapping flags
    }
  }
  return flags;
}

}  // namespace chancekit

#endif  // CHANCEKIT_RESI_HPP
