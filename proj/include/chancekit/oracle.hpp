#ifndef CHANCEKIT_ORACLE_HPP
#define CHANCEKIT_ORACLE_HPP

#include <cmath>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "chancekit/cooccur.hpp"
#include "chancekit/diversity.hpp"
#include "chancekit/keygraph.hpp"

namespace chancekit {

// Naive re-computations by direct enumeration, kept structurally apart
// from the fast paths they check: events are expanded to flat token
// lists and every quantity is recounted from scratch.

inline std::vector<Item> flatten_event(const Event& event) {
  std::vector<Item> tokens;
  for (const auto& [item, count] : event.items)
    for (int i = 0; i < count; ++i) tokens.push_back(item);
  return tokens;
}

inline long long naive_cooccurrence(std::span<const Event> stream,
                                    const Item& a, const Item& b) {
  long long total = 0;
  for (const auto& event : stream) {
    long long na = 0, nb = 0;
    for (const auto& token : flatten_event(event)) {
      if (token == a) ++na;
      if (token == b) ++nb;
    }
    total += na < nb ? na : nb;
  }
  return total;
}

inline std::map<int, long long> naive_cluster_freqs(
    std::span<const Event> stream, const std::vector<Island>& islands,
    ClusterMembership membership) {
  std::map<int, long long> freqs;
  for (const auto& event : stream) {
    std::set<Item> present;
    for (const auto& token : flatten_event(event)) present.insert(token);
    for (const auto& island : islands) {
      std::size_t shared = 0;
      for (const auto& item : island.items) shared += present.count(item);
      const bool matches = membership == ClusterMembership::any_item
                               ? shared > 0
                               : shared == island.items.size();
      if (matches) freqs[island.id] += 1;
    }
  }
  return freqs;
}

// -sum p log2 p in long double from raw frequencies.
inline double naive_entropy(const std::map<int, long long>& freqs) {
  long double total = 0;
  for (const auto& [id, f] : freqs) total += static_cast<long double>(f);
  long double h = 0;
  for (const auto& [id, f] : freqs) {
    if (f <= 0) continue;
    const long double p = static_cast<long double>(f) / total;
    h -= p * std::log2(p);
  }
  return static_cast<double>(h);
}

struct OracleReport {
  long long pair_checks = 0;
  long long pair_mismatches = 0;
  long long cluster_checks = 0;
  long long cluster_mismatches = 0;
  bool entropy_checked = false;
  bool entropy_ok = true;
  double entropy_diff = 0;
  std::vector<std::string> mismatch_lines;

  bool passed() const {
    return pair_mismatches == 0 && cluster_mismatches == 0 && entropy_ok;
  }
};

inline constexpr double kOracleEntropyTolerance = 1e-9;

// Diffs the fast path against naive enumeration: co-occurrence counts
// (all vocabulary pairs plus graph edge weights, exact), cluster
// distributions (exact), and entropy (within 1e-9). corrupt_seam
// perturbs the fast values first, for exercising the failure path.
inline OracleReport oracle_verify(std::span<const Event> stream,
                                  const GraphConfig& graph_cfg = {},
                                  ClusterMembership membership =
                                      ClusterMembership::any_item,
                                  bool corrupt_seam = false) {
  OracleReport report;
  const auto freqs = item_frequencies(stream);
  std::vector<Item> vocab;
  for (const auto& [item, f] : freqs) vocab.push_back(item);

  for (std::size_t i = 0; i < vocab.size(); ++i) {
    for (std::size_t j = i + 1; j < vocab.size(); ++j) {
      long long fast = cooccurrence(stream, vocab[i], vocab[j]);
      if (corrupt_seam && report.pair_checks == 0) fast += 1;
      const long long naive = naive_cooccurrence(stream, vocab[i], vocab[j]);
      ++report.pair_checks;
      if (fast != naive) {
        ++report.pair_mismatches;
        report.mismatch_lines.push_back(
            "cooccurrence(" + vocab[i] + "," + vocab[j] + "): fast=" +
            std::to_string(fast) + " naive=" + std::to_string(naive));
      }
    }
  }

  const auto graph = build_graph(stream, graph_cfg);
  for (const auto& [pair, weight] : graph.edges) {
    const long long naive =
        naive_cooccurrence(stream, pair.first, pair.second);
    ++report.pair_checks;
    if (weight != naive) {
      ++report.pair_mismatches;
      report.mismatch_lines.push_back(
          "edge(" + pair.first + "," + pair.second + "): fast=" +
          std::to_string(weight) + " naive=" + std::to_string(naive));
    }
  }

  auto components = connected_components(graph);
  std::vector<Island> islands;
  for (std::size_t i = 0; i < components.size(); ++i)
    islands.push_back({static_cast<int>(i), std::move(components[i])});

  auto dist = event_cluster_distribution(stream, islands, membership);
  if (corrupt_seam && !dist.freqs.empty()) dist.freqs.begin()->second += 1;
  const auto naive_freqs = naive_cluster_freqs(stream, islands, membership);
  for (const auto& island : islands) {
    const long long fast =
        dist.freqs.count(island.id) ? dist.freqs.at(island.id) : 0;
    const long long naive =
        naive_freqs.count(island.id) ? naive_freqs.at(island.id) : 0;
    ++report.cluster_checks;
    if (fast != naive) {
      ++report.cluster_mismatches;
      report.mismatch_lines.push_back(
          "cluster " + std::to_string(island.id) + ": fast=" +
          std::to_string(fast) + " naive=" + std::to_string(naive));
    }
  }

  if (!dist.empty() && !naive_freqs.empty()) {
    report.entropy_checked = true;
    double fast_h = gbe(dist);
    if (corrupt_seam) fast_h += 1e-6;
    report.entropy_diff = std::abs(fast_h - naive_entropy(naive_freqs));
    report.entropy_ok = report.entropy_diff <= kOracleEntropyTolerance;
    if (!report.entropy_ok)
      report.mismatch_lines.push_back(
          "entropy differs by " + std::to_string(report.entropy_diff));
  }
  return report;
}

inline std::string format_oracle_report(const OracleReport& report,
                                        bool empty_input) {
  std::ostringstream out;
  out << "cooccurrence pairs checked: " << report.pair_checks
      << ", mismatches: " << report.pair_mismatches << '\n';
  out << "cluster frequencies checked: " << report.cluster_checks
      << ", mismatches: " << report.cluster_mismatches << '\n';
  if (report.entropy_checked)
    out << "entropy |fast - naive| = " << report.entropy_diff
        << " (tol 1e-09): " << (report.entropy_ok ? "ok" : "MISMATCH")
        << '\n';
  else
    out << "entropy: not applicable (empty distribution)\n";
  for (const auto& line : report.mismatch_lines) out << line << '\n';
  out << "result: " << (report.passed() ? "PASS" : "FAIL")
      << (empty_input ? " (empty stream)" : "") << '\n';
  return out.str();
}

}  // namespace chancekit

#endif  // CHANCEKIT_ORACLE_HPP
