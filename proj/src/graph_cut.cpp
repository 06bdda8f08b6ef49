#include "gridsec/graph_cut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "gridsec/errors.hpp"

namespace gridsec {

namespace {

constexpr int kOracleNodeLimit = 22;

void check_weights(const MeasurementGraph& graph, const std::vector<double>& weights) {
  if (weights.empty()) return;
  if (static_cast<int>(weights.size()) != graph.edge_count())
    throw std::invalid_argument("weight vector length must equal edge count");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("edge weights must be strictly positive");
}

double edge_weight(const std::vector<double>& weights, int index) {
  return weights.empty() ? 1.0 : weights[index];
}

/// Builds a Cut from a membership mask over nodes (reference must be 0).
Cut cut_from_mask(const MeasurementGraph& graph, const std::vector<char>& in_partition,
                  const std::vector<double>& weights) {
  Cut cut;
  for (int node = 0; node < graph.node_count - 1; ++node)
    if (in_partition[node]) cut.partition.push_back(node);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const GraphEdge& e = graph.edges[k];
    if (in_partition[e.u] != in_partition[e.v]) {
      cut.edges.push_back(k);
      cut.weight += edge_weight(weights, k);
      if (!e.corruptible) ++cut.incorruptible_count;
    }
  }
  cut.size = static_cast<int>(cut.edges.size());
  return cut;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double infinite_weight_surrogate(int edge_count) { return 1.0e6 * std::max(edge_count, 1); }

Cut cut_of_partition(const MeasurementGraph& graph, const std::vector<int>& partition,
                     const std::vector<double>& weights) {
  check_weights(graph, weights);
  if (partition.empty()) throw std::invalid_argument("partition must be non-empty");
  std::vector<char> mask(graph.node_count, 0);
  for (int node : partition) {
    if (node < 0 || node >= graph.node_count - 1)
      throw std::invalid_argument("partition may only contain non-reference nodes");
    mask[node] = 1;
  }
  return cut_from_mask(graph, mask, weights);
}

Cut stoer_wagner_min_cut(const MeasurementGraph& graph, const std::vector<double>& weights) {
  check_weights(graph, weights);
  if (!is_connected(graph)) throw std::invalid_argument("min cut of a disconnected graph");
  const int node_count = graph.node_count;
  if (node_count < 2) throw std::invalid_argument("min cut needs at least two nodes");

  // Merged-weight adjacency over contracted super-nodes.
  std::vector<std::vector<double>> adjacency(node_count,
                                             std::vector<double>(node_count, 0.0));
  for (int k = 0; k < graph.edge_count(); ++k) {
    const GraphEdge& e = graph.edges[k];
    adjacency[e.u][e.v] += edge_weight(weights, k);
    adjacency[e.v][e.u] += edge_weight(weights, k);
  }

  std::vector<std::vector<int>> groups(node_count);
  for (int i = 0; i < node_count; ++i) groups[i] = {i};
  std::vector<int> active(node_count);
  for (int i = 0; i < node_count; ++i) active[i] = i;

  double best_weight = std::numeric_limits<double>::infinity();
  std::vector<int> best_partition;

  auto canonical_partition = [&](const std::vector<int>& group) {
    // Report the side that excludes the reference node.
    std::vector<char> mask(node_count, 0);
    for (int v : group) mask[v] = 1;
    std::vector<int> side;
    const bool contains_ref = mask[node_count - 1] != 0;
    for (int v = 0; v < node_count - 1; ++v)
      if ((mask[v] != 0) != contains_ref) side.push_back(v);
    return side;
  };

  while (active.size() > 1) {
    // Maximum-adjacency phase from the lowest-index active node; selection
    // ties go to the smallest node index for reproducibility.
    std::vector<char> added(node_count, 0);
    std::vector<double> key(node_count, 0.0);
    const int start = active[0];
    added[start] = 1;
    for (int v : active) key[v] = adjacency[start][v];

    int prev = start;
    int last = start;
    for (size_t step = 1; step < active.size(); ++step) {
      int pick = -1;
      for (int v : active) {
        if (added[v]) continue;
        if (pick == -1 || key[v] > key[pick]) pick = v;
      }
      prev = last;
      last = pick;
      added[pick] = 1;
      for (int v : active)
        if (!added[v]) key[v] += adjacency[pick][v];
    }

    const double phase_weight = key[last];
    std::vector<int> candidate = canonical_partition(groups[last]);
    if (!candidate.empty()) {
      const double scale = std::max(1.0, std::abs(best_weight));
      if (phase_weight < best_weight - 1e-12 * scale) {
        best_weight = phase_weight;
        best_partition = std::move(candidate);
      } else if (phase_weight <= best_weight + 1e-12 * scale &&
                 lex_less(candidate, best_partition)) {
        best_partition = std::move(candidate);
      }
    }

    // Contract last into prev.
    groups[prev].insert(groups[prev].end(), groups[last].begin(), groups[last].end());
    for (int v : active) {
      if (v == last || v == prev) continue;
      adjacency[prev][v] += adjacency[last][v];
      adjacency[v][prev] = adjacency[prev][v];
    }
    active.erase(std::find(active.begin(), active.end(), last));
  }

  if (best_partition.empty()) throw std::logic_error("stoer-wagner produced no cut");
  return cut_of_partition(graph, best_partition, weights);
}

namespace {

std::optional<Cut> enumerate_cuts(
    const MeasurementGraph& graph, const std::vector<double>& weights,
    const std::function<bool(const Cut&)>& predicate, bool by_weight) {
  if (graph.node_count > kOracleNodeLimit)
    throw OracleUnavailableError("oracle unavailable: more than " +
                                 std::to_string(kOracleNodeLimit) + " nodes");
  const int buses = graph.node_count - 1;
  if (buses < 1) throw std::invalid_argument("graph has no non-reference nodes");

  bool found = false;
  Cut best;
  std::vector<char> mask(graph.node_count, 0);
  const std::uint32_t subset_limit = 1u << buses;
  for (std::uint32_t subset = 1; subset < subset_limit; ++subset) {
    for (int node = 0; node < buses; ++node) mask[node] = (subset >> node) & 1u;
    Cut cut = cut_from_mask(graph, mask, weights);
    if (predicate && !predicate(cut)) continue;
    bool better = false;
    if (!found) {
      better = true;
    } else if (by_weight) {
      if (cut.weight < best.weight - 1e-12) {
        better = true;
      } else if (cut.weight <= best.weight + 1e-12) {
        better = cut.size < best.size ||
                 (cut.size == best.size && lex_less(cut.partition, best.partition));
      }
    } else {
      better = cut.size < best.size ||
               (cut.size == best.size && lex_less(cut.partition, best.partition));
    }
    if (better) {
      best = std::move(cut);
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace

std::optional<Cut> enumerate_optimal_cut(const MeasurementGraph& graph,
                                         const std::function<bool(const Cut&)>& predicate) {
  return enumerate_cuts(graph, {}, predicate, /*by_weight=*/false);
}

std::optional<Cut> enumerate_min_weight_cut(const MeasurementGraph& graph,
                                            const std::vector<double>& weights) {
  check_weights(graph, weights);
  return enumerate_cuts(graph, weights, nullptr, /*by_weight=*/true);
}

bool connected_after_removal(const MeasurementGraph& graph,
                             const std::vector<int>& removed_edges) {
  std::vector<char> removed(graph.edge_count(), 0);
  for (int k : removed_edges) {
    if (k < 0 || k >= graph.edge_count())
      throw std::out_of_range("removed edge index out of range");
    removed[k] = 1;
  }
  std::vector<std::vector<int>> adjacency(graph.node_count);
  for (int k = 0; k < graph.edge_count(); ++k) {
    if (removed[k]) continue;
    adjacency[graph.edges[k].u].push_back(graph.edges[k].v);
    adjacency[graph.edges[k].v].push_back(graph.edges[k].u);
  }
  std::vector<char> seen(graph.node_count, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == graph.node_count;
}

}  // namespace gridsec
