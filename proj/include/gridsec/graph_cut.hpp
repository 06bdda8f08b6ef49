#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gridsec/grid_model.hpp"

namespace gridsec {

/// A node partition's crossing edge set. `partition` is the bus side S
/// (0-based node indices, reference always excluded), sorted ascending;
/// `edges` are the crossing measurement indices. incorruptible_count is the
/// number of crossing edges in the protected set.
struct Cut {
  std::vector<int> partition;
  std::vector<int> edges;
  int size = 0;
  double weight = 0.0;
  int incorruptible_count = 0;
};

/// Surrogate for an infinite edge weight: 1e6 * m. Any finite cut (weight
/// <= m under unit-scale weights) stays far below surrogate_cutoff.
double infinite_weight_surrogate(int edge_count);
inline double surrogate_cutoff(int edge_count) {
  return infinite_weight_surrogate(edge_count) / 2.0;
}

/// Crossing edges of partition S. Weights default to 1 per edge.
Cut cut_of_partition(const MeasurementGraph& graph, const std::vector<int>& partition,
                     const std::vector<double>& weights = {});

/// Global minimum weight cut (Stoer-Wagner, deterministic contraction order).
/// Parallel edges are merged internally; the returned Cut reports individual
/// measurement edges. Among equal-weight minima the lexicographically
/// smallest partition wins. Throws on a disconnected graph.
Cut stoer_wagner_min_cut(const MeasurementGraph& graph, const std::vector<double>& weights);

/// Exhaustive oracle: iterates every non-empty proper subset of the
/// non-reference nodes and returns a predicate-satisfying cut of minimum
/// cardinality (ties: lexicographically smallest subset). nullopt when no cut
/// satisfies the predicate. Requires node_count <= 22 (2^n budget), else
/// throws OracleUnavailableError.
std::optional<Cut> enumerate_optimal_cut(const MeasurementGraph& graph,
                                         const std::function<bool(const Cut&)>& predicate);

/// Same enumeration, minimizing total weight instead of cardinality
/// (cross-check oracle for stoer_wagner_min_cut).
std::optional<Cut> enumerate_min_weight_cut(const MeasurementGraph& graph,
                                            const std::vector<double>& weights);

/// True iff the graph stays connected once the listed edges are removed
/// (equivalently rank of the reduced incidence stays n).
bool connected_after_removal(const MeasurementGraph& graph,
                             const std::vector<int>& removed_edges);

}  // namespace gridsec
