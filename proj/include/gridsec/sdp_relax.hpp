#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "gridsec/graph_cut.hpp"
#include "gridsec/grid_model.hpp"

namespace gridsec {

/// The two Laplacians of the cut relaxation: `unit` is the standard graph
/// Laplacian with unit edge weights; `signed_by_protection` gives protected
/// edges weight +1 and corruptible edges weight -1. For any +/-1 labeling s,
/// <unit, ss^T> = 4 * cut size and <signed, ss^T> = 4 * (c_m - (size - c_m)).
struct LaplacianPair {
  Eigen::MatrixXd unit;
  Eigen::MatrixXd signed_by_protection;
  int node_count = 0;
};

/// Gram factor of the relaxation solution: X* = basis^T basis with unit
/// diagonal. Residuals are reported so callers can gate on them.
struct GramFactor {
  Eigen::MatrixXd basis;  // (n+1) x (n+1); column i is node i's vector
  double objective = 0.0;
  double diagonal_residual = 0.0;    // max |column_norm^2 - 1|
  double constraint_residual = 0.0;  // max(0, <signed, X> + 4)
};

struct SdpOptions {
  int restarts = 20;
  int max_iterations = 400;
  int max_penalty_rounds = 25;
  double feasibility_slack = 1e-7;  // drive <signed, X> to -4 - slack
  double accept_residual = 1e-4;    // reject the factor above this
  std::uint64_t seed = 0x9D2C5680u;
};

LaplacianPair build_laplacians(const MeasurementGraph& graph);

/// Approximately solves  min <unit, X>  s.t. diag(X) = 1, <signed, X> <= -4,
/// X PSD  via low-rank factorization X = V^T V with rank ceil(sqrt(2(n+1))).
/// The diagonal constraint is kept exact by column normalization; the
/// inequality is an exact penalty with doubling multiplier; 20 random restarts
/// keep the best feasible factor. Throws SdpError ("relaxation infeasible or
/// unsolved") when no restart meets accept_residual — which is NOT a proof of
/// infeasibility.
GramFactor solve_sdp(const LaplacianPair& pair, const SdpOptions& options = {});

/// Random-hyperplane rounding: labels node i by the sign of <basis col i, w>
/// for `trials` independent normal vectors w (zero dot products map to +1),
/// keeps the smallest cut whose labeling satisfies <signed, ss^T> < 0.
/// All-equal labelings are skipped. Deterministic given the seed; returns
/// nullopt when no trial produces a feasible cut.
std::optional<Cut> gw_round(const GramFactor& factor, const MeasurementGraph& graph,
                            int trials, std::uint64_t seed);

}  // namespace gridsec
