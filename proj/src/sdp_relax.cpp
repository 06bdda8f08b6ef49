#include "gridsec/sdp_relax.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gridsec/errors.hpp"
#include "gridsec/rng.hpp"

namespace gridsec {

LaplacianPair build_laplacians(const MeasurementGraph& graph) {
  LaplacianPair pair;
  pair.node_count = graph.node_count;
  pair.unit = Eigen::MatrixXd::Zero(graph.node_count, graph.node_count);
  pair.signed_by_protection = Eigen::MatrixXd::Zero(graph.node_count, graph.node_count);
  auto add_edge = [](Eigen::MatrixXd& L, int u, int v, double w) {
    L(u, u) += w;
    L(v, v) += w;
    L(u, v) -= w;
    L(v, u) -= w;
  };
  for (const GraphEdge& e : graph.edges) {
    add_edge(pair.unit, e.u, e.v, 1.0);
    add_edge(pair.signed_by_protection, e.u, e.v, e.corruptible ? -1.0 : 1.0);
  }
  return pair;
}

namespace {

/// <L, V^T V> for symmetric L.
double gram_inner(const Eigen::MatrixXd& V, const Eigen::MatrixXd& L) {
  return (V * L).cwiseProduct(V).sum();
}

void normalize_columns(Eigen::MatrixXd& V) {
  for (int c = 0; c < V.cols(); ++c) {
    const double norm = V.col(c).norm();
    if (norm > 0.0) {
      V.col(c) /= norm;
    } else {
      V.col(c).setZero();
      V(0, c) = 1.0;
    }
  }
}

struct Candidate {
  Eigen::MatrixXd V;
  double objective = std::numeric_limits<double>::infinity();
  double violation = std::numeric_limits<double>::infinity();
};

}  // namespace

GramFactor solve_sdp(const LaplacianPair& pair, const SdpOptions& options) {
  const int N = pair.node_count;
  if (N < 2) throw std::invalid_argument("relaxation needs at least two nodes");
  if (N > 500) throw std::invalid_argument("instance too large for the relaxation solver");
  const int rank = static_cast<int>(std::ceil(std::sqrt(2.0 * N)));
  const Eigen::MatrixXd& L1 = pair.unit;
  const Eigen::MatrixXd& L2 = pair.signed_by_protection;
  const double slack = options.feasibility_slack;

  // Constraint target: <L2, X> + 4 + slack <= 0.
  auto violation_of = [&](const Eigen::MatrixXd& V) {
    return std::max(0.0, gram_inner(V, L2) + 4.0);
  };
  auto penalized = [&](const Eigen::MatrixXd& V, double mu) {
    return gram_inner(V, L1) + mu * std::max(0.0, gram_inner(V, L2) + 4.0 + slack);
  };

  const double lip_scale = L1.cwiseAbs().rowwise().sum().maxCoeff() +
                           L2.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;

  Candidate best;
  bool have_feasible = false;
  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(mix_seed({options.seed, static_cast<std::uint64_t>(restart)}));
    Eigen::MatrixXd V(rank, N);
    for (int c = 0; c < N; ++c)
      for (int r = 0; r < rank; ++r) V(r, c) = rng.normal();
    normalize_columns(V);

    double mu = 1.0;
    for (int round = 0; round < options.max_penalty_rounds; ++round) {
      double step = 1.0 / (2.0 * (1.0 + mu) * lip_scale);
      double value = penalized(V, mu);
      for (int iter = 0; iter < options.max_iterations; ++iter) {
        const bool active = gram_inner(V, L2) + 4.0 + slack > 0.0;
        Eigen::MatrixXd gradient = 2.0 * (V * L1);
        if (active) gradient.noalias() += (2.0 * mu) * (V * L2);
        Eigen::MatrixXd trial = V - step * gradient;
        normalize_columns(trial);
        const double trial_value = penalized(trial, mu);
        if (trial_value <= value - 1e-14) {
          V = std::move(trial);
          value = trial_value;
          step = std::min(step * 1.2, 1.0);
        } else {
          step *= 0.5;
          if (step < 1e-13) break;
        }
      }
      if (violation_of(V) <= 1e-9) break;
      mu *= 2.0;
    }

    Candidate candidate;
    candidate.objective = gram_inner(V, L1);
    candidate.violation = violation_of(V);
    candidate.V = std::move(V);
    const bool feasible = candidate.violation <= options.accept_residual;
    const bool best_feasible = have_feasible;
    bool take = false;
    if (feasible && !best_feasible) {
      take = true;
    } else if (feasible == best_feasible) {
      take = feasible ? candidate.objective < best.objective
                      : candidate.violation < best.violation;
    }
    if (take || restart == 0) {
      best = std::move(candidate);
      have_feasible = feasible;
    }
  }

  if (!have_feasible)
    throw SdpError("relaxation infeasible or unsolved (best residual " +
                   std::to_string(best.violation) + ")");

  GramFactor factor;
  factor.basis = Eigen::MatrixXd::Zero(N, N);
  factor.basis.topRows(rank) = best.V;
  factor.objective = best.objective;
  factor.constraint_residual = best.violation;
  double diag_dev = 0.0;
  for (int c = 0; c < N; ++c)
    diag_dev = std::max(diag_dev, std::abs(factor.basis.col(c).squaredNorm() - 1.0));
  factor.diagonal_residual = diag_dev;
  return factor;
}

std::optional<Cut> gw_round(const GramFactor& factor, const MeasurementGraph& graph,
                            int trials, std::uint64_t seed) {
  const int N = graph.node_count;
  if (factor.basis.cols() != N)
    throw std::invalid_argument("factor dimension does not match graph");

  std::optional<Cut> best;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(mix_seed({seed, static_cast<std::uint64_t>(trial)}));
    Eigen::VectorXd w(factor.basis.rows());
    for (int i = 0; i < w.size(); ++i) w(i) = rng.normal();

    std::vector<char> positive(N);
    for (int i = 0; i < N; ++i) positive[i] = factor.basis.col(i).dot(w) >= 0.0 ? 1 : 0;

    // The cut side that excludes the reference node.
    const char ref_label = positive[N - 1];
    std::vector<int> partition;
    for (int i = 0; i < N - 1; ++i)
      if (positive[i] != ref_label) partition.push_back(i);
    if (partition.empty()) continue;  // all-same labeling, no cut

    Cut cut = cut_of_partition(graph, partition);
    // Algorithm step-6 check: <signed, ss^T> < 0, i.e. 2 c_m < size.
    if (2 * cut.incorruptible_count >= cut.size) continue;
    if (!best || cut.size < best->size) best = std::move(cut);
  }
  return best;
}

}  // namespace gridsec
