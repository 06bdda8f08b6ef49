#include "gridsec/estimator.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridsec/errors.hpp"

namespace gridsec {

namespace {

constexpr double kCriticalVarianceFloor = 1e-12;
// Absolute slack when comparing J against lambda_d, so that consistent
// (numerically ~0) residuals pass even when dof drops to 0 and lambda_d = 0.
constexpr double kObjectiveSlack = 1e-9;

Eigen::MatrixXd row_weighted(const Eigen::MatrixXd& H, const Eigen::VectorXd& sigma) {
  return sigma.cwiseInverse().asDiagonal() * H;
}

struct WlsSolution {
  Eigen::VectorXd x;
  double objective;
};

/// Core solve shared by the public ops and the removal search.
WlsSolution solve_wls(const Eigen::MatrixXd& H, const Eigen::VectorXd& sigma,
                      const Eigen::VectorXd& z) {
  const Eigen::MatrixXd Hw = row_weighted(H, sigma);
  const Eigen::VectorXd zw = z.cwiseQuotient(sigma);
  if (matrix_rank(Hw) < H.cols())
    throw UnobservableError("unobservable system: singular normal matrix");
  const Eigen::MatrixXd normal = Hw.transpose() * Hw;
  const Eigen::VectorXd rhs = Hw.transpose() * zw;
  WlsSolution sol;
  sol.x = normal.ldlt().solve(rhs);
  sol.objective = (zw - Hw * sol.x).norm();
  return sol;
}

}  // namespace

EstimationResult wls_estimate(const MeasurementSystem& system, const Eigen::VectorXd& z) {
  if (z.size() != system.m)
    throw std::invalid_argument("measurement vector length must equal m");
  const WlsSolution sol = solve_wls(system.H, system.sigma, z);
  EstimationResult result;
  result.x_star = sol.x;
  result.residual = z - system.H * sol.x;
  result.objective = sol.objective;
  return result;
}

ResidualAnalysis residual_analysis(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& x_star) {
  const Eigen::MatrixXd Hw = row_weighted(system.H, system.sigma);
  const Eigen::MatrixXd normal = Hw.transpose() * Hw;
  const Eigen::MatrixXd gain =
      normal.ldlt().solve(Eigen::MatrixXd::Identity(system.n, system.n));

  ResidualAnalysis analysis;
  analysis.residual = z - system.H * x_star;
  // (I - K) Sigma collapses to Sigma - H (H^T Sigma^-1 H)^-1 H^T.
  analysis.covariance = Eigen::MatrixXd(system.sigma.array().square().matrix().asDiagonal());
  analysis.covariance -= system.H * gain * system.H.transpose();
  analysis.normalized = Eigen::VectorXd::Zero(system.m);
  for (int i = 0; i < system.m; ++i) {
    const double variance = analysis.covariance(i, i);
    if (variance >= kCriticalVarianceFloor)
      analysis.normalized(i) = std::abs(analysis.residual(i)) / std::sqrt(variance);
  }
  return analysis;
}

double detection_threshold(int dof, double alpha) {
  if (dof <= 0) throw DetectionUnavailableError("detection unavailable: dof <= 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0, 1)");
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return std::sqrt(boost::math::quantile(dist, 1.0 - alpha));
}

DetectionTest detect(double objective, int dof, double alpha) {
  DetectionTest test;
  test.lambda = detection_threshold(dof, alpha);
  test.detected = objective > test.lambda;
  return test;
}

EstimationResult estimate_and_detect(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                     double alpha) {
  EstimationResult result = wls_estimate(system, z);
  const int dof = system.m - system.n;
  if (dof >= 1) {
    const DetectionTest test = detect(result.objective, dof, alpha);
    result.detected = test.detected;
    result.lambda = test.lambda;
  }
  return result;
}

namespace {

/// All k-subsets of `allowed`, ordered by descending normalized-residual sum
/// (ties lexicographic by index sequence).
std::vector<std::vector<int>> ranked_subsets(const std::vector<int>& allowed, int k,
                                             const Eigen::VectorXd& normalized) {
  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  const int count = static_cast<int>(allowed.size());
  auto recurse = [&](auto&& self, int start) -> void {
    if (static_cast<int>(current.size()) == k) {
      subsets.push_back(current);
      return;
    }
    const int needed = k - static_cast<int>(current.size());
    for (int i = start; i <= count - needed; ++i) {
      current.push_back(allowed[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  if (k <= count) recurse(recurse, 0);

  std::vector<double> scores(subsets.size(), 0.0);
  for (size_t s = 0; s < subsets.size(); ++s)
    for (int idx : subsets[s]) scores[s] += normalized(idx);
  std::vector<size_t> order(subsets.size());
  for (size_t s = 0; s < order.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return subsets[a] < subsets[b];
  });
  std::vector<std::vector<int>> out;
  out.reserve(subsets.size());
  for (size_t s : order) out.push_back(std::move(subsets[s]));
  return out;
}

Eigen::MatrixXd drop_rows(const Eigen::MatrixXd& M, const std::vector<char>& removed) {
  const int kept = static_cast<int>(M.rows()) - static_cast<int>(std::count(
                       removed.begin(), removed.end(), static_cast<char>(1)));
  Eigen::MatrixXd out(kept, M.cols());
  int row = 0;
  for (int i = 0; i < M.rows(); ++i)
    if (!removed[i]) out.row(row++) = M.row(i);
  return out;
}

Eigen::VectorXd drop_entries(const Eigen::VectorXd& v, const std::vector<char>& removed) {
  const int kept = static_cast<int>(v.size()) - static_cast<int>(std::count(
                       removed.begin(), removed.end(), static_cast<char>(1)));
  Eigen::VectorXd out(kept);
  int row = 0;
  for (int i = 0; i < v.size(); ++i)
    if (!removed[i]) out(row++) = v(i);
  return out;
}

}  // namespace

CleanupResult identify_and_clean(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                 double alpha, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  CleanupResult result;
  result.keep_mask.assign(system.m, 1);

  const EstimationResult full = estimate_and_detect(system, z, alpha);
  if (!full.detected) {
    result.status = CleanupStatus::NotNeeded;
    result.x_post = full.x_star;
    result.objective_post = full.objective;
    result.lambda_post = std::isnan(full.lambda) ? 0.0 : full.lambda;
    result.detail = system.detection_capable ? "detection did not fire"
                                             : "detection unavailable (m <= n)";
    return result;
  }

  const ResidualAnalysis analysis = residual_analysis(system, z, full.x_star);

  // Critical measurements are never removable: dropping one loses rank.
  std::vector<int> removable;
  for (int i = 0; i < system.m; ++i)
    if (analysis.covariance(i, i) >= kCriticalVarianceFloor) removable.push_back(i);

  bool any_rank_preserving = false;
  double best_gap = std::numeric_limits<double>::infinity();
  std::vector<int> best_set;

  const int limit = std::min(k_max, static_cast<int>(removable.size()));
  for (int k = 1; k <= limit; ++k) {
    for (const std::vector<int>& candidate : ranked_subsets(removable, k, analysis.normalized)) {
      std::vector<char> removed(system.m, 0);
      for (int idx : candidate) removed[idx] = 1;
      const Eigen::MatrixXd Hd = drop_rows(system.H, removed);
      if (matrix_rank(Hd) < system.n) continue;
      any_rank_preserving = true;

      const Eigen::VectorXd sigma_d = drop_entries(system.sigma, removed);
      const Eigen::VectorXd zd = drop_entries(z, removed);
      const WlsSolution sol = solve_wls(Hd, sigma_d, zd);
      const int dof_d = system.m - k - system.n;
      const double lambda_d = dof_d >= 1 ? detection_threshold(dof_d, alpha) : 0.0;
      const double gap = sol.objective - lambda_d;
      if (gap < best_gap) {
        best_gap = gap;
        best_set = candidate;
      }
      if (sol.objective <= lambda_d + kObjectiveSlack) {
        result.status = CleanupStatus::Cleaned;
        result.removed = candidate;
        result.removed_count = k;
        for (int idx : candidate) result.keep_mask[idx] = 0;
        result.x_post = sol.x;
        result.objective_post = sol.objective;
        result.lambda_post = lambda_d;
        result.observability_preserved = true;
        return result;
      }
    }
  }

  result.removed_count = 0;
  result.x_post = full.x_star;
  result.objective_post = full.objective;
  result.lambda_post = full.lambda;
  if (!any_rank_preserving) {
    result.status = CleanupStatus::CriticalMeasurements;
    result.observability_preserved = false;
    result.detail = "critical measurements: every candidate removal breaks observability";
  } else {
    result.status = CleanupStatus::Failed;
    std::string sets;
    for (int idx : best_set) sets += (sets.empty() ? "" : ",") + std::to_string(idx);
    result.detail = "identification failed: no removal set of size <= " +
                    std::to_string(k_max) + " passes; best candidate {" + sets +
                    "} missed threshold by " + std::to_string(best_gap);
  }
  return result;
}

}  // namespace gridsec
