#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "gridsec/grid_model.hpp"

namespace gridsec {

/// WLS estimate plus the detection verdict. objective is
/// ||Sigma^(-1/2) (z - H x_star)||_2 exactly as computed; detected iff
/// objective > lambda (lambda is NaN when detection was not evaluated).
struct EstimationResult {
  Eigen::VectorXd x_star;
  Eigen::VectorXd residual;  // z - H x_star
  double objective = 0.0;
  bool detected = false;
  double lambda = std::numeric_limits<double>::quiet_NaN();
};

struct ResidualAnalysis {
  Eigen::VectorXd residual;
  Eigen::MatrixXd covariance;  // R_r = (I - K) Sigma
  /// |r_i| / sqrt(R_r(i,i)); defined as 0 for critical measurements
  /// (R_r(i,i) < 1e-12, removal would break observability).
  Eigen::VectorXd normalized;
};

struct DetectionTest {
  bool detected = false;
  double lambda = 0.0;
};

enum class CleanupStatus {
  NotNeeded,             // detection did not fire; nothing removed
  Cleaned,               // a passing removal set was found
  Failed,                // no set of size <= k_max works
  CriticalMeasurements,  // every candidate removal broke observability
};

/// Outcome of optimal bad-data removal. keep_mask is the binary vector d
/// (0 = removed). lambda_post is recomputed with the reduced degrees of
/// freedom; observability_preserved records rank(H_d) = n.
struct CleanupResult {
  CleanupStatus status = CleanupStatus::NotNeeded;
  std::vector<int> keep_mask;
  std::vector<int> removed;
  int removed_count = 0;
  Eigen::VectorXd x_post;
  double objective_post = 0.0;
  double lambda_post = 0.0;
  bool observability_preserved = true;
  std::string detail;
};

/// Weighted least squares via the normal equations (H^T Sigma^-1 H) x =
/// H^T Sigma^-1 z with an LDLT factorization. Detection fields are left
/// unevaluated. Throws UnobservableError on rank deficiency.
EstimationResult wls_estimate(const MeasurementSystem& system, const Eigen::VectorXd& z);

ResidualAnalysis residual_analysis(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& x_star);

/// lambda = sqrt of the chi-square quantile at 1 - alpha with dof degrees of
/// freedom; detected iff objective > lambda. Throws DetectionUnavailableError
/// for dof <= 0.
DetectionTest detect(double objective, int dof, double alpha);

double detection_threshold(int dof, double alpha);

/// wls_estimate + detect in one call. When the system has no redundancy
/// (m <= n) the detection fields stay unevaluated.
EstimationResult estimate_and_detect(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                     double alpha);

/// Exact minimum-cardinality bad-data removal: searches removal sets of size
/// 1..k_max in increasing cardinality; candidates within a cardinality are
/// ordered by descending sum of normalized residuals (a pruning heuristic
/// only; the search stays exhaustive per cardinality, ties broken
/// lexicographically by index). Returns the first set whose removal keeps
/// rank(H_d) = n and passes the recomputed detection test.
CleanupResult identify_and_clean(const MeasurementSystem& system, const Eigen::VectorXd& z,
                                 double alpha = 0.01, int k_max = 6);

}  // namespace gridsec
