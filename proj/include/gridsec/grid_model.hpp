#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gridsec {

/// Transmission line between two buses. `susceptance` is the magnitude of the
/// line susceptance in per-unit; it must be strictly positive.
struct Line {
  int from = 0;
  int to = 0;
  double susceptance = 1.0;
};

/// Physical network: buses carry ids 1..n (contiguous), lines connect them.
/// Immutable after construction; validate() enforces the structural rules.
struct GridTopology {
  std::vector<int> buses;
  std::vector<Line> lines;

  int bus_count() const { return static_cast<int>(buses.size()); }
  void validate() const;
};

enum class MeterKind { Flow, Angle };

/// One meter. Flow meters reference a line by index and carry an orientation
/// (reversed = measured against the line's stored from->to direction); angle
/// meters reference a bus id. corruptible == false marks membership in the
/// protected set.
struct MeasurementDescriptor {
  MeterKind kind = MeterKind::Flow;
  int line_index = -1;
  bool reversed = false;
  int bus = 0;
  bool corruptible = true;

  static MeasurementDescriptor flow(int line_index, bool reversed = false,
                                    bool corruptible = true) {
    MeasurementDescriptor d;
    d.kind = MeterKind::Flow;
    d.line_index = line_index;
    d.reversed = reversed;
    d.corruptible = corruptible;
    return d;
  }
  static MeasurementDescriptor angle(int bus, bool corruptible = true) {
    MeasurementDescriptor d;
    d.kind = MeterKind::Angle;
    d.bus = bus;
    d.corruptible = corruptible;
    return d;
  }
};

/// Measurement model z = Hx + e with diagonal noise covariance diag(sigma^2).
/// Row layout: a flow meter on line (i,j) contributes +B at column i and -B at
/// column j; an angle meter on bus i contributes a single +1 at column i.
/// Immutable after construction; share freely across threads.
struct MeasurementSystem {
  GridTopology topology;
  std::vector<MeasurementDescriptor> meters;
  Eigen::MatrixXd H;      // m x n
  Eigen::VectorXd sigma;  // per-meter noise stddev, length m
  int m = 0;
  int n = 0;
  /// m > n. When false, estimation still works but the detection test has no
  /// degrees of freedom to run on.
  bool detection_capable = false;

  /// New system keeping only the listed measurement rows (ascending indices).
  /// Throws UnobservableError if the reduced H loses rank.
  MeasurementSystem subsystem(const std::vector<int>& keep) const;

  std::vector<int> protected_indices() const;
};

/// Validates inputs, lays out H per the row rules, and checks observability.
/// Throws UnobservableError ("unobservable system") on rank deficiency. m <= n
/// is allowed but flagged via detection_capable = false.
MeasurementSystem build_measurement_system(GridTopology topology,
                                           std::vector<MeasurementDescriptor> meters,
                                           std::vector<double> noise_stddev);

/// Edge of the measurement multigraph. The signed incidence row is +1 at u and
/// -1 at v; `magnitude` restores the susceptance scale (1 for angle meters).
struct GraphEdge {
  int u = 0;
  int v = 0;
  int meas_index = 0;
  bool corruptible = true;
  double magnitude = 1.0;
};

/// (n+1)-node multigraph with one edge per measurement. Node n (the last one)
/// is the synthetic reference bus at phase 0; angle meters attach to it.
struct MeasurementGraph {
  int node_count = 0;
  std::vector<GraphEdge> edges;

  int reference() const { return node_count - 1; }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int protected_count() const;
};

/// Maps each measurement row to its graph edge and cross-checks that graph
/// connectivity agrees with rank(H) = n. Throws UnobservableError when the
/// graph is disconnected.
MeasurementGraph to_graph(const MeasurementSystem& system);

bool is_connected(const MeasurementGraph& graph);

int matrix_rank(const Eigen::MatrixXd& M);

}  // namespace gridsec
