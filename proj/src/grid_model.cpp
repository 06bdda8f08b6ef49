#include "gridsec/grid_model.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "gridsec/errors.hpp"

namespace gridsec {

void GridTopology::validate() const {
  if (buses.empty()) throw std::invalid_argument("topology has no buses");
  std::set<int> seen;
  for (int b : buses) {
    if (!seen.insert(b).second)
      throw std::invalid_argument("duplicate bus id " + std::to_string(b));
  }
  const int n = bus_count();
  for (int b = 1; b <= n; ++b) {
    if (!seen.count(b))
      throw std::invalid_argument("bus ids must be contiguous 1..n; missing " +
                                  std::to_string(b));
  }
  for (const Line& line : lines) {
    if (line.from < 1 || line.from > n || line.to < 1 || line.to > n)
      throw std::invalid_argument("line endpoint references unknown bus");
    if (line.from == line.to)
      throw std::invalid_argument("self-loop line on bus " + std::to_string(line.from));
    if (!(line.susceptance > 0.0))
      throw std::invalid_argument("line susceptance must be strictly positive");
  }
}

int matrix_rank(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  return static_cast<int>(qr.rank());
}

namespace {

void check_meter(const GridTopology& topology, const MeasurementDescriptor& d) {
  if (d.kind == MeterKind::Flow) {
    if (d.line_index < 0 || d.line_index >= static_cast<int>(topology.lines.size()))
      throw std::invalid_argument("flow meter references unknown line index " +
                                  std::to_string(d.line_index));
  } else {
    if (d.bus < 1 || d.bus > topology.bus_count())
      throw std::invalid_argument("angle meter references unknown bus " +
                                  std::to_string(d.bus));
  }
}

}  // namespace

MeasurementSystem build_measurement_system(GridTopology topology,
                                           std::vector<MeasurementDescriptor> meters,
                                           std::vector<double> noise_stddev) {
  topology.validate();
  if (meters.empty()) throw std::invalid_argument("meter list is empty");
  if (noise_stddev.size() != meters.size())
    throw std::invalid_argument("noise stddev list length must equal meter count");
  for (double s : noise_stddev)
    if (!(s > 0.0)) throw std::invalid_argument("noise stddev must be strictly positive");

  const int n = topology.bus_count();
  const int m = static_cast<int>(meters.size());

  MeasurementSystem sys;
  sys.H = Eigen::MatrixXd::Zero(m, n);
  sys.sigma = Eigen::VectorXd(m);
  for (int k = 0; k < m; ++k) {
    const MeasurementDescriptor& d = meters[k];
    check_meter(topology, d);
    if (d.kind == MeterKind::Flow) {
      const Line& line = topology.lines[d.line_index];
      const int i = d.reversed ? line.to : line.from;
      const int j = d.reversed ? line.from : line.to;
      sys.H(k, i - 1) = line.susceptance;
      sys.H(k, j - 1) = -line.susceptance;
    } else {
      sys.H(k, d.bus - 1) = 1.0;
    }
    sys.sigma(k) = noise_stddev[k];
  }

  if (matrix_rank(sys.H) < n)
    throw UnobservableError("unobservable system: rank(H) < n");

  sys.topology = std::move(topology);
  sys.meters = std::move(meters);
  sys.m = m;
  sys.n = n;
  sys.detection_capable = m > n;  // insufficient redundancy otherwise
  return sys;
}

MeasurementSystem MeasurementSystem::subsystem(const std::vector<int>& keep) const {
  std::vector<MeasurementDescriptor> kept_meters;
  std::vector<double> kept_sigma;
  kept_meters.reserve(keep.size());
  for (int idx : keep) {
    if (idx < 0 || idx >= m) throw std::out_of_range("measurement index out of range");
    kept_meters.push_back(meters[idx]);
    kept_sigma.push_back(sigma(idx));
  }
  return build_measurement_system(topology, std::move(kept_meters), std::move(kept_sigma));
}

std::vector<int> MeasurementSystem::protected_indices() const {
  std::vector<int> out;
  for (int k = 0; k < m; ++k)
    if (!meters[k].corruptible) out.push_back(k);
  return out;
}

int MeasurementGraph::protected_count() const {
  int c = 0;
  for (const GraphEdge& e : edges) c += e.corruptible ? 0 : 1;
  return c;
}

bool is_connected(const MeasurementGraph& graph) {
  if (graph.node_count == 0) return false;
  std::vector<std::vector<int>> adjacency(graph.node_count);
  for (const GraphEdge& e : graph.edges) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
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

MeasurementGraph to_graph(const MeasurementSystem& system) {
  MeasurementGraph graph;
  graph.node_count = system.n + 1;
  const int ref = graph.reference();
  graph.edges.reserve(system.m);
  for (int k = 0; k < system.m; ++k) {
    const MeasurementDescriptor& d = system.meters[k];
    GraphEdge e;
    e.meas_index = k;
    e.corruptible = d.corruptible;
    if (d.kind == MeterKind::Flow) {
      const Line& line = system.topology.lines[d.line_index];
      e.u = (d.reversed ? line.to : line.from) - 1;
      e.v = (d.reversed ? line.from : line.to) - 1;
      e.magnitude = line.susceptance;
    } else {
      e.u = d.bus - 1;
      e.v = ref;
      e.magnitude = 1.0;
    }
    graph.edges.push_back(e);
  }

  const bool connected = is_connected(graph);
  const bool full_rank = matrix_rank(system.H) == system.n;
  if (connected != full_rank)
    throw std::logic_error("graph connectivity disagrees with rank(H)");
  if (!connected)
    throw UnobservableError("unobservable system: measurement graph disconnected");
  return graph;
}

}  // namespace gridsec
