#include "bimodal/objective.hpp"

#include <string>

#include "bimodal/error.hpp"

namespace bimodal {

std::string_view ToString(Mode mode) {
  return mode == Mode::kBimodal ? "bimodal" : "truck_only";
}

Mode ParseMode(std::string_view text) {
  if (text == "bimodal" || text == "with_drones") return Mode::kBimodal;
  if (text == "truck_only" || text == "without_drones") return Mode::kTruckOnly;
  throw DomainError("unknown mode '" + std::string(text) + "' (expected bimodal or truck_only)");
}

std::vector<double> EdgeLatencies(const Network& network, const FlowAssignment& assignment) {
  std::vector<double> out(network.road_edges.size());
  for (const auto& e : network.road_edges) {
    out[e.id.index()] = EdgeLatency(e.plane, assignment.edge_flow[e.id.index()], e.nominal_flow);
  }
  return out;
}

ParcelLatency ComputeParcelLatency(const Network& network, const PathSet& paths,
                                   const FlowAssignment& assignment) {
  const double total = network.total_demand();
  if (!(total > 0.0)) throw DomainError("parcel latency is undefined with zero total demand");
  const auto latency = EdgeLatencies(network, assignment);
  const double m = network.constants.parcels_per_truck;

  ParcelLatency out;
  for (const auto& p : paths.paths()) {
    double path_latency = 0.0;
    for (EdgeId e : p.edges) path_latency += latency[e.index()];
    out.truck_sum += m * assignment.path_flow[p.id.index()] * path_latency;
  }
  for (const auto& e : network.aerial_edges) {
    out.drone_sum += assignment.drone_flow[e.id.index()] * e.latency_hours;
  }
  out.average = (out.truck_sum + out.drone_sum) / total;
  return out;
}

double ComputeSocietalLatency(const Network& network, const FlowAssignment& assignment) {
  const auto latency = EdgeLatencies(network, assignment);
  double sum = 0.0;
  for (const auto& e : network.road_edges) sum += e.nominal_flow * latency[e.id.index()];
  return sum / network.constants.nominal_total;
}

Metrics ComputeMetrics(const Network& network, const PathSet& paths,
                       const FlowAssignment& assignment, double gamma) {
  const auto parcel = ComputeParcelLatency(network, paths, assignment);
  Metrics out;
  out.parcel_latency = parcel.average;
  out.truck_latency_sum = parcel.truck_sum;
  out.drone_latency_sum = parcel.drone_sum;
  out.societal_latency = ComputeSocietalLatency(network, assignment);
  out.operational_cost = OperationalCost(assignment, network.constants);
  out.objective = gamma * out.parcel_latency + (1.0 - gamma) * out.societal_latency;
  return out;
}

QpProblem AssembleQp(const Network& network, const PathSet& paths, double gamma, Mode mode) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw DomainError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  const double total = network.total_demand();
  if (!(total > 0.0)) throw DomainError("parcel latency is undefined with zero total demand");
  if (paths.node_count() != network.node_count() ||
      paths.edge_count() != network.road_edges.size()) {
    throw DomainError("path set was enumerated on a different network");
  }

  const auto& c = network.constants;
  const double m = c.parcels_per_truck;
  const double parcel_weight = gamma * m / total;            // on m f_p * path latency
  const double societal_weight = (1.0 - gamma) / c.nominal_total;
  const auto n = static_cast<Eigen::Index>(paths.size());

  QpProblem qp;
  qp.Q = Matrix::Zero(n, n);
  qp.a = Vector::Zero(n);

  for (const auto& e : network.road_edges) {
    // latency = offset + slope * truck_flow on this edge
    const double slope = e.plane.omega[1] + e.plane.omega[2];
    const double offset = e.plane.omega[0] + e.plane.omega[2] * e.nominal_flow;
    const auto& members = paths.through(e.id);
    const double coupling = parcel_weight * slope;
    for (PathId p : members) {
      qp.a(p.value) += parcel_weight * offset + societal_weight * e.nominal_flow * slope;
      for (PathId q : members) qp.Q(p.value, q.value) += coupling;
    }
    qp.constant += societal_weight * e.nominal_flow * offset;
  }

  // Drone parcels d_v - m * sum_{p -> v} f_p each take the aerial latency.
  for (const auto& e : network.aerial_edges) {
    const double d = network.demand[e.to.index()];
    qp.constant += gamma / total * d * e.latency_hours;
    for (PathId p : paths.ending_at(e.to)) qp.a(p.value) -= parcel_weight * e.latency_hours;
  }

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> g_entries;
  std::vector<double> h_values;
  std::vector<Triplet> a_entries;
  std::vector<double> b_values;

  for (Eigen::Index p = 0; p < n; ++p) {
    g_entries.emplace_back(static_cast<int>(h_values.size()), static_cast<int>(p), -1.0);
    h_values.push_back(0.0);
  }

  for (std::size_t v = 0; v < network.node_count(); ++v) {
    const NodeId node{static_cast<int>(v)};
    if (node == network.hub) continue;
    const double d = network.demand[v];
    const auto& ending = paths.ending_at(node);
    const bool has_drone = network.aerial_edge_to(node).has_value();
    const bool exact = mode == Mode::kTruckOnly || (d > 0.0 && !has_drone);

    if (ending.empty()) {
      if (exact && d > 0.0) {
        const std::string name = network.nodes[v].name.empty() ? std::to_string(v)
                                                               : network.nodes[v].name;
        throw FeasibilityError(
            "node " + name + " has demand " + std::to_string(d) +
            (mode == Mode::kTruckOnly ? " but no truck path in truck-only mode"
                                      : " but neither a truck path nor an aerial edge"));
      }
      continue;
    }
    if (exact) {
      const int row = static_cast<int>(b_values.size());
      for (PathId p : ending) a_entries.emplace_back(row, p.value, m);
      b_values.push_back(d);
    } else {
      const int row = static_cast<int>(h_values.size());
      for (PathId p : ending) g_entries.emplace_back(row, p.value, m);
      h_values.push_back(d);
    }
  }

  // Operating cost: c_T * sum f + c_D * (D - m * sum f) <= C_0
  {
    const int row = static_cast<int>(h_values.size());
    const double coefficient = c.truck_cost - m * c.drone_cost;
    for (Eigen::Index p = 0; p < n; ++p) {
      g_entries.emplace_back(row, static_cast<int>(p), coefficient);
    }
    h_values.push_back(c.cost_cap - c.drone_cost * total);
  }

  qp.G.resize(static_cast<Eigen::Index>(h_values.size()), n);
  qp.G.setFromTriplets(g_entries.begin(), g_entries.end());
  qp.h = Eigen::Map<const Vector>(h_values.data(), static_cast<Eigen::Index>(h_values.size()));
  qp.A.resize(static_cast<Eigen::Index>(b_values.size()), n);
  qp.A.setFromTriplets(a_entries.begin(), a_entries.end());
  qp.b = Eigen::Map<const Vector>(b_values.data(), static_cast<Eigen::Index>(b_values.size()));
  return qp;
}

nlohmann::json QpToJson(const QpProblem& problem) {
  auto rows = [](const Matrix& mat) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
      out.push_back(std::move(row));
    }
    return out;
  };
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {
      {"Q", rows(problem.Q)},
      {"a", vec(problem.a)},
      {"constant", problem.constant},
      {"G", rows(Matrix(problem.G))},
      {"h", vec(problem.h)},
      {"A", rows(Matrix(problem.A))},
      {"b", vec(problem.b)},
  };
}

}  // namespace bimodal
