#include "bimodal/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bimodal/error.hpp"
#include "bimodal/paths.hpp"

namespace bimodal {

double Network::total_demand() const { return std::accumulate(demand.begin(), demand.end(), 0.0); }

std::optional<AerialEdgeId> Network::aerial_edge_to(NodeId node) const {
  for (const auto& e : aerial_edges) {
    if (e.to == node) return e.id;
  }
  return std::nullopt;
}

std::optional<NodeId> Network::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return NodeId{static_cast<int>(i)};
  }
  return std::nullopt;
}

std::vector<std::vector<EdgeId>> Network::outgoing_edges() const {
  std::vector<std::vector<EdgeId>> out(nodes.size());
  for (const auto& e : road_edges) out[e.from.index()].push_back(e.id);
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), [this](EdgeId x, EdgeId y) {
      const auto& ex = road_edges[x.index()];
      const auto& ey = road_edges[y.index()];
      return std::pair(ex.to, ex.id) < std::pair(ey.to, ey.id);
    });
  }
  return out;
}

namespace {

std::string NodeLabel(const Network& net, NodeId id) {
  if (id.value >= 0 && id.index() < net.nodes.size() && !net.nodes[id.index()].name.empty()) {
    return net.nodes[id.index()].name;
  }
  return "#" + std::to_string(id.value);
}

bool InRange(const Network& net, NodeId id) {
  return id.value >= 0 && id.index() < net.nodes.size();
}

// Union of forward and backward reachability from the hub, i.e. weak
// connectivity of the road graph.
std::vector<bool> WeaklyReachable(const Network& net) {
  std::vector<std::vector<int>> adj(net.nodes.size());
  for (const auto& e : net.road_edges) {
    adj[e.from.index()].push_back(e.to.value);
    adj[e.to.index()].push_back(e.from.value);
  }
  std::vector<bool> seen(net.nodes.size(), false);
  std::vector<int> stack{net.hub.value};
  seen[net.hub.index()] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

std::vector<bool> RoadReachable(const Network& net) {
  std::vector<bool> seen(net.nodes.size(), false);
  const auto out = net.outgoing_edges();
  std::vector<NodeId> stack{net.hub};
  seen[net.hub.index()] = true;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e : out[v.index()]) {
      const NodeId w = net.road_edges[e.index()].to;
      if (!seen[w.index()]) {
        seen[w.index()] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Violation> Validate(const Network& net) {
  std::vector<Violation> out;
  auto report = [&out](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  if (net.nodes.empty() || !InRange(net, net.hub)) {
    report("hub", "hub " + std::to_string(net.hub.value) + " is not a node");
    return out;
  }
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!net.nodes[i].name.empty() && net.nodes[i].name == net.nodes[j].name) {
        report("node-name", "duplicate node name '" + net.nodes[i].name + "'");
      }
    }
  }

  const auto& c = net.constants;
  if (c.parcels_per_truck <= 0) report("constants", "parcels_per_truck must be positive");
  if (!(c.truck_cost >= 0.0)) report("constants", "truck_cost must be non-negative");
  if (!(c.drone_cost >= 0.0)) report("constants", "drone_cost must be non-negative");
  if (!(c.nominal_total > 0.0)) report("constants", "beta must be positive");
  if (!(c.cost_cap > 0.0)) report("constants", "cost_cap must be positive");
  if (!(c.drone_speed_kmh > 0.0)) report("constants", "drone_speed_kmh must be positive");

  bool edges_ok = true;
  for (std::size_t i = 0; i < net.road_edges.size(); ++i) {
    const auto& e = net.road_edges[i];
    const std::string label = "road edge " + std::to_string(i);
    if (e.id.index() != i) report("edge-id", label + " has id " + std::to_string(e.id.value));
    if (!InRange(net, e.from) || !InRange(net, e.to)) {
      report("edge-endpoint", label + " references a missing node");
      edges_ok = false;
      continue;
    }
    const std::string where =
        label + " (" + NodeLabel(net, e.from) + "->" + NodeLabel(net, e.to) + ")";
    if (e.from == e.to) report("self-loop", where + " starts and ends at the same node");
    if (!(e.length_km > 0.0)) report("edge-length", where + " needs a positive length");
    if (e.lanes != 2 && e.lanes != 3) report("edge-lanes", where + " must have 2 or 3 lanes");
    if (!std::isfinite(e.nominal_flow) || e.nominal_flow < 0.0) {
      report("nominal-flow", where + " needs a finite non-negative nominal flow");
    }
    for (double w : e.plane.omega) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        report("latency-plane", where + " needs strictly positive latency weights");
        break;
      }
    }
  }

  std::vector<int> aerial_count(net.nodes.size(), 0);
  for (std::size_t i = 0; i < net.aerial_edges.size(); ++i) {
    const auto& e = net.aerial_edges[i];
    const std::string label = "aerial edge " + std::to_string(i);
    if (e.id.index() != i) report("edge-id", label + " has id " + std::to_string(e.id.value));
    if (!InRange(net, e.from) || !InRange(net, e.to)) {
      report("edge-endpoint", label + " references a missing node");
      continue;
    }
    if (e.from != net.hub) {
      report("aerial-origin", label + " departs " + NodeLabel(net, e.from) + " instead of the hub");
    }
    if (e.to == net.hub) report("self-loop", label + " lands at the hub");
    if (++aerial_count[e.to.index()] == 2) {
      report("aerial-duplicate", "more than one aerial edge reaches " + NodeLabel(net, e.to));
    }
    if (!(e.latency_hours > 0.0) || !std::isfinite(e.latency_hours)) {
      report("aerial-latency", label + " needs a positive latency");
    }
  }

  if (net.demand.size() != net.nodes.size()) {
    report("demand", "demand has " + std::to_string(net.demand.size()) + " entries for " +
                         std::to_string(net.nodes.size()) + " nodes");
    return out;
  }
  for (std::size_t v = 0; v < net.demand.size(); ++v) {
    if (!(net.demand[v] >= 0.0) || !std::isfinite(net.demand[v])) {
      report("demand", NodeLabel(net, NodeId{static_cast<int>(v)}) + " has invalid demand");
    }
  }
  if (net.demand[net.hub.index()] != 0.0) report("hub-demand", "the hub must not have demand");

  if (edges_ok) {
    const auto weak = WeaklyReachable(net);
    for (std::size_t v = 0; v < weak.size(); ++v) {
      if (!weak[v]) {
        report("road-disconnected",
               NodeLabel(net, NodeId{static_cast<int>(v)}) + " is not connected to the road graph");
      }
    }
    const auto reach = RoadReachable(net);
    for (std::size_t v = 0; v < reach.size(); ++v) {
      const NodeId id{static_cast<int>(v)};
      if (net.demand[v] > 0.0 && !reach[v] && !net.aerial_edge_to(id)) {
        report("unserved-node", NodeLabel(net, id) + " has demand but no road route or aerial edge");
      }
    }
  }
  return out;
}

FlowAssignment DeriveFlows(const Network& network, const PathSet& paths,
                           std::span<const double> path_flow) {
  if (path_flow.size() != paths.size()) {
    throw DomainError("expected " + std::to_string(paths.size()) + " path flows, got " +
                      std::to_string(path_flow.size()));
  }
  FlowAssignment out;
  out.path_flow.assign(path_flow.begin(), path_flow.end());
  out.edge_flow.assign(network.road_edges.size(), 0.0);
  out.truck_demand.assign(network.node_count(), 0.0);
  out.drone_demand.assign(network.node_count(), 0.0);
  out.drone_flow.assign(network.aerial_edges.size(), 0.0);

  const double m = network.constants.parcels_per_truck;
  for (const auto& p : paths.paths()) {
    const double f = path_flow[p.id.index()];
    if (!(f >= 0.0)) {
      throw DomainError("path " + std::to_string(p.id.value) + " has negative flow " +
                        std::to_string(f));
    }
    for (EdgeId e : p.edges) out.edge_flow[e.index()] += f;
    // Inflow minus outflow at v is exactly the flow of paths ending at v.
    out.truck_demand[p.destination.index()] += m * f;
  }

  for (std::size_t v = 0; v < network.node_count(); ++v) {
    const double d = network.demand[v];
    double drone = d - out.truck_demand[v];
    if (drone < 0.0) {
      if (drone < -kOverDeliveryTolerance * std::max(1.0, d)) {
        throw FeasibilityError("over-delivery at node " +
                               (network.nodes[v].name.empty() ? std::to_string(v)
                                                              : network.nodes[v].name) +
                               ": trucks deliver " + std::to_string(out.truck_demand[v]) +
                               " parcels/h against demand " + std::to_string(d));
      }
      drone = 0.0;
    }
    out.drone_demand[v] = drone;
  }
  for (const auto& e : network.aerial_edges) {
    out.drone_flow[e.id.index()] = out.drone_demand[e.to.index()];
  }
  return out;
}

double OperationalCost(const FlowAssignment& assignment, const Constants& constants) {
  const double truck_parcels =
      std::accumulate(assignment.truck_demand.begin(), assignment.truck_demand.end(), 0.0);
  const double drone_parcels =
      std::accumulate(assignment.drone_demand.begin(), assignment.drone_demand.end(), 0.0);
  return constants.truck_cost / constants.parcels_per_truck * truck_parcels +
         constants.drone_cost * drone_parcels;
}

}  // namespace bimodal
