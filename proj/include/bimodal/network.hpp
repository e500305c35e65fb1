#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bimodal/latency.hpp"

namespace bimodal {

/// Dense integer handle. Each tag gets its own type so node and edge
/// indices cannot be mixed up.
template <class Tag>
struct Id {
  int value = -1;

  constexpr std::size_t index() const { return static_cast<std::size_t>(value); }
  constexpr auto operator<=>(const Id&) const = default;
};

using NodeId = Id<struct NodeTag>;
using EdgeId = Id<struct RoadEdgeTag>;
using AerialEdgeId = Id<struct AerialEdgeTag>;

struct Point {
  double x_km = 0.0;
  double y_km = 0.0;
  bool operator==(const Point&) const = default;
};

struct Node {
  std::string name;
  std::optional<Point> position;
  bool operator==(const Node&) const = default;
};

struct RoadEdge {
  EdgeId id;
  NodeId from;
  NodeId to;
  double length_km = 0.0;
  int lanes = 2;
  double nominal_flow = 0.0;  // vehicles/hour
  LatencyPlane plane;
  bool operator==(const RoadEdge&) const = default;
};

struct AerialEdge {
  AerialEdgeId id;
  NodeId from;
  NodeId to;
  double latency_hours = 0.0;
  bool operator==(const AerialEdge&) const = default;
};

struct Constants {
  int parcels_per_truck = 125;
  double truck_cost = 30.0;     // $/hour per truck
  double drone_cost = 0.5;      // $/hour per drone
  double nominal_total = 14000.0;  // beta, vehicles/hour
  double cost_cap = 1e9;        // $/hour
  double drone_speed_kmh = 25.0;
  bool operator==(const Constants&) const = default;
};

/// Road digraph plus aerial star sharing one node set. Immutable once built;
/// every operation takes it by const reference.
struct Network {
  std::string name;
  std::vector<Node> nodes;
  NodeId hub{0};
  std::vector<RoadEdge> road_edges;
  std::vector<AerialEdge> aerial_edges;
  std::vector<double> demand;  // parcels/hour, indexed by node
  Constants constants;

  std::size_t node_count() const { return nodes.size(); }
  double total_demand() const;
  /// Aerial edge serving `node`, if any.
  std::optional<AerialEdgeId> aerial_edge_to(NodeId node) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  /// Outgoing road edge ids per node, sorted by (head node, edge id).
  std::vector<std::vector<EdgeId>> outgoing_edges() const;

  bool operator==(const Network&) const = default;
};

struct Violation {
  std::string code;    // e.g. "aerial-origin"
  std::string detail;  // names the offending element
};

/// Structural checks. An empty result means the network is usable.
std::vector<Violation> Validate(const Network& network);

class PathSet;

/// Truck path flows plus every quantity derived from them.
struct FlowAssignment {
  std::vector<double> path_flow;     // trucks/hour per path (decision variable)
  std::vector<double> edge_flow;     // trucks/hour per road edge
  std::vector<double> truck_demand;  // parcels/hour per node delivered by truck
  std::vector<double> drone_demand;  // parcels/hour per node delivered by drone
  std::vector<double> drone_flow;    // drones/hour per aerial edge
};

/// Absolute slack, scaled by max(1, demand), allowed before a node counts as
/// over-delivered.
inline constexpr double kOverDeliveryTolerance = 1e-9;

/// Aggregates path flows onto edges and splits each node's demand between
/// trucks and drones. Throws a domain error on negative or mis-sized flows
/// and an "over-delivery" feasibility error when trucks bring more parcels
/// than a node demands.
FlowAssignment DeriveFlows(const Network& network, const PathSet& paths,
                           std::span<const double> path_flow);

/// Hourly fleet cost in dollars.
double OperationalCost(const FlowAssignment& assignment, const Constants& constants);

}  // namespace bimodal
