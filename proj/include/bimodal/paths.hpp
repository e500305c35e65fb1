#pragma once

#include <cstddef>
#include <vector>

#include "bimodal/network.hpp"

namespace bimodal {

using PathId = Id<struct PathTag>;

/// Simple road path leaving the hub. `nodes` holds the visited node sequence
/// including the hub, so nodes.size() == edges.size() + 1.
struct Path {
  PathId id;
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;
  NodeId destination;
};

/// Single-edge drone route from the hub.
struct AerialPath {
  AerialEdgeId edge;
  NodeId destination;
  double latency_hours = 0.0;
};

inline constexpr std::size_t kDefaultMaxEdges = 8;
inline constexpr std::size_t kDefaultPathLimit = 1'000'000;

/// Candidate truck paths plus membership indexes. Path ids are positions in
/// `paths()` and double as QP variable indices.
class PathSet {
 public:
  PathSet() = default;
  PathSet(std::vector<Path> paths, std::size_t node_count, std::size_t edge_count);

  const std::vector<Path>& paths() const { return paths_; }
  std::size_t size() const { return paths_.size(); }
  const Path& operator[](PathId id) const { return paths_[id.index()]; }

  const std::vector<PathId>& ending_at(NodeId node) const { return by_destination_[node.index()]; }
  const std::vector<PathId>& through(EdgeId edge) const { return by_edge_[edge.index()]; }
  std::size_t node_count() const { return by_destination_.size(); }
  std::size_t edge_count() const { return by_edge_.size(); }

  /// Non-hub nodes with no truck path inside the edge cap.
  const std::vector<NodeId>& unreachable() const { return unreachable_; }
  void set_unreachable(std::vector<NodeId> nodes) { unreachable_ = std::move(nodes); }

 private:
  std::vector<Path> paths_;
  std::vector<std::vector<PathId>> by_destination_;
  std::vector<std::vector<PathId>> by_edge_;
  std::vector<NodeId> unreachable_;
};

/// All simple hub-rooted paths with at most `max_edges` edges, ordered
/// lexicographically by node sequence (ties between parallel edges broken by
/// edge id). Throws a domain error when max_edges is 0 or more than
/// `path_limit` paths exist.
PathSet EnumeratePaths(const Network& network, std::size_t max_edges = kDefaultMaxEdges,
                       std::size_t path_limit = kDefaultPathLimit);

/// One path per aerial edge, in aerial edge order.
std::vector<AerialPath> AerialPaths(const Network& network);

/// True when `path` starts at the hub, chains head to tail, never revisits a
/// node and ends at its destination.
bool IsWellFormed(const Network& network, const Path& path);

}  // namespace bimodal
