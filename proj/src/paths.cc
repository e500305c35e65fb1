#include "bimodal/paths.hpp"

#include <string>

#include "bimodal/error.hpp"

namespace bimodal {

PathSet::PathSet(std::vector<Path> paths, std::size_t node_count, std::size_t edge_count)
    : paths_(std::move(paths)), by_destination_(node_count), by_edge_(edge_count) {
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    auto& p = paths_[i];
    p.id = PathId{static_cast<int>(i)};
    by_destination_[p.destination.index()].push_back(p.id);
    for (EdgeId e : p.edges) by_edge_[e.index()].push_back(p.id);
  }
}

namespace {

class Enumerator {
 public:
  Enumerator(const Network& network, std::size_t max_edges, std::size_t limit)
      : net_(network),
        out_(network.outgoing_edges()),
        on_path_(network.node_count(), false),
        max_edges_(max_edges),
        limit_(limit) {}

  std::vector<Path> Run() {
    nodes_.push_back(net_.hub);
    on_path_[net_.hub.index()] = true;
    Extend(net_.hub);
    return std::move(found_);
  }

 private:
  // Pre-order emission over head-sorted adjacency yields lexicographic order.
  void Extend(NodeId tail) {
    for (EdgeId e : out_[tail.index()]) {
      const NodeId head = net_.road_edges[e.index()].to;
      if (on_path_[head.index()]) continue;
      edges_.push_back(e);
      nodes_.push_back(head);
      if (found_.size() == limit_) {
        throw DomainError("path enumeration exceeded the limit of " + std::to_string(limit_) +
                          " paths; lower --max-edges");
      }
      found_.push_back(Path{PathId{}, edges_, nodes_, head});
      if (edges_.size() < max_edges_) {
        on_path_[head.index()] = true;
        Extend(head);
        on_path_[head.index()] = false;
      }
      edges_.pop_back();
      nodes_.pop_back();
    }
  }

  const Network& net_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<bool> on_path_;
  std::vector<EdgeId> edges_;
  std::vector<NodeId> nodes_;
  std::vector<Path> found_;
  std::size_t max_edges_;
  std::size_t limit_;
};

}  // namespace

PathSet EnumeratePaths(const Network& network, std::size_t max_edges, std::size_t path_limit) {
  if (max_edges == 0) throw DomainError("max_edges must be at least 1");
  if (network.hub.value < 0 || network.hub.index() >= network.node_count()) {
    throw DomainError("hub is not a node of the network");
  }
  PathSet set(Enumerator(network, max_edges, path_limit).Run(), network.node_count(),
              network.road_edges.size());

  std::vector<NodeId> unreachable;
  for (std::size_t v = 0; v < network.node_count(); ++v) {
    const NodeId id{static_cast<int>(v)};
    if (id != network.hub && set.ending_at(id).empty()) unreachable.push_back(id);
  }
  set.set_unreachable(std::move(unreachable));
  return set;
}

std::vector<AerialPath> AerialPaths(const Network& network) {
  std::vector<AerialPath> out;
  out.reserve(network.aerial_edges.size());
  for (const auto& e : network.aerial_edges) out.push_back({e.id, e.to, e.latency_hours});
  return out;
}

bool IsWellFormed(const Network& network, const Path& path) {
  if (path.edges.empty() || path.nodes.size() != path.edges.size() + 1) return false;
  if (path.nodes.front() != network.hub || path.nodes.back() != path.destination) return false;
  std::vector<bool> seen(network.node_count(), false);
  for (NodeId v : path.nodes) {
    if (v.value < 0 || v.index() >= network.node_count() || seen[v.index()]) return false;
    seen[v.index()] = true;
  }
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const EdgeId e = path.edges[i];
    if (e.value < 0 || e.index() >= network.road_edges.size()) return false;
    const auto& edge = network.road_edges[e.index()];
    if (edge.from != path.nodes[i] || edge.to != path.nodes[i + 1]) return false;
  }
  return true;
}

}  // namespace bimodal
