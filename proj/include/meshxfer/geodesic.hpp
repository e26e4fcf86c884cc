#pragma once

#include <optional>
#include <vector>

#include "meshxfer/mesh.hpp"

namespace mxf {

/// Undirected vertex-edge graph of a mesh, edges weighted by Euclidean
/// length. Immutable after build; distance computations on a shared graph
/// may run concurrently.
struct EdgeGraph {
  struct Neighbor {
    Index vertex;
    double length;
  };
  std::vector<std::vector<Neighbor>> adjacency;

  Index num_vertices() const { return static_cast<Index>(adjacency.size()); }
  std::size_t num_edges() const;
};

/// The 1-skeleton of the mesh cells: every vertex pair of every simplex,
/// duplicates merged.
EdgeGraph build_edge_graph(const Mesh &mesh);

/// Distances from the nearest source along graph edges; +infinity where
/// unreachable, predecessors tracing a shortest edge path back to a source.
struct DistanceField {
  std::vector<double> distances;
  std::vector<Index> predecessors; // -1 for sources and unreachable vertices
};

/// Multi-source Dijkstra. Vertices whose distance would exceed max_distance
/// are left at +infinity when max_distance is finite. Equal-length paths are
/// resolved towards the smaller predecessor index.
DistanceField geodesic_distances(
    const EdgeGraph &graph, const std::vector<Index> &sources,
    double max_distance = std::numeric_limits<double>::infinity());

struct ShortestPath {
  std::vector<Index> vertices; // from a to b inclusive
  double length = 0.0;
};

/// Shortest edge path between two vertices; empty optional when they are
/// not connected.
std::optional<ShortestPath> shortest_path(const EdgeGraph &graph, Index a,
                                          Index b);

} // namespace mxf
