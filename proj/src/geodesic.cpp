#include "meshxfer/geodesic.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "meshxfer/errors.hpp"

namespace mxf {

std::size_t EdgeGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto &nbrs : adjacency)
    twice += nbrs.size();
  return twice / 2;
}

EdgeGraph build_edge_graph(const Mesh &mesh) {
  if (mesh.cells.empty())
    throw ContractError("build_edge_graph: mesh has no cells");

  const int nvc = mesh.vertices_per_cell();
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(mesh.cells.size() * nvc * (nvc - 1) / 2);
  for (const Cell &c : mesh.cells)
    for (int a = 0; a < nvc; ++a)
      for (int b = a + 1; b < nvc; ++b)
        pairs.emplace_back(std::min(c.v[a], c.v[b]),
                           std::max(c.v[a], c.v[b]));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  EdgeGraph graph;
  graph.adjacency.resize(mesh.vertices.size());
  for (const auto &[u, v] : pairs) {
    const double len = distance(mesh.vertices[u], mesh.vertices[v]);
    graph.adjacency[u].push_back({v, len});
    graph.adjacency[v].push_back({u, len});
  }
  return graph;
}

DistanceField geodesic_distances(const EdgeGraph &graph,
                                 const std::vector<Index> &sources,
                                 double max_distance) {
  if (sources.empty())
    throw ContractError("geodesic_distances: source set must not be empty");
  const Index nv = graph.num_vertices();
  for (Index s : sources)
    if (s < 0 || s >= nv)
      throw ContractError("geodesic_distances: source index " +
                          std::to_string(s) + " out of range");

  constexpr double inf = std::numeric_limits<double>::infinity();
  DistanceField field;
  field.distances.assign(nv, inf);
  field.predecessors.assign(nv, -1);

  // Binary heap with lazy deletion; (distance, vertex) orders pops so that
  // equal distances settle in ascending vertex order.
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (Index s : sources) {
    field.distances[s] = 0.0;
    heap.push({0.0, s});
  }

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > field.distances[u])
      continue; // stale entry
    if (d > max_distance)
      break;
    for (const EdgeGraph::Neighbor &nbr : graph.adjacency[u]) {
      const double nd = d + nbr.length;
      if (nd > max_distance)
        continue;
      if (nd < field.distances[nbr.vertex]) {
        field.distances[nbr.vertex] = nd;
        field.predecessors[nbr.vertex] = u;
        heap.push({nd, nbr.vertex});
      } else if (nd == field.distances[nbr.vertex] &&
                 (field.predecessors[nbr.vertex] < 0 ||
                  u < field.predecessors[nbr.vertex])) {
        // Deterministic paths: among equal-length routes keep the one
        // through the smaller predecessor.
        if (field.distances[nbr.vertex] > 0.0)
          field.predecessors[nbr.vertex] = u;
      }
    }
  }
  return field;
}

std::optional<ShortestPath> shortest_path(const EdgeGraph &graph, Index a,
                                          Index b) {
  const Index nv = graph.num_vertices();
  if (a < 0 || a >= nv || b < 0 || b >= nv)
    throw ContractError("shortest_path: vertex index out of range");

  const DistanceField field = geodesic_distances(graph, {a});
  if (std::isinf(field.distances[b]))
    return std::nullopt;

  ShortestPath path;
  path.length = field.distances[b];
  for (Index v = b; v != -1; v = field.predecessors[v])
    path.vertices.push_back(v);
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

} // namespace mxf
