#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "meshxfer/errors.hpp"
#include "meshxfer/generators.hpp"
#include "meshxfer/geodesic.hpp"

using namespace mxf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// O(V^3) all-pairs oracle.
std::vector<std::vector<double>> floyd_warshall(const EdgeGraph &graph) {
  const Index n = graph.num_vertices();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (Index v = 0; v < n; ++v)
    d[v][v] = 0.0;
  for (Index u = 0; u < n; ++u)
    for (const auto &nbr : graph.adjacency[u])
      d[u][nbr.vertex] = std::min(d[u][nbr.vertex], nbr.length);
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j])
          d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Brute-force 1-skeleton enumeration with duplicates merged.
std::size_t skeleton_edge_count(const Mesh &mesh) {
  std::set<std::pair<Index, Index>> edges;
  const int nvc = mesh.vertices_per_cell();
  for (const Cell &c : mesh.cells)
    for (int a = 0; a < nvc; ++a)
      for (int b = a + 1; b < nvc; ++b)
        edges.insert({std::min(c.v[a], c.v[b]), std::max(c.v[a], c.v[b])});
  return edges.size();
}

Mesh jittered_grid(Index n, unsigned seed) {
  Mesh mesh = generate_structured(2, 2, n);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const double h = 1.0 / static_cast<double>(n);
  for (Point &p : mesh.vertices)
    for (int a = 0; a < 2; ++a)
      p[a] += jitter(rng) * h;
  return mesh;
}

} // namespace

TEST_CASE("edge counts of simple meshes") {
  Mesh tri;
  tri.topo_dim = 2;
  tri.space_dim = 2;
  tri.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}};
  tri.cells = {Cell{{0, 1, 2, -1}}};
  CHECK(build_edge_graph(tri).num_edges() == 3);

  Mesh tet;
  tet.topo_dim = 3;
  tet.space_dim = 3;
  tet.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0},
                  Point{0, 0, 1}};
  tet.cells = {Cell{{0, 1, 2, 3}}};
  CHECK(build_edge_graph(tet).num_edges() == 6);

  const Mesh grid = generate_structured(2, 2, 2);
  const EdgeGraph graph = build_edge_graph(grid);
  CHECK(graph.num_edges() == skeleton_edge_count(grid));
  CHECK(graph.num_edges() == 16); // 6 + 6 axis edges + 4 diagonals
}

TEST_CASE("edge graph is symmetric with Euclidean lengths") {
  const Mesh mesh = jittered_grid(3, 21);
  const EdgeGraph graph = build_edge_graph(mesh);
  for (Index u = 0; u < graph.num_vertices(); ++u)
    for (const auto &nbr : graph.adjacency[u]) {
      CHECK(nbr.length ==
            distance(mesh.vertices[u], mesh.vertices[nbr.vertex]));
      bool mirrored = false;
      for (const auto &back : graph.adjacency[nbr.vertex])
        mirrored = mirrored || (back.vertex == u && back.length == nbr.length);
      CHECK(mirrored);
    }
}

TEST_CASE("interval mesh distances are exact") {
  const Mesh mesh = generate_structured(1, 1, 10);
  const EdgeGraph graph = build_edge_graph(mesh);
  const DistanceField field = geodesic_distances(graph, {0});
  CHECK(field.distances[10] == 1.0);
  CHECK(field.distances[0] == 0.0);

  const auto path = shortest_path(graph, 0, 10);
  REQUIRE(path.has_value());
  CHECK(path->length == 1.0);
  REQUIRE(path->vertices.size() == 11);
  for (Index i = 0; i <= 10; ++i)
    CHECK(path->vertices[i] == i);
}

TEST_CASE("all-source distances are zero") {
  const Mesh mesh = generate_structured(2, 2, 3);
  const EdgeGraph graph = build_edge_graph(mesh);
  std::vector<Index> all(mesh.vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = static_cast<Index>(i);
  const DistanceField field = geodesic_distances(graph, all);
  for (double d : field.distances)
    CHECK(d == 0.0);
}

TEST_CASE("empty sources are rejected") {
  const EdgeGraph graph = build_edge_graph(generate_structured(1, 1, 2));
  CHECK_THROWS_AS(geodesic_distances(graph, {}), ContractError);
  CHECK_THROWS_AS(geodesic_distances(graph, {99}), ContractError);
}

TEST_CASE("meshless cells are rejected") {
  Mesh empty;
  empty.topo_dim = 2;
  empty.space_dim = 2;
  empty.vertices = {Point{0, 0, 0}};
  CHECK_THROWS_AS(build_edge_graph(empty), ContractError);
}

TEST_CASE("Dijkstra equals Floyd-Warshall on 50 random meshes") {
  std::mt19937 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    Mesh mesh;
    const int kind = trial % 3;
    if (kind == 0) {
      mesh = generate_structured(1, 1, 2 + static_cast<Index>(rng() % 60));
    } else if (kind == 1) {
      mesh = jittered_grid(2 + static_cast<Index>(rng() % 9), rng());
    } else {
      mesh = generate_structured(3, 3, 1 + static_cast<Index>(rng() % 2));
    }
    REQUIRE(mesh.num_vertices() <= 200);

    const EdgeGraph graph = build_edge_graph(mesh);
    const auto oracle = floyd_warshall(graph);
    const Index source = static_cast<Index>(rng() % mesh.num_vertices());
    const DistanceField field = geodesic_distances(graph, {source});
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
      if (std::isinf(oracle[source][v]))
        CHECK(std::isinf(field.distances[v]));
      else
        CHECK(std::abs(field.distances[v] - oracle[source][v]) <= 1e-12);
    }
  }
}

TEST_CASE("metric axioms on a connected mesh") {
  const Mesh mesh = jittered_grid(4, 7);
  const EdgeGraph graph = build_edge_graph(mesh);
  const Index nv = mesh.num_vertices();

  std::vector<DistanceField> fields;
  for (Index v = 0; v < nv; ++v)
    fields.push_back(geodesic_distances(graph, {v}));

  std::mt19937 rng(13);
  for (int k = 0; k < 200; ++k) {
    const Index a = static_cast<Index>(rng() % nv);
    const Index b = static_cast<Index>(rng() % nv);
    const Index c = static_cast<Index>(rng() % nv);
    const double ab = fields[a].distances[b];
    const double ba = fields[b].distances[a];
    const double ac = fields[a].distances[c];
    const double bc = fields[b].distances[c];
    CHECK(std::abs(ab - ba) <= 1e-13); // symmetry
    CHECK(ac <= ab + bc + 1e-12);                             // triangle
    CHECK((ab == 0.0) == (a == b));                           // identity
    // Edge paths can never beat the straight line.
    CHECK(ab >= distance(mesh.vertices[a], mesh.vertices[b]) - 1e-13);
  }
}

TEST_CASE("shortest path endpoints and disconnection") {
  const Mesh mesh = generate_structured(2, 2, 3);
  const EdgeGraph graph = build_edge_graph(mesh);

  const auto self = shortest_path(graph, 5, 5);
  REQUIRE(self.has_value());
  CHECK(self->vertices == std::vector<Index>{5});
  CHECK(self->length == 0.0);

  // Two disjoint triangles.
  Mesh two;
  two.topo_dim = 2;
  two.space_dim = 2;
  two.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0},
                  Point{5, 5, 0}, Point{6, 5, 0}, Point{5, 6, 0}};
  two.cells = {Cell{{0, 1, 2, -1}}, Cell{{3, 4, 5, -1}}};
  const EdgeGraph split = build_edge_graph(two);
  CHECK_FALSE(shortest_path(split, 0, 3).has_value());
  CHECK(shortest_path(split, 3, 5).has_value());
}

TEST_CASE("path edges exist and lengths telescope") {
  const Mesh mesh = jittered_grid(5, 77);
  const EdgeGraph graph = build_edge_graph(mesh);
  std::mt19937 rng(8);
  for (int k = 0; k < 20; ++k) {
    const Index a = static_cast<Index>(rng() % mesh.num_vertices());
    const Index b = static_cast<Index>(rng() % mesh.num_vertices());
    const auto path = shortest_path(graph, a, b);
    REQUIRE(path.has_value());
    CHECK(path->vertices.front() == a);
    CHECK(path->vertices.back() == b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i) {
      const Index u = path->vertices[i];
      const Index v = path->vertices[i + 1];
      bool found = false;
      for (const auto &nbr : graph.adjacency[u])
        if (nbr.vertex == v) {
          total += nbr.length;
          found = true;
          break;
        }
      CHECK(found);
    }
    CHECK(std::abs(total - path->length) <= 1e-13);
  }
}

TEST_CASE("equal-length routes pick the smaller predecessor") {
  // Diamond: 0 -> {1, 2} -> 3 with identical edge lengths either way.
  Mesh diamond;
  diamond.topo_dim = 2;
  diamond.space_dim = 2;
  diamond.vertices = {Point{0, 0, 0}, Point{1, 1, 0}, Point{1, -1, 0},
                      Point{2, 0, 0}};
  diamond.cells = {Cell{{0, 1, 2, -1}}, Cell{{1, 2, 3, -1}}};
  const EdgeGraph graph = build_edge_graph(diamond);
  const DistanceField field = geodesic_distances(graph, {0});
  CHECK(field.predecessors[3] == 1); // not 2
  const auto path = shortest_path(graph, 0, 3);
  REQUIRE(path.has_value());
  CHECK(path->vertices == std::vector<Index>{0, 1, 3});
}

TEST_CASE("truncated distances match the untruncated run inside the radius") {
  const Mesh mesh = jittered_grid(6, 5);
  const EdgeGraph graph = build_edge_graph(mesh);
  const DistanceField full = geodesic_distances(graph, {0});
  const double radius = 0.45;
  const DistanceField cut = geodesic_distances(graph, {0}, radius);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (full.distances[v] <= radius)
      CHECK(cut.distances[v] == full.distances[v]);
    else
      CHECK(std::isinf(cut.distances[v]));
  }
}
