#include "meshxfer/generators.hpp"

#include <string>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

double line_coord(double lo, double hi, Index i, Index n) {
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n));
}

void generate_1d(Mesh &mesh, Index n, const Box &extent) {
  mesh.vertices.reserve(n + 1);
  for (Index i = 0; i <= n; ++i) {
    Point p;
    p[0] = line_coord(extent.lo[0], extent.hi[0], i, n);
    for (int a = 1; a < mesh.space_dim; ++a)
      p[a] = extent.lo[a];
    mesh.vertices.push_back(p);
  }
  for (Index i = 0; i < n; ++i)
    mesh.cells.push_back(Cell{{i, i + 1, -1, -1}});
  mesh.boundary_faces.push_back(Face{{0, -1, -1}, 1});
  mesh.boundary_faces.push_back(Face{{n, -1, -1}, 2});
}

void generate_2d(Mesh &mesh, Index n, const Box &extent) {
  const Index stride = n + 1;
  auto id = [stride](Index i, Index j) { return j * stride + i; };

  mesh.vertices.reserve(static_cast<std::size_t>(stride) * stride);
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i) {
      Point p;
      p[0] = line_coord(extent.lo[0], extent.hi[0], i, n);
      p[1] = line_coord(extent.lo[1], extent.hi[1], j, n);
      for (int a = 2; a < mesh.space_dim; ++a)
        p[a] = extent.lo[a];
      mesh.vertices.push_back(p);
    }

  mesh.cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Index v00 = id(i, j), v10 = id(i + 1, j);
      const Index v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      mesh.cells.push_back(Cell{{v00, v10, v11, -1}});
      mesh.cells.push_back(Cell{{v00, v11, v01, -1}});
    }

  for (Index j = 0; j < n; ++j) {
    mesh.boundary_faces.push_back(Face{{id(0, j), id(0, j + 1), -1}, 1});
    mesh.boundary_faces.push_back(Face{{id(n, j), id(n, j + 1), -1}, 2});
  }
  for (Index i = 0; i < n; ++i) {
    mesh.boundary_faces.push_back(Face{{id(i, 0), id(i + 1, 0), -1}, 3});
    mesh.boundary_faces.push_back(Face{{id(i, n), id(i + 1, n), -1}, 4});
  }
}

void generate_3d(Mesh &mesh, Index n, const Box &extent) {
  const Index stride = n + 1;
  auto id = [stride](Index i, Index j, Index k) {
    return (k * stride + j) * stride + i;
  };

  mesh.vertices.reserve(static_cast<std::size_t>(stride) * stride * stride);
  for (Index k = 0; k <= n; ++k)
    for (Index j = 0; j <= n; ++j)
      for (Index i = 0; i <= n; ++i) {
        Point p{line_coord(extent.lo[0], extent.hi[0], i, n),
                line_coord(extent.lo[1], extent.hi[1], j, n),
                line_coord(extent.lo[2], extent.hi[2], k, n)};
        mesh.vertices.push_back(p);
      }

  // Kuhn subdivision: one tetrahedron per axis permutation, walking from the
  // low corner to the high corner of each cube. Odd permutations produce a
  // negative volume, fixed by swapping the last two vertices.
  static const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                           {0, 2, 1},
                                                           {1, 0, 2},
                                                           {1, 2, 0},
                                                           {2, 0, 1},
                                                           {2, 1, 0}}};
  static const std::array<bool, 6> odd = {false, true, true, false, false,
                                          true};

  mesh.cells.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        const std::array<Index, 3> base = {i, j, k};
        for (int p = 0; p < 6; ++p) {
          std::array<Index, 3> at = base;
          Cell c;
          c.v[0] = id(at[0], at[1], at[2]);
          for (int step = 0; step < 3; ++step) {
            ++at[perms[p][step]];
            c.v[step + 1] = id(at[0], at[1], at[2]);
          }
          if (odd[p])
            std::swap(c.v[2], c.v[3]);
          mesh.cells.push_back(c);
        }
      }

  // Boundary: per cube side the Kuhn tetrahedra cut each square face
  // along its low-to-high diagonal.
  auto side_id = [&](int axis, Index fixed, Index u, Index v) {
    std::array<Index, 3> c{};
    c[axis] = fixed;
    const int b = axis == 0 ? 1 : 0;
    const int cdim = axis == 2 ? 1 : 2;
    c[b] = u;
    c[cdim] = v;
    return id(c[0], c[1], c[2]);
  };
  mesh.boundary_faces.reserve(12 * static_cast<std::size_t>(n) * n);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const Index fixed = side == 0 ? 0 : n;
      const int tag = 2 * axis + side + 1;
      for (Index v = 0; v < n; ++v)
        for (Index u = 0; u < n; ++u) {
          const Index q00 = side_id(axis, fixed, u, v);
          const Index q10 = side_id(axis, fixed, u + 1, v);
          const Index q01 = side_id(axis, fixed, u, v + 1);
          const Index q11 = side_id(axis, fixed, u + 1, v + 1);
          mesh.boundary_faces.push_back(Face{{q00, q10, q11}, tag});
          mesh.boundary_faces.push_back(Face{{q00, q11, q01}, tag});
        }
    }
}

} // namespace

Mesh generate_structured(int topo_dim, int space_dim, Index n,
                         const Box &extent) {
  if (n < 1)
    throw ContractError("generate_structured: n must be >= 1, got " +
                        std::to_string(n));
  if (topo_dim < 1 || topo_dim > 3 || space_dim < topo_dim || space_dim > 3)
    throw ContractError("generate_structured: invalid dimensions (" +
                        std::to_string(topo_dim) + ", " +
                        std::to_string(space_dim) + ")");
  for (int a = 0; a < topo_dim; ++a)
    if (!(extent.side(a) > 0.0))
      throw ContractError("generate_structured: extent side " +
                          std::to_string(a) + " must be positive");

  Mesh mesh;
  mesh.topo_dim = topo_dim;
  mesh.space_dim = space_dim;
  switch (topo_dim) {
  case 1:
    generate_1d(mesh, n, extent);
    break;
  case 2:
    generate_2d(mesh, n, extent);
    break;
  default:
    generate_3d(mesh, n, extent);
    break;
  }
  return mesh;
}

} // namespace mxf
