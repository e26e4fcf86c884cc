#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "meshxfer/geometry.hpp"

namespace mxf {

/// Simplex cell: topo_dim + 1 vertex indices, unused slots are -1.
struct Cell {
  std::array<Index, 4> v{-1, -1, -1, -1};
};

/// Boundary face: topo_dim vertex indices (facet of a cell) plus a tag.
struct Face {
  std::array<Index, 3> v{-1, -1, -1};
  int tag = 0;
};

/// Simplicial mesh with topological dimension 1, 2 or 3, embedded in a
/// space of dimension >= topo_dim. Immutable after construction.
struct Mesh {
  int topo_dim = 0;
  int space_dim = 0;
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<Face> boundary_faces;

  Index num_vertices() const { return static_cast<Index>(vertices.size()); }
  Index num_cells() const { return static_cast<Index>(cells.size()); }
  int vertices_per_cell() const { return topo_dim + 1; }
  int vertices_per_face() const { return topo_dim; }

  Box bounding_box() const;
};

/// Named vertex-collocated field: values.size() == num_vertices * components,
/// laid out vertex-major.
struct Field {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

struct MeshSummary {
  Index vertex_count = 0;
  Index cell_count = 0;
  Box bbox;
  std::map<int, Index> faces_per_tag;
};

/// Signed measure of a cell: length, area (2D coordinates) or volume.
/// Surface triangles in 3D get their unsigned area.
double cell_measure(const Mesh &mesh, const Cell &cell);

/// Arithmetic mean of the cell's vertices.
Point cell_barycenter(const Mesh &mesh, const Cell &cell);

/// Reorients cells in place so volumes/areas are positive where a sign is
/// defined (tetrahedra; triangles with space_dim == 2).
void fix_orientation(Mesh &mesh);

/// Facets incident to exactly one cell, tag 0. Replaces boundary_faces.
void compute_boundary_faces(Mesh &mesh);

/// Exact counts and bounding box.
MeshSummary mesh_info(const Mesh &mesh);

/// Extracts the boundary faces carrying any of the given tags as a mesh of
/// one dimension less. The returned vertex_map sends surface vertex indices
/// to indices of the input mesh.
struct BoundaryExtraction {
  Mesh mesh;
  std::vector<Index> vertex_map;
};
BoundaryExtraction extract_boundary(const Mesh &mesh,
                                    const std::vector<int> &tags);

/// Vertex indices lying on boundary faces with any of the given tags,
/// ascending, deduplicated. Empty tag list selects every boundary face.
std::vector<Index> boundary_vertices(const Mesh &mesh,
                                     const std::vector<int> &tags);

/// Validates the full set of mesh invariants (index ranges, positive
/// measures, facet incidence of boundary faces). Intended for file input
/// and tests; throws ContractError / GeometryError on violation.
void check_mesh(const Mesh &mesh);

} // namespace mxf
