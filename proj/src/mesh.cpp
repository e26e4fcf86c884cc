#include "meshxfer/mesh.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "meshxfer/errors.hpp"

namespace mxf {

Box Mesh::bounding_box() const {
  Box box{vertices.empty() ? Point{} : vertices.front(),
          vertices.empty() ? Point{} : vertices.front()};
  for (const Point &p : vertices)
    box.expand(p);
  return box;
}

double cell_measure(const Mesh &mesh, const Cell &cell) {
  const auto &vs = mesh.vertices;
  switch (mesh.topo_dim) {
  case 1:
    return distance(vs[cell.v[0]], vs[cell.v[1]]);
  case 2: {
    const Point e1 = vs[cell.v[1]] - vs[cell.v[0]];
    const Point e2 = vs[cell.v[2]] - vs[cell.v[0]];
    if (mesh.space_dim == 2)
      return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]); // signed
    return 0.5 * norm(cross(e1, e2));
  }
  case 3: {
    const Point e1 = vs[cell.v[1]] - vs[cell.v[0]];
    const Point e2 = vs[cell.v[2]] - vs[cell.v[0]];
    const Point e3 = vs[cell.v[3]] - vs[cell.v[0]];
    return dot(e1, cross(e2, e3)) / 6.0; // signed
  }
  default:
    throw ContractError("cell_measure: invalid topo_dim " +
                        std::to_string(mesh.topo_dim));
  }
}

Point cell_barycenter(const Mesh &mesh, const Cell &cell) {
  Point b;
  const int nv = mesh.vertices_per_cell();
  for (int k = 0; k < nv; ++k) {
    const Point &p = mesh.vertices[cell.v[k]];
    for (std::size_t a = 0; a < 3; ++a)
      b[a] += p[a];
  }
  for (std::size_t a = 0; a < 3; ++a)
    b[a] /= nv;
  return b;
}

void fix_orientation(Mesh &mesh) {
  if (mesh.topo_dim == 3) {
    for (Cell &c : mesh.cells)
      if (cell_measure(mesh, c) < 0.0)
        std::swap(c.v[2], c.v[3]);
  } else if (mesh.topo_dim == 2 && mesh.space_dim == 2) {
    for (Cell &c : mesh.cells)
      if (cell_measure(mesh, c) < 0.0)
        std::swap(c.v[1], c.v[2]);
  }
}

namespace {

// One facet of a cell with a sort key of its sorted vertex indices.
struct FacetEntry {
  std::array<Index, 3> key{-1, -1, -1};
  std::array<Index, 3> stored{-1, -1, -1};

  friend bool operator<(const FacetEntry &a, const FacetEntry &b) {
    return a.key < b.key;
  }
  friend bool operator==(const FacetEntry &a, const FacetEntry &b) {
    return a.key == b.key;
  }
};

std::vector<FacetEntry> all_facets(const Mesh &mesh) {
  const int nvc = mesh.vertices_per_cell();
  const int nvf = mesh.vertices_per_face();
  std::vector<FacetEntry> facets;
  facets.reserve(mesh.cells.size() * static_cast<std::size_t>(nvc));
  for (const Cell &c : mesh.cells) {
    for (int skip = 0; skip < nvc; ++skip) {
      FacetEntry f;
      int out = 0;
      for (int k = 0; k < nvc; ++k)
        if (k != skip)
          f.stored[out++] = c.v[k];
      f.key = f.stored;
      std::sort(f.key.begin(), f.key.begin() + nvf);
      facets.push_back(f);
    }
  }
  return facets;
}

} // namespace

void compute_boundary_faces(Mesh &mesh) {
  std::vector<FacetEntry> facets = all_facets(mesh);
  std::sort(facets.begin(), facets.end());
  mesh.boundary_faces.clear();
  for (std::size_t i = 0; i < facets.size();) {
    std::size_t j = i + 1;
    while (j < facets.size() && facets[j] == facets[i])
      ++j;
    if (j - i == 1) {
      Face face;
      face.v = facets[i].stored;
      face.tag = 0;
      mesh.boundary_faces.push_back(face);
    }
    i = j;
  }
}

MeshSummary mesh_info(const Mesh &mesh) {
  MeshSummary s;
  s.vertex_count = mesh.num_vertices();
  s.cell_count = mesh.num_cells();
  s.bbox = mesh.bounding_box();
  for (const Face &f : mesh.boundary_faces)
    ++s.faces_per_tag[f.tag];
  return s;
}

std::vector<Index> boundary_vertices(const Mesh &mesh,
                                     const std::vector<int> &tags) {
  const std::set<int> wanted(tags.begin(), tags.end());
  std::vector<Index> verts;
  for (const Face &f : mesh.boundary_faces) {
    if (!wanted.empty() && wanted.count(f.tag) == 0)
      continue;
    for (int k = 0; k < mesh.vertices_per_face(); ++k)
      verts.push_back(f.v[k]);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

BoundaryExtraction extract_boundary(const Mesh &mesh,
                                    const std::vector<int> &tags) {
  if (mesh.topo_dim < 2)
    throw ContractError("extract_boundary: requires topo_dim >= 2");
  if (tags.empty())
    throw ContractError("extract_boundary: tag set must not be empty");
  const std::set<int> wanted(tags.begin(), tags.end());

  BoundaryExtraction out;
  out.mesh.topo_dim = mesh.topo_dim - 1;
  out.mesh.space_dim = mesh.space_dim;

  std::vector<Index> to_surface(mesh.vertices.size(), -1);
  const int nvf = mesh.vertices_per_face();
  for (const Face &f : mesh.boundary_faces) {
    if (wanted.count(f.tag) == 0)
      continue;
    Cell c;
    for (int k = 0; k < nvf; ++k) {
      const Index vol = f.v[k];
      if (to_surface[vol] < 0) {
        to_surface[vol] = static_cast<Index>(out.vertex_map.size());
        out.vertex_map.push_back(vol);
        out.mesh.vertices.push_back(mesh.vertices[vol]);
      }
      c.v[k] = to_surface[vol];
    }
    out.mesh.cells.push_back(c);
  }
  if (out.mesh.cells.empty()) {
    std::ostringstream oss;
    oss << "extract_boundary: no boundary face carries any requested tag {";
    for (std::size_t i = 0; i < tags.size(); ++i)
      oss << (i ? ", " : "") << tags[i];
    oss << "}";
    throw EmptySelectionError(oss.str());
  }
  compute_boundary_faces(out.mesh);
  return out;
}

void check_mesh(const Mesh &mesh) {
  if (mesh.topo_dim < 1 || mesh.topo_dim > 3)
    throw ContractError("check_mesh: topo_dim must be 1, 2 or 3");
  if (mesh.space_dim < mesh.topo_dim || mesh.space_dim > 3)
    throw ContractError("check_mesh: space_dim must be in [topo_dim, 3]");

  const Index nv = mesh.num_vertices();
  const int nvc = mesh.vertices_per_cell();
  for (const Point &p : mesh.vertices) {
    for (std::size_t a = 0; a < 3; ++a)
      if (!std::isfinite(p[a]))
        throw ContractError("check_mesh: non-finite vertex coordinate");
    for (std::size_t a = mesh.space_dim; a < 3; ++a)
      if (p[a] != 0.0)
        throw ContractError(
            "check_mesh: coordinate beyond space_dim must be exactly 0");
  }

  const Box bbox = mesh.bounding_box();
  const double scale = std::max(bbox.diagonal(), 1e-300);
  double min_measure = 1.0;
  for (int d = 0; d < mesh.topo_dim; ++d)
    min_measure *= scale;
  min_measure *= 1e-14;

  for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
    const Cell &c = mesh.cells[ci];
    for (int k = 0; k < nvc; ++k) {
      if (c.v[k] < 0 || c.v[k] >= nv)
        throw ContractError("check_mesh: cell " + std::to_string(ci) +
                            " has vertex index out of range");
      for (int l = k + 1; l < nvc; ++l)
        if (c.v[k] == c.v[l])
          throw ContractError("check_mesh: cell " + std::to_string(ci) +
                              " repeats a vertex");
    }
    const double m = cell_measure(mesh, c);
    const bool signed_measure =
        mesh.topo_dim == 3 || (mesh.topo_dim == 2 && mesh.space_dim == 2);
    if ((signed_measure && m <= 0.0) || std::abs(m) < min_measure)
      throw GeometryError("check_mesh: cell " + std::to_string(ci) +
                          " is degenerate or negatively oriented");
  }

  // Every boundary face must be a facet of exactly one cell.
  std::vector<FacetEntry> facets = all_facets(mesh);
  std::sort(facets.begin(), facets.end());
  const int nvf = mesh.vertices_per_face();
  for (std::size_t fi = 0; fi < mesh.boundary_faces.size(); ++fi) {
    const Face &f = mesh.boundary_faces[fi];
    FacetEntry probe;
    probe.key = f.v;
    std::sort(probe.key.begin(), probe.key.begin() + nvf);
    const auto range = std::equal_range(facets.begin(), facets.end(), probe);
    if (range.second - range.first != 1)
      throw ContractError("check_mesh: boundary face " + std::to_string(fi) +
                          " is not a facet of exactly one cell");
  }
}

} // namespace mxf
