#include "meshxfer/fem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

constexpr double kCgRelTol = 1e-12;

// Constant P1 gradients on one simplex, in a frame of topo_dim coordinates.
// Returns the cell measure; gradients are rows of grad (one per vertex).
double element_gradients(const Mesh &mesh, const Cell &cell,
                         double grad[4][3], int &frame_dim) {
  const int d = mesh.topo_dim;
  frame_dim = d;
  const Point &p0 = mesh.vertices[cell.v[0]];

  // Local coordinates of the edge vectors. Volume cells use the ambient
  // axes; surface triangles use an orthonormal tangent frame.
  double e[3][3] = {};
  if (d == 2 && mesh.space_dim == 3) {
    const Point e1 = mesh.vertices[cell.v[1]] - p0;
    const Point e2 = mesh.vertices[cell.v[2]] - p0;
    const double l1 = norm(e1);
    if (l1 == 0.0)
      return 0.0;
    const Point u = (1.0 / l1) * e1;
    Point w = e2 - dot(e2, u) * u;
    const double lw = norm(w);
    if (lw == 0.0)
      return 0.0;
    w = (1.0 / lw) * w;
    e[0][0] = l1;
    e[0][1] = 0.0;
    e[1][0] = dot(e2, u);
    e[1][1] = dot(e2, w);
  } else {
    for (int k = 0; k < d; ++k) {
      const Point ek = mesh.vertices[cell.v[k + 1]] - p0;
      for (int a = 0; a < d; ++a)
        e[k][a] = ek[a];
    }
  }

  // Invert the (d x d) Jacobian; rows of the inverse transpose are the
  // gradients of the barycentric coordinates 1..d.
  double inv[3][3] = {};
  double measure = 0.0;
  if (d == 1) {
    const double det = e[0][0];
    measure = det;
    if (det == 0.0)
      return 0.0;
    inv[0][0] = 1.0 / det;
  } else if (d == 2) {
    const double det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    measure = 0.5 * det;
    if (det == 0.0)
      return 0.0;
    inv[0][0] = e[1][1] / det;
    inv[0][1] = -e[1][0] / det;
    inv[1][0] = -e[0][1] / det;
    inv[1][1] = e[0][0] / det;
  } else {
    const double det =
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
        e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
        e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    measure = det / 6.0;
    if (det == 0.0)
      return 0.0;
    const double c00 = e[1][1] * e[2][2] - e[1][2] * e[2][1];
    const double c01 = -(e[1][0] * e[2][2] - e[1][2] * e[2][0]);
    const double c02 = e[1][0] * e[2][1] - e[1][1] * e[2][0];
    const double c10 = -(e[0][1] * e[2][2] - e[0][2] * e[2][1]);
    const double c11 = e[0][0] * e[2][2] - e[0][2] * e[2][0];
    const double c12 = -(e[0][0] * e[2][1] - e[0][1] * e[2][0]);
    const double c20 = e[0][1] * e[1][2] - e[0][2] * e[1][1];
    const double c21 = -(e[0][0] * e[1][2] - e[0][2] * e[1][0]);
    const double c22 = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    // inverse = adjugate / det; we need rows of inverse^T = columns of
    // inverse, i.e. the cofactor rows directly.
    inv[0][0] = c00 / det;
    inv[0][1] = c01 / det;
    inv[0][2] = c02 / det;
    inv[1][0] = c10 / det;
    inv[1][1] = c11 / det;
    inv[1][2] = c12 / det;
    inv[2][0] = c20 / det;
    inv[2][1] = c21 / det;
    inv[2][2] = c22 / det;
  }

  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 3; ++a)
      grad[k][a] = 0.0;
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a) {
      grad[k + 1][a] = inv[k][a];
      grad[0][a] -= inv[k][a];
    }
  return measure;
}

} // namespace

SparseMatrix assemble_stiffness(const Mesh &mesh) {
  const int nvc = mesh.vertices_per_cell();
  const double scale = mesh.bounding_box().diagonal();
  double min_measure = 1e-14;
  for (int k = 0; k < mesh.topo_dim; ++k)
    min_measure *= scale;

  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(mesh.cells.size() * nvc * nvc);

  for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
    const Cell &cell = mesh.cells[ci];
    double grad[4][3];
    int frame_dim = 0;
    const double measure = element_gradients(mesh, cell, grad, frame_dim);
    if (std::abs(measure) < min_measure)
      throw GeometryError("assemble_stiffness: cell " + std::to_string(ci) +
                          " is degenerate (measure " +
                          std::to_string(measure) + ")");

    for (int i = 0; i < nvc; ++i)
      for (int j = i; j < nvc; ++j) {
        double g = 0.0;
        for (int a = 0; a < frame_dim; ++a)
          g += grad[i][a] * grad[j][a];
        const double k_ij = std::abs(measure) * g;
        triplets.push_back({cell.v[i], cell.v[j], k_ij});
        if (i != j)
          triplets.push_back({cell.v[j], cell.v[i], k_ij});
      }
  }
  return SparseMatrix::from_triplets(mesh.num_vertices(),
                                     std::move(triplets));
}

LaplaceSolution solve_laplace(const Mesh &mesh, const DirichletBC &bc) {
  if (bc.entries.empty())
    throw ContractError("solve_laplace: Dirichlet data must not be empty "
                        "(pure Neumann problems are singular)");
  const Index nv = mesh.num_vertices();
  std::vector<char> constrained(nv, 0);
  std::vector<double> bc_value(nv, 0.0);
  for (const DirichletBC::Entry &e : bc.entries) {
    if (e.vertex < 0 || e.vertex >= nv)
      throw ContractError("solve_laplace: BC vertex index out of range");
    if (constrained[e.vertex])
      throw ContractError("solve_laplace: duplicate BC vertex " +
                          std::to_string(e.vertex));
    constrained[e.vertex] = 1;
    bc_value[e.vertex] = e.value;
  }

  SparseMatrix A = assemble_stiffness(mesh);

  // Symmetric Dirichlet elimination: move known columns to the right-hand
  // side, then identity rows/columns on constrained vertices.
  std::vector<double> rhs(nv, 0.0);
  for (Index r = 0; r < nv; ++r) {
    for (std::size_t k = A.row_begin(r); k < A.row_end(r); ++k) {
      const Index c = A.col_at(k);
      if (constrained[r] || !constrained[c])
        continue;
      rhs[r] -= A.value_at(k) * bc_value[c];
    }
  }
  for (Index r = 0; r < nv; ++r) {
    for (std::size_t k = A.row_begin(r); k < A.row_end(r); ++k) {
      const Index c = A.col_at(k);
      if (!constrained[r] && !constrained[c])
        continue;
      A.set_entry_at(k, (r == c) ? 1.0 : 0.0);
    }
    if (constrained[r])
      rhs[r] = bc_value[r];
  }

  LaplaceSolution sol;
  std::vector<double> x = bc_value; // exact on constrained rows
  const CgResult res = jacobi_cg(A, rhs, x, kCgRelTol,
                                 10 * std::max<Index>(nv, 1));
  sol.iterations = res.iterations;
  sol.residual = res.residual;

  for (Index v = 0; v < nv; ++v)
    if (constrained[v])
      x[v] = bc_value[v];

  sol.field.name = "u";
  sol.field.components = 1;
  sol.field.values = std::move(x);
  return sol;
}

SurfaceVolumeCoupling couple_surface_volume(
    const Mesh &volume, const std::vector<int> &patch_tags,
    const std::function<double(const Point &)> &perimeter_value,
    const std::function<double(const Point &)> &other_boundary_value) {
  SurfaceVolumeCoupling out;

  BoundaryExtraction extraction = extract_boundary(volume, patch_tags);
  out.surface = std::move(extraction.mesh);
  out.vertex_map = std::move(extraction.vertex_map);

  // Perimeter of the patch: boundary vertices of the extracted surface.
  const std::vector<Index> perimeter = boundary_vertices(out.surface, {});
  if (perimeter.empty())
    throw ContractError(
        "couple_surface_volume: the selected patch has no perimeter (closed "
        "surface)");
  DirichletBC surface_bc;
  for (Index v : perimeter)
    surface_bc.entries.push_back({v, perimeter_value(out.surface.vertices[v])});

  const LaplaceSolution surface_sol = solve_laplace(out.surface, surface_bc);
  out.surface_field = surface_sol.field;
  out.surface_field.name = "u_surface";

  // Map the patch onto the volume boundary and carry the surface solution
  // across as Dirichlet data.
  out.map = compute_interface_map(out.surface, {}, volume, patch_tags);
  const std::vector<Index> patch_volume_vertices =
      boundary_vertices(volume, patch_tags);
  const InterfaceValues carried = transfer_across_interface(
      out.map, out.surface_field.values, 1, patch_volume_vertices);

  DirichletBC volume_bc;
  std::set<Index> patch_set(patch_volume_vertices.begin(),
                            patch_volume_vertices.end());
  for (Index v : boundary_vertices(volume, {}))
    if (patch_set.count(v) == 0)
      volume_bc.entries.push_back({v, other_boundary_value(volume.vertices[v])});
  for (std::size_t i = 0; i < carried.b_vertices.size(); ++i)
    volume_bc.entries.push_back({carried.b_vertices[i], carried.values[i]});

  const LaplaceSolution volume_sol = solve_laplace(volume, volume_bc);
  out.volume_field = volume_sol.field;
  out.volume_field.name = "u_volume";
  return out;
}

double lumped_l2_norm(const Mesh &mesh, std::span<const double> values) {
  if (values.size() != mesh.vertices.size())
    throw ContractError("lumped_l2_norm: value count mismatch");
  const int nvc = mesh.vertices_per_cell();
  double sum = 0.0;
  for (const Cell &c : mesh.cells) {
    const double m = std::abs(cell_measure(mesh, c)) / nvc;
    for (int k = 0; k < nvc; ++k)
      sum += m * values[c.v[k]] * values[c.v[k]];
  }
  return std::sqrt(sum);
}

} // namespace mxf
