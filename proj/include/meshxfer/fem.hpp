#pragma once

#include <functional>
#include <span>
#include <vector>

#include "meshxfer/interface_map.hpp"
#include "meshxfer/mesh.hpp"
#include "meshxfer/sparse.hpp"

namespace mxf {

/// Dirichlet data by vertex; indices unique.
struct DirichletBC {
  struct Entry {
    Index vertex;
    double value;
  };
  std::vector<Entry> entries;
};

/// P1 stiffness matrix, quadrature-free (constant gradients per simplex).
/// Surface triangles in 3D are assembled in their tangent frame, which is
/// the Laplace-Beltrami operator for P1. Degenerate cells (measure below
/// 1e-14 of the bounding-box scale) are a geometry error.
SparseMatrix assemble_stiffness(const Mesh &mesh);

struct LaplaceSolution {
  Field field;          // solution values, one per vertex
  int iterations = 0;
  double residual = 0.0;
};

/// Solves -lap u = 0 with the given Dirichlet data (symmetric elimination,
/// Jacobi-CG to relative residual 1e-12). BC values appear exactly in the
/// returned field.
LaplaceSolution solve_laplace(const Mesh &mesh, const DirichletBC &bc);

struct SurfaceVolumeCoupling {
  Mesh surface;                 // boundary patch extracted from the volume
  std::vector<Index> vertex_map; // surface -> volume vertex indices
  InterfaceMap map;             // computed surface-to-volume interface map
  Field surface_field;
  Field volume_field;
};

/// The two-step pipeline of the surface/volume coupling demo: solve a
/// Laplace-Beltrami problem on the boundary patch selected by patch_tags
/// (Dirichlet data on the patch perimeter from perimeter_value), map the
/// patch onto the volume boundary, then solve the volume Laplace problem
/// with the surface solution as Dirichlet data on the patch and
/// other_boundary_value elsewhere on the boundary.
SurfaceVolumeCoupling couple_surface_volume(
    const Mesh &volume, const std::vector<int> &patch_tags,
    const std::function<double(const Point &)> &perimeter_value,
    const std::function<double(const Point &)> &other_boundary_value =
        [](const Point &) { return 0.0; });

/// Lumped (vertex-quadrature) L2 norm of a vertex field.
double lumped_l2_norm(const Mesh &mesh, std::span<const double> values);

} // namespace mxf
