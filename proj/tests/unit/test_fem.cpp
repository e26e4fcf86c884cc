#include <doctest.h>

#include <cmath>
#include <random>

#include "meshxfer/errors.hpp"
#include "meshxfer/fem.hpp"
#include "meshxfer/generators.hpp"

using namespace mxf;

namespace {

Mesh unit_right_triangle_2d() {
  Mesh mesh;
  mesh.topo_dim = 2;
  mesh.space_dim = 2;
  mesh.vertices = {Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}};
  mesh.cells = {Cell{{0, 1, 2, -1}}};
  compute_boundary_faces(mesh);
  return mesh;
}

DirichletBC boundary_bc(const Mesh &mesh,
                        const std::function<double(const Point &)> &g) {
  DirichletBC bc;
  for (Index v : boundary_vertices(mesh, {}))
    bc.entries.push_back({v, g(mesh.vertices[v])});
  return bc;
}

} // namespace

TEST_CASE("element stiffness of the unit right triangle") {
  const SparseMatrix K = assemble_stiffness(unit_right_triangle_2d());
  CHECK(K.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(K.coeff(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(K.coeff(0, 2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(K.coeff(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(K.coeff(1, 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(K.coeff(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(K.is_symmetric(0.0));
}

TEST_CASE("row sums vanish on assembled matrices") {
  for (int dim : {1, 2, 3}) {
    const Mesh mesh = generate_structured(dim, dim, 3);
    const SparseMatrix K = assemble_stiffness(mesh);
    for (double s : K.row_sums())
      CHECK(std::abs(s) <= 1e-13);
    CHECK(K.is_symmetric(0.0));
  }
}

TEST_CASE("surface assembly matches the flat element after a rigid motion") {
  const Mesh flat = unit_right_triangle_2d();
  const SparseMatrix K_flat = assemble_stiffness(flat);

  // The same triangle rotated into a tilted 3D plane and translated.
  const double c = std::cos(0.7), s = std::sin(0.7);
  const double c2 = std::cos(0.3), s2 = std::sin(0.3);
  auto rotate = [&](const Point &p) {
    const Point r1{p[0], c * p[1] - s * p[2], s * p[1] + c * p[2]};
    return Point{c2 * r1[0] - s2 * r1[1] + 0.4, s2 * r1[0] + c2 * r1[1] - 1.1,
                 r1[2] + 2.0};
  };
  Mesh tilted = flat;
  tilted.space_dim = 3;
  for (Point &p : tilted.vertices)
    p = rotate(p);

  const SparseMatrix K_tilted = assemble_stiffness(tilted);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      CHECK(std::abs(K_flat.coeff(i, j) - K_tilted.coeff(i, j)) <= 1e-13);
}

TEST_CASE("isometry invariance on a whole surface mesh") {
  Mesh surf = generate_structured(2, 3, 4);
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> j(-0.2, 0.2);
  for (Point &p : surf.vertices)
    p[2] = 0.25 * std::sin(3 * p[0]) * std::cos(2 * p[1]); // curved sheet
  const SparseMatrix K = assemble_stiffness(surf);

  const double c = std::cos(1.1), s = std::sin(1.1);
  Mesh moved = surf;
  for (Point &p : moved.vertices)
    p = Point{c * p[0] - s * p[2] + 3.0, p[1] - 0.5, s * p[0] + c * p[2]};
  const SparseMatrix K_moved = assemble_stiffness(moved);

  REQUIRE(K.nonzeros() == K_moved.nonzeros());
  for (Index r = 0; r < K.rows(); ++r) {
    const auto cols = K.row_entries_cols(r);
    const auto vals = K.row_entries_values(r);
    const auto vals2 = K_moved.row_entries_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      CHECK(std::abs(vals[k] - vals2[k]) <= 1e-12);
  }
}

TEST_CASE("degenerate cells are a geometry error") {
  Mesh mesh = unit_right_triangle_2d();
  mesh.vertices[2] = Point{0.5, 0.0, 0.0}; // collinear
  CHECK_THROWS_AS(assemble_stiffness(mesh), GeometryError);
}

TEST_CASE("affine fields are reproduced exactly") {
  for (int dim : {2, 3}) {
    const Mesh mesh = generate_structured(dim, dim, 4);
    auto u = [](const Point &p) {
      return 1.5 * p[0] - 2.0 * p[1] + 0.75 * p[2] + 0.25;
    };
    const LaplaceSolution sol = solve_laplace(mesh, boundary_bc(mesh, u));
    for (Index v = 0; v < mesh.num_vertices(); ++v)
      CHECK(std::abs(sol.field.values[v] - u(mesh.vertices[v])) <= 1e-10);
  }
}

TEST_CASE("u = x on the square boundary") {
  const Mesh mesh = generate_structured(2, 2, 8);
  const LaplaceSolution sol = solve_laplace(
      mesh, boundary_bc(mesh, [](const Point &p) { return p[0]; }));
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    CHECK(std::abs(sol.field.values[v] - mesh.vertices[v][0]) <= 1e-10);
}

TEST_CASE("bc on all vertices is returned verbatim") {
  const Mesh mesh = generate_structured(2, 2, 2);
  DirichletBC bc;
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    bc.entries.push_back({v, std::sqrt(2.0 + v)});
  const LaplaceSolution sol = solve_laplace(mesh, bc);
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    CHECK(sol.field.values[v] == bc.entries[v].value);
}

TEST_CASE("empty and malformed Dirichlet data") {
  const Mesh mesh = generate_structured(2, 2, 2);
  CHECK_THROWS_AS(solve_laplace(mesh, DirichletBC{}), ContractError);
  DirichletBC dup;
  dup.entries = {{0, 1.0}, {0, 2.0}};
  CHECK_THROWS_AS(solve_laplace(mesh, dup), ContractError);
}

TEST_CASE("manufactured harmonic solution converges at order two") {
  auto exact = [](const Point &p) {
    return std::sin(M_PI * p[0]) * std::sinh(M_PI * p[1]) / std::sinh(M_PI);
  };
  double err16 = 0.0, err32 = 0.0;
  for (const Index n : {16, 32}) {
    const Mesh mesh = generate_structured(2, 2, n);
    const LaplaceSolution sol = solve_laplace(mesh, boundary_bc(mesh, exact));
    std::vector<double> diff(mesh.vertices.size());
    for (Index v = 0; v < mesh.num_vertices(); ++v)
      diff[v] = sol.field.values[v] - exact(mesh.vertices[v]);
    const double err = lumped_l2_norm(mesh, diff);
    (n == 16 ? err16 : err32) = err;
  }
  const double ratio = err16 / err32;
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("Laplace-Beltrami on a flat patch equals the 2D solve") {
  // The x-max face of a cube is a flat square: solving on the extracted
  // surface must reproduce the harmonic behavior of the plane problem.
  const Mesh volume = generate_structured(3, 3, 4);
  const BoundaryExtraction patch = extract_boundary(volume, {2});
  auto g = [](const Point &p) { return p[1] - p[2]; };
  DirichletBC bc;
  for (Index v : boundary_vertices(patch.mesh, {}))
    bc.entries.push_back({v, g(patch.mesh.vertices[v])});
  const LaplaceSolution sol = solve_laplace(patch.mesh, bc);
  for (Index v = 0; v < patch.mesh.num_vertices(); ++v)
    CHECK(std::abs(sol.field.values[v] - g(patch.mesh.vertices[v])) <= 1e-10);
}

TEST_CASE("surface-volume coupling with constant data") {
  const Mesh volume = generate_structured(3, 3, 3);
  const double c = 2.5;
  const SurfaceVolumeCoupling coupling = couple_surface_volume(
      volume, {2}, [c](const Point &) { return c; });

  for (double v : coupling.surface_field.values)
    CHECK(std::abs(v - c) <= 1e-10 * c);
  // The patch Dirichlet values are copied exactly.
  for (const auto &p : coupling.map.pairs)
    CHECK(coupling.volume_field.values[p.b] ==
          coupling.surface_field.values[p.a]);
}

TEST_CASE("surface-volume coupling copies the patch exactly") {
  const Mesh volume = generate_structured(3, 3, 3);
  const SurfaceVolumeCoupling coupling = couple_surface_volume(
      volume, {2}, [](const Point &p) { return p[1] + p[2]; });
  REQUIRE(coupling.map.pairs.size() == coupling.surface.vertices.size());
  for (const auto &p : coupling.map.pairs)
    CHECK(coupling.volume_field.values[p.b] ==
          coupling.surface_field.values[p.a]);
}

TEST_CASE("coupled volume solution obeys the discrete maximum principle") {
  const Mesh volume = generate_structured(3, 3, 4);
  const SurfaceVolumeCoupling coupling = couple_surface_volume(
      volume, {2}, [](const Point &p) { return p[1] + p[2]; },
      [](const Point &) { return 0.0; });

  double bc_min = 0.0, bc_max = 0.0; // other-boundary data includes 0
  for (const auto &p : coupling.map.pairs) {
    bc_min = std::min(bc_min, coupling.surface_field.values[p.a]);
    bc_max = std::max(bc_max, coupling.surface_field.values[p.a]);
  }
  for (double v : coupling.volume_field.values) {
    CHECK(v >= bc_min - 1e-12);
    CHECK(v <= bc_max + 1e-12);
  }
}
