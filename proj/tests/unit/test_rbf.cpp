#include <doctest.h>

#include <cmath>
#include <random>

#include "meshxfer/errors.hpp"
#include "meshxfer/generators.hpp"
#include "meshxfer/rbf.hpp"

using namespace mxf;

namespace {

std::vector<Point> random_cloud(std::size_t n, unsigned seed, double lo = 0.0,
                                double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<Point> pts(n);
  for (Point &p : pts)
    p = Point{coord(rng), coord(rng), coord(rng)};
  return pts;
}

double max_rel_error(std::span<const double> got,
                     std::span<const double> expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double scale = std::max(std::abs(expected[i]), 1e-30);
    worst = std::max(worst, std::abs(got[i] - expected[i]) / scale);
  }
  return worst;
}

} // namespace

TEST_CASE("kernel formulas") {
  Kernel w{KernelFamily::WendlandC2, 2.0};
  CHECK(w(0.0) == 1.0);
  CHECK(w(1.0) == 0.1875); // phi(rho/2) = (1/2)^4 * 3
  CHECK(w(2.0) == 0.0);
  CHECK(w(5.0) == 0.0);
  double prev = w(0.0);
  for (double r = 0.05; r <= 2.0; r += 0.05) {
    CHECK(w(r) <= prev);
    prev = w(r);
  }

  Kernel g{KernelFamily::Gaussian, 1.5};
  CHECK(g(0.0) == 1.0);
  CHECK(g(1.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(g(10.0) > 0.0);
}

TEST_CASE("single source point") {
  const RbfOperator op = setup_rbf({Point{0.3, 0.3, 0.3}},
                                   Kernel{KernelFamily::WendlandC2, 1.0},
                                   Metric::euclidean(), true);
  CHECK(op.system().rows() == 1);
  CHECK(op.system().coeff(0, 0) == 1.0);
  REQUIRE(op.ones_coefficients().size() == 1);
  CHECK(op.ones_coefficients()[0] == 1.0);
}

TEST_CASE("two far points give the identity system") {
  const RbfOperator op =
      setup_rbf({Point{0, 0, 0}, Point{5, 0, 0}},
                Kernel{KernelFamily::WendlandC2, 1.0});
  CHECK(op.system().nonzeros() == 2);
  CHECK(op.system().coeff(0, 0) == 1.0);
  CHECK(op.system().coeff(1, 1) == 1.0);
  CHECK(op.system().coeff(0, 1) == 0.0);
}

TEST_CASE("duplicate sources name the offending pair") {
  const std::vector<Point> pts{Point{0, 0, 0}, Point{1, 0, 0},
                               Point{1, 0, 0}};
  CHECK_THROWS_WITH_AS(
      setup_rbf(pts, Kernel{KernelFamily::WendlandC2, 1.0}),
      doctest::Contains("1 and 2"), ContractError);
  CHECK_THROWS_AS(setup_rbf({}, Kernel{}), ContractError);
  CHECK_THROWS_AS(
      setup_rbf({Point{}}, Kernel{KernelFamily::WendlandC2, 0.0}),
      ContractError);
}

TEST_CASE("system is exactly symmetric") {
  const std::vector<Point> pts = random_cloud(150, 1);
  const RbfOperator op = setup_rbf(pts, Kernel{KernelFamily::WendlandC2, 0.4});
  CHECK(op.system().is_symmetric(0.0));
  for (Index i = 0; i < 150; ++i)
    CHECK(op.system().coeff(i, i) == 1.0);
}

TEST_CASE("collocation identity without rescaling") {
  const std::vector<Point> pts = random_cloud(120, 2);
  const Kernel kernel{KernelFamily::WendlandC2,
                      suggest_support_radius(pts)};
  const RbfOperator op = setup_rbf(pts, kernel);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> values(pts.size());
  for (double &v : values)
    v = u(rng);

  const std::vector<double> back = interpolate(op, values, 1, pts);
  CHECK(max_rel_error(back, values) <= 1e-10);
}

TEST_CASE("constant reproduction with rescaling") {
  for (const KernelFamily family :
       {KernelFamily::WendlandC2, KernelFamily::Gaussian}) {
    // The Gaussian system is dense and conditions poorly on irregular
    // clouds; feed it a lattice with a radius under the grid spacing.
    std::vector<Point> pts;
    double rho = 0.0;
    if (family == KernelFamily::Gaussian) {
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          for (int k = 0; k < 5; ++k)
            pts.push_back(Point{0.25 * i, 0.25 * j, 0.25 * k});
      rho = 0.2;
    } else {
      pts = random_cloud(80, 4);
      rho = suggest_support_radius(pts);
    }
    const RbfOperator op =
        setup_rbf(pts, Kernel{family, rho}, Metric::euclidean(), true);

    const std::vector<Point> targets = random_cloud(60, 5, 0.1, 0.9);
    const double c = -2.75;
    const std::vector<double> values(pts.size(), c);
    TransferReport report;
    const std::vector<double> out =
        interpolate(op, values, 1, targets, &report);
    for (double v : out)
      CHECK(std::abs(v - c) <= 1e-12 * std::abs(c));
    CHECK(report.s1_min <= report.s1_max);
    CHECK(report.s1_min > 0.0);
  }
}

TEST_CASE("transfer is linear in the data") {
  const std::vector<Point> pts = random_cloud(90, 6);
  const Kernel kernel{KernelFamily::WendlandC2, suggest_support_radius(pts)};
  const std::vector<Point> targets = random_cloud(40, 7, 0.15, 0.85);

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> f(pts.size()), g(pts.size()), combo(pts.size());
  const double alpha = 1.7, beta = -0.6;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    f[i] = u(rng);
    g[i] = u(rng);
    combo[i] = alpha * f[i] + beta * g[i];
  }

  for (const bool rescale : {false, true}) {
    const RbfOperator op =
        setup_rbf(pts, kernel, Metric::euclidean(), rescale);
    const std::vector<double> a = interpolate(op, f, 1, targets);
    const std::vector<double> b = interpolate(op, g, 1, targets);
    const std::vector<double> c = interpolate(op, combo, 1, targets);
    double scale = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      scale = std::max(scale, std::abs(c[k]));
    for (std::size_t k = 0; k < c.size(); ++k)
      CHECK(std::abs(c[k] - (alpha * a[k] + beta * b[k])) <=
            1e-10 * std::max(scale, 1.0));
  }
}

TEST_CASE("vector fields are transferred per component") {
  const std::vector<Point> pts = random_cloud(50, 9);
  const Kernel kernel{KernelFamily::WendlandC2, suggest_support_radius(pts)};
  const RbfOperator op = setup_rbf(pts, kernel);
  const std::vector<Point> targets = random_cloud(20, 10, 0.2, 0.8);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> comp0(pts.size()), comp1(pts.size()),
      interleaved(2 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    comp0[i] = u(rng);
    comp1[i] = u(rng);
    interleaved[2 * i] = comp0[i];
    interleaved[2 * i + 1] = comp1[i];
  }

  const std::vector<double> both = interpolate(op, interleaved, 2, targets);
  const std::vector<double> a = interpolate(op, comp0, 1, targets);
  const std::vector<double> b = interpolate(op, comp1, 1, targets);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    CHECK(both[2 * k] == a[k]);
    CHECK(both[2 * k + 1] == b[k]);
  }

  CHECK_THROWS_AS(interpolate(op, comp0, 2, targets), ContractError);
}

TEST_CASE("rescaling denominator guard") {
  const RbfOperator op =
      setup_rbf({Point{0, 0, 0}, Point{0.1, 0, 0}},
                Kernel{KernelFamily::WendlandC2, 0.3}, Metric::euclidean(),
                true);
  const std::vector<double> values{1.0, 1.0};
  const std::vector<Point> far{Point{10, 0, 0}};
  CHECK_THROWS_WITH_AS(interpolate(op, values, 1, far),
                       doctest::Contains("target 0"), RescalingError);
}

TEST_CASE("smooth-field accuracy improves with refinement") {
  auto sample = [](const Mesh &mesh) {
    std::vector<double> v(mesh.vertices.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = std::sin(M_PI * mesh.vertices[i][0]) *
             std::cos(M_PI * mesh.vertices[i][1]);
    return v;
  };
  const std::vector<Point> targets = random_cloud(250, 12, 0.05, 0.95);
  std::vector<double> expected(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k)
    expected[k] =
        std::sin(M_PI * targets[k][0]) * std::cos(M_PI * targets[k][1]);

  double coarse_err = 0.0;
  double fine_err = 0.0;
  for (const Index n : {4, 8}) {
    const Mesh mesh = generate_structured(3, 3, n);
    const double h = 1.0 / static_cast<double>(n);
    const RbfOperator op =
        setup_rbf(mesh.vertices, Kernel{KernelFamily::WendlandC2, 4.0 * h},
                  Metric::euclidean(), true);
    const std::vector<double> out =
        interpolate(op, sample(mesh), 1, targets);
    double err = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k)
      err = std::max(err, std::abs(out[k] - expected[k]));
    (n == 4 ? coarse_err : fine_err) = err;
  }
  CHECK(fine_err < coarse_err);
}

TEST_CASE("geodesic metric on a straight line equals Euclidean") {
  const Mesh mesh = generate_structured(1, 1, 20);
  const Metric metric = setup_geodesic_metric(mesh);
  const Kernel kernel{KernelFamily::WendlandC2, 0.3};

  const RbfOperator geo =
      setup_rbf(mesh.vertices, kernel, metric, true);
  const RbfOperator euc =
      setup_rbf(mesh.vertices, kernel, Metric::euclidean(), true);

  std::vector<double> values(mesh.vertices.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::sin(3.0 * mesh.vertices[i][0]);

  const std::vector<Point> targets = mesh.vertices;
  const std::vector<double> a = interpolate(geo, values, 1, targets);
  const std::vector<double> b = interpolate(euc, values, 1, targets);
  // On a straight 1D chain the edge-path distance between vertices is the
  // Euclidean distance up to summation rounding.
  CHECK(max_rel_error(a, b) <= 1e-9);
}

TEST_CASE("geodesic distances dominate Euclidean ones") {
  // U-shaped strip built from a structured grid with a slot cut out.
  Mesh grid = generate_structured(2, 2, 8);
  Mesh strip;
  strip.topo_dim = 2;
  strip.space_dim = 2;
  strip.vertices = grid.vertices;
  // Keep cells outside the open slot 0.25 < y < 0.75, x > 0.25.
  for (const Cell &c : grid.cells) {
    const Point b = cell_barycenter(grid, c);
    const bool in_slot = b[1] > 0.25 && b[1] < 0.75 && b[0] > 0.25;
    if (!in_slot)
      strip.cells.push_back(c);
  }
  compute_boundary_faces(strip);

  const Metric metric = setup_geodesic_metric(strip);
  const auto &geo = metric.geodesic_data();

  // Across the slot: Euclid-close, geodesically far.
  const Point below{1.0, 0.25, 0.0};
  const Point above{1.0, 0.75, 0.0};
  const Index vb = geo.vertex_tree.nearest(below).index;
  const Index va = geo.vertex_tree.nearest(above).index;
  const DistanceField field = geodesic_distances(geo.graph, {vb});
  const double geodesic = field.distances[va];
  const double straight = distance(strip.vertices[vb], strip.vertices[va]);
  CHECK(geodesic > 3.0 * straight);

  // Wendland weight across the slot: zero under the geodesic metric,
  // positive under the Euclidean one.
  const Kernel kernel{KernelFamily::WendlandC2, 1.0};
  CHECK(kernel(geodesic) == 0.0);
  CHECK(kernel(straight) > 0.0);

  // Metric monotonicity over all vertex pairs reached within the radius.
  for (Index v = 0; v < strip.num_vertices(); ++v) {
    if (std::isinf(field.distances[v]))
      continue;
    CHECK(field.distances[v] >=
          distance(strip.vertices[vb], strip.vertices[v]) - 1e-12);
    CHECK(kernel(field.distances[v]) <=
          kernel(distance(strip.vertices[vb], strip.vertices[v])) + 1e-15);
  }
}

TEST_CASE("geodesic binding errors and same-vertex weights") {
  const Mesh mesh = generate_structured(2, 2, 4);
  const Metric metric = setup_geodesic_metric(mesh);

  CHECK_THROWS_AS(
      setup_rbf({Point{5, 5, 0}}, Kernel{KernelFamily::WendlandC2, 1.0},
                metric),
      BindingError);

  // Source and target bound to the same vertex: phi(0) = 1 dominates.
  const RbfOperator op = setup_rbf(
      {mesh.vertices[3], mesh.vertices[12]},
      Kernel{KernelFamily::WendlandC2, 0.45}, metric, false);
  const std::vector<double> values{2.0, -1.0};
  const std::vector<Point> target{mesh.vertices[3]};
  const std::vector<double> out = interpolate(op, values, 1, target);
  CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-10));

  // Two sources on one vertex are geodesic duplicates.
  CHECK_THROWS_AS(setup_rbf({mesh.vertices[0], mesh.vertices[0]},
                            Kernel{KernelFamily::WendlandC2, 1.0}, metric),
                  ContractError);
}

TEST_CASE("setup report carries the rescaling solve") {
  const std::vector<Point> pts = random_cloud(64, 13);
  const RbfOperator op =
      setup_rbf(pts, Kernel{KernelFamily::WendlandC2,
                            suggest_support_radius(pts)},
                Metric::euclidean(), true);
  CHECK(op.setup_report().ones_iterations > 0);
  CHECK(op.setup_report().ones_residual <= 1e-12);
}
