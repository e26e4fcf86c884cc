#include "meshxfer/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

constexpr double kCgRelTol = 1e-12;
constexpr double kDenominatorGuard = 1e-10;

std::string point_str(const Point &p) {
  std::ostringstream oss;
  oss << "(" << p[0] << ", " << p[1] << ", " << p[2] << ")";
  return oss.str();
}

Index bind_to_vertex(const Metric::GeodesicData &geo, const Point &p) {
  const NearestHit hit = geo.vertex_tree.nearest(p);
  if (hit.distance > geo.bind_tolerance)
    throw BindingError("geodesic metric: point " + point_str(p) +
                       " is not within binding tolerance of any mesh vertex "
                       "(distance " +
                       std::to_string(hit.distance) + ")");
  return hit.index;
}

} // namespace

Metric setup_geodesic_metric(const Mesh &mesh) {
  auto data = std::make_shared<Metric::GeodesicData>();
  data->graph = build_edge_graph(mesh);
  data->vertex_tree = RTreeIndex::build(mesh.vertices);
  data->bind_tolerance = 1e-8 * mesh.bounding_box().diagonal();

  Metric metric;
  metric.data_ = std::move(data);
  return metric;
}

RbfOperator setup_rbf(std::vector<Point> sources, Kernel kernel, Metric metric,
                      bool rescale) {
  if (sources.empty())
    throw ContractError("setup_rbf: source set must not be empty");
  if (!(kernel.support_radius > 0.0))
    throw ContractError("setup_rbf: support radius must be positive");

  const Index n = static_cast<Index>(sources.size());
  const double rho = kernel.support_radius;
  const double dup_tol = 1e-12 * rho;

  RbfOperator op;
  op.sources_ = std::move(sources);
  op.kernel_ = kernel;
  op.metric_ = metric;
  op.rescale_ = rescale;

  std::vector<SparseMatrix::Triplet> triplets;

  if (!metric.is_geodesic()) {
    op.source_tree_ = RTreeIndex::build(op.sources_);

    // Pairwise-distinct precondition, via a tiny radius query per point.
    for (Index i = 0; i < n; ++i)
      for (Index j : op.source_tree_.radius_search(op.sources_[i], dup_tol))
        if (j != i)
          throw ContractError(
              "setup_rbf: source points " + std::to_string(std::min(i, j)) +
              " and " + std::to_string(std::max(i, j)) +
              " coincide within tolerance " + std::to_string(dup_tol));

    if (kernel.compact()) {
      for (Index i = 0; i < n; ++i) {
        triplets.push_back({i, i, 1.0});
        for (Index j : op.source_tree_.radius_search(op.sources_[i], rho)) {
          if (j <= i)
            continue;
          const double d = distance(op.sources_[i], op.sources_[j]);
          if (d >= rho)
            continue;
          const double v = kernel(d);
          triplets.push_back({i, j, v});
          triplets.push_back({j, i, v});
        }
      }
    } else {
      for (Index i = 0; i < n; ++i) {
        triplets.push_back({i, i, 1.0});
        for (Index j = i + 1; j < n; ++j) {
          const double v = kernel(distance(op.sources_[i], op.sources_[j]));
          triplets.push_back({i, j, v});
          triplets.push_back({j, i, v});
        }
      }
    }
  } else {
    const Metric::GeodesicData &geo = metric.geodesic_data();
    op.source_vertices_.resize(n);
    for (Index i = 0; i < n; ++i)
      op.source_vertices_[i] = bind_to_vertex(geo, op.sources_[i]);

    // Which source sits on which vertex; duplicates share a vertex.
    std::vector<std::vector<Index>> sources_on_vertex(
        geo.graph.num_vertices());
    for (Index i = 0; i < n; ++i) {
      auto &list = sources_on_vertex[op.source_vertices_[i]];
      if (!list.empty())
        throw ContractError("setup_rbf: source points " +
                            std::to_string(list.front()) + " and " +
                            std::to_string(i) +
                            " bind to the same mesh vertex (geodesic "
                            "distance 0)");
      list.push_back(i);
    }

    const double truncation =
        kernel.compact() ? rho : std::numeric_limits<double>::infinity();
    op.vertex_sources_.resize(geo.graph.num_vertices());
    for (Index i = 0; i < n; ++i) {
      const DistanceField field = geodesic_distances(
          geo.graph, {op.source_vertices_[i]}, truncation);
      for (Index v = 0; v < geo.graph.num_vertices(); ++v) {
        const double d = field.distances[v];
        if (std::isinf(d) || (kernel.compact() && d >= rho))
          continue;
        op.vertex_sources_[v].push_back({i, d});
        for (Index j : sources_on_vertex[v]) {
          if (j < i && d < dup_tol)
            throw ContractError("setup_rbf: source points " +
                                std::to_string(j) + " and " +
                                std::to_string(i) +
                                " coincide within tolerance " +
                                std::to_string(dup_tol));
          if (j > i) {
            const double v_ij = kernel(d);
            triplets.push_back({i, j, v_ij});
            triplets.push_back({j, i, v_ij});
          }
        }
      }
      triplets.push_back({i, i, 1.0});
    }
  }

  op.system_ = SparseMatrix::from_triplets(n, std::move(triplets));

  if (rescale) {
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    const CgResult res =
        jacobi_cg_scaled(op.system_, ones, op.ones_coefficients_, kCgRelTol,
                         10 * std::max<int>(n, 1));
    op.setup_report_.ones_iterations = res.iterations;
    op.setup_report_.ones_residual = res.residual;
  }
  return op;
}

std::vector<std::pair<Index, double>>
RbfOperator::neighbors(const Point &target) const {
  std::vector<std::pair<Index, double>> out;
  if (!metric_.is_geodesic()) {
    if (kernel_.compact()) {
      for (Index j :
           source_tree_.radius_search(target, kernel_.support_radius)) {
        const double d = distance(target, sources_[j]);
        if (d < kernel_.support_radius)
          out.push_back({j, d});
      }
    } else {
      out.reserve(sources_.size());
      for (Index j = 0; j < static_cast<Index>(sources_.size()); ++j)
        out.push_back({j, distance(target, sources_[j])});
    }
  } else {
    const Index v = bind_to_vertex(metric_.geodesic_data(), target);
    out = vertex_sources_[v];
  }
  return out;
}

std::vector<double> interpolate(const RbfOperator &op,
                                std::span<const double> source_values,
                                int components,
                                std::span<const Point> targets,
                                TransferReport *report) {
  const std::size_t n = op.sources_.size();
  if (components < 1)
    throw ContractError("interpolate: components must be >= 1");
  if (source_values.size() != n * static_cast<std::size_t>(components))
    throw ContractError("interpolate: expected " +
                        std::to_string(n * components) + " source values, got " +
                        std::to_string(source_values.size()));

  TransferReport rep = op.setup_report_;

  // Solve per component, reusing the assembled system.
  std::vector<std::vector<double>> coeffs(components);
  std::vector<double> rhs(n);
  for (int c = 0; c < components; ++c) {
    for (std::size_t i = 0; i < n; ++i)
      rhs[i] = source_values[i * components + c];
    const CgResult res =
        jacobi_cg_scaled(op.system_, rhs, coeffs[c], kCgRelTol,
                         10 * std::max<int>(static_cast<int>(n), 1));
    rep.solve_iterations = std::max(rep.solve_iterations, res.iterations);
    rep.solve_residual = std::max(rep.solve_residual, res.residual);
  }

  std::vector<double> out(targets.size() *
                          static_cast<std::size_t>(components));
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto nbrs = op.neighbors(targets[k]);
    std::vector<double> weights(nbrs.size());
    for (std::size_t m = 0; m < nbrs.size(); ++m)
      weights[m] = op.kernel_(nbrs[m].second);

    double s1 = 0.0;
    if (op.rescale_) {
      for (std::size_t m = 0; m < nbrs.size(); ++m)
        s1 += op.ones_coefficients_[nbrs[m].first] * weights[m];
      if (std::abs(s1) < kDenominatorGuard)
        throw RescalingError(
            "interpolate: rescaling denominator " + std::to_string(s1) +
            " at target " + std::to_string(k) +
            " (target outside every source support)");
      rep.s1_min = std::min(rep.s1_min, s1);
      rep.s1_max = std::max(rep.s1_max, s1);
    }

    for (int c = 0; c < components; ++c) {
      double g = 0.0;
      for (std::size_t m = 0; m < nbrs.size(); ++m)
        g += coeffs[c][nbrs[m].first] * weights[m];
      out[k * components + c] = op.rescale_ ? g / s1 : g;
    }
  }

  if (report)
    *report = rep;
  return out;
}

double suggest_support_radius(const std::vector<Point> &sources,
                              double factor) {
  if (sources.size() < 2)
    throw ContractError(
        "suggest_support_radius: need at least two source points");
  const RTreeIndex tree = RTreeIndex::build(sources);
  double h_max = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const NearestHit hit =
        tree.nearest(sources[i], static_cast<Index>(i));
    h_max = std::max(h_max, hit.distance);
  }
  return factor * h_max;
}

} // namespace mxf
