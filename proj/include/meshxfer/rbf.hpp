#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "meshxfer/geodesic.hpp"
#include "meshxfer/mesh.hpp"
#include "meshxfer/rtree.hpp"
#include "meshxfer/sparse.hpp"

namespace mxf {

enum class KernelFamily { WendlandC2, Gaussian };

/// Radial kernel phi(r) with support radius rho. WendlandC2 is compactly
/// supported and yields sparse symmetric positive definite systems; Gaussian
/// is dense and meant for small problems.
struct Kernel {
  KernelFamily family = KernelFamily::WendlandC2;
  double support_radius = 1.0;

  double operator()(double r) const {
    const double t = r / support_radius;
    if (family == KernelFamily::WendlandC2) {
      if (t >= 1.0)
        return 0.0;
      const double s = 1.0 - t;
      const double s2 = s * s;
      return s2 * s2 * (4.0 * t + 1.0);
    }
    return std::exp(-t * t);
  }

  bool compact() const { return family == KernelFamily::WendlandC2; }
};

/// Distance notion used by the interpolation operator: plain Euclidean, or
/// shortest edge paths on a mesh with interpolation points bound to their
/// nearest vertices.
class Metric {
public:
  static Metric euclidean() { return Metric{}; }

  bool is_geodesic() const { return data_ != nullptr; }

  struct GeodesicData {
    EdgeGraph graph;
    RTreeIndex vertex_tree;
    double bind_tolerance = 0.0;
  };

  const GeodesicData &geodesic_data() const { return *data_; }

private:
  friend Metric setup_geodesic_metric(const Mesh &mesh);
  std::shared_ptr<const GeodesicData> data_;
};

/// Builds the edge graph and vertex locator that make a mesh usable as a
/// geodesic metric; points are later bound to their nearest vertex within
/// 1e-8 of the bounding-box diagonal.
Metric setup_geodesic_metric(const Mesh &mesh);

struct TransferReport {
  int solve_iterations = 0;   ///< worst component solve
  double solve_residual = 0.0;
  int ones_iterations = 0;    ///< rescaling (constant-1) solve
  double ones_residual = 0.0;
  double s1_min = std::numeric_limits<double>::infinity();
  double s1_max = -std::numeric_limits<double>::infinity();
};

/// Prepared interpolation operator: source points, assembled kernel matrix
/// and, when rescaling is on, the solved coefficients of the constant-1
/// data. Immutable after setup; interpolate calls may run concurrently.
class RbfOperator {
public:
  const std::vector<Point> &sources() const { return sources_; }
  const Kernel &kernel() const { return kernel_; }
  const SparseMatrix &system() const { return system_; }
  bool rescaling() const { return rescale_; }
  const std::vector<double> &ones_coefficients() const {
    return ones_coefficients_;
  }
  const TransferReport &setup_report() const { return setup_report_; }

  /// (source index, distance) pairs with distance < rho for a target point,
  /// ascending by source index.
  std::vector<std::pair<Index, double>> neighbors(const Point &target) const;

private:
  friend RbfOperator setup_rbf(std::vector<Point> sources, Kernel kernel,
                               Metric metric, bool rescale);
  friend std::vector<double> interpolate(const RbfOperator &op,
                                         std::span<const double> source_values,
                                         int components,
                                         std::span<const Point> targets,
                                         TransferReport *report);

  std::vector<Point> sources_;
  Kernel kernel_;
  Metric metric_;
  bool rescale_ = false;
  SparseMatrix system_;
  std::vector<double> ones_coefficients_;
  TransferReport setup_report_;

  RTreeIndex source_tree_;              // Euclidean evaluation
  std::vector<Index> source_vertices_;  // geodesic binding of the sources
  // Geodesic evaluation: per mesh vertex, the sources within rho of it.
  std::vector<std::vector<std::pair<Index, double>>> vertex_sources_;
};

/// Assembles A_ij = phi(d(x_i, x_j)) (sparse via radius-limited tree search
/// for the compact kernel), prepares the Jacobi-CG solve context and, when
/// rescale is set, solves A c1 = 1.
RbfOperator setup_rbf(std::vector<Point> sources, Kernel kernel,
                      Metric metric = Metric::euclidean(),
                      bool rescale = false);

/// Solves A c = f per component and evaluates g(y) = sum_j c_j phi(d(y, x_j))
/// at every target; with rescaling the result is g(y) / s1(y) where s1 uses
/// the constant-1 coefficients.
std::vector<double> interpolate(const RbfOperator &op,
                                std::span<const double> source_values,
                                int components, std::span<const Point> targets,
                                TransferReport *report = nullptr);

/// Largest nearest-neighbor gap of the cloud times `factor`; the default
/// support radius used by the CLI when none is configured.
double suggest_support_radius(const std::vector<Point> &sources,
                              double factor = 4.0);

} // namespace mxf
