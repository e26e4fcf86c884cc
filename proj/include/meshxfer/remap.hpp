#pragma once

#include <span>
#include <vector>

#include "meshxfer/mesh.hpp"

namespace mxf {

/// Each target receives the field value at the nearest source vertex
/// (nearest-neighbor tie rule: smaller vertex index).
std::vector<double> remap_closest_point(const Mesh &source,
                                        const Field &field,
                                        std::span<const Point> targets);

struct LinearRemap {
  std::vector<double> values;
  std::vector<bool> outside; ///< targets contained in no cell
};

/// Barycentric interpolation in the containing simplex, located via an
/// R-tree over cell bounding boxes (barycentric tolerance 1e-12). Targets
/// outside the mesh are flagged and filled with the closest-point value.
LinearRemap remap_linear(const Mesh &source, const Field &field,
                         std::span<const Point> targets);

/// One point per cell: the arithmetic mean of its vertices, in cell order.
std::vector<Point> quadrature_targets(const Mesh &mesh);

} // namespace mxf
