#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "meshxfer/mesh.hpp"

namespace mxf {

/// Partial bijection between interface vertices of two meshes: each side
/// appears at most once, every match distance is within the tolerance used.
struct InterfaceMap {
  struct Pair {
    Index a;
    Index b;
    double distance;
  };
  std::vector<Pair> pairs;        // ascending by a
  double tolerance = 0.0;

  /// A-side vertices whose nearest B candidate was claimed by a closer
  /// A vertex (reported, not fatal).
  struct Conflict {
    Index a;
    Index b;
    double distance;
  };
  std::vector<Conflict> conflicts;
};

/// Pairs each tagged A-side vertex with its nearest tagged B-side vertex
/// within the tolerance (default 1e-8 of the joint bounding-box diagonal,
/// passed as tolerance <= 0). A side whose topological dimension is one
/// less than the other's counts as interface in its entirety, which covers
/// surface-against-volume coupling. Non-injective assignments keep the
/// closest claimant.
InterfaceMap compute_interface_map(const Mesh &mesh_a,
                                   const std::vector<int> &tags_a,
                                   const Mesh &mesh_b,
                                   const std::vector<int> &tags_b,
                                   double tolerance = 0.0);

struct InterfaceValues {
  std::vector<Index> b_vertices; // ascending
  std::vector<double> values;    // b_vertices.size() * components
};

/// Copies values along each map pair. values_on_a spans all A vertices.
/// Every vertex listed in required_b must be covered by the map; unmapped
/// ones raise a coverage error rather than being zero-filled.
InterfaceValues transfer_across_interface(
    const InterfaceMap &map, std::span<const double> values_on_a,
    int components, std::span<const Index> required_b = {});

/// One `a,b,distance` line per pair.
void write_interface_csv(std::ostream &out, const InterfaceMap &map);

} // namespace mxf
