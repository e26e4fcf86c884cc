#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meshxfer/mesh.hpp"

namespace mxf {

struct VtkData {
  Mesh mesh;
  std::vector<Field> fields;
};

/// Reads an ASCII VTK legacy DATASET UNSTRUCTURED_GRID restricted to cell
/// types 3 (line), 5 (triangle) and 10 (tetrahedron). The mesh topological
/// dimension is the maximum cell dimension present; cells of lower dimension
/// are ignored. Boundary faces are recomputed (facets incident to exactly
/// one cell, tag 0). POINT_DATA SCALARS/VECTORS arrays become fields.
VtkData read_vtk_legacy(std::istream &in);
VtkData read_vtk_legacy_file(const std::string &path);

/// Writes mesh and fields so that read_vtk_legacy round-trips cells exactly
/// and coordinates/values to 17 significant digits. Each vertex is emitted
/// exactly once.
void write_vtk_legacy(std::ostream &out, const Mesh &mesh,
                      const std::vector<Field> &fields = {});
void write_vtk_legacy_file(const std::string &path, const Mesh &mesh,
                           const std::vector<Field> &fields = {});

} // namespace mxf
