#pragma once

#include "meshxfer/mesh.hpp"

namespace mxf {

/// Structured simplicial mesh over `extent`:
///   topo_dim 1: n segments,
///   topo_dim 2: n x n quads split into 2 triangles along the low-high
///               diagonal,
///   topo_dim 3: n x n x n cubes split into 6 tetrahedra (Kuhn subdivision).
/// Vertices vary over the first topo_dim axes; axes in [topo_dim, space_dim)
/// sit at the extent's low corner, axes beyond space_dim are zero.
/// Boundary faces are tagged per axis side: x-min=1, x-max=2, y-min=3,
/// y-max=4, z-min=5, z-max=6.
Mesh generate_structured(int topo_dim, int space_dim, Index n,
                         const Box &extent = Box::unit());

} // namespace mxf
