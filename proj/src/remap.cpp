#include "meshxfer/remap.hpp"

#include <algorithm>
#include <cmath>

#include "meshxfer/errors.hpp"
#include "meshxfer/rtree.hpp"

namespace mxf {

namespace {

constexpr double kBaryTol = 1e-12;

void check_field(const Mesh &mesh, const Field &field) {
  if (field.components < 1)
    throw ContractError("remap: field components must be >= 1");
  if (field.values.size() !=
      mesh.vertices.size() * static_cast<std::size_t>(field.components))
    throw ContractError("remap: field '" + field.name +
                        "' length does not match the mesh");
}

// Flat STR-packed tree over cell bounding boxes supporting point-stabbing
// queries. Same packing discipline as the point R-tree, keyed on centers.
class CellBoxTree {
public:
  CellBoxTree(const Mesh &mesh, int leaf_capacity = 16) {
    const std::size_t n = mesh.cells.size();
    // Boxes get a hair of slack so targets that pass the barycentric
    // tolerance are never missed by the stab query.
    const double pad = kBaryTol * mesh.bounding_box().diagonal();
    entries_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Cell &c = mesh.cells[i];
      Box box{mesh.vertices[c.v[0]], mesh.vertices[c.v[0]]};
      for (int k = 1; k < mesh.vertices_per_cell(); ++k)
        box.expand(mesh.vertices[c.v[k]]);
      for (std::size_t a = 0; a < 3; ++a) {
        box.lo[a] -= pad;
        box.hi[a] += pad;
      }
      entries_[i] = Entry{box, static_cast<Index>(i)};
    }

    const std::size_t cap = static_cast<std::size_t>(leaf_capacity);
    auto center_less = [](int axis) {
      return [axis](const Entry &a, const Entry &b) {
        const double ca = a.box.lo[axis] + a.box.hi[axis];
        const double cb = b.box.lo[axis] + b.box.hi[axis];
        if (ca != cb)
          return ca < cb;
        return a.id < b.id;
      };
    };

    const std::size_t leaves = (n + cap - 1) / cap;
    const std::size_t nx = static_cast<std::size_t>(
        std::ceil(std::cbrt(static_cast<double>(leaves))));
    std::sort(entries_.begin(), entries_.end(), center_less(0));
    const std::size_t slab = (n + nx - 1) / nx;
    for (std::size_t s0 = 0; s0 < n; s0 += slab) {
      const std::size_t s1 = std::min(s0 + slab, n);
      const std::size_t slab_leaves = (s1 - s0 + cap - 1) / cap;
      const std::size_t ny = static_cast<std::size_t>(
          std::ceil(std::sqrt(static_cast<double>(slab_leaves))));
      std::sort(entries_.begin() + s0, entries_.begin() + s1, center_less(1));
      const std::size_t run = (s1 - s0 + ny - 1) / ny;
      for (std::size_t r0 = s0; r0 < s1; r0 += run) {
        const std::size_t r1 = std::min(r0 + run, s1);
        std::sort(entries_.begin() + r0, entries_.begin() + r1,
                  center_less(2));
      }
    }

    std::vector<int> level;
    for (std::size_t b = 0; b < n; b += cap) {
      const std::size_t e = std::min(b + cap, n);
      Node node;
      node.leaf = true;
      node.first = static_cast<int>(b);
      node.count = static_cast<int>(e - b);
      node.box = entries_[b].box;
      for (std::size_t i = b; i < e; ++i) {
        node.box.expand(entries_[i].box.lo);
        node.box.expand(entries_[i].box.hi);
      }
      level.push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back(node);
    }
    while (level.size() > 1) {
      std::vector<int> next;
      for (std::size_t b = 0; b < level.size(); b += cap) {
        const std::size_t e = std::min(b + cap, level.size());
        Node node;
        node.leaf = false;
        node.first = level[b];
        node.count = static_cast<int>(e - b);
        node.box = nodes_[level[b]].box;
        for (std::size_t i = b; i < e; ++i) {
          node.box.expand(nodes_[level[i]].box.lo);
          node.box.expand(nodes_[level[i]].box.hi);
        }
        next.push_back(static_cast<int>(nodes_.size()));
        nodes_.push_back(node);
      }
      level = std::move(next);
    }
    root_ = level.empty() ? -1 : level.front();
  }

  /// Cell ids whose bounding box contains the point, ascending.
  std::vector<Index> stab(const Point &p) const {
    std::vector<Index> out;
    if (root_ < 0)
      return out;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
      const Node &node = nodes_[stack.back()];
      stack.pop_back();
      if (!node.box.contains(p))
        continue;
      if (node.leaf) {
        for (int i = 0; i < node.count; ++i)
          if (entries_[node.first + i].box.contains(p))
            out.push_back(entries_[node.first + i].id);
      } else {
        for (int i = 0; i < node.count; ++i)
          stack.push_back(node.first + i);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  struct Entry {
    Box box;
    Index id;
  };
  struct Node {
    Box box;
    int first = 0;
    int count = 0;
    bool leaf = false;
  };
  std::vector<Entry> entries_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Barycentric coordinates of p in the cell, using the first topo_dim
// coordinates (volume meshes have topo_dim == space_dim).
bool barycentric(const Mesh &mesh, const Cell &cell, const Point &p,
                 std::array<double, 4> &lambda) {
  const int d = mesh.topo_dim;
  const Point &p0 = mesh.vertices[cell.v[0]];

  double m[3][3] = {};
  double rhs[3] = {};
  for (int k = 0; k < d; ++k) {
    const Point e = mesh.vertices[cell.v[k + 1]] - p0;
    for (int a = 0; a < d; ++a)
      m[a][k] = e[a];
  }
  for (int a = 0; a < d; ++a)
    rhs[a] = p[a] - p0[a];

  double sol[3] = {};
  if (d == 1) {
    if (m[0][0] == 0.0)
      return false;
    sol[0] = rhs[0] / m[0][0];
  } else if (d == 2) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0.0)
      return false;
    sol[0] = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    sol[1] = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
  } else {
    const double det =
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0)
      return false;
    auto det3 = [&](int col) {
      double t[3][3];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          t[r][c] = c == col ? rhs[r] : m[r][c];
      return t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
             t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
             t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
    };
    sol[0] = det3(0) / det;
    sol[1] = det3(1) / det;
    sol[2] = det3(2) / det;
  }

  lambda[0] = 1.0;
  for (int k = 0; k < d; ++k) {
    lambda[k + 1] = sol[k];
    lambda[0] -= sol[k];
  }
  for (int k = 0; k <= d; ++k)
    if (lambda[k] < -kBaryTol)
      return false;
  return true;
}

} // namespace

std::vector<double> remap_closest_point(const Mesh &source,
                                        const Field &field,
                                        std::span<const Point> targets) {
  check_field(source, field);
  if (source.vertices.empty())
    throw ContractError("remap_closest_point: source mesh has no vertices");

  const RTreeIndex tree = RTreeIndex::build(source.vertices);
  const int nc = field.components;
  std::vector<double> out(targets.size() * static_cast<std::size_t>(nc));
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const NearestHit hit = tree.nearest(targets[k]);
    for (int c = 0; c < nc; ++c)
      out[k * nc + c] = field.values[static_cast<std::size_t>(hit.index) * nc + c];
  }
  return out;
}

LinearRemap remap_linear(const Mesh &source, const Field &field,
                         std::span<const Point> targets) {
  check_field(source, field);
  if (source.topo_dim != source.space_dim)
    throw ContractError(
        "remap_linear: requires a volume mesh (topo_dim == space_dim)");
  if (source.cells.empty())
    throw ContractError("remap_linear: source mesh has no cells");

  const CellBoxTree tree(source);
  const int nc = field.components;
  const int nvc = source.vertices_per_cell();

  LinearRemap result;
  result.values.resize(targets.size() * static_cast<std::size_t>(nc));
  result.outside.assign(targets.size(), false);

  std::vector<Point> missed;
  std::vector<std::size_t> missed_at;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    bool found = false;
    std::array<double, 4> lambda{};
    for (Index ci : tree.stab(targets[k])) {
      if (barycentric(source, source.cells[ci], targets[k], lambda)) {
        const Cell &cell = source.cells[ci];
        for (int c = 0; c < nc; ++c) {
          double v = 0.0;
          for (int i = 0; i < nvc; ++i)
            v += lambda[i] *
                 field.values[static_cast<std::size_t>(cell.v[i]) * nc + c];
          result.values[k * nc + c] = v;
        }
        found = true;
        break;
      }
    }
    if (!found) {
      result.outside[k] = true;
      missed.push_back(targets[k]);
      missed_at.push_back(k);
    }
  }

  if (!missed.empty()) {
    const std::vector<double> filler =
        remap_closest_point(source, field, missed);
    for (std::size_t m = 0; m < missed.size(); ++m)
      for (int c = 0; c < nc; ++c)
        result.values[missed_at[m] * nc + c] = filler[m * nc + c];
  }
  return result;
}

std::vector<Point> quadrature_targets(const Mesh &mesh) {
  if (mesh.cells.empty())
    throw ContractError("quadrature_targets: mesh has no cells");
  std::vector<Point> out;
  out.reserve(mesh.cells.size());
  for (const Cell &c : mesh.cells)
    out.push_back(cell_barycenter(mesh, c));
  return out;
}

} // namespace mxf
