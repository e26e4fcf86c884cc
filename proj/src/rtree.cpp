#include "meshxfer/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

inline bool closer(double d2, Index id, double best_d2, Index best_id) {
  return d2 < best_d2 || (d2 == best_d2 && id < best_id);
}

} // namespace

RTreeIndex RTreeIndex::build(std::vector<Point> points, int leaf_capacity) {
  std::vector<Index> ids(points.size());
  std::iota(ids.begin(), ids.end(), Index{0});
  return build_with_ids(std::move(points), std::move(ids), leaf_capacity);
}

RTreeIndex RTreeIndex::build_with_ids(std::vector<Point> points,
                                      std::vector<Index> ids,
                                      int leaf_capacity) {
  if (points.empty())
    throw ContractError("RTreeIndex: point set must not be empty");
  if (points.size() != ids.size())
    throw ContractError("RTreeIndex: ids must match points");
  if (leaf_capacity < 2)
    throw ContractError("RTreeIndex: leaf_capacity must be >= 2");

  RTreeIndex tree;
  tree.entries_.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    tree.entries_[i] = Entry{points[i], ids[i]};
  tree.pack(leaf_capacity);
  return tree;
}

void RTreeIndex::pack(int leaf_capacity) {
  leaf_capacity_ = leaf_capacity;
  const std::size_t n = entries_.size();
  const std::size_t cap = static_cast<std::size_t>(leaf_capacity);

  auto by_axis = [](int axis) {
    return [axis](const Entry &a, const Entry &b) {
      if (a.p[axis] != b.p[axis])
        return a.p[axis] < b.p[axis];
      return a.id < b.id;
    };
  };

  // Sort-Tile-Recursive packing: x slabs, y runs, z order.
  const std::size_t leaves = (n + cap - 1) / cap;
  const std::size_t nx = static_cast<std::size_t>(
      std::ceil(std::cbrt(static_cast<double>(leaves))));
  std::sort(entries_.begin(), entries_.end(), by_axis(0));
  const std::size_t slab_size = (n + nx - 1) / nx;

  for (std::size_t s0 = 0; s0 < n; s0 += slab_size) {
    const std::size_t s1 = std::min(s0 + slab_size, n);
    const std::size_t slab_leaves = (s1 - s0 + cap - 1) / cap;
    const std::size_t ny = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(slab_leaves))));
    std::sort(entries_.begin() + s0, entries_.begin() + s1, by_axis(1));
    const std::size_t run_size = (s1 - s0 + ny - 1) / ny;
    for (std::size_t r0 = s0; r0 < s1; r0 += run_size) {
      const std::size_t r1 = std::min(r0 + run_size, s1);
      std::sort(entries_.begin() + r0, entries_.begin() + r1, by_axis(2));
    }
  }

  // Leaf level.
  std::vector<int> level;
  for (std::size_t b = 0; b < n; b += cap) {
    const std::size_t e = std::min(b + cap, n);
    Node node;
    node.leaf = true;
    node.first = static_cast<int>(b);
    node.count = static_cast<int>(e - b);
    node.box = Box{entries_[b].p, entries_[b].p};
    for (std::size_t i = b; i < e; ++i)
      node.box.expand(entries_[i].p);
    level.push_back(static_cast<int>(nodes_.size()));
    nodes_.push_back(node);
  }
  leaf_count_ = level.size();
  height_ = 1;

  // Pack upper levels sequentially until a single root remains.
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
    ++height_;
  }
  root_ = level.front();
}

void RTreeIndex::nearest2(const Point &query, double &best_d2, Index &best_id,
                          Index exclude) const {
  struct Frame {
    double mind2;
    int node;
  };
  // Children visited best-first within each node; a subtree is pruned only
  // when its box cannot contain a point at distance <= current best (ties
  // must be descended to honor the smallest-index rule).
  std::vector<Frame> stack;
  stack.push_back({nodes_[root_].box.min_distance2(query), root_});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.mind2 > best_d2)
      continue;
    const Node &node = nodes_[f.node];
    if (node.leaf) {
      for (int i = 0; i < node.count; ++i) {
        const Entry &e = entries_[node.first + i];
        if (e.id == exclude)
          continue;
        const double d2 = distance2(query, e.p);
        if (closer(d2, e.id, best_d2, best_id)) {
          best_d2 = d2;
          best_id = e.id;
        }
      }
    } else if (node.count <= 64) {
      Frame children[64];
      int nc = 0;
      for (int i = 0; i < node.count; ++i) {
        const int child = node.first + i;
        const double d2 = nodes_[child].box.min_distance2(query);
        if (d2 <= best_d2)
          children[nc++] = {d2, child};
      }
      std::sort(children, children + nc,
                [](const Frame &a, const Frame &b) { return a.mind2 < b.mind2; });
      // Push in reverse so the closest child is processed first.
      for (int i = nc - 1; i >= 0; --i)
        stack.push_back(children[i]);
    } else {
      for (int i = 0; i < node.count; ++i) {
        const int child = node.first + i;
        const double d2 = nodes_[child].box.min_distance2(query);
        if (d2 <= best_d2)
          stack.push_back({d2, child});
      }
    }
  }
}

NearestHit RTreeIndex::nearest(const Point &query, Index exclude) const {
  if (entries_.empty())
    throw ContractError("RTreeIndex::nearest: tree is empty");
  double best_d2 = std::numeric_limits<double>::infinity();
  Index best_id = -1;
  nearest2(query, best_d2, best_id, exclude);
  if (best_id < 0)
    throw ContractError("RTreeIndex::nearest: no candidate (all excluded)");
  return NearestHit{best_id, std::sqrt(best_d2), 0};
}

std::vector<Index> RTreeIndex::radius_search(const Point &query,
                                             double radius) const {
  const double r2 = radius * radius;
  std::vector<Index> out;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node &node = nodes_[stack.back()];
    stack.pop_back();
    if (node.box.min_distance2(query) > r2)
      continue;
    if (node.leaf) {
      for (int i = 0; i < node.count; ++i) {
        const Entry &e = entries_[node.first + i];
        if (distance2(query, e.p) <= r2)
          out.push_back(e.id);
      }
    } else {
      for (int i = 0; i < node.count; ++i)
        stack.push_back(node.first + i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void RTreeIndex::check_invariants() const {
  if (root_ < 0)
    throw Error("rtree: no root");
  std::vector<Index> seen;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node &node = nodes_[stack.back()];
    stack.pop_back();
    if (node.leaf) {
      for (int i = 0; i < node.count; ++i) {
        const Entry &e = entries_[node.first + i];
        if (node.box.min_distance2(e.p) != 0.0 || !node.box.contains(e.p))
          throw Error("rtree: leaf entry escapes its leaf box");
        seen.push_back(e.id);
      }
    } else {
      for (int i = 0; i < node.count; ++i) {
        const int child = node.first + i;
        const Box &b = nodes_[child].box;
        if (!node.box.contains(b.lo) || !node.box.contains(b.hi))
          throw Error("rtree: child box escapes its parent box");
        stack.push_back(child);
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  std::vector<Index> expected;
  for (const Entry &e : entries_)
    expected.push_back(e.id);
  std::sort(expected.begin(), expected.end());
  if (seen != expected)
    throw Error("rtree: entries are not covered by exactly one leaf");
}

NearestHit nearest_linear(const std::vector<Point> &points,
                          const Point &query) {
  if (points.empty())
    throw ContractError("nearest_linear: point set must not be empty");
  double best_d2 = std::numeric_limits<double>::infinity();
  Index best_id = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = distance2(query, points[i]);
    if (closer(d2, static_cast<Index>(i), best_d2, best_id)) {
      best_d2 = d2;
      best_id = static_cast<Index>(i);
    }
  }
  return NearestHit{best_id, std::sqrt(best_d2), 0};
}

BoundaryLocator::BoundaryLocator(const Mesh &mesh,
                                 const std::vector<int> &tags,
                                 int leaf_capacity) {
  ids_ = boundary_vertices(mesh, tags);
  if (ids_.empty())
    throw EmptySelectionError(
        "BoundaryLocator: no boundary face carries any requested tag");
  std::vector<Point> pts;
  pts.reserve(ids_.size());
  for (Index v : ids_)
    pts.push_back(mesh.vertices[v]);
  tree_ = RTreeIndex::build_with_ids(std::move(pts), ids_, leaf_capacity);
}

NearestHit locate_boundary(const Mesh &mesh, const std::vector<int> &tags,
                           const Point &query) {
  return BoundaryLocator(mesh, tags).nearest(query);
}

MultipointLocator::MultipointLocator(const PartitionedPoints &owned,
                                     int leaf_capacity) {
  if (owned.empty())
    throw ContractError("multipoint_locate: no partitions");

  // The partitions must cover 0..N-1 with disjoint consecutive chunks.
  std::vector<std::pair<Index, Index>> ranges;
  std::set<int> owner_ids;
  for (const Partition &part : owned) {
    if (!owner_ids.insert(part.owner_id).second)
      throw ContractError("multipoint_locate: duplicate owner id " +
                          std::to_string(part.owner_id));
    ranges.emplace_back(part.offset,
                        part.offset + static_cast<Index>(part.points.size()));
  }
  std::sort(ranges.begin(), ranges.end());
  Index expect = 0;
  for (const auto &[lo, hi] : ranges) {
    if (lo != expect)
      throw ContractError(
          "multipoint_locate: partitions do not cover global indices");
    expect = hi;
  }

  owner_ids_ = std::move(owner_ids);
  for (const Partition &part : owned) {
    if (part.points.empty())
      continue;
    std::vector<Index> ids(part.points.size());
    std::iota(ids.begin(), ids.end(), part.offset);
    trees_.push_back(OwnerTree{
        part.owner_id,
        RTreeIndex::build_with_ids(part.points, std::move(ids),
                                   leaf_capacity)});
  }
  if (trees_.empty())
    throw ContractError("multipoint_locate: global point set is empty");
}

std::vector<NearestHit> MultipointLocator::locate(
    int requesting_owner, const std::vector<Point> &queries) const {
  if (owner_ids_.count(requesting_owner) == 0)
    throw ContractError("multipoint_locate: unknown owner id " +
                        std::to_string(requesting_owner));

  std::vector<NearestHit> hits;
  hits.reserve(queries.size());
  for (const Point &q : queries) {
    double best_d2 = std::numeric_limits<double>::infinity();
    Index best_id = -1;
    int best_owner = 0;
    for (const OwnerTree &t : trees_) {
      double d2 = std::numeric_limits<double>::infinity();
      Index id = -1;
      t.tree.nearest2(q, d2, id, -1);
      if (id >= 0 && closer(d2, id, best_d2, best_id)) {
        best_d2 = d2;
        best_id = id;
        best_owner = t.owner_id;
      }
    }
    hits.push_back(NearestHit{best_id, std::sqrt(best_d2), best_owner});
  }
  return hits;
}

std::vector<std::vector<NearestHit>> multipoint_locate(
    const PartitionedPoints &owned,
    const std::vector<std::pair<int, std::vector<Point>>> &queries_per_owner,
    int leaf_capacity) {
  const MultipointLocator locator(owned, leaf_capacity);
  std::vector<std::vector<NearestHit>> out;
  out.reserve(queries_per_owner.size());
  for (const auto &[owner, queries] : queries_per_owner)
    out.push_back(locator.locate(owner, queries));
  return out;
}

} // namespace mxf
