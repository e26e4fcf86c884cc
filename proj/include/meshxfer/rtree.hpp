#pragma once

#include <set>
#include <utility>
#include <vector>

#include "meshxfer/geometry.hpp"
#include "meshxfer/mesh.hpp"

namespace mxf {

struct NearestHit {
  Index index = -1;     ///< global index of the found point
  double distance = 0;  ///< exact Euclidean distance
  int owner = 0;        ///< owner id (multipoint queries; 0 otherwise)
};

/// Immutable STR-bulk-loaded R-tree over a point set. Points are packed into
/// leaves by sorting into x slabs, y runs within each slab and z order within
/// each run, with ties broken by original index. Queries are safe to run
/// concurrently from many threads.
class RTreeIndex {
public:
  RTreeIndex() = default;

  /// Points keep their position in the input as global index.
  static RTreeIndex build(std::vector<Point> points, int leaf_capacity = 16);

  /// Same packing, but entries carry caller-provided ids (used by the
  /// boundary locator, where ids are mesh vertex indices).
  static RTreeIndex build_with_ids(std::vector<Point> points,
                                   std::vector<Index> ids,
                                   int leaf_capacity = 16);

  /// The entry minimizing Euclidean distance; ties by smallest id.
  /// An entry with id == exclude is skipped (used for nearest-gap scans).
  NearestHit nearest(const Point &query, Index exclude = -1) const;

  /// Ids of all entries with distance <= radius, ascending.
  std::vector<Index> radius_search(const Point &query, double radius) const;

  std::size_t size() const { return entries_.size(); }
  int height() const { return height_; }
  std::size_t leaf_count() const { return leaf_count_; }
  int leaf_capacity() const { return leaf_capacity_; }

  /// Walks the tree verifying box containment and entry coverage; throws
  /// Error on violation. Test support.
  void check_invariants() const;

  /// Squared-distance variant used for exact reductions.
  void nearest2(const Point &query, double &best_d2, Index &best_id,
                Index exclude = -1) const;

private:
  struct Entry {
    Point p;
    Index id;
  };
  struct Node {
    Box box;
    int first = 0;  // child node index, or entry begin for leaves
    int count = 0;  // child count, or entry count for leaves
    bool leaf = false;
  };

  std::vector<Entry> entries_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int height_ = 0;
  std::size_t leaf_count_ = 0;
  int leaf_capacity_ = 0;

  void pack(int leaf_capacity);
};

/// Exhaustive-scan oracle with the same contract as RTreeIndex::nearest.
NearestHit nearest_linear(const std::vector<Point> &points,
                          const Point &query);

/// Nearest vertex among those on boundary faces carrying one of the tags.
/// Reusable across queries; hit indices are mesh vertex indices.
class BoundaryLocator {
public:
  BoundaryLocator(const Mesh &mesh, const std::vector<int> &tags,
                  int leaf_capacity = 16);

  NearestHit nearest(const Point &query) const { return tree_.nearest(query); }
  const std::vector<Index> &vertex_ids() const { return ids_; }

private:
  RTreeIndex tree_;
  std::vector<Index> ids_;
};

NearestHit locate_boundary(const Mesh &mesh, const std::vector<int> &tags,
                           const Point &query);

/// Global point set split into per-owner chunks of consecutive global
/// indices; the logical stand-in for one point set distributed over
/// parallel processes.
struct Partition {
  int owner_id = 0;
  std::vector<Point> points;
  Index offset = 0;
};
using PartitionedPoints = std::vector<Partition>;

/// Answers every query against the union of all partitions without ever
/// gathering the points on one owner: each owner holds a tree over its own
/// chunk, candidate hits are reduced by (distance, global index).
class MultipointLocator {
public:
  explicit MultipointLocator(const PartitionedPoints &owned,
                             int leaf_capacity = 16);

  std::vector<NearestHit> locate(int requesting_owner,
                                 const std::vector<Point> &queries) const;

private:
  struct OwnerTree {
    int owner_id;
    RTreeIndex tree;
  };
  std::vector<OwnerTree> trees_;
  std::set<int> owner_ids_;
};

std::vector<std::vector<NearestHit>> multipoint_locate(
    const PartitionedPoints &owned,
    const std::vector<std::pair<int, std::vector<Point>>> &queries_per_owner,
    int leaf_capacity = 16);

} // namespace mxf
