#include "meshxfer/interface_map.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <future>
#include <ostream>
#include <thread>

#include "meshxfer/errors.hpp"
#include "meshxfer/rtree.hpp"

namespace mxf {

namespace {

// Interface vertices of one side: tagged boundary vertices, or every vertex
// when this side is a lower-dimensional mesh coupled against the other.
std::vector<Index> interface_vertices(const Mesh &mesh,
                                      const std::vector<int> &tags,
                                      const Mesh &other) {
  if (mesh.topo_dim == other.topo_dim - 1) {
    std::vector<Index> all(mesh.vertices.size());
    for (std::size_t i = 0; i < all.size(); ++i)
      all[i] = static_cast<Index>(i);
    return all;
  }
  return boundary_vertices(mesh, tags);
}

} // namespace

InterfaceMap compute_interface_map(const Mesh &mesh_a,
                                   const std::vector<int> &tags_a,
                                   const Mesh &mesh_b,
                                   const std::vector<int> &tags_b,
                                   double tolerance) {
  const std::vector<Index> a_verts =
      interface_vertices(mesh_a, tags_a, mesh_b);
  const std::vector<Index> b_verts =
      interface_vertices(mesh_b, tags_b, mesh_a);
  if (a_verts.empty() || b_verts.empty())
    throw EmptySelectionError(
        "compute_interface_map: no interface vertices on one side");

  if (tolerance <= 0.0) {
    Box joint = mesh_a.bounding_box();
    joint.expand(mesh_b.bounding_box().lo);
    joint.expand(mesh_b.bounding_box().hi);
    tolerance = 1e-8 * joint.diagonal();
  }

  std::vector<Point> b_points;
  b_points.reserve(b_verts.size());
  for (Index v : b_verts)
    b_points.push_back(mesh_b.vertices[v]);
  const RTreeIndex b_tree =
      RTreeIndex::build_with_ids(std::move(b_points), b_verts);

  // Candidate pairs: nearest tagged B vertex per A vertex, queried in
  // parallel chunks against the immutable B-side tree.
  struct Candidate {
    Index a;
    Index b;
    double distance;
  };
  std::vector<Candidate> candidates(a_verts.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const NearestHit hit = b_tree.nearest(mesh_a.vertices[a_verts[i]]);
      candidates[i] = Candidate{a_verts[i], hit.index, hit.distance};
    }
  };
  const std::size_t chunk = 4096;
  if (a_verts.size() > 2 * chunk && std::thread::hardware_concurrency() > 1) {
    std::vector<std::future<void>> jobs;
    for (std::size_t begin = 0; begin < a_verts.size(); begin += chunk)
      jobs.push_back(std::async(std::launch::async, worker, begin,
                                std::min(begin + chunk, a_verts.size())));
    for (auto &j : jobs)
      j.get();
  } else {
    worker(0, a_verts.size());
  }

  candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                  [&](const Candidate &c) {
                                    return c.distance > tolerance;
                                  }),
                   candidates.end());
  if (candidates.empty())
    throw DisjointInterfaceError(
        "compute_interface_map: interfaces share no vertices within "
        "tolerance " +
        std::to_string(tolerance));

  // Globally closest claimant wins a contested B vertex; the order of the
  // input never matters because ties fall back to vertex indices.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &x, const Candidate &y) {
              if (x.distance != y.distance)
                return x.distance < y.distance;
              if (x.a != y.a)
                return x.a < y.a;
              return x.b < y.b;
            });

  InterfaceMap map;
  map.tolerance = tolerance;
  std::vector<bool> b_taken(mesh_b.vertices.size(), false);
  for (const Candidate &c : candidates) {
    if (b_taken[c.b]) {
      map.conflicts.push_back({c.a, c.b, c.distance});
      continue;
    }
    b_taken[c.b] = true;
    map.pairs.push_back({c.a, c.b, c.distance});
  }
  std::sort(map.pairs.begin(), map.pairs.end(),
            [](const InterfaceMap::Pair &x, const InterfaceMap::Pair &y) {
              return x.a < y.a;
            });
  return map;
}

InterfaceValues transfer_across_interface(const InterfaceMap &map,
                                          std::span<const double> values_on_a,
                                          int components,
                                          std::span<const Index> required_b) {
  if (map.pairs.empty())
    throw ContractError("transfer_across_interface: map is empty");
  if (components < 1)
    throw ContractError("transfer_across_interface: components must be >= 1");

  std::vector<std::pair<Index, Index>> b_to_a; // (b vertex, a vertex)
  b_to_a.reserve(map.pairs.size());
  for (const InterfaceMap::Pair &p : map.pairs)
    b_to_a.emplace_back(p.b, p.a);
  std::sort(b_to_a.begin(), b_to_a.end());

  std::vector<Index> missing;
  InterfaceValues out;
  auto emit = [&](Index b, Index a) {
    out.b_vertices.push_back(b);
    for (int c = 0; c < components; ++c) {
      const std::size_t at =
          static_cast<std::size_t>(a) * components + static_cast<std::size_t>(c);
      if (at >= values_on_a.size())
        throw ContractError(
            "transfer_across_interface: A-side values array too short");
      out.values.push_back(values_on_a[at]);
    }
  };

  if (required_b.empty()) {
    for (const auto &[b, a] : b_to_a)
      emit(b, a);
  } else {
    std::vector<Index> wanted(required_b.begin(), required_b.end());
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    for (Index b : wanted) {
      const auto it = std::lower_bound(
          b_to_a.begin(), b_to_a.end(), std::make_pair(b, Index{0}),
          [](const auto &x, const auto &y) { return x.first < y.first; });
      if (it == b_to_a.end() || it->first != b) {
        missing.push_back(b);
        continue;
      }
      emit(b, it->second);
    }
    if (!missing.empty()) {
      std::string msg = "transfer_across_interface: unmapped B vertices:";
      for (Index v : missing)
        msg += " " + std::to_string(v);
      throw CoverageError(msg);
    }
  }
  return out;
}

void write_interface_csv(std::ostream &out, const InterfaceMap &map) {
  out << "a,b,distance\n";
  char buf[96];
  for (const InterfaceMap::Pair &p : map.pairs) {
    std::snprintf(buf, sizeof buf, "%" PRId32 ",%" PRId32 ",%.17g\n", p.a,
                  p.b, p.distance);
    out << buf;
  }
}

} // namespace mxf
