#include "meshxfer/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "meshxfer/errors.hpp"
#include "meshxfer/fem.hpp"
#include "meshxfer/generators.hpp"
#include "meshxfer/geodesic.hpp"
#include "meshxfer/interface_map.hpp"
#include "meshxfer/params.hpp"
#include "meshxfer/rbf.hpp"
#include "meshxfer/remap.hpp"
#include "meshxfer/restart.hpp"
#include "meshxfer/rtree.hpp"
#include "meshxfer/vtk_io.hpp"

namespace mxf {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ParamTree load_params(const std::string &path) {
  if (path.empty())
    return ParamTree{};
  return parse_prm_file(path);
}

fs::path output_dir(const ParamTree &params) {
  const fs::path dir = params.get_string({"Output directory"}, ".");
  fs::create_directories(dir);
  return dir;
}

std::vector<Point> mesh_points(const Mesh &mesh) { return mesh.vertices; }

const Field &select_field(const VtkData &data, const std::string &name,
                          const std::string &file) {
  if (data.fields.empty())
    throw ContractError("no point data arrays in '" + file + "'");
  if (name.empty())
    return data.fields.front();
  for (const Field &f : data.fields)
    if (f.name == name)
      return f;
  throw ContractError("field '" + name + "' not found in '" + file + "'");
}

int cmd_info(const std::string &file, std::ostream &out) {
  const VtkData data = read_vtk_legacy_file(file);
  const MeshSummary s = mesh_info(data.mesh);
  out << "vertices=" << s.vertex_count << "\n";
  out << "cells=" << s.cell_count << "\n";
  out << "topo_dim=" << data.mesh.topo_dim << "\n";
  out << "space_dim=" << data.mesh.space_dim << "\n";
  out << "bbox_min=" << s.bbox.lo[0] << ' ' << s.bbox.lo[1] << ' '
      << s.bbox.lo[2] << "\n";
  out << "bbox_max=" << s.bbox.hi[0] << ' ' << s.bbox.hi[1] << ' '
      << s.bbox.hi[2] << "\n";
  for (const auto &[tag, count] : s.faces_per_tag)
    out << "boundary_faces_tag_" << tag << "=" << count << "\n";
  for (const Field &f : data.fields)
    out << "field=" << f.name << " components=" << f.components << "\n";
  return 0;
}

int cmd_locate(const ParamTree &params, std::ostream &out) {
  const Index n =
      static_cast<Index>(params.get_int({"Locate", "Points"}, 100000));
  const Index q =
      static_cast<Index>(params.get_int({"Locate", "Queries"}, 10000));
  const int capacity =
      static_cast<int>(params.get_int({"Locate", "Leaf capacity"}, 16));
  const unsigned seed =
      static_cast<unsigned>(params.get_int({"Locate", "Seed"}, 42));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Point> points(n);
  for (Point &p : points)
    p = Point{coord(rng), coord(rng), coord(rng)};
  std::vector<Point> queries(q);
  for (Point &p : queries)
    p = Point{coord(rng), coord(rng), coord(rng)};

  auto t0 = Clock::now();
  const RTreeIndex tree = RTreeIndex::build(points, capacity);
  const double build_time = seconds_since(t0);

  std::vector<NearestHit> tree_hits(q);
  t0 = Clock::now();
  for (Index i = 0; i < q; ++i)
    tree_hits[i] = tree.nearest(queries[i]);
  const double tree_time = seconds_since(t0);

  t0 = Clock::now();
  bool exact = true;
  for (Index i = 0; i < q; ++i) {
    const NearestHit lin = nearest_linear(points, queries[i]);
    exact = exact && lin.index == tree_hits[i].index &&
            lin.distance == tree_hits[i].distance;
  }
  const double linear_time = seconds_since(t0);

  out << "N=" << n << "\n";
  out << "Q=" << q << "\n";
  out << "leaf_capacity=" << capacity << "\n";
  out << "build_time=" << build_time << "\n";
  out << "tree_time=" << tree_time << "\n";
  out << "linear_time=" << linear_time << "\n";
  out << "speedup=" << (tree_time > 0 ? linear_time / tree_time : 0.0) << "\n";
  out << "exact_match=" << (exact ? "true" : "false") << "\n";
  return exact ? 0 : 2;
}

int cmd_transfer(const ParamTree &params, std::ostream &out) {
  const std::string source_file = params.get_string({"Transfer", "Source"});
  const std::string target_file = params.get_string({"Transfer", "Target"});
  const std::string field_name =
      params.get_string({"Transfer", "Field"}, "");
  const std::string method =
      params.get_string({"Transfer", "Method"}, "rbf-rescaled");
  const std::string kernel_name =
      params.get_string({"Transfer", "Kernel"}, "wendland");
  double radius = params.get_real({"Transfer", "Support radius"}, 0.0);
  const double radius_factor =
      params.get_real({"Transfer", "Support radius factor"}, 4.0);
  const std::string output_name =
      params.get_string({"Transfer", "Output"}, "transferred.vtk");

  const VtkData source = read_vtk_legacy_file(source_file);
  const VtkData target = read_vtk_legacy_file(target_file);
  const Field &field = select_field(source, field_name, source_file);
  const std::vector<Point> targets = mesh_points(target.mesh);

  Field result;
  result.name = field.name;
  result.components = field.components;

  out << "method=" << method << "\n";
  out << "sources=" << source.mesh.num_vertices() << "\n";
  out << "targets=" << targets.size() << "\n";

  if (method == "closest") {
    result.values = remap_closest_point(source.mesh, field, targets);
  } else if (method == "linear") {
    LinearRemap remap = remap_linear(source.mesh, field, targets);
    result.values = std::move(remap.values);
    out << "outside_count="
        << std::count(remap.outside.begin(), remap.outside.end(), true)
        << "\n";
  } else if (method == "rbf" || method == "rbf-rescaled" ||
             method == "rbf-geodesic") {
    Kernel kernel;
    if (kernel_name == "wendland")
      kernel.family = KernelFamily::WendlandC2;
    else if (kernel_name == "gaussian")
      kernel.family = KernelFamily::Gaussian;
    else
      throw ContractError("unknown kernel '" + kernel_name + "'");
    if (radius <= 0.0)
      radius = suggest_support_radius(source.mesh.vertices, radius_factor);
    kernel.support_radius = radius;
    out << "support_radius=" << radius << "\n";

    Metric metric = Metric::euclidean();
    if (method == "rbf-geodesic") {
      const std::string metric_file =
          params.get_string({"Transfer", "Metric mesh"}, source_file);
      const VtkData metric_mesh = metric_file == source_file
                                      ? source
                                      : read_vtk_legacy_file(metric_file);
      metric = setup_geodesic_metric(metric_mesh.mesh);
    }
    const bool rescale = method != "rbf";

    const RbfOperator op =
        setup_rbf(source.mesh.vertices, kernel, metric, rescale);
    TransferReport report;
    result.values =
        interpolate(op, field.values, field.components, targets, &report);
    out << "solve_iterations=" << report.solve_iterations << "\n";
    out << "solve_residual=" << report.solve_residual << "\n";
    if (rescale) {
      out << "ones_iterations=" << report.ones_iterations << "\n";
      out << "ones_residual=" << report.ones_residual << "\n";
      out << "s1_min=" << report.s1_min << "\n";
      out << "s1_max=" << report.s1_max << "\n";
    }
  } else {
    throw ContractError("unknown transfer method '" + method + "'");
  }

  const fs::path out_path = output_dir(params) / output_name;
  write_vtk_legacy_file(out_path.string(), target.mesh, {result});
  out << "output=" << out_path.string() << "\n";
  return 0;
}

int cmd_shortest_path(const ParamTree &params, std::ostream &out) {
  const std::string mesh_file = params.get_string({"Shortest path", "Mesh"});
  const VtkData data = read_vtk_legacy_file(mesh_file);
  const Mesh &mesh = data.mesh;

  auto resolve = [&](const char *vertex_key, const char *point_key) {
    const ParamTree::Path vk{"Shortest path", vertex_key};
    const ParamTree::Path pk{"Shortest path", point_key};
    if (params.has(vk)) {
      const long long v = params.get_int(vk);
      if (v < 0 || v >= mesh.num_vertices())
        throw ContractError(std::string(vertex_key) + " out of range");
      return static_cast<Index>(v);
    }
    if (!params.has(pk))
      throw ContractError(std::string("missing '") + vertex_key + "' or '" +
                          point_key + "'");
    std::istringstream iss(params.get_string(pk));
    Point p;
    if (!(iss >> p[0] >> p[1] >> p[2]))
      throw ContractError(std::string("cannot parse '") + point_key + "'");
    const RTreeIndex tree = RTreeIndex::build(mesh.vertices);
    return tree.nearest(p).index;
  };

  const Index a = resolve("Source vertex", "Source point");
  const Index b = resolve("Target vertex", "Target point");

  const EdgeGraph graph = build_edge_graph(mesh);
  const auto path = shortest_path(graph, a, b);

  out << "source=" << a << "\n";
  out << "target=" << b << "\n";
  if (!path) {
    out << "connected=false\n";
    return 0;
  }
  out << "connected=true\n";
  out << "length=" << path->length << "\n";
  out << "vertices=" << path->vertices.size() << "\n";

  // The path itself as a polyline mesh of segment cells (a == b draws
  // nothing).
  if (path->vertices.size() > 1) {
    Mesh poly;
    poly.topo_dim = 1;
    poly.space_dim = mesh.space_dim;
    for (Index v : path->vertices)
      poly.vertices.push_back(mesh.vertices[v]);
    for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i)
      poly.cells.push_back(
          Cell{{static_cast<Index>(i), static_cast<Index>(i + 1), -1, -1}});

    const std::string output_name =
        params.get_string({"Shortest path", "Output"}, "shortest_path.vtk");
    const fs::path out_path = output_dir(params) / output_name;
    write_vtk_legacy_file(out_path.string(), poly);
    out << "output=" << out_path.string() << "\n";
  }
  return 0;
}

Mesh laplace_mesh(const ParamTree &params) {
  if (params.has({"Laplace", "Mesh"}))
    return read_vtk_legacy_file(params.get_string({"Laplace", "Mesh"})).mesh;
  const int dim = static_cast<int>(params.get_int({"Laplace", "Dimension"}, 2));
  const Index n = static_cast<Index>(params.get_int({"Laplace", "n"}, 8));
  return generate_structured(dim, dim, n);
}

int cmd_laplace(const ParamTree &params, std::ostream &out) {
  const Mesh mesh = laplace_mesh(params);

  DirichletBC bc;
  std::vector<char> seen(mesh.vertices.size(), 0);
  bool any_table = false;
  for (const auto &sub : params.subsections())
    if (sub.first == "Boundary values") {
      any_table = true;
      for (const auto &[key, value] : sub.second.keys()) {
        const int tag = static_cast<int>(std::stoll(key));
        const double g = std::stod(value);
        for (Index v : boundary_vertices(mesh, {tag}))
          if (!seen[v]) {
            seen[v] = 1;
            bc.entries.push_back({v, g});
          }
      }
    }
  if (!any_table)
    throw ContractError(
        "laplace: missing 'Boundary values' subsection (tag = value lines)");

  const LaplaceSolution sol = solve_laplace(mesh, bc);
  out << "vertices=" << mesh.num_vertices() << "\n";
  out << "iterations=" << sol.iterations << "\n";
  out << "residual=" << sol.residual << "\n";
  const auto [mn, mx] =
      std::minmax_element(sol.field.values.begin(), sol.field.values.end());
  out << "min=" << *mn << "\n";
  out << "max=" << *mx << "\n";

  const std::string output_name =
      params.get_string({"Laplace", "Output"}, "laplace.vtk");
  const fs::path out_path = output_dir(params) / output_name;
  write_vtk_legacy_file(out_path.string(), mesh, {sol.field});
  out << "output=" << out_path.string() << "\n";
  return 0;
}

int cmd_couple_2d3d(const ParamTree &params, std::ostream &out) {
  const Index n = static_cast<Index>(params.get_int({"Couple", "n"}, 8));
  const int patch_tag =
      static_cast<int>(params.get_int({"Couple", "Patch tag"}, 2));
  const std::string data_kind =
      params.get_string({"Couple", "Perimeter data"}, "linear");
  const double constant =
      params.get_real({"Couple", "Constant value"}, 1.0);

  const Mesh volume = generate_structured(3, 3, n);
  std::function<double(const Point &)> perimeter;
  if (data_kind == "constant")
    perimeter = [constant](const Point &) { return constant; };
  else if (data_kind == "linear")
    perimeter = [](const Point &p) { return p[1] + p[2]; };
  else
    throw ContractError("unknown perimeter data '" + data_kind + "'");

  const SurfaceVolumeCoupling coupling =
      couple_surface_volume(volume, {patch_tag}, perimeter);

  // Copy semantics check: the volume solution on the patch matches the
  // surface solution at mapped vertices.
  double patch_max_error = 0.0;
  for (const InterfaceMap::Pair &p : coupling.map.pairs)
    patch_max_error =
        std::max(patch_max_error,
                 std::abs(coupling.surface_field.values[p.a] -
                          coupling.volume_field.values[p.b]));

  out << "n=" << n << "\n";
  out << "patch_tag=" << patch_tag << "\n";
  out << "pairs=" << coupling.map.pairs.size() << "\n";
  out << "patch_max_error=" << patch_max_error << "\n";
  const auto [smn, smx] = std::minmax_element(
      coupling.surface_field.values.begin(), coupling.surface_field.values.end());
  const auto [vmn, vmx] = std::minmax_element(
      coupling.volume_field.values.begin(), coupling.volume_field.values.end());
  out << "surface_min=" << *smn << "\n";
  out << "surface_max=" << *smx << "\n";
  out << "volume_min=" << *vmn << "\n";
  out << "volume_max=" << *vmx << "\n";

  const fs::path dir = output_dir(params);
  const std::string surf_name =
      params.get_string({"Couple", "Output surface"}, "couple_surface.vtk");
  const std::string vol_name =
      params.get_string({"Couple", "Output volume"}, "couple_volume.vtk");
  write_vtk_legacy_file((dir / surf_name).string(), coupling.surface,
                        {coupling.surface_field});
  write_vtk_legacy_file((dir / vol_name).string(), volume,
                        {coupling.volume_field});
  out << "output_surface=" << (dir / surf_name).string() << "\n";
  out << "output_volume=" << (dir / vol_name).string() << "\n";

  const std::string map_name =
      params.get_string({"Couple", "Output map"}, "");
  if (!map_name.empty()) {
    std::ofstream csv(dir / map_name);
    write_interface_csv(csv, coupling.map);
    out << "output_map=" << (dir / map_name).string() << "\n";
  }
  return 0;
}

int cmd_checkpoint_demo(const ParamTree &params, std::ostream &out) {
  const std::int64_t steps =
      params.get_int({"Checkpoint demo", "Steps"}, 2000);
  const std::size_t vector_size = static_cast<std::size_t>(
      params.get_int({"Checkpoint demo", "Vector size"}, 1000));
  const double lambda =
      params.get_real({"Checkpoint demo", "Lambda"}, 0.1);
  const double dt = params.get_real({"Checkpoint demo", "Dt"}, 0.001);

  const bool serialization_enabled =
      params.get_bool({"Serialization", "Enable"}, true);
  if (!serialization_enabled)
    throw ContractError("checkpoint-demo requires Serialization.Enable");
  const std::string basename =
      params.get_string({"Serialization", "Serialization basename"},
                        "restart");
  const std::int64_t every_n =
      params.get_int({"Serialization", "Serialize every n timesteps"}, 1000);
  const std::int64_t restart_step =
      params.get_int({"Restart", "Restart timestep index"}, steps / 2);

  const fs::path dir = output_dir(params);
  const CheckpointDemoReport report = run_checkpoint_demo(
      vector_size, lambda, dt, steps, every_n, restart_step,
      (dir / basename).string());

  out << "steps=" << report.steps << "\n";
  out << "serialize_every=" << every_n << "\n";
  out << "restart_step=" << report.restart_step << "\n";
  out << "checkpoint_file=" << report.checkpoint_file << "\n";
  out << "resume_equal=" << (report.resume_equal ? "true" : "false") << "\n";
  out << "files_identical=" << (report.files_identical ? "true" : "false")
      << "\n";
  out << "closed_form_ok=" << (report.closed_form_ok ? "true" : "false")
      << "\n";
  out << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? 0 : 2;
}

} // namespace

CheckpointDemoReport run_checkpoint_demo(std::size_t vector_size,
                                         double lambda, double dt,
                                         std::int64_t steps,
                                         std::int64_t serialize_every,
                                         std::int64_t restart_step,
                                         const std::string &basename) {
  if (steps < 2 || restart_step < 1 || restart_step >= steps)
    throw ContractError("checkpoint demo: need 1 <= restart_step < steps");

  std::vector<double> initial(vector_size);
  for (std::size_t i = 0; i < vector_size; ++i)
    initial[i] = 1.0 + static_cast<double>(i) / static_cast<double>(
                                                   std::max<std::size_t>(
                                                       vector_size, 1));

  auto step_once = [](TimeHistory &h, double lam) {
    const std::vector<double> &u = h.solutions.front();
    std::vector<double> next(u.size());
    const double factor = 1.0 - lam * h.dt;
    for (std::size_t i = 0; i < u.size(); ++i)
      next[i] = u[i] * factor;
    h.advance(std::move(next));
  };

  CheckpointDemoReport report;
  report.steps = steps;
  report.restart_step = restart_step;

  // One-piece reference run.
  TimeHistory continuous = TimeHistory::make(2, vector_size, 0.0, dt);
  continuous.solutions.front() = initial;
  {
    double lam = lambda;
    RestartRegistry reg;
    reg.attach_scalar("lambda", &lam);
    reg.attach_time_history("u", &continuous);
    for (std::int64_t s = 1; s <= steps; ++s) {
      step_once(continuous, lam);
      if (checkpoint_policy(serialize_every, s))
        reg.serialize(basename + "_oneshot", s);
    }
  }

  // First leg of the split run, checkpointing on the way.
  {
    TimeHistory h = TimeHistory::make(2, vector_size, 0.0, dt);
    h.solutions.front() = initial;
    double lam = lambda;
    RestartRegistry reg;
    reg.attach_scalar("lambda", &lam);
    reg.attach_time_history("u", &h);
    for (std::int64_t s = 1; s <= restart_step; ++s) {
      step_once(h, lam);
      if (checkpoint_policy(serialize_every, s) || s == restart_step)
        report.checkpoint_file = reg.serialize(basename, s);
    }
  }

  // Second leg: fresh zeroed state recovered entirely from the file.
  TimeHistory resumed = TimeHistory::make(2, vector_size, 0.0, dt);
  {
    double lam = 0.0;
    RestartRegistry reg;
    reg.attach_scalar("lambda", &lam);
    reg.attach_time_history("u", &resumed);
    const RestartRegistry::RestartInfo info =
        reg.restart(basename, static_cast<std::uint64_t>(restart_step));
    for (std::int64_t s = static_cast<std::int64_t>(resumed.step_index) + 1;
         s <= steps; ++s)
      step_once(resumed, lam);
    (void)info;
  }

  report.resume_equal =
      continuous.solutions.front().size() ==
          resumed.solutions.front().size() &&
      std::memcmp(continuous.solutions.front().data(),
                  resumed.solutions.front().data(),
                  vector_size * sizeof(double)) == 0 &&
      continuous.step_index == resumed.step_index;

  // The reference run and the split run serialize identical state at the
  // checkpoint steps; their files must match byte for byte.
  report.files_identical = true;
  for (std::int64_t s = serialize_every; s <= restart_step;
       s += serialize_every) {
    const std::string a =
        RestartRegistry::checkpoint_path(basename + "_oneshot", s);
    const std::string b = RestartRegistry::checkpoint_path(basename, s);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) {
      report.files_identical = false;
      break;
    }
    std::string ba((std::istreambuf_iterator<char>(fa)),
                   std::istreambuf_iterator<char>());
    std::string bb((std::istreambuf_iterator<char>(fb)),
                   std::istreambuf_iterator<char>());
    report.files_identical = report.files_identical && ba == bb;
  }

  const double factor = 1.0 - lambda * dt;
  const double decay = std::pow(factor, static_cast<double>(steps));
  report.closed_form_ok = true;
  for (std::size_t i = 0; i < vector_size; ++i) {
    const double expected = initial[i] * decay;
    const double got = resumed.solutions.front()[i];
    if (std::abs(got - expected) >
        1e-9 * std::max(std::abs(expected), 1e-30)) {
      report.closed_form_ok = false;
      break;
    }
  }
  return report;
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"meshxfer: field transfer between non-matching meshes, "
               "point location, geodesic paths, Laplace demos and "
               "checkpoint/restart"};
  app.require_subcommand(1);

  std::string info_file;
  CLI::App *info =
      app.add_subcommand("info", "Print mesh summary for a VTK file");
  info->add_option("file", info_file, "VTK legacy file")->required();

  struct Sub {
    CLI::App *cmd;
    std::string params_file;
  };
  auto add_prm_subcommand = [&](const char *name, const char *help) {
    auto sub = std::make_shared<Sub>();
    sub->cmd = app.add_subcommand(name, help);
    sub->cmd->add_option("-p,--params", sub->params_file,
                         "prm parameter file");
    return sub;
  };

  auto transfer = add_prm_subcommand(
      "transfer", "Transfer a field from a source to a target mesh");
  auto locate = add_prm_subcommand(
      "locate", "Nearest-neighbor benchmark: R-tree vs linear scan");
  auto spath = add_prm_subcommand(
      "shortest-path", "Shortest edge path between two mesh points");
  auto laplace = add_prm_subcommand(
      "laplace", "Solve -lap u = 0 with tagged Dirichlet data");
  auto couple = add_prm_subcommand(
      "couple-2d3d", "Surface/volume Laplace coupling demo");
  auto ckpt = add_prm_subcommand(
      "checkpoint-demo", "Serialize/restart resume-equivalence demo");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << e.what() << "\n";
    err << app.help();
    return 1;
  }

  try {
    if (info->parsed())
      return cmd_info(info_file, out);
    if (transfer->cmd->parsed())
      return cmd_transfer(load_params(transfer->params_file), out);
    if (locate->cmd->parsed())
      return cmd_locate(load_params(locate->params_file), out);
    if (spath->cmd->parsed())
      return cmd_shortest_path(load_params(spath->params_file), out);
    if (laplace->cmd->parsed())
      return cmd_laplace(load_params(laplace->params_file), out);
    if (couple->cmd->parsed())
      return cmd_couple_2d3d(load_params(couple->params_file), out);
    if (ckpt->cmd->parsed())
      return cmd_checkpoint_demo(load_params(ckpt->params_file), out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

} // namespace mxf
