#include "meshxfer/vtk_io.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

// Whitespace tokenizer that tracks line numbers for error messages.
class Tokenizer {
public:
  explicit Tokenizer(std::istream &in) : in_(in) {}

  bool next(std::string &tok) {
    tok.clear();
    int c;
    while ((c = in_.get()) != EOF) {
      if (c == '\n')
        ++line_;
      if (!std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        break;
      }
    }
    if (tok.empty())
      return false;
    while ((c = in_.peek()) != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(in_.get()));
    }
    return true;
  }

  std::string expect(const char *what) {
    std::string tok;
    if (!next(tok))
      throw FormatError(std::string("vtk: truncated stream, expected ") +
                        what + " near line " + std::to_string(line_));
    return tok;
  }

  long long expect_int(const char *what) {
    const std::string tok = expect(what);
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(tok, &pos);
    } catch (const std::exception &) {
      pos = 0;
    }
    if (pos != tok.size())
      throw FormatError("vtk: expected integer " + std::string(what) +
                        ", got '" + tok + "' at line " + std::to_string(line_));
    return value;
  }

  double expect_real(const char *what) {
    const std::string tok = expect(what);
    std::size_t pos = 0;
    double value = 0;
    try {
      value = std::stod(tok, &pos);
    } catch (const std::exception &) {
      pos = 0;
    }
    if (pos != tok.size())
      throw FormatError("vtk: expected number " + std::string(what) +
                        ", got '" + tok + "' at line " + std::to_string(line_));
    return value;
  }

  void read_header_line(std::string &out) {
    std::getline(in_, out);
    ++line_;
  }

  int line() const { return line_; }

private:
  std::istream &in_;
  int line_ = 1;
};

int cell_type_dim(int type) {
  switch (type) {
  case 3:
    return 1;
  case 5:
    return 2;
  case 10:
    return 3;
  default:
    return -1;
  }
}

std::string upper(std::string s) {
  for (char &c : s)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void append_number(std::string &out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

} // namespace

VtkData read_vtk_legacy(std::istream &in) {
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0)
    throw FormatError("vtk: missing '# vtk DataFile' header");
  std::getline(in, line); // free-text title

  Tokenizer tok(in);
  if (upper(tok.expect("ASCII marker")) != "ASCII")
    throw FormatError("vtk: only ASCII files are supported");
  if (upper(tok.expect("DATASET")) != "DATASET" ||
      upper(tok.expect("dataset type")) != "UNSTRUCTURED_GRID")
    throw FormatError("vtk: only DATASET UNSTRUCTURED_GRID is supported");

  VtkData data;
  Mesh &mesh = data.mesh;

  std::vector<std::vector<Index>> raw_cells;
  std::vector<int> raw_types;

  std::string section;
  while (tok.next(section)) {
    const std::string kw = upper(section);
    if (kw == "POINTS") {
      const long long n = tok.expect_int("point count");
      if (n < 0)
        throw FormatError("vtk: negative point count");
      const std::string dtype = upper(tok.expect("point data type"));
      if (dtype != "FLOAT" && dtype != "DOUBLE")
        throw FormatError("vtk: POINTS must be float or double, got '" +
                          dtype + "'");
      mesh.vertices.resize(static_cast<std::size_t>(n));
      for (auto &p : mesh.vertices)
        for (std::size_t a = 0; a < 3; ++a)
          p[a] = tok.expect_real("point coordinate");
    } else if (kw == "CELLS") {
      const long long n = tok.expect_int("cell count");
      tok.expect_int("cell list size");
      raw_cells.resize(static_cast<std::size_t>(n));
      for (auto &c : raw_cells) {
        // Arity is validated against CELL_TYPES afterwards, so that files
        // with unsupported cell kinds fail with the type code.
        const long long k = tok.expect_int("cell vertex count");
        if (k < 1 || k > static_cast<long long>(mesh.vertices.size()))
          throw FormatError("vtk: implausible cell vertex count " +
                            std::to_string(k) + " at line " +
                            std::to_string(tok.line()));
        c.resize(static_cast<std::size_t>(k));
        for (auto &v : c) {
          const long long idx = tok.expect_int("cell vertex index");
          if (idx < 0 || idx >= static_cast<long long>(mesh.vertices.size()))
            throw FormatError("vtk: vertex index " + std::to_string(idx) +
                              " out of range at line " +
                              std::to_string(tok.line()));
          v = static_cast<Index>(idx);
        }
      }
    } else if (kw == "CELL_TYPES") {
      const long long n = tok.expect_int("cell type count");
      if (static_cast<std::size_t>(n) != raw_cells.size())
        throw FormatError("vtk: CELL_TYPES count differs from CELLS count");
      raw_types.resize(static_cast<std::size_t>(n));
      for (auto &t : raw_types) {
        const long long type = tok.expect_int("cell type");
        if (cell_type_dim(static_cast<int>(type)) < 0)
          throw FormatError("vtk: unsupported cell type " +
                            std::to_string(type));
        t = static_cast<int>(type);
      }
    } else if (kw == "POINT_DATA") {
      const long long n = tok.expect_int("point data count");
      if (static_cast<std::size_t>(n) != mesh.vertices.size())
        throw FormatError("vtk: POINT_DATA count differs from POINTS count");
    } else if (kw == "SCALARS" || kw == "VECTORS") {
      Field field;
      field.name = tok.expect("field name");
      tok.expect("field data type");
      if (kw == "SCALARS") {
        // Optional component count, then the LOOKUP_TABLE line.
        std::string nxt = tok.expect("SCALARS components or LOOKUP_TABLE");
        field.components = 1;
        if (upper(nxt) != "LOOKUP_TABLE") {
          std::size_t pos = 0;
          int nc = 0;
          try {
            nc = std::stoi(nxt, &pos);
          } catch (const std::exception &) {
            pos = 0;
          }
          if (pos != nxt.size() || nc < 1 || nc > 4)
            throw FormatError("vtk: bad SCALARS component count '" + nxt +
                              "'");
          field.components = nc;
          nxt = tok.expect("LOOKUP_TABLE");
          if (upper(nxt) != "LOOKUP_TABLE")
            throw FormatError("vtk: expected LOOKUP_TABLE after SCALARS");
        }
        tok.expect("lookup table name");
      } else {
        field.components = 3;
      }
      field.values.resize(mesh.vertices.size() *
                          static_cast<std::size_t>(field.components));
      for (auto &v : field.values)
        v = tok.expect_real("field value");
      data.fields.push_back(std::move(field));
    } else {
      throw FormatError("vtk: unsupported section '" + section +
                        "' at line " + std::to_string(tok.line()));
    }
  }

  if (raw_cells.empty())
    throw FormatError("vtk: file contains no cells");
  if (raw_types.size() != raw_cells.size())
    throw FormatError("vtk: missing CELL_TYPES section");

  int topo_dim = 0;
  for (std::size_t i = 0; i < raw_cells.size(); ++i) {
    const int dim = cell_type_dim(raw_types[i]);
    const std::size_t expected = static_cast<std::size_t>(dim) + 1;
    if (raw_cells[i].size() != expected)
      throw FormatError("vtk: cell " + std::to_string(i) + " of type " +
                        std::to_string(raw_types[i]) + " has " +
                        std::to_string(raw_cells[i].size()) +
                        " vertices, expected " + std::to_string(expected));
    topo_dim = std::max(topo_dim, dim);
  }

  mesh.topo_dim = topo_dim;
  for (std::size_t i = 0; i < raw_cells.size(); ++i) {
    if (cell_type_dim(raw_types[i]) != topo_dim)
      continue;
    Cell c;
    for (std::size_t k = 0; k < raw_cells[i].size(); ++k)
      c.v[k] = raw_cells[i][k];
    mesh.cells.push_back(c);
  }

  int space_dim = 1;
  for (const Point &p : mesh.vertices) {
    if (p[2] != 0.0)
      space_dim = std::max(space_dim, 3);
    else if (p[1] != 0.0)
      space_dim = std::max(space_dim, 2);
  }
  mesh.space_dim = std::max(space_dim, mesh.topo_dim);

  fix_orientation(mesh);
  compute_boundary_faces(mesh);
  return data;
}

VtkData read_vtk_legacy_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  return read_vtk_legacy(in);
}

void write_vtk_legacy(std::ostream &out, const Mesh &mesh,
                      const std::vector<Field> &fields) {
  for (const Field &f : fields)
    if (f.values.size() !=
        mesh.vertices.size() * static_cast<std::size_t>(f.components))
      throw ContractError("write_vtk_legacy: field '" + f.name + "' has " +
                          std::to_string(f.values.size()) +
                          " values, expected " +
                          std::to_string(mesh.vertices.size() *
                                         f.components));

  std::string buf;
  buf.reserve(64 * mesh.vertices.size());
  buf += "# vtk DataFile Version 3.0\n";
  buf += "meshxfer output\n";
  buf += "ASCII\n";
  buf += "DATASET UNSTRUCTURED_GRID\n";

  buf += "POINTS " + std::to_string(mesh.vertices.size()) + " double\n";
  for (const Point &p : mesh.vertices) {
    append_number(buf, p[0]);
    buf += ' ';
    append_number(buf, p[1]);
    buf += ' ';
    append_number(buf, p[2]);
    buf += '\n';
  }

  const int nvc = mesh.vertices_per_cell();
  buf += "CELLS " + std::to_string(mesh.cells.size()) + ' ' +
         std::to_string(mesh.cells.size() * (nvc + 1)) + '\n';
  for (const Cell &c : mesh.cells) {
    buf += std::to_string(nvc);
    for (int k = 0; k < nvc; ++k) {
      buf += ' ';
      buf += std::to_string(c.v[k]);
    }
    buf += '\n';
  }

  const int vtk_type = mesh.topo_dim == 1 ? 3 : mesh.topo_dim == 2 ? 5 : 10;
  buf += "CELL_TYPES " + std::to_string(mesh.cells.size()) + '\n';
  for (std::size_t i = 0; i < mesh.cells.size(); ++i) {
    buf += std::to_string(vtk_type);
    buf += '\n';
  }

  if (!fields.empty()) {
    buf += "POINT_DATA " + std::to_string(mesh.vertices.size()) + '\n';
    for (const Field &f : fields) {
      buf += "SCALARS " + f.name + " double " + std::to_string(f.components) +
             '\n';
      buf += "LOOKUP_TABLE default\n";
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        for (int c = 0; c < f.components; ++c) {
          if (c)
            buf += ' ';
          append_number(buf, f.values[i * f.components + c]);
        }
        buf += '\n';
      }
    }
  }

  out << buf;
}

void write_vtk_legacy_file(const std::string &path, const Mesh &mesh,
                           const std::vector<Field> &fields) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  write_vtk_legacy(out, mesh, fields);
  if (!out)
    throw IoError("error while writing '" + path + "'");
}

} // namespace mxf
