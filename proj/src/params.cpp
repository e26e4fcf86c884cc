#include "meshxfer/params.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "meshxfer/errors.hpp"

namespace mxf {

namespace {

std::string trim(const std::string &s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return s.substr(b, e - b);
}

} // namespace

ParamTree parse_prm(std::istream &in) {
  ParamTree root;
  std::vector<ParamTree *> stack{&root};
  std::vector<std::string> names{"<top>"};

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty())
      continue;

    if (line.rfind("subsection", 0) == 0 &&
        (line.size() == 10 ||
         std::isspace(static_cast<unsigned char>(line[10])))) {
      const std::string name = trim(line.substr(10));
      if (name.empty())
        throw ParseError("prm line " + std::to_string(line_no) +
                         ": subsection without a name");
      ParamTree *parent = stack.back();
      parent->subsections_.emplace_back(name, ParamTree{});
      stack.push_back(&parent->subsections_.back().second);
      names.push_back(name);
    } else if (line == "end") {
      if (stack.size() == 1)
        throw ParseError("prm line " + std::to_string(line_no) +
                         ": 'end' without an open subsection");
      stack.pop_back();
      names.pop_back();
    } else if (line.rfind("set", 0) == 0 && line.size() > 3 &&
               std::isspace(static_cast<unsigned char>(line[3]))) {
      const std::string rest = line.substr(4);
      const std::size_t eq = rest.find('=');
      if (eq == std::string::npos)
        throw ParseError("prm line " + std::to_string(line_no) +
                         ": 'set' without '='");
      const std::string key = trim(rest.substr(0, eq));
      const std::string value = trim(rest.substr(eq + 1));
      if (key.empty())
        throw ParseError("prm line " + std::to_string(line_no) +
                         ": empty key");
      ParamTree *scope = stack.back();
      for (const auto &kv : scope->keys_)
        if (kv.first == key)
          throw ParseError("prm line " + std::to_string(line_no) +
                           ": duplicate key '" + key + "' in subsection '" +
                           names.back() + "'");
      scope->keys_.emplace_back(key, value);
    } else {
      throw ParseError("prm line " + std::to_string(line_no) +
                       ": expected 'subsection', 'set' or 'end', got '" +
                       line + "'");
    }
  }
  if (stack.size() != 1)
    throw ParseError("prm: subsection '" + names.back() +
                     "' is never closed (missing 'end' at end of file)");
  return root;
}

ParamTree parse_prm(const std::string &text) {
  std::istringstream in(text);
  return parse_prm(in);
}

ParamTree parse_prm_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open parameter file '" + path + "'");
  return parse_prm(in);
}

std::string ParamTree::join(const Path &path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i)
      s += " / ";
    s += path[i];
  }
  return s;
}

const ParamTree *ParamTree::descend(const Path &path, std::string &key) const {
  if (path.empty())
    return nullptr;
  const ParamTree *node = this;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const ParamTree *next = nullptr;
    for (const auto &sub : node->subsections_)
      if (sub.first == path[i]) {
        next = &sub.second;
        break;
      }
    if (!next)
      return nullptr;
    node = next;
  }
  key = path.back();
  return node;
}

const std::string *ParamTree::find(const Path &path) const {
  std::string key;
  const ParamTree *node = descend(path, key);
  if (!node)
    return nullptr;
  for (const auto &kv : node->keys_)
    if (kv.first == key)
      return &kv.second;
  return nullptr;
}

bool ParamTree::has(const Path &path) const { return find(path) != nullptr; }

std::string ParamTree::get_string(const Path &path) const {
  const std::string *v = find(path);
  if (!v)
    throw LookupError("parameter '" + join(path) + "' not found");
  return *v;
}

bool ParamTree::get_bool(const Path &path) const {
  const std::string v = get_string(path);
  if (v == "true")
    return true;
  if (v == "false")
    return false;
  throw TypeError("parameter '" + join(path) + "': expected true/false, got '" +
                  v + "'");
}

long long ParamTree::get_int(const Path &path) const {
  const std::string v = get_string(path);
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos != v.size() || v.empty())
    throw TypeError("parameter '" + join(path) + "': expected integer, got '" +
                    v + "'");
  return value;
}

double ParamTree::get_real(const Path &path) const {
  const std::string v = get_string(path);
  std::size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos != v.size() || v.empty())
    throw TypeError("parameter '" + join(path) + "': expected real, got '" +
                    v + "'");
  return value;
}

std::string ParamTree::get_string(const Path &path,
                                  const std::string &fallback) const {
  return has(path) ? get_string(path) : fallback;
}

bool ParamTree::get_bool(const Path &path, bool fallback) const {
  return has(path) ? get_bool(path) : fallback;
}

long long ParamTree::get_int(const Path &path, long long fallback) const {
  return has(path) ? get_int(path) : fallback;
}

double ParamTree::get_real(const Path &path, double fallback) const {
  return has(path) ? get_real(path) : fallback;
}

void ParamTree::set(const Path &path, const std::string &value) {
  if (path.empty())
    throw ContractError("ParamTree::set: empty path");
  ParamTree *node = this;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    ParamTree *next = nullptr;
    for (auto &sub : node->subsections_)
      if (sub.first == path[i]) {
        next = &sub.second;
        break;
      }
    if (!next) {
      node->subsections_.emplace_back(path[i], ParamTree{});
      next = &node->subsections_.back().second;
    }
    node = next;
  }
  for (auto &kv : node->keys_)
    if (kv.first == path.back()) {
      kv.second = value;
      return;
    }
  node->keys_.emplace_back(path.back(), value);
}

void ParamTree::print(std::ostream &out, int indent) const {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto &kv : keys_)
    out << pad << "set " << kv.first << " = " << kv.second << "\n";
  for (const auto &sub : subsections_) {
    out << pad << "subsection " << sub.first << "\n";
    sub.second.print(out, indent + 1);
    out << pad << "end\n";
  }
}

} // namespace mxf
