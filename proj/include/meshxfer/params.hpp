#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mxf {

/// Nested parameter tree parsed from deal.II-style prm text:
/// `subsection <name>` ... `end` blocks around `set <key> = <value>` lines,
/// `#` comments and blank lines. Keys may contain internal spaces; keys and
/// subsection names are case-sensitive. File order is preserved.
class ParamTree {
public:
  using Path = std::vector<std::string>;

  bool has(const Path &path) const;

  std::string get_string(const Path &path) const;
  bool get_bool(const Path &path) const;
  long long get_int(const Path &path) const;
  double get_real(const Path &path) const;

  // Defaulted lookups for optional keys.
  std::string get_string(const Path &path, const std::string &fallback) const;
  bool get_bool(const Path &path, bool fallback) const;
  long long get_int(const Path &path, long long fallback) const;
  double get_real(const Path &path, double fallback) const;

  void set(const Path &path, const std::string &value);

  const std::vector<std::pair<std::string, std::string>> &keys() const {
    return keys_;
  }
  const std::vector<std::pair<std::string, ParamTree>> &subsections() const {
    return subsections_;
  }

  /// Canonical form: keys first, then subsections, two-space indentation.
  /// Reparsing the printed text yields an equal tree.
  void print(std::ostream &out, int indent = 0) const;

  friend bool operator==(const ParamTree &a, const ParamTree &b) {
    return a.keys_ == b.keys_ && a.subsections_ == b.subsections_;
  }

private:
  friend ParamTree parse_prm(std::istream &in);
  std::vector<std::pair<std::string, std::string>> keys_;
  std::vector<std::pair<std::string, ParamTree>> subsections_;

  const ParamTree *descend(const Path &path, std::string &key) const;
  const std::string *find(const Path &path) const;
  static std::string join(const Path &path);
};

ParamTree parse_prm(std::istream &in);
ParamTree parse_prm(const std::string &text);
ParamTree parse_prm_file(const std::string &path);

} // namespace mxf
