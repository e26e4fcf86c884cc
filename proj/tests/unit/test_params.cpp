#include <doctest.h>

#include <sstream>

#include "meshxfer/errors.hpp"
#include "meshxfer/params.hpp"

using namespace mxf;

namespace {

// The reference checkpoint/restart configuration block.
const char *kReferenceListing = R"(  subsection Serialization
    set Enable                      = true
    set Serialization basename      = restart
    set Serialize every n timesteps = 1000
  end

  subsection Restart
    set Enable                 = true
    set Restart basename       = out_dir/restart
    set Restart timestep index = 1000
  end
)";

} // namespace

TEST_CASE("reference listing parses with all six keys") {
  const ParamTree tree = parse_prm(kReferenceListing);
  CHECK(tree.get_bool({"Serialization", "Enable"}) == true);
  CHECK(tree.get_string({"Serialization", "Serialization basename"}) ==
        "restart");
  CHECK(tree.get_int({"Serialization", "Serialize every n timesteps"}) ==
        1000);
  CHECK(tree.get_bool({"Restart", "Enable"}) == true);
  CHECK(tree.get_string({"Restart", "Restart basename"}) ==
        "out_dir/restart");
  CHECK(tree.get_int({"Restart", "Restart timestep index"}) == 1000);
}

TEST_CASE("empty input gives an empty tree") {
  const ParamTree tree = parse_prm(std::string{});
  CHECK(tree.keys().empty());
  CHECK(tree.subsections().empty());
  CHECK(tree == ParamTree{});
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(parse_prm("subsection A\nset x = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_prm("end\n"), ParseError);
  CHECK_THROWS_AS(parse_prm("set a = 1\nset a = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_prm("bogus line\n"), ParseError);
  CHECK_THROWS_AS(parse_prm("set novalue\n"), ParseError);
  CHECK_THROWS_AS(parse_prm("subsection\n"), ParseError);
}

TEST_CASE("same key in different subsections is fine") {
  const ParamTree tree =
      parse_prm("set a = 1\nsubsection S\nset a = 2\nend\n");
  CHECK(tree.get_int({"a"}) == 1);
  CHECK(tree.get_int({"S", "a"}) == 2);
}

TEST_CASE("comments, blanks, spacing and nesting") {
  const char *text = R"(
# full-line comment
set Title = run 42   # trailing comment
subsection Outer
  subsection Inner
    set Nested key with spaces = a value = with equals
  end
end
)";
  const ParamTree tree = parse_prm(text);
  CHECK(tree.get_string({"Title"}) == "run 42");
  CHECK(tree.get_string({"Outer", "Inner", "Nested key with spaces"}) ==
        "a value = with equals");
}

TEST_CASE("typed getters") {
  const ParamTree tree = parse_prm("set i = -42\nset r = 1.5e-3\n"
                                   "set b = false\nset s = restart\n");
  CHECK(tree.get_int({"i"}) == -42);
  CHECK(tree.get_real({"r"}) == 1.5e-3);
  CHECK(tree.get_real({"i"}) == -42.0);
  CHECK(tree.get_bool({"b"}) == false);
  CHECK(tree.get_string({"s"}) == "restart");

  CHECK_THROWS_AS(tree.get_int({"s"}), TypeError);
  CHECK_THROWS_AS(tree.get_bool({"i"}), TypeError);
  CHECK_THROWS_AS(tree.get_real({"s"}), TypeError);
  CHECK_THROWS_WITH_AS(tree.get_string({"Sub", "missing"}),
                       doctest::Contains("Sub / missing"), LookupError);

  CHECK(tree.get_int({"absent"}, 7) == 7);
  CHECK(tree.get_string({"absent"}, "d") == "d");
  CHECK(tree.get_bool({"absent"}, true) == true);
  CHECK(tree.get_real({"absent"}, 0.5) == 0.5);
}

TEST_CASE("print round trip") {
  const ParamTree tree = parse_prm(kReferenceListing);
  std::ostringstream out;
  tree.print(out);
  const ParamTree back = parse_prm(out.str());
  CHECK(back == tree);

  // Also for a tree with top-level keys and deep nesting.
  ParamTree built;
  built.set({"alpha"}, "1");
  built.set({"A", "B", "key with spaces"}, "x = y");
  built.set({"A", "other"}, "true");
  std::ostringstream out2;
  built.print(out2);
  CHECK(parse_prm(out2.str()) == built);
}

TEST_CASE("values keep internal characters verbatim") {
  const ParamTree tree =
      parse_prm("set path = out_dir/restart\nset expr = a+b*c\n");
  CHECK(tree.get_string({"path"}) == "out_dir/restart");
  CHECK(tree.get_string({"expr"}) == "a+b*c");
}
