#include <string>

#include "doctest.h"

#include "core/error.hpp"
#include "generators/generators.hpp"
#include "graph/framework.hpp"

using namespace argviz;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("framework construction") {
  const ArgumentationFramework af({"x", "y", "z"}, {{2, 0}, {0, 1}, {0, 1}, {1, 1}});
  CHECK(af.size() == 3);
  CHECK(af.attack_count() == 3);
  CHECK(af.attacks() == std::vector<Attack>{{0, 1}, {1, 1}, {2, 0}});
  CHECK(af.attacks_between(1, 1));
  CHECK_FALSE(af.attacks_between(1, 0));
  CHECK(af.index_of("z") == 2);
  CHECK_FALSE(af.index_of("w").has_value());

  CHECK_THROWS_AS(ArgumentationFramework({"a", "a"}, {}), Error);
  CHECK_THROWS_AS(ArgumentationFramework({"a"}, {{0, 1}}), Error);
  CHECK_THROWS_AS(ArgumentationFramework({"a b"}, {}), Error);
  CHECK_THROWS_AS(ArgumentationFramework({"a,b"}, {}), Error);
  CHECK_THROWS_AS(ArgumentationFramework({"f(x)"}, {}), Error);
  CHECK_THROWS_AS(ArgumentationFramework({""}, {}), Error);

  LabeledFramework lf{ArgumentationFramework({"a"}, {}), std::nullopt, {{1, "A"}}};
  CHECK_THROWS_AS(validate(lf), Error);
}

TEST_CASE("adjacency matrix") {
  CHECK(adjacency_matrix(ArgumentationFramework({"a", "b", "c"}, {})) == Matrix(3, 3));
  CHECK(adjacency_matrix(ArgumentationFramework({"a", "b"}, {{0, 1}})) ==
        Matrix::from_rows({{0, 1}, {0, 0}}));
  // a1, b1, c1: (a1,a1), (b1,a1), (b1,c1), (c1,b1)
  const auto s = gen_sembuster(1);
  CHECK(adjacency_matrix(s.framework) == Matrix::from_rows({{1, 0, 0}, {1, 0, 1}, {0, 1, 0}}));
}

TEST_CASE("apx parsing") {
  const auto af = parse_apx("arg(a).\narg(b).\natt(a,b).");
  CHECK(af.arguments() == std::vector<std::string>{"a", "b"});
  CHECK(af.attacks() == std::vector<Attack>{{0, 1}});

  const auto self = parse_apx("arg(a).\natt(a,a).");
  CHECK(self.size() == 1);
  CHECK(self.attacks() == std::vector<Attack>{{0, 0}});

  CHECK(kind_of([] { parse_apx("att(a,b)."); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_apx("arg(a).\narg(a)."); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_apx("arg(a).\nfoo\n"); }) == ErrorKind::parse);

  // Comments, blank lines, surrounding whitespace, duplicate attacks.
  const auto loose = parse_apx("% header\n\n  arg(p) .\narg(q).\r\natt(q,p).\natt(q,p).\n");
  CHECK(loose.size() == 2);
  CHECK(loose.attack_count() == 1);

  try {
    parse_apx("arg(a).\narg(b).\natt(a,c).\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("tgf parsing") {
  const auto af = parse_tgf("1\n2\n#\n1 2");
  CHECK(af.size() == 2);
  CHECK(af.attacks() == std::vector<Attack>{{0, 1}});

  const auto edgeless = parse_tgf("1\n#\n");
  CHECK(edgeless.size() == 1);
  CHECK(edgeless.attack_count() == 0);

  CHECK(kind_of([] { parse_tgf("1\n2\n1 2"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_tgf("1\n#\n1 3"); }) == ErrorKind::parse);
}

TEST_CASE("serialization") {
  const ArgumentationFramework af({"a0", "a1"}, {{0, 1}});
  CHECK(serialize_apx(af) == "arg(a0).\narg(a1).\natt(a0,a1).\n");
  CHECK(serialize_tgf(af) == "a0\na1\n#\na0 a1\n");
  CHECK(serialize_apx(ArgumentationFramework({"x", "y"}, {})) == "arg(x).\narg(y).\n");

  const auto s = gen_sembuster(2).framework;
  CHECK(parse_apx(serialize_apx(s)) == s);
  CHECK(parse_tgf(serialize_tgf(s)) == s);
  CHECK(parse(serialize(s, GraphFormat::tgf), GraphFormat::tgf) == s);

  CHECK(format_from_path("x/y.apx") == GraphFormat::apx);
  CHECK(format_from_path("y.tgf") == GraphFormat::tgf);
  CHECK(format_from_path("y.TGF") == GraphFormat::tgf);
  CHECK_FALSE(format_from_path("y.txt").has_value());
}
