#include <doctest.h>

#include "vcomp/bidlang.hpp"

using namespace vcomp;

namespace {
Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }
}  // namespace

TEST_CASE("parse: minimal instance") {
  auto inst = parse_instance("items: a\nagent 1: XS(a:2)");
  REQUIRE(inst.agents.size() == 1);
  CHECK(inst.agents[0].name == "1");
  CHECK(value(inst.agents[0].valuation, ItemSet::single(0)) == q(2));
  CHECK(inst.agents[0].menu.empty());
}

TEST_CASE("parse: decimals are exact and p/q is accepted") {
  auto inst = parse_instance("items: a b\nagent x: ADD(a:3.03, b:1/3)");
  auto w = inst.agents[0].valuation.additive_weights();
  CHECK(w[0] == q(303, 100));
  CHECK(w[1] == q(1, 3));
}

TEST_CASE("parse: sparse TABLE gets monotone closure") {
  auto inst = parse_instance("items: a b c\nagent 1: TABLE({a}:1, {a b}:3, {c}:2)");
  const auto& v = inst.agents[0].valuation;
  CHECK(value(v, ItemSet::of({0, 2})) == q(2));
  CHECK(value(v, ItemSet::of({0, 1, 2})) == q(3));
  CHECK(value(v, ItemSet::single(1)) == q(0));
}

TEST_CASE("parse errors carry line and column") {
  auto expect_error = [](const char* text, unsigned line, const char* fragment) {
    try {
      parse_instance(text);
      FAIL("expected a parse error for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() >= 1);
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  expect_error("items: a\nagent 1: TABLE({}:1)", 2, "v({}) = 0");
  expect_error("items: a\nagent 1: XS(b:1)", 2, "unknown item");
  expect_error("items: a\nagent 1: XS(a:1)\nagent 1: XS(a:2)", 3, "duplicate agent");
  expect_error("items: a b\nagent 1: TABLE({a}:3, {a b}:2)", 2, "non-monotone");
  expect_error("items: a\nagent 1: XS(a:99999999999999999999)", 2, "overflow");
  expect_error("items: a\nagent 1: XS(a:1) $", 2, "unexpected character");
  expect_error("items: a\nagent 1: XS(a:-1)", 2, "negative");
  expect_error("items: a\nagent 1: FOO(a:1)", 2, "expected");
}

TEST_CASE("render: round trip with menus, header and every node kind") {
  const char* text =
      "# demo\n"
      "items: a b c\n"
      "agent 1: OR(XOR(XS(a:3.03), XS(b:3.03)), XS(c:0.99))\n"
      "  menu: ADD(a:1, b:0, c:0) XOR(ADD(a:1, b:1, c:0), ADD(a:0, b:0, c:1/3))\n"
      "agent 2: TABLE({a}:1, {a b}:3, {c}:2)\n";
  auto inst = parse_instance(text);
  CHECK(inst.header == std::vector<std::string>{"demo"});
  CHECK(inst.agents[0].menu.size() == 2);
  CHECK(inst.agents[0].menu[1].repr() == Repr::XosClauses);
  auto again = parse_instance(render_instance(inst));
  CHECK(again == inst);
  CHECK(render_instance(again) == render_instance(inst));
}

TEST_CASE("render: empty menu omits the clause") {
  auto inst = parse_instance("items: a\nagent 1: XS(a:2)");
  auto text = render_instance(inst);
  CHECK(text.find("menu") == std::string::npos);
  CHECK(parse_instance(text).agents[0].menu.empty());
}

TEST_CASE("render: all-zero TABLE") {
  auto inst = parse_instance("items: a b\nagent 1: TABLE({}:0)");
  CHECK(render_expr(inst.agents[0].valuation, inst.items) == "TABLE({}:0)");
  CHECK(parse_instance(render_instance(inst)) == inst);
}
