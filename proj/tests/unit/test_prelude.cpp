#include <doctest.h>

#include "overture/error.hpp"
#include "overture/prelude.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

using namespace ovt;

namespace {

std::string lib(const char* name) { return std::string(*embedded_file(name)); }

}  // namespace

TEST_CASE("let and records evaluate to values") {
  const auto r = prelude::expand("let a = 1 in let t = { x = a; y = 2 } in out@1 := t.y + t.x @1");
  REQUIRE(r.protocol.size() == 1);
  CHECK(r.protocol.to_string() == parse_protocol("out@1 := (2 + 1)@1;").to_string());
}

TEST_CASE("string concatenation builds names and nameof recovers them") {
  const auto r = prelude::expand(R"(
f(w) { m[w ++ "s"]@2 := 1@1; p[nameof(m[w]) ++ "_1"] := 0@1 }
f("d")
)");
  CHECK(r.protocol.to_string() == parse_protocol("m[ds]@2 := 1@1; p[d_1] := 0@1;").to_string());
}

TEST_CASE("the encoding function accepts `in` as a parameter name") {
  const auto r = prelude::expand(R"(encodegmw("s1",2,1))", {lib("gmw.pre")});
  CHECK(r.protocol.to_string() ==
        parse_protocol("m[s1]@1 := (s[s1] xor r[s1])@1; m[s1]@2 := r[s1]@1;").to_string());
}

TEST_CASE("single AND circuit expands to the expected residual protocol") {
  const auto r = prelude::expand(lib("gmw_and.pre"), {lib("gmw.pre")});
  const Protocol want = parse_protocol(R"(
m[s1]@1 := (s[s1] xor r[s1])@1;
m[s1]@2 := r[s1]@1;
m[s2]@2 := (s[s2] xor r[s2])@2;
m[s2]@1 := r[s2]@2;
m[z]@2 := OT4(m[s1], m[s2],
              r[z] xor ((m[s1] xor 1) and (m[s2] xor 1)),
              r[z] xor ((m[s1] xor 1) and (m[s2] xor 0)),
              r[z] xor ((m[s1] xor 0) and (m[s2] xor 1)),
              r[z] xor ((m[s1] xor 0) and (m[s2] xor 0)), 2, 1);
m[z]@1 := r[z]@1;
p[z_1] := m[z]@1;
p[z_2] := m[z]@2;
out@1 := (p[z_1] xor p[z_2])@1;
out@2 := (p[z_1] xor p[z_2])@2;
)");
  CHECK(r.protocol.to_string() == want.to_string());
  CHECK(validate(r.protocol, {ClientId{1}, ClientId{2}}).empty());
}

TEST_CASE("program evaluation is stepwise and deterministic") {
  const auto program = prelude::parse_prelude(lib("gmw.pre") + "\n" + lib("gmw_xor.pre"));
  prelude::MetaConfig c{Protocol{}, program.main};
  std::size_t steps = 0;
  while (prelude::step_meta(program.codebase, c)) ++steps;
  const auto r = prelude::eval_meta(program.codebase, program.main);
  CHECK(r.steps == steps);
  CHECK(c.protocol.to_string() == r.protocol.to_string());
  CHECK(c.protocol.size() == 10);
}

TEST_CASE("prelude errors") {
  CHECK_THROWS_AS(prelude::expand("f(a) { a } f(b) { b } f(1)"), ParseError);
  CHECK_THROWS_AS(prelude::expand("g(1)"), EvalError);
  CHECK_THROWS_AS(prelude::expand("f(a) { a } f(1, 2)"), EvalError);
  CHECK_THROWS_AS(prelude::expand("let x = in 3"), ParseError);
  prelude::EvalOptions tight;
  tight.step_limit = 10;
  CHECK_THROWS_AS(prelude::expand("loop(n) { loop(n) } loop(1)", {}, tight), EvalError);
}

TEST_CASE("substitution does not capture") {
  const auto program = prelude::parse_prelude("let y = x in let x = 2 in y");
  const auto e = prelude::subst(program.main, "x", prelude::MetaValue{std::int64_t{5}});
  const auto r = prelude::eval_meta(program.codebase, e);
  CHECK(r.value == prelude::MetaValue{std::int64_t{5}});
}
