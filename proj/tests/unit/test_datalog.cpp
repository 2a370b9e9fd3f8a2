#include <doctest.h>

#include "overture/datalog.hpp"
#include "overture/engine.hpp"
#include "overture/error.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

using namespace ovt;

namespace {

Var V(const char* text) { return parse_var(text); }
Memory M(const char* text) { return parse_memory(text); }

}  // namespace

TEST_CASE("atom names") {
  CHECK(mangle(V("m[z]@2")) == "m_z_c2");
  CHECK(mangle(V("s[x]@1")) == "s_x_c1");
  CHECK(mangle(V("r[y]@3")) == "r_y_c3");
  CHECK(mangle(V("p[w]")) == "p_w");
  CHECK(mangle(V("out@1")) == "out_c1");
  for (const char* text : {"m[z_1]@2", "p[z_2]", "s[s1]@1", "out@2", "m[a_c2]@1", "r[local]@3"}) {
    CAPTURE(text);
    CHECK(demangle(mangle(V(text))) == V(text));
  }
  CHECK_THROWS_AS(demangle("q_x_c1"), ParseError);
  CHECK_THROWS_AS(demangle("m_x"), ParseError);
}

TEST_CASE("clauses of a one-time pad") {
  const DatalogProgram prog = to_datalog(parse_protocol("m[z]@2 := (s[x] xor r[y])@1;"));
  CHECK(prog.to_string() == "m_z_c2 :- s_x_c1, not r_y_c1.\nm_z_c2 :- not s_x_c1, r_y_c1.\n");
  CHECK(lhm_eval(parse_facts("s_x_c1=1,r_y_c1=0"), prog).at(V("m[z]@2"))->value() == 1);
  CHECK(lhm_eval(parse_facts("s_x_c1=1,r_y_c1=1"), prog).at(V("m[z]@2"))->value() == 0);
}

TEST_CASE("constant and unsatisfiable commands") {
  const DatalogProgram one = to_datalog(parse_protocol("out@1 := 1@1;"));
  CHECK(one.to_string() == "out_c1.\n");
  CHECK(lhm_eval({}, one).at(V("out@1"))->value() == 1);
  CHECK(to_datalog(parse_protocol("m[z]@2 := (s[x] and not s[x])@1;")).clauses.empty());
  CHECK_THROWS_AS(to_datalog(parse_protocol("m[z]@1 := s[x]@2; assert(m[z] == 0)@1;")), UsageError);
}

TEST_CASE("fact bases") {
  CHECK(facts(M("s[x]@1=1 r[y]@1=0")).to_string() == "s_x_c1.\n");
  CHECK(facts(M("s[a]@1=0 s[b]@1=0")).clauses.empty());
  CHECK(facts(M("s[a]@1=1 s[b]@1=1 r[c]@2=1")).clauses.size() == 3);
  CHECK(parse_facts("s_x_c1=1,r_y_c1=0") == facts(M("s[x]@1=1 r[y]@1=0")));
}

TEST_CASE("text round trip") {
  const DatalogProgram prog = to_datalog(shamir_add3().protocol);
  CHECK(parse_datalog(prog.to_string()) == prog);
  const DatalogProgram commented = parse_datalog("% header\np_a :- p_b, not p_c.  % tail\np_b.\n");
  REQUIRE(commented.clauses.size() == 2);
  CHECK(commented.clauses[0].body == std::vector<Literal>{{"p_b", false}, {"p_c", true}});
  CHECK_THROWS_AS(parse_datalog("p_a :- p_b"), ParseError);
  CHECK_THROWS_AS(parse_datalog("a :- p_b."), ParseError);
}

TEST_CASE("stratified evaluation") {
  const DatalogProgram prog = parse_datalog("p_a :- p_b.\np_b :- p_c.\np_d :- not p_a.\n");
  const Memory m = lhm_eval(parse_datalog("p_c."), prog);
  CHECK(m.at(V("p[a]"))->value() == 1);
  CHECK(m.at(V("p[d]"))->value() == 0);
  const Memory none = lhm_eval({}, prog);
  CHECK(none.at(V("p[a]"))->value() == 0);
  CHECK(none.at(V("p[d]"))->value() == 1);
  CHECK_THROWS_AS(lhm_eval({}, parse_datalog("p_a :- not p_b.\np_b :- not p_a.\n")), UsageError);
  CHECK(lhm_eval({}, parse_datalog("p_a :- p_b.\np_b :- p_a.\n")).at(V("p[a]"))->value() == 0);
}

TEST_CASE("bodies only mention earlier atoms") {
  for (const char* name : {"shamir_add3", "gmw_and", "gmw_xor", "gmw_depth2"}) {
    CAPTURE(name);
    const Protocol pi = package(std::string(name)).protocol;
    VarSet assigned = pi.secrets();
    for (const Var& x : pi.flips()) assigned.insert(x);
    for (const Var& x : pi.preprocessed()) assigned.insert(x);
    const DatalogProgram prog = to_datalog(pi);
    std::size_t clause = 0;
    for (const Command& c : pi.commands()) {
      const Var head = *target(c);
      while (clause < prog.clauses.size() && demangle(prog.clauses[clause].head) == head) {
        for (const Literal& l : prog.clauses[clause].body) CHECK(assigned.contains(demangle(l.atom)));
        ++clause;
      }
      assigned.insert(head);
    }
    CHECK(clause == prog.clauses.size());
  }
}

TEST_CASE("least model reproduces every run") {
  for (const char* name : {"shamir_add3", "gmw_and", "gmw_xor", "gmw_depth2", "otp", "leaky"}) {
    CAPTURE(name);
    const ProtocolPackage p = package(std::string(name));
    const DatalogProgram prog = to_datalog(p.protocol);
    const auto runs = run_sweep(p.protocol, p.preproc);
    for (std::uint64_t i = 0; i < runs.size(); ++i) {
      const Memory m0 = initial_memory(p.protocol, p.preproc, i);
      const Memory model = lhm_eval(facts(m0), prog);
      // Heads with no satisfying body never appear in the model and read as 0.
      for (const auto& [x, v] : runs[i]) {
        const auto got = model.domain().contains(x) ? model.at(x)->value() : 0;
        CHECK(got == v->value());
      }
    }
  }
}
