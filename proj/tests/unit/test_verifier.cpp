#include <doctest.h>

#include "overture/checks.hpp"
#include "overture/error.hpp"
#include "overture/memset.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

using namespace ovt;

namespace {

Var V(const char* text) { return parse_var(text); }
Memory M(const char* text) { return parse_memory(text); }

Partition corrupt(const ClientSet& fed, std::initializer_list<std::uint32_t> ids) {
  ClientSet c;
  for (auto i : ids) c.insert(ClientId{i});
  return Partition::from_corrupt(fed, c);
}

}  // namespace

TEST_CASE("solve filters by expression value") {
  const MemSet s = MemSet::all({V("s[a]@1"), V("s[b]@1")});
  CHECK(s.size() == 4);
  const ClientId c1{1};
  CHECK(solve(s, parse_expr_text("s[a] and s[b]"), c1).memories() == std::vector<Memory>{M("s[a]@1=1 s[b]@1=1")});
  CHECK(solve(s, parse_expr_text("s[a] xor s[b]"), c1).size() == 2);
  CHECK(solve(s, parse_expr_text("s[a] or s[b]"), c1).size() == 3);
  CHECK(solve(s, parse_expr_text("not s[a]"), c1).size() == 2);
  CHECK(solve(s, parse_expr_text("1"), c1) == s);
  CHECK(solve(s, parse_expr_text("0"), c1).empty());
  CHECK_THROWS_AS(solve(s, parse_expr_text("s[c]"), c1), EvalError);
}

TEST_CASE("solve on transfers") {
  const VarSet xs{V("s[c]@2"), V("s[d]@2"), V("r[w]@1"), V("r[x]@1"), V("r[y]@1"), V("r[z]@1")};
  const MemSet s = MemSet::all(xs);
  const Protocol ot2 = parse_protocol("m[o]@2 := OT(s[c], r[w], r[x], 2, 1);");
  const Expr& e2 = *command_expr(ot2.commands()[0]);
  const Protocol ot4 = parse_protocol("m[o]@2 := OT4(s[c], s[d], r[w], r[x], r[y], r[z], 2, 1);");
  const Expr& e4 = *command_expr(ot4.commands()[0]);
  const MemSet got2 = solve(s, e2, ClientId{2});
  const MemSet got4 = solve(s, e4, ClientId{2});
  for (const Memory& m : s.memories()) {
    auto b = [&](const char* x) { return m.at(V(x))->value() == 1; };
    const bool want2 = b("s[c]@2") ? b("r[w]@1") : b("r[x]@1");
    const int row = (b("s[c]@2") ? 0 : 2) + (b("s[d]@2") ? 0 : 1);
    const bool want4 = std::array<bool, 4>{b("r[w]@1"), b("r[x]@1"), b("r[y]@1"), b("r[z]@1")}[row];
    CHECK(got2.contains(m) == want2);
    CHECK(got4.contains(m) == want4);
  }
}

TEST_CASE("truth-table semantics agrees with the interpreter") {
  for (const ProtocolPackage& p : all_packages()) {
    CAPTURE(p.name);
    if (p.protocol.has_asserts()) {
      const Protocol bare = p.protocol.without_asserts();
      const auto trim = PreprocPredicate::bdoz(bdoz_trim());
      CHECK(runs_tt(bare, trim) == runs_interpreted(bare, trim));
      CHECK_THROWS_AS(runs_tt(p.protocol, trim), UsageError);
    } else {
      CHECK(runs_tt(p.protocol, p.preproc) == runs_interpreted(p.protocol, p.preproc));
    }
  }
  const MemSet t = runs_tt(otp().protocol, otp().preproc);
  CHECK(t.size() == 4);
  CHECK(t.contains(M("s[x]@1=1 r[y]@1=0 m[z]@2=1")));
  CHECK_FALSE(t.contains(M("s[x]@1=1 r[y]@1=1 m[z]@2=1")));
}

TEST_CASE("passive correctness and leakage on small protocols") {
  SUBCASE("three-party sum") {
    const ProtocolPackage p = shamir_add3();
    CHECK(check_passive_correct(p.protocol, *p.functionality).ok);
    for (const Partition& part : proper_partitions(p.federation)) {
      CAPTURE(part.to_string());
      CHECK(check_nimo(p.protocol, part).ok);
    }
  }
  SUBCASE("leaky copies the secret") {
    const ProtocolPackage p = leaky();
    CHECK(check_passive_correct(p.protocol, *p.functionality).ok);
    const Verdict v = check_nimo(p.protocol, corrupt(p.federation, {2}));
    CHECK_FALSE(v.ok);
    REQUIRE(v.witness);
    REQUIRE(v.witness->lhs);
    CHECK(*v.witness->lhs != *v.witness->rhs);
    CHECK_FALSE(check_gradual_release(p.protocol, corrupt(p.federation, {2})).ok);
  }
  SUBCASE("one-time pad releases nothing") {
    const ProtocolPackage p = otp();
    CHECK(check_gradual_release(p.protocol, corrupt(p.federation, {2})).ok);
  }
  SUBCASE("wrong functionality is caught") {
    const ProtocolPackage p = gmw_and();
    const Functionality xor2 = *gmw_xor().functionality;
    const Verdict v = check_passive_correct(p.protocol, xor2);
    CHECK_FALSE(v.ok);
    CHECK(v.witness);
  }
}

TEST_CASE("and gate tactic") {
  CHECK(check_and_gate_tactic(gmw_and_gate().protocol).ok);
  const Protocol broken = parse_protocol(
      "m[z]@2 := OT4(m[x], m[y], (m[x] xor 1) and (m[y] xor 1), (m[x] xor 1) and m[y], m[x] and (m[y] xor 1),"
      " m[x] and m[y], 2, 1);\n"
      "m[z]@1 := 0@1;");
  const TacticReport r = and_gate_tactic(broken, "x", "y", "z");
  CHECK(r.det.ok);
  CHECK_FALSE(r.ok());
}

TEST_CASE("gmw invariant at depth two") {
  const ProtocolPackage prefix = gmw_circuit(and_then_xor(), false);
  const ClientSet fed = prefix.federation;
  for (const std::uint32_t c : {1u, 2u}) {
    CAPTURE(c);
    CHECK(check_gmw_invariant(prefix.protocol, "w", corrupt(fed, {c})).ok);
  }
  // Counting every message client 1 holds, the output share is the xor of two
  // held shares, so it is not uniform given them.
  const InvariantReport held = gmw_invariant(prefix.protocol, "w", corrupt(fed, {1}), CorruptMessages::Held);
  CHECK(held.det.ok);
  CHECK_FALSE(held.uni.ok);
}

TEST_CASE("adversary family") {
  const ProtocolPackage p = otp();
  const Partition c1 = corrupt(p.federation, {1});
  const auto points = decision_points(p.protocol, c1);
  REQUIRE(points.size() == 1);
  CHECK(points[0].command == 0);
  CHECK(points[0].target == V("m[z]@2"));
  CHECK(enumerate_adversaries(p.protocol, c1).size() == 3);
  CHECK(family_size(p.protocol, c1) == 3);

  const Protocol two = parse_protocol("m[a]@2 := s[x]@1; m[b]@2 := r[y]@1; out@2 := (m[a] xor m[b])@2;");
  const Partition t1 = corrupt({ClientId{1}, ClientId{2}}, {1});
  CHECK(enumerate_adversaries(two, t1).size() == 9);
  FamilyOptions big;
  big.budget = 2;
  // Two points, each with a one-input table (4 tables each), crossed with keep/0/1.
  CHECK(enumerate_adversaries(two, t1, big).size() == family_size(two, t1, big));
  CHECK(family_size(two, t1, big) > 9);
  FamilyOptions tiny;
  tiny.cap = 5;
  CHECK_THROWS_AS(enumerate_adversaries(two, t1, tiny), BudgetError);

  const Partition none = corrupt({ClientId{1}, ClientId{2}}, {});
  const auto id_only = enumerate_adversaries(two, none);
  REQUIRE(id_only.size() == 1);
  CHECK(id_only[0].choices().empty());
}

TEST_CASE("adversarial inputs follow data flow") {
  const Protocol pi = parse_protocol(
      "m[a]@2 := s[x]@1;\n"
      "m[b]@2 := (m[a] xor s[y])@2;\n"
      "out@2 := m[b]@2;");
  const Partition c1 = corrupt({ClientId{1}, ClientId{2}}, {1});
  const VarSet xc = adversarial_inputs(pi, c1, {V("out@2")});
  CHECK(xc.contains(V("m[a]@2")));
  CHECK_FALSE(xc.contains(V("s[x]@1")));
  CHECK_THROWS_AS(adversarial_inputs(pi, c1, {V("out@2")}, InputsMode::Statistical), UsageError);
}

TEST_CASE("malicious checks on authenticated multiplication") {
  const ProtocolPackage p = bdoz_package(bdoz_trim());
  const Partition c2 = corrupt(p.federation, {2});
  AdversaryStrategy flip_open;
  flip_open.set(12, Replacement::flip());
  AdversaryStrategy const_open;
  const_open.set(12, Replacement::constant(1));
  const std::vector<AdversaryStrategy> family{AdversaryStrategy::identity(), flip_open, const_open};

  SUBCASE("the flip at the first opening is caught there exactly when delta is set") {
    std::uint64_t at_open = 0;
    const std::uint64_t n = initial_count(p.protocol, p.preproc);
    for (std::uint64_t i = 0; i < n; ++i) {
      const Memory m0 = initial_memory(p.protocol, p.preproc, i);
      const AdvRun r = run_adv(m0, p.protocol, flip_open, c2);
      const bool delta = m0.at(V("m[delta]@1"))->value() == 1;
      CHECK((r.aborted == std::optional<std::size_t>{14}) == delta);
      at_open += delta;
    }
    CHECK(make_prob(at_open, n) == Prob(1, 2));
    // Runs that slip past the opening with delta = 0 still abort at the final
    // check when client 1's key for b is set.
    const RunCounts rc = count_runs(p.protocol, p.preproc, &flip_open, &c2, VarSet{});
    CHECK(rc.runs == n);
    CHECK(make_prob(rc.aborted, rc.runs) == Prob(3, 4));
  }
  SUBCASE("per-draw detection fails through mac forgery when delta is zero") {
    const Verdict v = check_cheating_detection(p.protocol, c2, family, p.preproc);
    CHECK_FALSE(v.ok);
    REQUIRE(v.witness);
    bool saw_delta = false;
    for (const auto& [label, m] : v.witness->memories) {
      if (m.domain().contains(V("m[delta]@1"))) {
        saw_delta = true;
        CHECK(m.at(V("m[delta]@1"))->value() == 0);
      }
    }
    CHECK(saw_delta);
    AdversarialOptions marginal;
    marginal.reading = Reading::Marginal;
    CHECK(check_cheating_detection(p.protocol, c2, family, p.preproc, marginal).ok);
  }
  SUBCASE("with delta set, authentication is what detects cheating") {
    BdozOptions opts = bdoz_trim();
    opts.fixed.emplace_back(V("m[delta]@1"), true);
    const PreprocPredicate keyed = PreprocPredicate::bdoz(opts);
    CHECK(check_cheating_detection(p.protocol, c2, family, keyed).ok);
    const Verdict v = check_cheating_detection(p.protocol.without_asserts(), c2, family, keyed);
    CHECK_FALSE(v.ok);
    REQUIRE(v.witness);
    CHECK_FALSE(v.witness->note.empty());
  }
  SUBCASE("integrity of the identity strategy depends on the reading") {
    const std::vector<AdversaryStrategy> id{AdversaryStrategy::identity()};
    AdversarialOptions marginal;
    marginal.reading = Reading::Marginal;
    CHECK(check_integrity(p.protocol, c2, id, p.preproc).ok);
    CHECK_FALSE(check_integrity(p.protocol, c2, id, p.preproc, marginal).ok);
  }
}
