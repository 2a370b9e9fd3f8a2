#include <doctest.h>

#include <random>

#include "overture/engine.hpp"
#include "overture/error.hpp"
#include "overture/functionality.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

using namespace ovt;

namespace {

Var V(const char* text) { return parse_var(text); }
Memory M(const char* text) { return parse_memory(text); }

Pmf otp_pmf() {
  const Protocol pi = parse_protocol("m[z]@2 := (s[x] xor r[y])@1;");
  return bd(pi, PreprocPredicate::default_for(pi));
}

}  // namespace

TEST_CASE("one-time pad distribution") {
  const Pmf p = otp_pmf();
  CHECK(p.support_size() == 4);
  CHECK(p.total() == 4);
  CHECK(p.prob(M("m[z]@2=0")) == Prob(1, 2));
  CHECK(p.conditional(M("s[x]@1=1"), M("m[z]@2=0")) == Prob(1, 2));
  CHECK(p.independent({V("m[z]@2")}, {V("s[x]@1")}));
  CHECK(p.cond_uni({V("s[x]@1")}, {V("m[z]@2")}));
  CHECK(p.marginal({V("m[z]@2")}).dump() == "m[z]@2=0 weight=1/2\nm[z]@2=1 weight=1/2\n");
}

TEST_CASE("conditioning on a null event gives zero") {
  const Pmf p = Pmf::uniform({M("s[x]@1=0 r[y]@1=0"), M("s[x]@1=1 r[y]@1=1")});
  CHECK(p.conditional(M("s[x]@1=1"), M("r[y]@1=0")) == Prob(0));
  CHECK(p.conditional(M("s[x]@1=1"), Memory{}) == p.prob(M("s[x]@1=1")));
  const Pmf p3 = Pmf::uniform({M("s[x]@1=0 r[y]@1=0 m[z]@1=0"), M("s[x]@1=1 r[y]@1=1 m[z]@1=0")});
  CHECK(p3.conditional(M("s[x]@1=1"), M("r[y]@1=0 m[z]@1=1")) == Prob(0));
  CHECK(p3.given({V("s[x]@1")}, M("r[y]@1=0 m[z]@1=1")).total() == 0);
}

TEST_CASE("copy dependence and determinism") {
  const Protocol pi = parse_protocol("m[z]@2 := s[x]@1;");
  const Pmf p = bd(pi, PreprocPredicate::default_for(pi));
  CHECK_FALSE(p.independent({V("m[z]@2")}, {V("s[x]@1")}));
  CHECK(p.cond_det({V("s[x]@1")}, {V("m[z]@2")}));
  CHECK(p.independent({V("m[z]@2")}, {}));
}

TEST_CASE("global views sum the two shares") {
  SUBCASE("uniform shares") {
    const Pmf p = Pmf::uniform({M("m[w]@1=0 m[w]@2=0"), M("m[w]@1=0 m[w]@2=1"), M("m[w]@1=1 m[w]@2=0"),
                                M("m[w]@1=1 m[w]@2=1")});
    CHECK(p.global_view_pmf("w").dump() == "<m[w]>=0 weight=1/2\n<m[w]>=1 weight=1/2\n");
  }
  SUBCASE("identical copies") {
    const Pmf p = Pmf::uniform({M("m[w]@1=0 m[w]@2=0"), M("m[w]@1=1 m[w]@2=1")});
    CHECK(p.global_view_pmf("w").dump() == "<m[w]>=0 weight=1/1\n");
  }
  SUBCASE("point mass") {
    const Pmf p = Pmf::uniform({M("m[w]@1=1 m[w]@2=0")});
    CHECK(p.global_view_pmf("w").dump() == "<m[w]>=1 weight=1/1\n");
  }
  CHECK_THROWS_AS(Pmf::uniform({M("m[w]@1=1")}).global_view_pmf("w"), UsageError);
}

TEST_CASE("functionality kernels") {
  const VarSet s{V("s[x]@1"), V("s[x]@2"), V("s[x]@3")};
  const Functionality sum = Functionality::broadcast(s, {V("out@1")}, [](const Memory& m) {
    int t = 0;
    for (const auto& [x, v] : m) t += v->value();
    return t % 2 == 1;
  });
  const auto k = kernel(sum, M("out@1=0"));
  CHECK(k.size() == 4);
  for (const Memory& m : k) {
    int ones = 0;
    for (const auto& [x, v] : m) ones += v->value();
    CHECK(ones % 2 == 0);
  }
  const Functionality zero = Functionality::broadcast(s, {V("out@1")}, [](const Memory&) { return false; });
  CHECK(kernel(zero, M("out@1=0")).size() == 8);
  CHECK(kernel(zero, M("out@1=1")).empty());
  CHECK(parse_functionality(zero.to_string()).table() == zero.table());
}

TEST_CASE("default preprocessing yields every secret memory once") {
  const Protocol pi = shamir_add3().protocol;
  const PreprocPredicate pre = PreprocPredicate::default_for(pi);
  CHECK(pre.count() == 8);
  const Pmf p = bd(pi, pre);
  CHECK(p.support_size() == 512);
  CHECK(p.marginal(pi.secrets()).support_size() == 8);
}

namespace {

// Raw BDOZ constraints written against the definition, separate from the
// generator's derived-variable formulas.
bool bdoz_ok(const Memory& m) {
  auto b = [&](const std::string& w) { return m.at(parse_var(w))->value() == 1; };
  auto g = [&](const std::string& l) { return b("m[" + l + "s]@1") != b("m[" + l + "s]@2"); };
  if (g("x") != b("s[x]@1") || g("y") != b("s[y]@2")) return false;
  if ((g("a") && g("b")) != g("c")) return false;
  for (const char* l : {"a", "b", "c", "x", "y"}) {
    for (int i : {1, 2}) {
      const std::string o = std::to_string(3 - i), me = std::to_string(i);
      const bool mac = b(std::string("m[") + l + "m]@" + me);
      const bool rhs = b(std::string("m[") + l + "k]@" + o) != (b("m[delta]@" + o) && b(std::string("m[") + l + "s]@" + me));
      if (mac != rhs) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("BDOZ preprocessing matches an exhaustive filter") {
  const PreprocPredicate full = PreprocPredicate::bdoz();
  CHECK(full.free_vars().size() == 21);
  CHECK(full.count() == (std::uint64_t{1} << 21));
  CHECK(full.domain() == bdoz_domain());

  // For a handful of key/delta assignments, filter every assignment of the
  // 22 secret/share/mac bits and compare with the generator's memories.
  std::vector<Var> keys;
  std::vector<Var> rest;
  for (const Var& x : bdoz_domain()) {
    const bool is_key = x.name.size() == 2 && x.name[1] == 'k';
    (is_key || x.name == "delta" ? keys : rest).push_back(x);
  }
  REQUIRE(keys.size() == 12);
  REQUIRE(rest.size() == 22);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    BdozOptions opts;
    Memory fixed;
    for (const Var& k : keys) {
      const bool v = rng() & 1;
      opts.fixed.emplace_back(k, v);
      fixed.extend(k, FieldElem::bit(v));
    }
    std::set<Memory> filtered;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << rest.size()); ++i) {
      Memory m = fixed;
      for (std::size_t j = 0; j < rest.size(); ++j) m.extend(rest[j], FieldElem::bit((i >> j) & 1));
      if (bdoz_ok(m)) filtered.insert(m);
    }
    const auto generated = bdoz_preproc_enumerate(opts);
    CHECK(generated.size() == 512);
    CHECK(std::set<Memory>(generated.begin(), generated.end()) == filtered);
  }
}

TEST_CASE("bitsliced kernel agrees with the interpreter") {
  for (const char* name : {"shamir_add3", "otp", "leaky", "gmw_and", "gmw_xor", "gmw_depth2", "gmw_and_gate"}) {
    CAPTURE(name);
    const ProtocolPackage p = package(std::string(name));
    const Pmf fast = bd(p.protocol, p.preproc);
    CHECK(fast == bd_reference(p.protocol, p.preproc));
    const Kernel k(p.protocol, p.preproc);
    const VarSet dom = bd_domain(p.protocol, p.preproc);
    CHECK(k.count_serial(dom).pmf == fast);
    EngineOptions two;
    two.workers = 2;
    CHECK(k.count(dom, two).pmf == fast);
  }
}

TEST_CASE("bitsliced kernel agrees with the interpreter under adversaries") {
  const ProtocolPackage p = bdoz_package(bdoz_trim());
  const Partition part = Partition::from_corrupt(p.federation, {ClientId{2}});
  const VarSet project{V("out@1"), V("m[delta]@1"), V("m[dexts]@1"), V("p[xys2]"), V("m[dexts]@2")};
  std::vector<AdversaryStrategy> strategies(4);
  strategies[1].set(0 + 12, Replacement::flip());
  strategies[2].set(12, Replacement::constant(1)).set(13, Replacement::constant(0));
  strategies[3].set(12, Replacement::lookup({V("m[ds]@2"), V("m[dm]@2")}, {1, 0, 0, 1}));
  for (const auto& a : strategies) {
    CAPTURE(a.to_string());
    const RunCounts fast = count_runs(p.protocol, p.preproc, &a, &part, project);
    const RunCounts slow = count_runs_reference(p.protocol, p.preproc, &a, &part, project);
    CHECK(fast.pmf == slow.pmf);
    CHECK(fast.aborted == slow.aborted);
    CHECK(fast.runs == slow.runs);
  }
}

TEST_CASE("run sweep is indexed like initial memories") {
  const Protocol pi = parse_protocol("m[z]@2 := (s[x] xor r[y])@1;");
  const auto pre = PreprocPredicate::default_for(pi);
  const auto sweep = run_sweep(pi, pre);
  REQUIRE(sweep.size() == 4);
  for (std::uint64_t i = 0; i < 4; ++i) {
    const Memory m0 = initial_memory(pi, pre, i);
    CHECK(sweep[i].restrict_to(m0.domain()) == m0);
  }
}

TEST_CASE("pmf algebra on random small pmfs") {
  std::mt19937_64 rng(2024);
  const std::vector<Var> vars{V("s[a]@1"), V("s[b]@1"), V("s[c]@1"), V("s[d]@1")};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<Memory, std::uint64_t>> w;
    const std::size_t n = 1 + rng() % 4;
    for (std::uint64_t i = 0; i < (1u << n); ++i) {
      if (rng() % 3 == 0) continue;
      Memory m;
      for (std::size_t j = 0; j < n; ++j) m.extend(vars[j], FieldElem::bit((i >> j) & 1));
      w.emplace_back(m, 1 + rng() % 5);
    }
    if (w.empty()) continue;
    const Pmf p = Pmf::weighted(w);
    Prob mass(0);
    for (const auto& [m, c] : p.entries()) mass += make_prob(c, p.total());
    CHECK(mass == Prob(1));
    const VarSet dom = p.domain();
    for (const auto& [m, c] : w) {
      const Memory m2 = m.restrict_to({vars[0]});
      const Memory m1 = m.restrict_to(VarSet(dom.begin(), dom.end())).restrict_to({vars[n - 1]});
      if (m1.domain() == m2.domain()) continue;
      CHECK(p.prob(m1 | m2) == p.conditional(m1, m2) * p.prob(m2));
    }
    const VarSet small{vars[0]};
    CHECK(p.marginal(dom).marginal(small) == p.marginal(small));
  }
}

TEST_CASE("conditioning composition: transitivity holds, the other two implications do not") {
  SUBCASE("det composes") {
    const Pmf p = Pmf::uniform({M("s[a]@1=0 m[b]@1=1 m[c]@1=0"), M("s[a]@1=1 m[b]@1=0 m[c]@1=1")});
    CHECK(p.cond_det({V("s[a]@1")}, {V("m[b]@1")}));
    CHECK(p.cond_det({V("m[b]@1")}, {V("m[c]@1")}));
    CHECK(p.cond_det({V("s[a]@1")}, {V("m[c]@1")}));
  }
  SUBCASE("det then uni does not give uni: empty middle set, target copies the secret") {
    const Pmf p = Pmf::uniform({M("s[a]@1=0 m[b]@1=0"), M("s[a]@1=1 m[b]@1=1")});
    CHECK(p.cond_det({V("s[a]@1")}, {}));
    CHECK(p.cond_uni({}, {V("m[b]@1")}));
    CHECK_FALSE(p.cond_uni({V("s[a]@1")}, {V("m[b]@1")}));
  }
  SUBCASE("det then sep does not give sep: a = b xor c") {
    std::vector<Memory> ms;
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        Memory m;
        m.extend(V("s[a]@1"), FieldElem::bit(b ^ c));
        m.extend(V("m[b]@1"), FieldElem::bit(b));
        m.extend(V("m[c]@1"), FieldElem::bit(c));
        ms.push_back(m);
      }
    }
    const Pmf p = Pmf::uniform(ms);
    CHECK(p.cond_det({V("s[a]@1")}, {}));
    CHECK(p.cond_sep({}, {V("m[b]@1")}, {V("m[c]@1")}));
    CHECK_FALSE(p.cond_sep({V("s[a]@1")}, {V("m[b]@1")}, {V("m[c]@1")}));
  }
}

TEST_CASE("pmf dump is sorted and exact") {
  const Pmf p = Pmf::weighted({{M("s[b]@1=1 s[a]@1=0"), 2}, {M("s[b]@1=0 s[a]@1=1"), 1}});
  CHECK(p.dump() == "s[a]@1=0 s[b]@1=1 weight=2/3\ns[a]@1=1 s[b]@1=0 weight=1/3\n");
  CHECK(p.bottom_mass() == Prob(0));
}
