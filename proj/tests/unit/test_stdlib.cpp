#include <doctest.h>

#include <algorithm>

#include "overture/checks.hpp"
#include "overture/error.hpp"
#include "overture/prelude.hpp"
#include "overture/stdlib.hpp"
#include "overture/syntax.hpp"

using namespace ovt;

namespace {

Verdict evaluate(const ProtocolPackage& p, const Expectation& e) {
  const Partition part = Partition::from_corrupt(p.federation, e.corrupt);
  if (e.property == "correct") return check_passive_correct(p.protocol, *p.functionality, p.preproc);
  if (e.property == "nimo") return check_nimo(p.protocol, part, p.preproc);
  if (e.property == "gradual-release") return check_gradual_release(p.protocol, part, p.preproc);
  if (e.property == "and-tactic") return check_and_gate_tactic(p.protocol);
  throw UsageError("unknown property " + e.property);
}

}  // namespace

TEST_CASE("embedded protocol files") {
  const auto names = embedded_names();
  CHECK(std::find(names.begin(), names.end(), "manifest.txt") != names.end());
  CHECK(std::find(names.begin(), names.end(), "gmw.pre") != names.end());
  CHECK(embedded_file("otp.ovt").has_value());
  CHECK_FALSE(embedded_file("missing.ovt").has_value());
}

TEST_CASE("manifest parsing") {
  const auto entries = parse_manifest(
      "# comment\n"
      "a  a.ovt  -  1,2  default  -  nimo@1,2:fail correct:pass\n");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].libraries.empty());
  CHECK_FALSE(entries[0].functionality);
  REQUIRE(entries[0].expected.size() == 2);
  CHECK(entries[0].expected[0].corrupt.size() == 2);
  CHECK_FALSE(entries[0].expected[0].pass);
  CHECK(entries[0].expected[1].corrupt.empty());
  CHECK_THROWS_AS(parse_manifest("a a.ovt - 1,2\n"), ParseError);
}

TEST_CASE("packages validate against their federations") {
  for (const ProtocolPackage& p : all_packages()) {
    CAPTURE(p.name);
    CHECK(validate(p.protocol, p.federation, p.preproc.domain().empty() ? std::nullopt
                                                                          : std::optional<VarSet>(p.preproc.domain()))
              .empty());
  }
}

TEST_CASE("manifest expectations hold") {
  for (const ProtocolPackage& p : all_packages()) {
    if (p.name == "bdoz") continue;
    for (const Expectation& e : p.expected) {
      CAPTURE(p.name);
      CAPTURE(e.to_string());
      CHECK(evaluate(p, e).ok == e.pass);
    }
  }
}

TEST_CASE("authenticated multiplication under trimmed preprocessing") {
  const ProtocolPackage p = bdoz_package(bdoz_trim());
  CHECK(p.preproc.count() == (std::uint64_t{1} << 15));
  for (const Expectation& e : p.expected) {
    CAPTURE(e.to_string());
    CHECK(evaluate(p, e).ok == e.pass);
  }
}

TEST_CASE("circuit generator matches the hand-written programs") {
  CHECK(gmw_circuit(single_and()).protocol.to_string() == gmw_and().protocol.to_string());
  CHECK(gmw_circuit(single_xor()).protocol.to_string() == gmw_xor().protocol.to_string());
  CHECK(gmw_circuit(and_then_xor()).protocol.to_string() == gmw_depth2().protocol.to_string());
  CHECK(netlist_functionality(and_then_xor()).table() == gmw_depth2().functionality->table());
  CHECK_THROWS_AS(gmw_program(Netlist{{{"a", 1}}, {}}), UsageError);
}

TEST_CASE("xor gates are local") {
  const Protocol pi = gmw_circuit(single_xor(), false).protocol;
  for (const Command& c : pi.commands()) {
    CAPTURE(command_to_string(c));
    if (const auto* send = std::get_if<MesgSend>(&c)) {
      const bool encode = send->name == "s1" || send->name == "s2";
      CHECK((encode || send->dest == send->src));
    }
  }
}

TEST_CASE("each flip is used by one gate or encoding") {
  for (const char* name : {"gmw_and", "gmw_depth2"}) {
    CAPTURE(name);
    const Protocol pi = package(std::string(name)).protocol;
    for (const Var& r : pi.flips()) {
      std::set<std::string> users;
      for (const Command& c : pi.commands()) {
        if (reads(c).contains(r)) users.insert(target(c)->name);
      }
      CHECK(users.size() == 1);
    }
  }
}

TEST_CASE("preprocessing by name") {
  const Protocol pi = gmw_and_gate().protocol;
  CHECK(preproc_by_name("uniform", pi).count() == 16);
  CHECK(preproc_by_name("bdoz-trim", pi).count() == (std::uint64_t{1} << 15));
  CHECK_THROWS_AS(preproc_by_name("nope", pi), UsageError);
}
