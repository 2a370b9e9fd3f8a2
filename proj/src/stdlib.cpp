#include "overture/stdlib.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "overture/error.hpp"
#include "overture/prelude.hpp"
#include "overture/syntax.hpp"

namespace ovt::embedded {
extern const std::pair<std::string_view, std::string_view> kFiles[];
extern const unsigned kFileCount;
}  // namespace ovt::embedded

namespace ovt {

namespace {

std::string must_embedded(const std::string& name) {
  const auto f = embedded_file(name);
  if (!f) throw UsageError("no protocol file named " + name);
  return std::string(*f);
}

ClientSet parse_clients(const std::string& text) {
  ClientSet out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit)) {
      throw ParseError("bad client list '" + text + "'", 0, 0);
    }
    out.insert(ClientId{static_cast<std::uint32_t>(std::stoul(item))});
  }
  return out;
}

bool is_identifier(const std::string& s) {
  return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::optional<std::string_view> embedded_file(std::string_view name) {
  for (unsigned i = 0; i < embedded::kFileCount; ++i) {
    if (embedded::kFiles[i].first == name) return embedded::kFiles[i].second;
  }
  return std::nullopt;
}

std::vector<std::string> embedded_names() {
  std::vector<std::string> out;
  for (unsigned i = 0; i < embedded::kFileCount; ++i) out.emplace_back(embedded::kFiles[i].first);
  return out;
}

std::string Expectation::to_string() const {
  std::string out = property;
  if (!corrupt.empty()) {
    out += "@";
    bool first = true;
    for (ClientId c : corrupt) {
      if (!first) out += ",";
      out += c.to_string();
      first = false;
    }
  }
  return out + (pass ? ":pass" : ":fail");
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (f.size() < 6) throw ParseError("manifest line needs at least 6 fields", lineno, 1);
    ManifestEntry e;
    e.name = f[0];
    e.source = f[1];
    if (f[2] != "-") {
      std::istringstream libs(f[2]);
      for (std::string l; std::getline(libs, l, ',');) e.libraries.push_back(l);
    }
    e.federation = parse_clients(f[3]);
    e.preproc = f[4];
    if (f[5] != "-") e.functionality = f[5];
    for (std::size_t i = 6; i < f.size(); ++i) {
      const auto colon = f[i].rfind(':');
      if (colon == std::string::npos) throw ParseError("expectation needs :pass or :fail", lineno, 1);
      Expectation x;
      const std::string verdict = f[i].substr(colon + 1);
      if (verdict != "pass" && verdict != "fail") throw ParseError("expectation needs :pass or :fail", lineno, 1);
      x.pass = verdict == "pass";
      const std::string head = f[i].substr(0, colon);
      const auto at = head.find('@');
      x.property = head.substr(0, at);
      if (at != std::string::npos) x.corrupt = parse_clients(head.substr(at + 1));
      e.expected.push_back(std::move(x));
    }
    out.push_back(std::move(e));
  }
  return out;
}

Protocol load_protocol(std::string_view source, bool prelude, const std::vector<std::string>& libraries) {
  if (!prelude) return parse_protocol(std::string(source));
  return prelude::expand(source, libraries).protocol;
}

Protocol load_protocol_file(const std::string& name, std::string_view source,
                            const std::vector<std::string>& libraries) {
  const bool pre = name.size() >= 4 && name.compare(name.size() - 4, 4, ".pre") == 0;
  return load_protocol(source, pre, libraries);
}

PreprocPredicate preproc_by_name(const std::string& name, const Protocol& pi) {
  if (name == "default") return PreprocPredicate::default_for(pi);
  if (name == "uniform") return PreprocPredicate::uniform_for(pi);
  if (name == "bdoz") return PreprocPredicate::bdoz();
  if (name == "bdoz-trim") return PreprocPredicate::bdoz(bdoz_trim());
  throw UsageError("unknown preprocessing '" + name + "' (default, uniform, bdoz, bdoz-trim)");
}

ProtocolPackage package(const ManifestEntry& entry) {
  ProtocolPackage p;
  p.name = entry.name;
  p.source = must_embedded(entry.source);
  for (const auto& l : entry.libraries) p.libraries.push_back(must_embedded(l));
  p.federation = entry.federation;
  p.protocol = load_protocol_file(entry.source, p.source, p.libraries);
  p.preproc = preproc_by_name(entry.preproc, p.protocol);
  if (entry.functionality) p.functionality = parse_functionality(must_embedded(*entry.functionality));
  p.expected = entry.expected;
  return p;
}

ProtocolPackage package(const std::string& name) {
  for (const auto& e : parse_manifest(must_embedded("manifest.txt"))) {
    if (e.name == name) return package(e);
  }
  throw UsageError("no package named " + name);
}

std::vector<ProtocolPackage> all_packages() {
  std::vector<ProtocolPackage> out;
  for (const auto& e : parse_manifest(must_embedded("manifest.txt"))) out.push_back(package(e));
  return out;
}

ProtocolPackage shamir_add3() { return package("shamir_add3"); }
ProtocolPackage otp() { return package("otp"); }
ProtocolPackage leaky() { return package("leaky"); }
ProtocolPackage gmw_and() { return package("gmw_and"); }
ProtocolPackage gmw_xor() { return package("gmw_xor"); }
ProtocolPackage gmw_depth2() { return package("gmw_depth2"); }
ProtocolPackage gmw_and_gate() { return package("gmw_and_gate"); }

ProtocolPackage bdoz_package(const BdozOptions& options) {
  ProtocolPackage p = package("bdoz");
  p.preproc = PreprocPredicate::bdoz(options);
  return p;
}

Netlist single_and() { return {{{"s1", 1}, {"s2", 2}}, {{Gate::Kind::And, "z", "s1", "s2"}}}; }
Netlist single_xor() { return {{{"s1", 1}, {"s2", 2}}, {{Gate::Kind::Xor, "z", "s1", "s2"}}}; }
Netlist and_then_xor() {
  return {{{"s1", 1}, {"s2", 2}, {"s3", 1}},
          {{Gate::Kind::And, "z", "s1", "s2"}, {Gate::Kind::Xor, "w", "z", "s3"}}};
}

namespace {

void check_netlist(const Netlist& net) {
  if (net.gates.empty()) throw UsageError("netlist has no gates");
  std::set<std::string> wires;
  for (const auto& [w, owner] : net.inputs) {
    if (!is_identifier(w)) throw UsageError("bad wire name '" + w + "'");
    if (owner != 1 && owner != 2) throw UsageError("inputs belong to client 1 or 2");
    if (!wires.insert(w).second) throw UsageError("duplicate wire " + w);
  }
  for (const Gate& g : net.gates) {
    for (const auto& in : {g.lhs, g.rhs}) {
      if (!wires.contains(in)) throw UsageError("gate " + g.out + " reads undefined wire " + in);
    }
    if (!is_identifier(g.out)) throw UsageError("bad wire name '" + g.out + "'");
    if (!wires.insert(g.out).second) throw UsageError("duplicate gate id " + g.out);
  }
}

}  // namespace

std::string gmw_program(const Netlist& net, bool decode) {
  check_netlist(net);
  std::string out;
  for (const auto& [w, owner] : net.inputs) {
    out += "let " + w + " = encodegmw(\"" + w + "\"," + std::to_string(3 - owner) + "," + std::to_string(owner) +
           ") in\n";
  }
  for (std::size_t i = 0; i + 1 < net.gates.size(); ++i) {
    const Gate& g = net.gates[i];
    out += "let " + g.out + " = " + (g.kind == Gate::Kind::And ? "andgmw" : "xorgmw") + "(\"" + g.out + "\"," +
           g.lhs + "," + g.rhs + ") in\n";
  }
  const Gate& last = net.gates.back();
  const std::string call = std::string(last.kind == Gate::Kind::And ? "andgmw" : "xorgmw") + "(\"" + last.out +
                           "\"," + last.lhs + "," + last.rhs + ")";
  return out + (decode ? "decodegmw(" + call + ")\n" : call + "\n");
}

Functionality netlist_functionality(const Netlist& net) {
  check_netlist(net);
  VarSet inputs;
  for (const auto& [w, owner] : net.inputs) inputs.insert(Var::secret(w, owner));
  const VarSet outputs{Var::output(1), Var::output(2)};
  return Functionality::broadcast(inputs, outputs, [&](const Memory& m) {
    std::map<std::string, bool> wire;
    for (const auto& [w, owner] : net.inputs) wire[w] = m.at(Var::secret(w, owner))->value() != 0;
    for (const Gate& g : net.gates) {
      wire[g.out] = g.kind == Gate::Kind::And ? (wire[g.lhs] && wire[g.rhs]) : (wire[g.lhs] != wire[g.rhs]);
    }
    return wire[net.gates.back().out];
  });
}

ProtocolPackage gmw_circuit(const Netlist& net, bool decode) {
  ProtocolPackage p;
  p.name = "gmw_circuit";
  p.source = gmw_program(net, decode);
  p.libraries = {must_embedded("gmw.pre")};
  p.federation = {ClientId{1}, ClientId{2}};
  p.protocol = load_protocol(p.source, true, p.libraries);
  p.preproc = PreprocPredicate::default_for(p.protocol);
  if (decode) p.functionality = netlist_functionality(net);
  return p;
}

BdozOptions bdoz_trim() {
  BdozOptions o;
  for (const char* w : {"a", "b", "c", "x", "y"}) o.fixed.emplace_back(Var::message(std::string(w) + "k", 2), false);
  o.fixed.emplace_back(Var::message("delta", 2), false);
  return o;
}

std::vector<Memory> bdoz_preproc_enumerate(const BdozOptions& options) {
  return PreprocPredicate::bdoz(options).enumerate();
}

}  // namespace ovt
