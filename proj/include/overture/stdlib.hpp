#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "overture/functionality.hpp"
#include "overture/interpreter.hpp"
#include "overture/preproc.hpp"

namespace ovt {

// Files under protocols/, compiled into the library.
std::optional<std::string_view> embedded_file(std::string_view name);
std::vector<std::string> embedded_names();

struct Expectation {
  std::string property;  // correct, nimo, gradual-release, and-tactic
  ClientSet corrupt;     // empty when the property has no partition
  bool pass = true;

  std::string to_string() const;
};

struct ManifestEntry {
  std::string name;
  std::string source;
  std::vector<std::string> libraries;
  ClientSet federation;
  std::string preproc;  // default, uniform or bdoz
  std::optional<std::string> functionality;
  std::vector<Expectation> expected;
};

// One package per line: name source libraries federation preproc functionality expectations...
// `-` marks an empty field; '#' starts a comment.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

struct ProtocolPackage {
  std::string name;
  std::string source;  // Overture text or Prelude main program
  std::vector<std::string> libraries;
  ClientSet federation;
  PreprocPredicate preproc;
  std::optional<Functionality> functionality;
  std::vector<Expectation> expected;
  Protocol protocol;
};

// Parses Overture text, or expands a Prelude program when `prelude` is set.
Protocol load_protocol(std::string_view source, bool prelude, const std::vector<std::string>& libraries = {});
// Picks by file extension: .pre expands, anything else parses as Overture.
Protocol load_protocol_file(const std::string& name, std::string_view source,
                            const std::vector<std::string>& libraries = {});

PreprocPredicate preproc_by_name(const std::string& name, const Protocol& pi);

ProtocolPackage package(const ManifestEntry& entry);
ProtocolPackage package(const std::string& name);
std::vector<ProtocolPackage> all_packages();

ProtocolPackage shamir_add3();
ProtocolPackage otp();
ProtocolPackage leaky();
ProtocolPackage gmw_and();
ProtocolPackage gmw_xor();
ProtocolPackage gmw_depth2();
ProtocolPackage gmw_and_gate();
ProtocolPackage bdoz_package(const BdozOptions& options = {});

struct Gate {
  enum class Kind : std::uint8_t { And, Xor };
  Kind kind = Kind::And;
  std::string out;
  std::string lhs;
  std::string rhs;
};

// Two-party circuit. Inputs are (wire, owner); the last gate is the output.
struct Netlist {
  std::vector<std::pair<std::string, std::uint32_t>> inputs;
  std::vector<Gate> gates;
};

Netlist single_and();
Netlist single_xor();
Netlist and_then_xor();

// Prelude main program: let-bound encodes and gates, then decodegmw unless
// `decode` is false.
std::string gmw_program(const Netlist& net, bool decode = true);
ProtocolPackage gmw_circuit(const Netlist& net, bool decode = true);
Functionality netlist_functionality(const Netlist& net);

// Trim used for adversarial sweeps: client 2's keys and delta fixed to 0.
BdozOptions bdoz_trim();
std::vector<Memory> bdoz_preproc_enumerate(const BdozOptions& options = {});

}  // namespace ovt
