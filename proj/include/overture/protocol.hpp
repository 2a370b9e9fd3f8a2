#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "overture/expr.hpp"
#include "overture/var.hpp"

namespace ovt {

// m[name]@dest := expr @ src
struct MesgSend {
  std::string name;
  ClientId dest;
  Expr expr;
  ClientId src;
};

// p[name] := expr @ src
struct RevealCmd {
  std::string name;
  Expr expr;
  ClientId src;
};

// out@client := expr @ src   (well-formed only when client == src)
struct OutputCmd {
  ClientId client;
  Expr expr;
  ClientId src;
};

// assert(pred)@client
struct AssertCmd {
  Pred pred;
  ClientId client;
};

using Command = std::variant<MesgSend, RevealCmd, OutputCmd, AssertCmd>;

// Variable written by the command; asserts write nothing.
std::optional<Var> target(const Command& cmd);
// Client that computes the right-hand side (or evaluates the assertion).
ClientId computing_client(const Command& cmd);
// Variables the command reads.
VarSet reads(const Command& cmd);
// Field expression of an assignment; null for asserts.
const Expr* command_expr(const Command& cmd);
std::string command_to_string(const Command& cmd);

class Protocol {
 public:
  Protocol() = default;
  explicit Protocol(std::vector<Command> commands, std::uint32_t modulus = 2);

  std::span<const Command> commands() const { return commands_; }
  std::size_t size() const { return commands_.size(); }
  bool empty() const { return commands_.empty(); }
  std::uint32_t modulus() const { return modulus_; }

  void append(Command cmd) { commands_.push_back(std::move(cmd)); }

  // Every variable read or written.
  VarSet vars() const;
  VarSet secrets() const;
  VarSet flips() const;
  // Messages and reveals written by commands.
  VarSet written() const;
  VarSet messages() const;
  VarSet reveals() const;
  VarSet outputs() const;
  // Messages read but never written (supplied by preprocessing).
  VarSet preprocessed() const;
  // S u M u P u O.
  VarSet iovars() const;
  // M u P.
  VarSet views() const;
  ClientSet clients() const;
  bool has_asserts() const;

  // Copy with every assertion removed.
  Protocol without_asserts() const;

  std::string to_string() const;

 private:
  std::vector<Command> commands_;
  std::uint32_t modulus_ = 2;
};

}  // namespace ovt
