#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "overture/memory.hpp"
#include "overture/protocol.hpp"

namespace ovt {

// Boolean formula over owner-explicit variables, used to derive forced
// preprocessing values from free ones.
struct Formula {
  enum class Kind : std::uint8_t { Var, Const, Xor, And, Not };
  Kind kind = Kind::Const;
  ovt::Var var;
  bool value = false;
  std::vector<Formula> args;

  static Formula of(ovt::Var x) { return {Kind::Var, std::move(x), false, {}}; }
  static Formula constant(bool v) { return {Kind::Const, {}, v, {}}; }
  friend Formula operator^(Formula a, Formula b) { return {Kind::Xor, {}, false, {std::move(a), std::move(b)}}; }
  friend Formula operator&(Formula a, Formula b) { return {Kind::And, {}, false, {std::move(a), std::move(b)}}; }
  friend Formula operator!(Formula a) { return {Kind::Not, {}, false, {std::move(a)}}; }

  bool eval(const Memory& m) const;
  VarSet vars() const;
  std::string to_string() const;
};

struct BdozOptions {
  // Variables pinned to a constant instead of ranging freely.
  std::vector<std::pair<Var, bool>> fixed;
};

// An enumerable preprocessing predicate: every satisfying memory is obtained
// by choosing the free variables arbitrarily and computing the derived ones
// in order. Memory number i sets free variable j to bit j of i.
class PreprocPredicate {
 public:
  PreprocPredicate() = default;
  PreprocPredicate(std::string name, std::vector<Var> free, std::vector<std::pair<Var, Formula>> derived);

  // dom(m) = secrets(pi), uniform.
  static PreprocPredicate default_for(const Protocol& pi);
  // Secrets together with the messages pi reads but never writes, all uniform.
  static PreprocPredicate uniform_for(const Protocol& pi);
  static PreprocPredicate uniform(const VarSet& vars, std::string name = "uniform");
  // Two-party authenticated shares, MACs and keys with a Beaver triple.
  static PreprocPredicate bdoz(const BdozOptions& options = {});

  // Turns a free variable into the constant v.
  PreprocPredicate fixed(const Var& x, bool v) const;

  const std::string& name() const { return name_; }
  const std::vector<Var>& free_vars() const { return free_; }
  const std::vector<std::pair<Var, Formula>>& derived() const { return derived_; }
  VarSet domain() const;
  std::uint64_t count() const;
  Memory memory(std::uint64_t index) const;
  void for_each(const std::function<void(const Memory&)>& fn) const;
  std::vector<Memory> enumerate() const;

 private:
  std::string name_;
  std::vector<Var> free_;
  std::vector<std::pair<Var, Formula>> derived_;
};

// The BDOZ constraints checked directly on a full memory: the global
// secrets match the shares, the triple multiplies, and every MAC verifies
// under the other client's key and delta.
bool bdoz_constraints_hold(const Memory& m);
// The variables a BDOZ preprocessing memory defines.
VarSet bdoz_domain();

}  // namespace ovt
