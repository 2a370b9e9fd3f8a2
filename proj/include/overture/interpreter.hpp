#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "overture/memory.hpp"
#include "overture/protocol.hpp"

namespace ovt {

// Honest/corrupt split of the federation.
struct Partition {
  ClientSet honest;
  ClientSet corrupt;

  static Partition from_corrupt(const ClientSet& federation, const ClientSet& corrupt);
  bool is_corrupt(ClientId c) const { return corrupt.contains(c); }
  std::string to_string() const;
};

// Every split with nonempty honest and corrupt sides, ordered by the corrupt set.
std::vector<Partition> proper_partitions(const ClientSet& federation);

FieldElem eval_expr(const Memory& m, const Expr& e, ClientId client, std::uint32_t modulus = 2);
bool eval_pred(const Memory& m, const Pred& p, ClientId client, std::uint32_t modulus = 2);

struct Configuration {
  Memory memory;
  std::span<const Command> rest;
};

// Executes the head command. A failing assert throws AbortError.
Configuration step(Configuration config, std::uint32_t modulus = 2);
Memory run(const Memory& m0, const Protocol& pi);

// How an adversary replaces the value a corrupt client computes.
struct Replacement {
  enum class Kind : std::uint8_t { Keep, Const, Flip, Table };

  Kind kind = Kind::Keep;
  std::uint32_t value = 0;
  // Table strategies: the output for each assignment of `inputs`, indexed with
  // inputs[0] as the least significant bit.
  std::vector<Var> inputs;
  std::vector<std::uint8_t> table;

  static Replacement keep() { return {}; }
  static Replacement constant(std::uint32_t v) { return {Kind::Const, v, {}, {}}; }
  static Replacement flip() { return {Kind::Flip, 0, {}, {}}; }
  static Replacement lookup(std::vector<Var> inputs, std::vector<std::uint8_t> table) {
    return {Kind::Table, 0, std::move(inputs), std::move(table)};
  }

  std::string to_string() const;
};

// A deterministic adversary. Structured strategies choose a Replacement per
// command index; a custom rewrite function receives the corrupt-visible memory,
// the command index and the original expression and returns the expression to
// evaluate instead.
class AdversaryStrategy {
 public:
  using Rewrite = std::function<Expr(const Memory&, std::size_t, const Expr&)>;

  AdversaryStrategy() = default;
  static AdversaryStrategy identity() { return {}; }
  static AdversaryStrategy custom(Rewrite fn, std::string label = "custom");

  AdversaryStrategy& set(std::size_t command, Replacement r);
  // The adversary aborts at its own assert at this command index.
  AdversaryStrategy& abort_at(std::size_t command);

  bool is_custom() const { return static_cast<bool>(custom_); }
  const std::map<std::size_t, Replacement>& choices() const { return choices_; }
  const std::set<std::size_t>& aborts() const { return aborts_; }

  Expr rewrite(const Memory& corrupt_view, std::size_t command, const Expr& original) const;

  std::string to_string() const;

 private:
  std::map<std::size_t, Replacement> choices_;
  std::set<std::size_t> aborts_;
  Rewrite custom_;
  std::string label_;
};

struct AdvRun {
  Memory memory;                       // bottom-padded final memory
  std::optional<std::size_t> aborted;  // index of the command that aborted
};

// Corrupt clients compute through the strategy, corrupt asserts are skipped,
// and a failing honest assert stops the run; undefined views and outputs are
// then padded with bottom.
AdvRun run_adv(const Memory& m0, const Protocol& pi, const AdversaryStrategy& adversary,
               const Partition& part);

struct Violation {
  std::size_t command;
  std::string message;
  std::string to_string() const;
};

// Empty iff single-assignment, definition before use, ownership sanity and OT
// placement all hold. Messages read but never written count as preprocessing
// unless `preprocessed` pins the allowed set. An empty federation is unchecked.
std::vector<Violation> validate(const Protocol& pi, const ClientSet& federation = {},
                                const std::optional<VarSet>& preprocessed = std::nullopt);

// V_{H>C}: honest reveals and honest-to-corrupt messages.
VarSet corrupt_views(const Protocol& pi, const Partition& part);
// V_{C>H}: corrupt reveals and corrupt-to-honest messages.
VarSet honest_views(const Protocol& pi, const Partition& part);

// Variables owned by the given clients, plus reveals when requested.
VarSet owned_by(const VarSet& xs, const ClientSet& clients, bool with_reveals = false);

}  // namespace ovt
