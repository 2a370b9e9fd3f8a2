#pragma once

#include <map>
#include <optional>
#include <string>

#include "overture/field.hpp"
#include "overture/var.hpp"

namespace ovt {

// A memory cell holds a field value or bottom (nullopt) for aborted runs.
using Cell = std::optional<FieldElem>;

// Finite partial mapping from variables to F_p u {bottom}.
class Memory {
 public:
  using Map = std::map<Var, Cell>;

  Memory() = default;
  Memory(std::initializer_list<std::pair<const Var, Cell>> init) : cells_(init) {}
  explicit Memory(Map cells) : cells_(std::move(cells)) {}

  bool contains(const Var& x) const { return cells_.contains(x); }
  // Throws UsageError if x is unmapped.
  const Cell& at(const Var& x) const;
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  // m{x -> v}; requires x not in dom(m).
  Memory extended(const Var& x, Cell v) const;
  void extend(const Var& x, Cell v);

  Memory restrict_to(const VarSet& xs) const;
  VarSet domain() const;

  // Disjoint union; throws UsageError where both sides map a variable differently.
  friend Memory operator|(const Memory& a, const Memory& b);

  Map::const_iterator begin() const { return cells_.begin(); }
  Map::const_iterator end() const { return cells_.end(); }

  friend bool operator==(const Memory&, const Memory&) = default;
  friend auto operator<=>(const Memory& a, const Memory& b) { return a.cells_ <=> b.cells_; }

  // Pmf dump style: var=val pairs sorted lexicographically by their text.
  std::string to_string() const;

 private:
  Map cells_;
};

std::string cell_to_string(const Cell& c);

// Parses "s[x]@1=1, r[y]@1=0" (commas or whitespace separate entries).
Memory parse_memory(const std::string& text, std::uint32_t modulus = 2);

}  // namespace ovt
