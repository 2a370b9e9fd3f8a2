#pragma once

#include <array>
#include <memory>
#include <vector>

#include "overture/packed.hpp"
#include "overture/preproc.hpp"
#include "overture/protocol.hpp"

namespace ovt {

// A set of F2 memories over one common domain. Rows are packed against a
// shared layout that may hold more variables than the domain.
class MemSet {
 public:
  MemSet() = default;
  MemSet(std::shared_ptr<const Layout> layout, VarSet domain, std::vector<PackedMemory> rows);

  // mems(xs)
  static MemSet all(const VarSet& xs);
  static MemSet of(const std::vector<Memory>& memories);
  static MemSet of(std::shared_ptr<const Layout> layout, const std::vector<Memory>& memories);

  const std::shared_ptr<const Layout>& layout() const { return layout_; }
  const VarSet& domain() const { return domain_; }
  const std::vector<PackedMemory>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  bool contains(const Memory& m) const;
  std::vector<Memory> memories() const;

  // Same layout and domain required.
  friend MemSet operator&(const MemSet& a, const MemSet& b);
  friend MemSet operator|(const MemSet& a, const MemSet& b);
  friend MemSet operator-(const MemSet& a, const MemSet& b);
  bool operator==(const MemSet& other) const;

  // { m{x -> v} | m in this } for a variable of the layout outside the domain.
  MemSet extended(const Var& x, bool v) const;

 private:
  std::shared_ptr<const Layout> layout_;
  VarSet domain_;
  std::vector<PackedMemory> rows_;  // sorted, unique
};

// { m in s | eval(m, e, client) = 1 }, by recursion on e.
MemSet solve(const MemSet& s, const Expr& e, ClientId client);
// 1-of-4 transfer: (c1, c2) = (1,1) selects table[0], (1,0) table[1], (0,1) table[2], (0,0) table[3].
MemSet ot4_solve(const MemSet& s, const Expr& c1, const Expr& c2, const std::array<Expr, 4>& table,
                 ClientId receiver, ClientId sender);

// One tt step: satisfying memories extend with 1, the rest with 0.
MemSet tt(const MemSet& s, const Command& cmd);
// foldl tt over the initial memories of pi.
MemSet runs_tt(const Protocol& pi, const PreprocPredicate& preproc);
// { run(m0, pi) | m0 } via the interpreter, over the same layout as runs_tt.
MemSet runs_interpreted(const Protocol& pi, const PreprocPredicate& preproc);

}  // namespace ovt
