#include "overture/memset.hpp"

#include <algorithm>
#include <iterator>

#include "overture/engine.hpp"
#include "overture/error.hpp"
#include "overture/interpreter.hpp"

namespace ovt {

namespace {

void normalize(std::vector<PackedMemory>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

void require_compatible(const MemSet& a, const MemSet& b) {
  if (a.layout() != b.layout() && !(a.layout() && b.layout() && *a.layout() == *b.layout())) {
    throw UsageError("memory sets over different layouts");
  }
  if (a.domain() != b.domain()) throw UsageError("memory sets over different domains");
}

Var resolve(const Expr::Ref& r, ClientId client) {
  return r.kind == VarKind::Reveal ? Var::reveal(r.name) : Var{r.kind, r.name, client};
}

MemSet with_rows(const MemSet& like, std::vector<PackedMemory> rows) {
  return MemSet(like.layout(), like.domain(), std::move(rows));
}

}  // namespace

MemSet::MemSet(std::shared_ptr<const Layout> layout, VarSet domain, std::vector<PackedMemory> rows)
    : layout_(std::move(layout)), domain_(std::move(domain)), rows_(std::move(rows)) {
  if (!layout_) throw UsageError("memory set without a layout");
  for (const Var& x : domain_) layout_->slot(x);
  normalize(rows_);
}

MemSet MemSet::all(const VarSet& xs) {
  auto layout = std::make_shared<const Layout>(std::vector<Var>(xs.begin(), xs.end()));
  if (xs.size() > 24) throw BudgetError("mems() over more than 24 variables");
  std::vector<PackedMemory> rows;
  rows.reserve(std::size_t{1} << xs.size());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << xs.size()); ++i) {
    PackedMemory p;
    p.val[0] = i;
    rows.push_back(p);
  }
  return MemSet(std::move(layout), xs, std::move(rows));
}

MemSet MemSet::of(const std::vector<Memory>& memories) {
  if (memories.empty()) throw UsageError("cannot infer the domain of an empty set");
  const VarSet dom = memories.front().domain();
  return of(std::make_shared<const Layout>(std::vector<Var>(dom.begin(), dom.end())), memories);
}

MemSet MemSet::of(std::shared_ptr<const Layout> layout, const std::vector<Memory>& memories) {
  VarSet dom = memories.empty() ? VarSet{} : memories.front().domain();
  std::vector<PackedMemory> rows;
  rows.reserve(memories.size());
  for (const Memory& m : memories) {
    if (m.domain() != dom) throw UsageError("memories of a set share one domain");
    rows.push_back(layout->pack(m));
  }
  return MemSet(std::move(layout), std::move(dom), std::move(rows));
}

bool MemSet::contains(const Memory& m) const {
  if (m.domain() != domain_) return false;
  return std::binary_search(rows_.begin(), rows_.end(), layout_->pack(m));
}

std::vector<Memory> MemSet::memories() const {
  const PackedMemory mask = layout_->mask(domain_);
  std::vector<Memory> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(layout_->unpack(r, mask));
  return out;
}

MemSet operator&(const MemSet& a, const MemSet& b) {
  require_compatible(a, b);
  std::vector<PackedMemory> out;
  std::set_intersection(a.rows_.begin(), a.rows_.end(), b.rows_.begin(), b.rows_.end(), std::back_inserter(out));
  return with_rows(a, std::move(out));
}

MemSet operator|(const MemSet& a, const MemSet& b) {
  require_compatible(a, b);
  std::vector<PackedMemory> out;
  std::set_union(a.rows_.begin(), a.rows_.end(), b.rows_.begin(), b.rows_.end(), std::back_inserter(out));
  return with_rows(a, std::move(out));
}

MemSet operator-(const MemSet& a, const MemSet& b) {
  require_compatible(a, b);
  std::vector<PackedMemory> out;
  std::set_difference(a.rows_.begin(), a.rows_.end(), b.rows_.begin(), b.rows_.end(), std::back_inserter(out));
  return with_rows(a, std::move(out));
}

bool MemSet::operator==(const MemSet& other) const {
  if (domain_ != other.domain_) return false;
  if (*layout_ == *other.layout_) return rows_ == other.rows_;
  return memories() == other.memories();
}

MemSet MemSet::extended(const Var& x, bool v) const {
  if (domain_.contains(x)) throw UsageError(x.to_string() + " is already in the domain");
  const std::size_t s = layout_->slot(x);
  std::vector<PackedMemory> rows = rows_;
  for (auto& r : rows) r.set(s, v);
  VarSet dom = domain_;
  dom.insert(x);
  return MemSet(layout_, std::move(dom), std::move(rows));
}

MemSet solve(const MemSet& s, const Expr& e, ClientId client) {
  if (const auto* c = e.as<Expr::Const>()) {
    return ((c->value % 2) + 2) % 2 ? s : with_rows(s, {});
  }
  if (const auto* r = e.as<Expr::Ref>()) {
    const Var x = resolve(*r, client);
    if (!s.domain().contains(x)) throw EvalError("unbound variable " + x.to_string());
    const std::size_t slot = s.layout()->slot(x);
    std::vector<PackedMemory> out;
    for (const auto& row : s.rows()) {
      if (row.get(slot)) out.push_back(row);
    }
    return with_rows(s, std::move(out));
  }
  if (const auto* b = e.as<Expr::Binary>()) {
    switch (b->op) {
      case BinOp::Mul:
      case BinOp::And: return solve(solve(s, b->lhs, client), b->rhs, client);
      case BinOp::Or: return solve(s, b->lhs, client) | solve(s, b->rhs, client);
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Xor: {
        const MemSet l = solve(s, b->lhs, client);
        const MemSet r = solve(s, b->rhs, client);
        return (l - r) | (r - l);
      }
    }
  }
  if (const auto* n = e.as<Expr::Not>()) return s - solve(s, n->operand, client);
  if (const auto* ot = e.as<Expr::Ot>()) {
    if (ot->choices.size() == 1 && ot->rows.size() == 2) {
      const MemSet c = solve(s, ot->choices[0], ot->receiver);
      return (c & solve(s, ot->rows[0], ot->sender)) | ((s - c) & solve(s, ot->rows[1], ot->sender));
    }
    if (ot->choices.size() == 2 && ot->rows.size() == 4) {
      return ot4_solve(s, ot->choices[0], ot->choices[1], {ot->rows[0], ot->rows[1], ot->rows[2], ot->rows[3]},
                       ot->receiver, ot->sender);
    }
    throw UsageError("malformed OT node");
  }
  throw UsageError("empty expression");
}

MemSet ot4_solve(const MemSet& s, const Expr& c1, const Expr& c2, const std::array<Expr, 4>& table,
                 ClientId receiver, ClientId sender) {
  // Nested 1-of-2 transfers: c1 picks a half of the table, c2 a row within it.
  const Expr hi = Expr::ot({c2}, {table[0], table[1]}, receiver, sender);
  const Expr lo = Expr::ot({c2}, {table[2], table[3]}, receiver, sender);
  return solve(s, Expr::ot({c1}, {hi, lo}, receiver, sender), sender);
}

MemSet tt(const MemSet& s, const Command& cmd) {
  const auto x = target(cmd);
  if (!x) throw UsageError("tt is defined for assignments only; use the adversarial path for asserts");
  const MemSet yes = solve(s, *command_expr(cmd), computing_client(cmd));
  return yes.extended(*x, true) | (s - yes).extended(*x, false);
}

namespace {

std::shared_ptr<const Layout> fold_layout(const Protocol& pi, const PreprocPredicate& preproc) {
  const VarSet dom = bd_domain(pi, preproc);
  return std::make_shared<const Layout>(std::vector<Var>(dom.begin(), dom.end()));
}

}  // namespace

MemSet runs_tt(const Protocol& pi, const PreprocPredicate& preproc) {
  if (pi.modulus() != 2) throw UnsupportedOperation("runs_tt is defined over F2");
  if (pi.has_asserts()) throw UsageError("runs_tt needs an assert-free protocol");
  const auto layout = fold_layout(pi, preproc);
  const std::uint64_t n = initial_count(pi, preproc);
  std::vector<Memory> init;
  init.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) init.push_back(initial_memory(pi, preproc, i));
  MemSet s = MemSet::of(layout, init);
  for (const Command& c : pi.commands()) s = tt(s, c);
  return s;
}

MemSet runs_interpreted(const Protocol& pi, const PreprocPredicate& preproc) {
  return MemSet::of(fold_layout(pi, preproc), run_sweep(pi, preproc));
}

}  // namespace ovt
