#include "overture/engine.hpp"

#include <omp.h>

#include <array>
#include <bit>
#include <unordered_map>

#include "overture/error.hpp"

namespace ovt {

namespace {

enum class Op : std::uint8_t { Slot, Zero, Ones, Xor, And, Or, Not, Mux };

struct Instr {
  Op op;
  std::uint16_t slot = 0;
};

using Code = std::vector<Instr>;

struct Step {
  enum class Kind : std::uint8_t { Write, Assert, Abort };
  Kind kind = Kind::Write;
  std::uint16_t target = 0;
  Code code;
};

constexpr std::uint64_t kOnes = ~std::uint64_t{0};

std::uint64_t lane_pattern(std::size_t j) {
  std::uint64_t w = 0;
  for (std::size_t l = 0; l < 64; ++l) {
    if ((l >> j) & 1) w |= std::uint64_t{1} << l;
  }
  return w;
}

void require_f2(const Protocol& pi) {
  if (pi.modulus() != 2) throw UnsupportedOperation("exhaustive enumeration is only defined over F2");
}

}  // namespace

VarSet bd_domain(const Protocol& pi, const PreprocPredicate& preproc) {
  VarSet out = preproc.domain();
  const VarSet r = pi.flips();
  const VarSet w = pi.written();
  out.insert(r.begin(), r.end());
  out.insert(w.begin(), w.end());
  return out;
}

std::vector<Var> initial_free_vars(const Protocol& pi, const PreprocPredicate& preproc) {
  std::vector<Var> out = preproc.free_vars();
  const VarSet pre = preproc.domain();
  for (const Var& r : pi.flips()) {
    if (!pre.contains(r)) out.push_back(r);
  }
  if (out.size() >= 63) throw BudgetError("too many free initial variables: " + std::to_string(out.size()));
  return out;
}

std::uint64_t initial_count(const Protocol& pi, const PreprocPredicate& preproc) {
  return std::uint64_t{1} << initial_free_vars(pi, preproc).size();
}

Memory initial_memory(const Protocol& pi, const PreprocPredicate& preproc, std::uint64_t index) {
  const std::size_t n_pre = preproc.free_vars().size();
  Memory m = preproc.memory(index & ((std::uint64_t{1} << n_pre) - 1));
  const std::vector<Var> free = initial_free_vars(pi, preproc);
  for (std::size_t j = n_pre; j < free.size(); ++j) m.extend(free[j], FieldElem::bit((index >> j) & 1));
  return m;
}

struct Kernel::Impl {
  std::vector<Var> vars;
  std::unordered_map<Var, std::uint16_t> index;
  std::size_t n_free = 0;
  std::vector<Step> init;   // derived preprocessing values
  std::vector<Step> steps;  // protocol commands
  Layout layout;

  std::uint16_t slot(const Var& x) const {
    const auto it = index.find(x);
    if (it == index.end()) throw EvalError("unbound variable " + x.to_string());
    return it->second;
  }

  void compile_formula(const Formula& f, Code& code) const {
    switch (f.kind) {
      case Formula::Kind::Var: code.push_back({Op::Slot, slot(f.var)}); return;
      case Formula::Kind::Const: code.push_back({f.value ? Op::Ones : Op::Zero}); return;
      case Formula::Kind::Xor:
      case Formula::Kind::And:
        compile_formula(f.args[0], code);
        compile_formula(f.args[1], code);
        code.push_back({f.kind == Formula::Kind::Xor ? Op::Xor : Op::And});
        return;
      case Formula::Kind::Not:
        compile_formula(f.args[0], code);
        code.push_back({Op::Not});
        return;
    }
  }

  std::uint16_t read(const Var& x, const std::vector<bool>& defined) const {
    const std::uint16_t s = slot(x);
    if (!defined[s]) throw EvalError("unbound variable " + x.to_string());
    return s;
  }

  void compile_expr(const Expr& e, ClientId client, const std::vector<bool>& defined, Code& code) const {
    if (const auto* c = e.as<Expr::Const>()) {
      code.push_back({((c->value % 2) + 2) % 2 ? Op::Ones : Op::Zero});
    } else if (const auto* r = e.as<Expr::Ref>()) {
      const Var x = r->kind == VarKind::Reveal ? Var::reveal(r->name) : Var{r->kind, r->name, client};
      code.push_back({Op::Slot, read(x, defined)});
    } else if (const auto* b = e.as<Expr::Binary>()) {
      compile_expr(b->lhs, client, defined, code);
      compile_expr(b->rhs, client, defined, code);
      switch (b->op) {
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Xor: code.push_back({Op::Xor}); break;
        case BinOp::Mul:
        case BinOp::And: code.push_back({Op::And}); break;
        case BinOp::Or: code.push_back({Op::Or}); break;
      }
    } else if (const auto* n = e.as<Expr::Not>()) {
      compile_expr(n->operand, client, defined, code);
      code.push_back({Op::Not});
    } else if (const auto* ot = e.as<Expr::Ot>()) {
      // Mux(c, a, b) pops b, a, c and pushes c ? a : b.
      if (ot->choices.size() == 1 && ot->rows.size() == 2) {
        compile_expr(ot->choices[0], ot->receiver, defined, code);
        compile_expr(ot->rows[0], ot->sender, defined, code);
        compile_expr(ot->rows[1], ot->sender, defined, code);
        code.push_back({Op::Mux});
      } else if (ot->choices.size() == 2 && ot->rows.size() == 4) {
        compile_expr(ot->choices[0], ot->receiver, defined, code);
        compile_expr(ot->choices[1], ot->receiver, defined, code);
        compile_expr(ot->rows[0], ot->sender, defined, code);
        compile_expr(ot->rows[1], ot->sender, defined, code);
        code.push_back({Op::Mux});
        compile_expr(ot->choices[1], ot->receiver, defined, code);
        compile_expr(ot->rows[2], ot->sender, defined, code);
        compile_expr(ot->rows[3], ot->sender, defined, code);
        code.push_back({Op::Mux});
        code.push_back({Op::Mux});
      } else {
        throw UsageError("malformed OT node");
      }
    } else {
      throw UsageError("empty expression");
    }
  }

  void compile_pred(const Pred& p, ClientId client, const std::vector<bool>& defined, Code& code) const {
    switch (p.kind) {
      case Pred::Kind::Eq:
      case Pred::Kind::Ne:
        compile_expr(p.lhs, client, defined, code);
        compile_expr(p.rhs, client, defined, code);
        code.push_back({Op::Xor});
        if (p.kind == Pred::Kind::Eq) code.push_back({Op::Not});
        return;
      case Pred::Kind::Truthy: compile_expr(p.lhs, client, defined, code); return;
      case Pred::Kind::And:
      case Pred::Kind::Or:
        compile_pred(p.children[0], client, defined, code);
        compile_pred(p.children[1], client, defined, code);
        code.push_back({p.kind == Pred::Kind::And ? Op::And : Op::Or});
        return;
      case Pred::Kind::Not:
        compile_pred(p.children[0], client, defined, code);
        code.push_back({Op::Not});
        return;
    }
  }

  void compile_replacement(const Replacement& r, const Expr& original, ClientId client,
                           const std::vector<bool>& defined, Code& code) const {
    switch (r.kind) {
      case Replacement::Kind::Keep: compile_expr(original, client, defined, code); return;
      case Replacement::Kind::Const: code.push_back({r.value % 2 ? Op::Ones : Op::Zero}); return;
      case Replacement::Kind::Flip:
        compile_expr(original, client, defined, code);
        code.push_back({Op::Not});
        return;
      case Replacement::Kind::Table: {
        if (r.table.size() != (std::size_t{1} << r.inputs.size())) throw UsageError("table size mismatch");
        code.push_back({Op::Zero});
        for (std::size_t row = 0; row < r.table.size(); ++row) {
          if (!(r.table[row] & 1)) continue;
          code.push_back({Op::Ones});
          for (std::size_t i = 0; i < r.inputs.size(); ++i) {
            code.push_back({Op::Slot, read(r.inputs[i], defined)});
            if (!((row >> i) & 1)) code.push_back({Op::Not});
            code.push_back({Op::And});
          }
          code.push_back({Op::Or});
        }
        return;
      }
    }
  }

  static std::uint64_t exec(const Code& code, const std::uint64_t* vals) {
    std::array<std::uint64_t, 64> stack;
    std::size_t sp = 0;
    for (const Instr& in : code) {
      switch (in.op) {
        case Op::Slot: stack[sp++] = vals[in.slot]; break;
        case Op::Zero: stack[sp++] = 0; break;
        case Op::Ones: stack[sp++] = kOnes; break;
        case Op::Xor: --sp; stack[sp - 1] ^= stack[sp]; break;
        case Op::And: --sp; stack[sp - 1] &= stack[sp]; break;
        case Op::Or: --sp; stack[sp - 1] |= stack[sp]; break;
        case Op::Not: stack[sp - 1] = ~stack[sp - 1]; break;
        case Op::Mux: {
          const std::uint64_t b = stack[--sp];
          const std::uint64_t a = stack[--sp];
          const std::uint64_t c = stack[sp - 1];
          stack[sp - 1] = (c & a) | (~c & b);
          break;
        }
      }
    }
    return stack[0];
  }

  static std::size_t max_depth(const Code& code) {
    std::size_t sp = 0;
    std::size_t best = 0;
    for (const Instr& in : code) {
      switch (in.op) {
        case Op::Slot:
        case Op::Zero:
        case Op::Ones: ++sp; break;
        case Op::Xor:
        case Op::And:
        case Op::Or: --sp; break;
        case Op::Not: break;
        case Op::Mux: sp -= 2; break;
      }
      best = std::max(best, sp);
    }
    return best;
  }

  // Runs one batch; returns the alive mask and the valid-lane mask.
  std::pair<std::uint64_t, std::uint64_t> run_batch(std::uint64_t batch, std::uint64_t total,
                                                    std::uint64_t* vals, std::uint64_t* bots) const {
    const std::uint64_t valid = total >= 64 ? kOnes : ((std::uint64_t{1} << total) - 1);
    std::fill(vals, vals + vars.size(), 0);
    std::fill(bots, bots + vars.size(), 0);
    for (std::size_t j = 0; j < n_free; ++j) {
      vals[j] = j < 6 ? lane_pattern(j) : (((batch >> (j - 6)) & 1) ? kOnes : 0);
    }
    for (const Step& s : init) vals[s.target] = exec(s.code, vals);
    std::uint64_t alive = valid;
    for (const Step& s : steps) {
      switch (s.kind) {
        case Step::Kind::Write:
          vals[s.target] = exec(s.code, vals) & alive;
          bots[s.target] = ~alive & valid;
          break;
        case Step::Kind::Assert: alive &= exec(s.code, vals); break;
        case Step::Kind::Abort: alive = 0; break;
      }
    }
    return {alive, valid};
  }
};

Kernel::Kernel(const Protocol& pi, const PreprocPredicate& preproc, const AdversaryStrategy* adversary,
               const Partition* part)
    : impl_(std::make_unique<Impl>()) {
  require_f2(pi);
  if (adversary && adversary->is_custom()) throw UsageError("custom strategies run on the reference path");
  if (adversary && !part) throw UsageError("an adversary needs a partition");
  Impl& k = *impl_;
  // Free variables occupy the first slots so batches can seed them directly.
  k.vars = initial_free_vars(pi, preproc);
  k.n_free = k.vars.size();
  for (const auto& [x, f] : preproc.derived()) k.vars.push_back(x);
  for (const Var& x : pi.written()) k.vars.push_back(x);
  for (std::size_t i = 0; i < k.vars.size(); ++i) {
    if (!k.index.emplace(k.vars[i], static_cast<std::uint16_t>(i)).second) {
      throw UsageError(k.vars[i].to_string() + " is both preprocessed and written");
    }
  }
  std::vector<bool> defined(k.vars.size(), false);
  for (std::size_t j = 0; j < k.n_free; ++j) defined[j] = true;
  for (const auto& [x, f] : preproc.derived()) {
    Step s;
    s.target = k.slot(x);
    k.compile_formula(f, s.code);
    defined[s.target] = true;
    k.init.push_back(std::move(s));
  }
  const auto cmds = pi.commands();
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const Command& cmd = cmds[i];
    const ClientId client = computing_client(cmd);
    const bool corrupt = part && part->is_corrupt(client);
    Step s;
    if (const auto* a = std::get_if<AssertCmd>(&cmd)) {
      if (corrupt) {
        if (!adversary || !adversary->aborts().contains(i)) continue;
        s.kind = Step::Kind::Abort;
      } else {
        s.kind = Step::Kind::Assert;
        k.compile_pred(a->pred, client, defined, s.code);
      }
    } else {
      const Expr& e = *command_expr(cmd);
      s.target = k.slot(*target(cmd));
      const Replacement* r = nullptr;
      if (corrupt && adversary) {
        const auto it = adversary->choices().find(i);
        if (it != adversary->choices().end()) r = &it->second;
      }
      if (r) {
        k.compile_replacement(*r, e, client, defined, s.code);
      } else {
        k.compile_expr(e, client, defined, s.code);
      }
      defined[s.target] = true;
    }
    if (Impl::max_depth(s.code) > 64) throw UsageError("expression too deep for the kernel");
    k.steps.push_back(std::move(s));
  }
  for (const Step& s : k.init) {
    if (Impl::max_depth(s.code) > 64) throw UsageError("formula too deep for the kernel");
  }
  const VarSet dom(k.vars.begin(), k.vars.end());
  if (dom.size() <= kMaxSlots) k.layout = Layout(std::vector<Var>(dom.begin(), dom.end()));
}

Kernel::~Kernel() = default;
Kernel::Kernel(Kernel&&) noexcept = default;
Kernel& Kernel::operator=(Kernel&&) noexcept = default;

const Layout& Kernel::layout() const { return impl_->layout; }

std::uint64_t Kernel::initial_count() const { return std::uint64_t{1} << impl_->n_free; }

namespace {

struct Projection {
  std::vector<std::uint16_t> slots;
  Layout layout;
};

Projection projection(const Kernel::Impl& k, const VarSet& project) {
  Projection p;
  for (const Var& x : project) p.slots.push_back(k.slot(x));
  p.layout = Layout(std::vector<Var>(project.begin(), project.end()));
  return p;
}

void count_batch(const Kernel::Impl& k, const Projection& p, std::uint64_t batch, std::uint64_t total,
                 std::uint64_t* vals, std::uint64_t* bots, PackedMap<std::uint64_t>& counts,
                 std::uint64_t& aborted) {
  const auto [alive, valid] = k.run_batch(batch, total, vals, bots);
  aborted += std::popcount(valid & ~alive);
  std::array<PackedMemory, 64> lanes{};
  std::array<std::uint64_t, 64> rows;
  for (std::size_t block = 0; block * 64 < p.slots.size(); ++block) {
    const std::size_t n = std::min<std::size_t>(64, p.slots.size() - block * 64);
    for (int pass = 0; pass < 2; ++pass) {
      const std::uint64_t* src = pass == 0 ? vals : bots;
      rows.fill(0);
      for (std::size_t i = 0; i < n; ++i) rows[i] = src[p.slots[block * 64 + i]];
      transpose64(rows);
      for (std::size_t l = 0; l < 64; ++l) {
        (pass == 0 ? lanes[l].val : lanes[l].bot)[block] = rows[l];
      }
    }
  }
  for (std::size_t l = 0; l < 64; ++l) {
    if ((valid >> l) & 1) ++counts[lanes[l]];
  }
}

}  // namespace

RunCounts Kernel::count(const VarSet& project, const EngineOptions& options) const {
  const Impl& k = *impl_;
  const Projection p = projection(k, project);
  const std::uint64_t total = initial_count();
  const std::uint64_t batches = (total + 63) / 64;
  PackedMap<std::uint64_t> merged;
  std::uint64_t aborted = 0;
  const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel num_threads(workers)
  {
    PackedMap<std::uint64_t> local;
    std::uint64_t local_aborted = 0;
    std::vector<std::uint64_t> vals(k.vars.size()), bots(k.vars.size());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(batches); ++b) {
      const std::uint64_t ub = static_cast<std::uint64_t>(b);
      const std::uint64_t lanes = std::min<std::uint64_t>(64, total - ub * 64);
      count_batch(k, p, ub, lanes, vals.data(), bots.data(), local, local_aborted);
    }
#pragma omp critical
    {
      for (const auto& [m, c] : local) merged[m] += c;
      aborted += local_aborted;
    }
  }
  std::vector<Pmf::Entry> entries(merged.begin(), merged.end());
  return {Pmf(p.layout, std::move(entries)), total, aborted};
}

RunCounts Kernel::count_serial(const VarSet& project) const {
  const Impl& k = *impl_;
  const Projection p = projection(k, project);
  const std::uint64_t total = initial_count();
  PackedMap<std::uint64_t> counts;
  std::uint64_t aborted = 0;
  std::vector<std::uint64_t> vals(k.vars.size()), bots(k.vars.size());
  for (std::uint64_t b = 0; b * 64 < total; ++b) {
    count_batch(k, p, b, std::min<std::uint64_t>(64, total - b * 64), vals.data(), bots.data(), counts,
                aborted);
  }
  std::vector<Pmf::Entry> entries(counts.begin(), counts.end());
  return {Pmf(p.layout, std::move(entries)), total, aborted};
}

RunCounts count_runs(const Protocol& pi, const PreprocPredicate& preproc, const AdversaryStrategy* adversary,
                     const Partition* part, const std::optional<VarSet>& project, const EngineOptions& options) {
  if (adversary && adversary->is_custom()) return count_runs_reference(pi, preproc, adversary, part, project);
  const Kernel kernel(pi, preproc, adversary, part);
  return kernel.count(project.value_or(bd_domain(pi, preproc)), options);
}

Pmf bd(const Protocol& pi, const PreprocPredicate& preproc, const std::optional<VarSet>& project,
       const EngineOptions& options) {
  return count_runs(pi, preproc, nullptr, nullptr, project, options).pmf;
}

Pmf bd_adv(const Protocol& pi, const AdversaryStrategy& adversary, const Partition& part,
           const PreprocPredicate& preproc, const std::optional<VarSet>& project, const EngineOptions& options) {
  return count_runs(pi, preproc, &adversary, &part, project, options).pmf;
}

RunCounts count_runs_reference(const Protocol& pi, const PreprocPredicate& preproc,
                               const AdversaryStrategy* adversary, const Partition* part,
                               const std::optional<VarSet>& project) {
  require_f2(pi);
  if (adversary && !part) throw UsageError("an adversary needs a partition");
  const VarSet dom = project.value_or(bd_domain(pi, preproc));
  const Layout layout(std::vector<Var>(dom.begin(), dom.end()));
  const std::uint64_t total = initial_count(pi, preproc);
  std::map<PackedMemory, std::uint64_t> counts;
  std::uint64_t aborted = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    const Memory m0 = initial_memory(pi, preproc, i);
    Memory final;
    if (adversary) {
      AdvRun r = run_adv(m0, pi, *adversary, *part);
      if (r.aborted) ++aborted;
      final = std::move(r.memory);
    } else {
      final = run(m0, pi);
    }
    ++counts[layout.pack(final.restrict_to(dom))];
  }
  std::vector<Pmf::Entry> entries(counts.begin(), counts.end());
  return {Pmf(layout, std::move(entries)), total, aborted};
}

Pmf bd_reference(const Protocol& pi, const PreprocPredicate& preproc, const std::optional<VarSet>& project) {
  return count_runs_reference(pi, preproc, nullptr, nullptr, project).pmf;
}

std::vector<Memory> run_sweep(const Protocol& pi, const PreprocPredicate& preproc) {
  const std::uint64_t total = initial_count(pi, preproc);
  std::vector<Memory> out;
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) out.push_back(run(initial_memory(pi, preproc, i), pi));
  return out;
}

}  // namespace ovt
