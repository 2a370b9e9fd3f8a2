#include "overture/interpreter.hpp"

#include <algorithm>

#include "overture/error.hpp"

namespace ovt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string client_list(const ClientSet& cs) {
  std::string out = "{";
  for (const auto& c : cs) {
    if (out.size() > 1) out += ",";
    out += c.to_string();
  }
  return out + "}";
}

FieldElem lookup(const Memory& m, const Var& x) {
  if (!m.contains(x)) throw EvalError("unbound variable " + x.to_string());
  const Cell& c = m.at(x);
  if (!c) throw EvalError("read of bottom at " + x.to_string());
  return *c;
}

bool choice_bit(const FieldElem& v) {
  if (v.value() > 1) throw EvalError("OT choice must be 0 or 1, got " + v.to_string());
  return v.value() == 1;
}

}  // namespace

Partition Partition::from_corrupt(const ClientSet& federation, const ClientSet& corrupt) {
  Partition p;
  for (const auto& c : corrupt) {
    if (!federation.contains(c)) {
      throw UsageError("client " + c.to_string() + " is not in the federation");
    }
  }
  p.corrupt = corrupt;
  for (const auto& c : federation) {
    if (!corrupt.contains(c)) p.honest.insert(c);
  }
  return p;
}

std::string Partition::to_string() const {
  return "H=" + client_list(honest) + " C=" + client_list(corrupt);
}

std::vector<Partition> proper_partitions(const ClientSet& federation) {
  const std::vector<ClientId> all(federation.begin(), federation.end());
  const std::size_t n = all.size();
  std::vector<std::pair<std::vector<ClientId>, Partition>> found;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    ClientSet c;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) c.insert(all[i]);
    }
    found.emplace_back(std::vector<ClientId>(c.begin(), c.end()), Partition::from_corrupt(federation, c));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<Partition> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

FieldElem eval_expr(const Memory& m, const Expr& e, ClientId client, std::uint32_t p) {
  return std::visit(
      overloaded{
          [&](const Expr::Const& c) { return FieldElem(c.value, p); },
          [&](const Expr::Ref& r) {
            const Var x = r.kind == VarKind::Reveal ? Var::reveal(r.name) : Var{r.kind, r.name, client};
            const FieldElem v = lookup(m, x);
            if (v.modulus() != p) throw EvalError("modulus mismatch at " + x.to_string());
            return v;
          },
          [&](const Expr::Binary& b) {
            const FieldElem l = eval_expr(m, b.lhs, client, p);
            const FieldElem r = eval_expr(m, b.rhs, client, p);
            switch (b.op) {
              case BinOp::Add: return add(l, r);
              case BinOp::Sub: return sub(l, r);
              case BinOp::Mul: return mul(l, r);
              case BinOp::And: return logical_and(l, r);
              case BinOp::Xor: return logical_xor(l, r);
              case BinOp::Or: return logical_or(l, r);
            }
            throw EvalError("unknown operator");
          },
          [&](const Expr::Not& n) { return logical_not(eval_expr(m, n.operand, client, p)); },
          [&](const Expr::Ot& ot) {
            std::size_t row = 0;
            // Rows are listed from all-ones choices down to all-zeros.
            for (const auto& c : ot.choices) {
              row = row * 2 + (choice_bit(eval_expr(m, c, ot.receiver, p)) ? 0 : 1);
            }
            return eval_expr(m, ot.rows[row], ot.sender, p);
          },
      },
      e.node().v);
}

bool eval_pred(const Memory& m, const Pred& pr, ClientId client, std::uint32_t p) {
  switch (pr.kind) {
    case Pred::Kind::Eq: return eval_expr(m, pr.lhs, client, p) == eval_expr(m, pr.rhs, client, p);
    case Pred::Kind::Ne: return eval_expr(m, pr.lhs, client, p) != eval_expr(m, pr.rhs, client, p);
    case Pred::Kind::Truthy: return eval_expr(m, pr.lhs, client, p).value() != 0;
    case Pred::Kind::And:
      return eval_pred(m, pr.children[0], client, p) && eval_pred(m, pr.children[1], client, p);
    case Pred::Kind::Or:
      return eval_pred(m, pr.children[0], client, p) || eval_pred(m, pr.children[1], client, p);
    case Pred::Kind::Not: return !eval_pred(m, pr.children[0], client, p);
  }
  return false;
}

Configuration step(Configuration config, std::uint32_t modulus) {
  if (config.rest.empty()) throw UsageError("step on an empty protocol");
  const Command& cmd = config.rest.front();
  if (const auto* a = std::get_if<AssertCmd>(&cmd)) {
    if (!eval_pred(config.memory, a->pred, a->client, modulus)) {
      throw AbortError("assertion failed: " + command_to_string(cmd));
    }
  } else {
    const FieldElem v = eval_expr(config.memory, *command_expr(cmd), computing_client(cmd), modulus);
    config.memory.extend(*target(cmd), v);
  }
  config.rest = config.rest.subspan(1);
  return config;
}

Memory run(const Memory& m0, const Protocol& pi) {
  Configuration c{m0, pi.commands()};
  while (!c.rest.empty()) c = step(std::move(c), pi.modulus());
  return std::move(c.memory);
}

std::string Replacement::to_string() const {
  switch (kind) {
    case Kind::Keep: return "keep";
    case Kind::Const: return "const " + std::to_string(value);
    case Kind::Flip: return "flip";
    case Kind::Table: {
      std::string s = "table(";
      for (std::size_t i = 0; i < inputs.size(); ++i) s += (i ? "," : "") + inputs[i].to_string();
      s += ")=";
      for (auto b : table) s += static_cast<char>('0' + b);
      return s;
    }
  }
  return "?";
}

AdversaryStrategy AdversaryStrategy::custom(Rewrite fn, std::string label) {
  AdversaryStrategy a;
  a.custom_ = std::move(fn);
  a.label_ = std::move(label);
  return a;
}

AdversaryStrategy& AdversaryStrategy::set(std::size_t command, Replacement r) {
  if (r.kind == Replacement::Kind::Keep) {
    choices_.erase(command);
  } else {
    choices_[command] = std::move(r);
  }
  return *this;
}

AdversaryStrategy& AdversaryStrategy::abort_at(std::size_t command) {
  aborts_.insert(command);
  return *this;
}

Expr AdversaryStrategy::rewrite(const Memory& view, std::size_t command, const Expr& original) const {
  if (custom_) return custom_(view, command, original);
  const auto it = choices_.find(command);
  if (it == choices_.end()) return original;
  const Replacement& r = it->second;
  switch (r.kind) {
    case Replacement::Kind::Keep: return original;
    case Replacement::Kind::Const: return Expr::constant(r.value);
    case Replacement::Kind::Flip: return Expr::binary(BinOp::Add, original, Expr::constant(1));
    case Replacement::Kind::Table: {
      std::size_t index = 0;
      for (std::size_t i = 0; i < r.inputs.size(); ++i) {
        const FieldElem v = lookup(view, r.inputs[i]);
        index |= static_cast<std::size_t>(v.value() & 1) << i;
      }
      return Expr::constant(r.table.at(index));
    }
  }
  return original;
}

std::string AdversaryStrategy::to_string() const {
  if (custom_) return label_;
  if (choices_.empty() && aborts_.empty()) return "identity";
  std::string s;
  for (const auto& [i, r] : choices_) {
    if (!s.empty()) s += "; ";
    s += "#" + std::to_string(i) + " " + r.to_string();
  }
  for (auto i : aborts_) {
    if (!s.empty()) s += "; ";
    s += "#" + std::to_string(i) + " abort";
  }
  return s;
}

AdvRun run_adv(const Memory& m0, const Protocol& pi, const AdversaryStrategy& adversary,
               const Partition& part) {
  AdvRun result{m0, std::nullopt};
  Memory& m = result.memory;
  const auto cmds = pi.commands();
  for (std::size_t i = 0; i < cmds.size() && !result.aborted; ++i) {
    const Command& cmd = cmds[i];
    const ClientId client = computing_client(cmd);
    const bool corrupt = part.is_corrupt(client);
    if (const auto* a = std::get_if<AssertCmd>(&cmd)) {
      if (corrupt) {
        if (adversary.aborts().contains(i)) result.aborted = i;
      } else if (!eval_pred(m, a->pred, client, pi.modulus())) {
        result.aborted = i;
      }
      continue;
    }
    Expr e = *command_expr(cmd);
    if (corrupt) {
      Memory view;
      for (const auto& [x, v] : m) {
        if (x.kind == VarKind::Reveal || part.is_corrupt(x.owner)) view.extend(x, v);
      }
      e = adversary.rewrite(view, i, e);
    }
    m.extend(*target(cmd), eval_expr(m, e, client, pi.modulus()));
  }
  if (result.aborted) {
    for (const auto& x : pi.written()) {
      if (!m.contains(x)) m.extend(x, std::nullopt);
    }
  }
  return result;
}

std::string Violation::to_string() const {
  return "command " + std::to_string(command + 1) + ": " + message;
}

std::vector<Violation> validate(const Protocol& pi, const ClientSet& federation,
                                const std::optional<VarSet>& preprocessed) {
  std::vector<Violation> out;
  const auto cmds = pi.commands();
  const VarSet written = pi.written();
  VarSet defined;
  auto check_client = [&](std::size_t i, ClientId c) {
    if (!c.valid()) {
      out.push_back({i, "client ids are positive"});
    } else if (!federation.empty() && !federation.contains(c)) {
      out.push_back({i, "client " + c.to_string() + " is not in the federation"});
    }
  };
  auto nested_ot = [](const Expr& e, auto&& self) -> bool {
    if (e.is_ot()) return true;
    if (const auto* b = e.as<Expr::Binary>()) return self(b->lhs, self) || self(b->rhs, self);
    if (const auto* n = e.as<Expr::Not>()) return self(n->operand, self);
    return false;
  };
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const Command& cmd = cmds[i];
    const ClientId client = computing_client(cmd);
    check_client(i, client);
    if (const auto* s = std::get_if<MesgSend>(&cmd)) {
      check_client(i, s->dest);
      if (const auto* ot = s->expr.as<Expr::Ot>()) {
        if (ot->receiver != s->dest) out.push_back({i, "OT receiver must be the message destination"});
        if (ot->sender != s->src) out.push_back({i, "OT sender must be the computing client"});
        for (const auto& part : ot->choices) {
          if (nested_ot(part, nested_ot)) out.push_back({i, "OT may not be nested"});
        }
        for (const auto& part : ot->rows) {
          if (nested_ot(part, nested_ot)) out.push_back({i, "OT may not be nested"});
        }
      } else if (nested_ot(s->expr, nested_ot)) {
        out.push_back({i, "OT must be the entire right-hand side of a message send"});
      }
    } else if (const Expr* e = command_expr(cmd)) {
      if (nested_ot(*e, nested_ot)) {
        out.push_back({i, "OT must be the entire right-hand side of a message send"});
      }
    }
    if (const auto* o = std::get_if<OutputCmd>(&cmd)) {
      if (o->client != o->src) {
        out.push_back({i, "out@" + o->client.to_string() + " computed on client " + o->src.to_string()});
      }
    }
    if (pi.modulus() != 2) {
      const Expr* e = command_expr(cmd);
      const bool sugar = e ? e->uses_boolean_sugar()
                           : std::get<AssertCmd>(cmd).pred.uses_boolean_sugar();
      if (sugar) out.push_back({i, "boolean connectives require F2"});
    }
    for (const auto& x : reads(cmd)) {
      if (x.kind == VarKind::Secret || x.kind == VarKind::Flip || defined.contains(x)) continue;
      if (x.kind == VarKind::Mesg && !written.contains(x) &&
          (!preprocessed || preprocessed->contains(x))) {
        continue;
      }
      out.push_back({i, "read of " + x.to_string() + " before it is defined"});
    }
    if (auto t = target(cmd)) {
      if (!defined.insert(*t).second) out.push_back({i, "double-write " + t->to_string()});
    }
  }
  return out;
}

VarSet corrupt_views(const Protocol& pi, const Partition& part) {
  VarSet out;
  for (const auto& cmd : pi.commands()) {
    if (const auto* r = std::get_if<RevealCmd>(&cmd)) {
      if (part.honest.contains(r->src)) out.insert(Var::reveal(r->name));
    } else if (const auto* s = std::get_if<MesgSend>(&cmd)) {
      if (part.corrupt.contains(s->dest) && part.honest.contains(s->src)) {
        out.insert(Var{VarKind::Mesg, s->name, s->dest});
      }
    }
  }
  return out;
}

VarSet honest_views(const Protocol& pi, const Partition& part) {
  VarSet out;
  for (const auto& cmd : pi.commands()) {
    if (const auto* r = std::get_if<RevealCmd>(&cmd)) {
      if (part.corrupt.contains(r->src)) out.insert(Var::reveal(r->name));
    } else if (const auto* s = std::get_if<MesgSend>(&cmd)) {
      if (part.honest.contains(s->dest) && part.corrupt.contains(s->src)) {
        out.insert(Var{VarKind::Mesg, s->name, s->dest});
      }
    }
  }
  return out;
}

VarSet owned_by(const VarSet& xs, const ClientSet& clients, bool with_reveals) {
  VarSet out;
  for (const auto& x : xs) {
    if (x.kind == VarKind::Reveal ? with_reveals : clients.contains(x.owner)) out.insert(x);
  }
  return out;
}

}  // namespace ovt
