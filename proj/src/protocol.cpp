#include "overture/protocol.hpp"

#include "overture/error.hpp"
#include "overture/field.hpp"

namespace ovt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string render_rhs(const Expr& e, ClientId src) {
  if (e.is_ot()) return e.to_string();
  const std::string body = e.is_atom() ? e.to_string() : "(" + e.to_string() + ")";
  return body + "@" + src.to_string();
}

}  // namespace

std::optional<Var> target(const Command& cmd) {
  return std::visit(overloaded{
                        [](const MesgSend& c) -> std::optional<Var> {
                          return Var{VarKind::Mesg, c.name, c.dest};
                        },
                        [](const RevealCmd& c) -> std::optional<Var> { return Var::reveal(c.name); },
                        [](const OutputCmd& c) -> std::optional<Var> { return Var::output(c.client.id); },
                        [](const AssertCmd&) -> std::optional<Var> { return std::nullopt; },
                    },
                    cmd);
}

ClientId computing_client(const Command& cmd) {
  return std::visit(overloaded{
                        [](const MesgSend& c) { return c.src; },
                        [](const RevealCmd& c) { return c.src; },
                        [](const OutputCmd& c) { return c.src; },
                        [](const AssertCmd& c) { return c.client; },
                    },
                    cmd);
}

const Expr* command_expr(const Command& cmd) {
  return std::visit(overloaded{
                        [](const MesgSend& c) -> const Expr* { return &c.expr; },
                        [](const RevealCmd& c) -> const Expr* { return &c.expr; },
                        [](const OutputCmd& c) -> const Expr* { return &c.expr; },
                        [](const AssertCmd&) -> const Expr* { return nullptr; },
                    },
                    cmd);
}

VarSet reads(const Command& cmd) {
  if (const auto* a = std::get_if<AssertCmd>(&cmd)) return a->pred.vars(a->client);
  return command_expr(cmd)->vars(computing_client(cmd));
}

std::string command_to_string(const Command& cmd) {
  return std::visit(
      overloaded{
          [](const MesgSend& c) {
            return "m[" + c.name + "]@" + c.dest.to_string() + " := " + render_rhs(c.expr, c.src) + ";";
          },
          [](const RevealCmd& c) { return "p[" + c.name + "] := " + render_rhs(c.expr, c.src) + ";"; },
          [](const OutputCmd& c) {
            return "out@" + c.client.to_string() + " := " + render_rhs(c.expr, c.src) + ";";
          },
          [](const AssertCmd& c) {
            return "assert(" + c.pred.to_string() + ")@" + c.client.to_string() + ";";
          },
      },
      cmd);
}

Protocol::Protocol(std::vector<Command> commands, std::uint32_t modulus)
    : commands_(std::move(commands)), modulus_(modulus) {
  if (!is_prime(modulus)) throw UsageError("protocol modulus must be prime");
}

VarSet Protocol::vars() const {
  VarSet out;
  for (const auto& c : commands_) {
    out.merge(reads(c));
    if (auto t = target(c)) out.insert(*t);
  }
  return out;
}

namespace {

VarSet filter_kind(const VarSet& in, VarKind kind) {
  VarSet out;
  for (const auto& v : in) {
    if (v.kind == kind) out.insert(v);
  }
  return out;
}

}  // namespace

VarSet Protocol::secrets() const { return filter_kind(vars(), VarKind::Secret); }
VarSet Protocol::flips() const { return filter_kind(vars(), VarKind::Flip); }

VarSet Protocol::written() const {
  VarSet out;
  for (const auto& c : commands_) {
    if (auto t = target(c)) out.insert(*t);
  }
  return out;
}

VarSet Protocol::messages() const { return filter_kind(vars(), VarKind::Mesg); }
VarSet Protocol::reveals() const { return filter_kind(vars(), VarKind::Reveal); }
VarSet Protocol::outputs() const { return filter_kind(vars(), VarKind::Out); }

VarSet Protocol::preprocessed() const {
  const VarSet w = written();
  VarSet out;
  for (const auto& v : vars()) {
    if ((v.kind == VarKind::Mesg || v.kind == VarKind::Reveal) && !w.contains(v)) out.insert(v);
  }
  return out;
}

VarSet Protocol::iovars() const {
  VarSet out;
  for (const auto& v : vars()) {
    if (v.kind != VarKind::Flip) out.insert(v);
  }
  return out;
}

VarSet Protocol::views() const {
  VarSet out;
  for (const auto& v : vars()) {
    if (v.kind == VarKind::Mesg || v.kind == VarKind::Reveal) out.insert(v);
  }
  return out;
}

ClientSet Protocol::clients() const {
  ClientSet out;
  for (const auto& c : commands_) {
    out.insert(computing_client(c));
    if (const auto* s = std::get_if<MesgSend>(&c)) out.insert(s->dest);
    if (const auto* o = std::get_if<OutputCmd>(&c)) out.insert(o->client);
    if (const Expr* e = command_expr(c)) {
      if (const auto* ot = e->as<Expr::Ot>()) {
        out.insert(ot->receiver);
        out.insert(ot->sender);
      }
    }
  }
  return out;
}

bool Protocol::has_asserts() const {
  for (const auto& c : commands_) {
    if (std::holds_alternative<AssertCmd>(c)) return true;
  }
  return false;
}

Protocol Protocol::without_asserts() const {
  std::vector<Command> kept;
  for (const auto& c : commands_) {
    if (!std::holds_alternative<AssertCmd>(c)) kept.push_back(c);
  }
  return Protocol(std::move(kept), modulus_);
}

std::string Protocol::to_string() const {
  std::string out;
  for (const auto& c : commands_) out += command_to_string(c) + "\n";
  return out;
}

}  // namespace ovt
