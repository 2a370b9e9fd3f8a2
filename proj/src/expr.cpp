#include "overture/expr.hpp"

#include "overture/error.hpp"

namespace ovt {

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::And: return "and";
    case BinOp::Xor: return "xor";
    case BinOp::Or: return "or";
  }
  return "?";
}

bool is_boolean_op(BinOp op) { return op == BinOp::And || op == BinOp::Xor || op == BinOp::Or; }

Expr Expr::constant(std::int64_t value) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{Const{value}}));
}

Expr Expr::ref(VarKind kind, std::string name) {
  if (kind == VarKind::Out || kind == VarKind::GlobalView) {
    throw UsageError("outputs and global views cannot be read by expressions");
  }
  return Expr(std::make_shared<const ExprNode>(ExprNode{Ref{kind, std::move(name)}}));
}

Expr Expr::binary(BinOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{Binary{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{Not{std::move(operand)}}));
}

Expr Expr::ot(std::vector<Expr> choices, std::vector<Expr> rows, ClientId receiver,
              ClientId sender) {
  const bool shape_ok = (choices.size() == 1 && rows.size() == 2) ||
                        (choices.size() == 2 && rows.size() == 4);
  if (!shape_ok) throw UsageError("OT takes 1 choice and 2 rows, or 2 choices and 4 rows");
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{Ot{std::move(choices), std::move(rows), receiver, sender}}));
}

bool Expr::is_ot() const { return as<Ot>() != nullptr; }

bool Expr::is_atom() const { return as<Const>() != nullptr || as<Ref>() != nullptr; }

namespace {

void collect_vars(const Expr& e, ClientId client, VarSet& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Ref>) {
          if (n.kind == VarKind::Reveal) {
            out.insert(Var::reveal(n.name));
          } else {
            out.insert(Var{n.kind, n.name, client});
          }
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_vars(n.lhs, client, out);
          collect_vars(n.rhs, client, out);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          collect_vars(n.operand, client, out);
        } else if constexpr (std::is_same_v<T, Expr::Ot>) {
          for (const auto& c : n.choices) collect_vars(c, n.receiver, out);
          for (const auto& r : n.rows) collect_vars(r, n.sender, out);
        }
      },
      e.node().v);
}

bool sugar(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Binary>) {
          return is_boolean_op(n.op) || sugar(n.lhs) || sugar(n.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return true;
        } else if constexpr (std::is_same_v<T, Expr::Ot>) {
          for (const auto& c : n.choices) {
            if (sugar(c)) return true;
          }
          for (const auto& r : n.rows) {
            if (sugar(r)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      e.node().v);
}

std::string render(const Expr& e, bool nested) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Const>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Ref>) {
          return std::string(kind_prefix(n.kind)) + "[" + n.name + "]";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          std::string s = render(n.lhs, true) + " " + binop_symbol(n.op) + " " + render(n.rhs, true);
          return nested ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          std::string s = "not " + render(n.operand, true);
          return nested ? "(" + s + ")" : s;
        } else {
          std::string s = n.choices.size() == 1 ? "OT(" : "OT4(";
          for (const auto& c : n.choices) s += render(c, false) + ", ";
          for (const auto& r : n.rows) s += render(r, false) + ", ";
          return s + n.receiver.to_string() + ", " + n.sender.to_string() + ")";
        }
      },
      e.node().v);
}

bool equal_nodes(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node().v);
        if constexpr (std::is_same_v<T, Expr::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Ref>) {
          return x.kind == y.kind && x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return x.operand == y.operand;
        } else {
          return x.receiver == y.receiver && x.sender == y.sender && x.choices == y.choices &&
                 x.rows == y.rows;
        }
      },
      a.node().v);
}

}  // namespace

VarSet Expr::vars(ClientId client) const {
  VarSet out;
  collect_vars(*this, client, out);
  return out;
}

bool Expr::uses_boolean_sugar() const { return sugar(*this); }

std::string Expr::to_string() const { return render(*this, false); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return equal_nodes(a, b);
}

Pred Pred::compare(Kind kind, Expr lhs, Expr rhs) {
  Pred p;
  p.kind = kind;
  p.lhs = std::move(lhs);
  p.rhs = std::move(rhs);
  return p;
}

Pred Pred::truthy(Expr e) {
  Pred p;
  p.kind = Kind::Truthy;
  p.lhs = std::move(e);
  return p;
}

Pred Pred::conjunction(Pred a, Pred b) {
  Pred p;
  p.kind = Kind::And;
  p.children = {std::move(a), std::move(b)};
  return p;
}

Pred Pred::disjunction(Pred a, Pred b) {
  Pred p;
  p.kind = Kind::Or;
  p.children = {std::move(a), std::move(b)};
  return p;
}

Pred Pred::negation(Pred a) {
  Pred p;
  p.kind = Kind::Not;
  p.children = {std::move(a)};
  return p;
}

VarSet Pred::vars(ClientId client) const {
  VarSet out;
  if (!lhs.empty()) out.merge(lhs.vars(client));
  if (!rhs.empty()) out.merge(rhs.vars(client));
  for (const auto& c : children) out.merge(c.vars(client));
  return out;
}

bool Pred::uses_boolean_sugar() const {
  if (!lhs.empty() && lhs.uses_boolean_sugar()) return true;
  if (!rhs.empty() && rhs.uses_boolean_sugar()) return true;
  for (const auto& c : children) {
    if (c.uses_boolean_sugar()) return true;
  }
  return false;
}

std::string Pred::to_string() const {
  switch (kind) {
    case Kind::Eq: return lhs.to_string() + " == " + rhs.to_string();
    case Kind::Ne: return lhs.to_string() + " != " + rhs.to_string();
    case Kind::Truthy: return lhs.to_string();
    case Kind::And: return "(" + children[0].to_string() + ") && (" + children[1].to_string() + ")";
    case Kind::Or: return "(" + children[0].to_string() + ") || (" + children[1].to_string() + ")";
    case Kind::Not: return "!(" + children[0].to_string() + ")";
  }
  return "?";
}

bool operator==(const Pred& a, const Pred& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs && a.children == b.children;
}

}  // namespace ovt
