#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "overture/var.hpp"

namespace ovt {

enum class BinOp : std::uint8_t { Add, Sub, Mul, And, Xor, Or };

const char* binop_symbol(BinOp op);
bool is_boolean_op(BinOp op);

struct ExprNode;

// Immutable field expression. Variable references carry kind and name only;
// the owner is bound to the computing client when the expression is interpreted.
class Expr {
 public:
  struct Const {
    std::int64_t value;
  };
  struct Ref {
    VarKind kind;
    std::string name;
  };
  struct Binary;
  struct Not;
  struct Ot;

  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  static Expr constant(std::int64_t value);
  static Expr ref(VarKind kind, std::string name);
  static Expr binary(BinOp op, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  // Oblivious transfer. One choice selects between two rows (row 0 when the
  // choice is 1); two choices select among four rows ordered (1,1), (1,0), (0,1), (0,0).
  // Choices are computed by the receiver, rows by the sender.
  static Expr ot(std::vector<Expr> choices, std::vector<Expr> rows, ClientId receiver,
                 ClientId sender);

  const ExprNode& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }

  template <typename T>
  const T* as() const;

  bool is_ot() const;
  bool is_atom() const;

  // Variables read when computed on `client` (OT parts resolve to their own clients).
  VarSet vars(ClientId client) const;
  // True if the expression uses and/xor/or/not anywhere.
  bool uses_boolean_sugar() const;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct Expr::Binary {
  BinOp op;
  Expr lhs;
  Expr rhs;
};

struct Expr::Not {
  Expr operand;
};

struct Expr::Ot {
  std::vector<Expr> choices;
  std::vector<Expr> rows;
  ClientId receiver;
  ClientId sender;
};

struct ExprNode {
  std::variant<Expr::Const, Expr::Ref, Expr::Binary, Expr::Not, Expr::Ot> v;
};

template <typename T>
const T* Expr::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}

// Assertion predicates: comparisons of field expressions combined with && || !.
// A bare expression holds iff it is nonzero.
struct Pred {
  enum class Kind : std::uint8_t { Eq, Ne, Truthy, And, Or, Not };

  Kind kind = Kind::Truthy;
  Expr lhs;
  Expr rhs;
  std::vector<Pred> children;

  static Pred compare(Kind kind, Expr lhs, Expr rhs);
  static Pred truthy(Expr e);
  static Pred conjunction(Pred a, Pred b);
  static Pred disjunction(Pred a, Pred b);
  static Pred negation(Pred a);

  VarSet vars(ClientId client) const;
  bool uses_boolean_sugar() const;
  std::string to_string() const;

  friend bool operator==(const Pred& a, const Pred& b);
};

}  // namespace ovt
