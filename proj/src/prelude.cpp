#include "overture/prelude.hpp"

#include <cctype>

#include "overture/error.hpp"
#include "overture/syntax.hpp"

namespace ovt::prelude {

namespace {

using NK = Node::Kind;

MetaExpr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Node at(NK kind, const Token& t) {
  Node n;
  n.kind = kind;
  n.line = t.line;
  n.column = t.column;
  return n;
}

[[noreturn]] void eval_fail(const Node& n, const std::string& message) {
  if (n.line) throw EvalError(std::to_string(n.line) + ":" + std::to_string(n.column) + ": " + message);
  throw EvalError(message);
}

}  // namespace

std::string MetaValue::to_string() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unit>) {
          return "()";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return "\"" + x + "\"";
        } else if constexpr (std::is_same_v<T, Expr>) {
          return x.to_string();
        } else {
          std::string s = "{ ";
          for (const auto& [k, v] : x->fields) s += k + " = " + v.to_string() + "; ";
          return s + "}";
        }
      },
      v);
}

bool operator==(const MetaValue& a, const MetaValue& b) {
  if (a.v.index() != b.v.index()) return false;
  if (const auto* ra = std::get_if<std::shared_ptr<const RecordValue>>(&a.v)) {
    const auto& rb = std::get<std::shared_ptr<const RecordValue>>(b.v);
    return (*ra)->fields == rb->fields;
  }
  return a.v == b.v;
}

MetaExpr make_value(MetaValue v) {
  Node n;
  n.kind = NK::Value;
  n.value = std::move(v);
  return make(std::move(n));
}

bool is_value(const MetaExpr& e) { return e->kind == NK::Value; }

void Codebase::add(FunctionDecl decl) {
  if (index_.contains(decl.name)) throw UsageError("duplicate function " + decl.name);
  index_[decl.name] = decls_.size();
  decls_.push_back(std::move(decl));
}

const FunctionDecl* Codebase::find(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : &decls_[it->second];
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool ctor_word(const Token& t, VarKind& kind) {
  if (t.kind != Token::Kind::Word) return false;
  if (t.text == "s") kind = VarKind::Secret;
  else if (t.text == "r") kind = VarKind::Flip;
  else if (t.text == "m") kind = VarKind::Mesg;
  else if (t.text == "p") kind = VarKind::Reveal;
  else return false;
  return true;
}

bool is_keyword(const std::string& w) {
  return w == "let" || w == "in" || w == "and" || w == "or" || w == "xor" || w == "not" ||
         w == "true" || w == "false" || w == "assert" || w == "out";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : ts_(tokenize(src)) {}

  Program program() {
    Program p;
    while (decl_ahead()) p.codebase.add(decl());
    if (ts_.at_end()) {
      p.main = make_value({Unit{}});
    } else {
      p.main = seq();
      if (!ts_.at_end()) ts_.fail("unexpected " + ts_.peek().describe());
    }
    return p;
  }

 private:
  bool decl_ahead() {
    const std::size_t save = ts_.position();
    bool ok = false;
    if (ts_.peek().kind == Token::Kind::Word && !is_keyword(ts_.peek().text) && ts_.peek(1).is("(")) {
      ts_.next();
      ts_.next();
      ok = true;
      if (!ts_.peek().is(")")) {
        for (;;) {
          if (ts_.peek().kind != Token::Kind::Word) {
            ok = false;
            break;
          }
          ts_.next();
          if (!ts_.accept(",")) break;
        }
      }
      ok = ok && ts_.accept(")") && ts_.peek().is("{");
    }
    ts_.rewind(save);
    return ok;
  }

  FunctionDecl decl() {
    FunctionDecl d;
    const Token name = ts_.next();
    d.name = name.text;
    ts_.expect("(");
    if (!ts_.peek().is(")")) {
      do {
        d.params.push_back(ts_.next().text);
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    ts_.expect("{");
    d.body = ts_.peek().is("}") ? make_value({Unit{}}) : seq();
    ts_.expect("}");
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      for (std::size_t j = i + 1; j < d.params.size(); ++j) {
        if (d.params[i] == d.params[j]) ts_.fail_at(name, "duplicate parameter " + d.params[i]);
      }
    }
    return d;
  }

  bool seq_end() const { return ts_.peek().is("}") || ts_.at_end() || ts_.peek().is(")"); }

  MetaExpr seq() {
    const Token start = ts_.peek();
    std::vector<MetaExpr> items{item()};
    while (ts_.accept(";")) {
      if (seq_end()) {
        items.push_back(make_value({Unit{}}));
        break;
      }
      items.push_back(item());
    }
    if (items.size() == 1) return items[0];
    Node n = at(NK::Seq, start);
    n.args = std::move(items);
    return make(std::move(n));
  }

  MetaExpr item() {
    const Token start = ts_.peek();
    if (ts_.accept("let")) {
      Node n = at(NK::Let, start);
      const Token& name = ts_.peek();
      if (name.kind != Token::Kind::Word || is_keyword(name.text)) ts_.fail("expected a name after let");
      n.name = ts_.next().text;
      ts_.expect("=");
      n.args.push_back(expr());
      ts_.expect("in");
      n.args.push_back(seq());
      return make(std::move(n));
    }
    if (auto c = command()) return c;
    return expr();
  }

  MetaExpr client_expr() {
    const Token& t = ts_.peek();
    if (t.is("(")) {
      ts_.next();
      MetaExpr e = expr();
      ts_.expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Int || t.kind == Token::Kind::Word) return postfix();
    ts_.fail("expected a client, found " + t.describe());
  }

  MetaExpr rhs_and_source(Node& n, bool source_optional) {
    MetaExpr rhs = expr();
    n.args.push_back(rhs);
    if (ts_.accept("@")) {
      n.args.push_back(client_expr());
    } else if (source_optional) {
      n.args.push_back(nullptr);
    } else {
      ts_.fail("expected '@' and a computing client");
    }
    return make(std::move(n));
  }

  MetaExpr command() {
    const Token start = ts_.peek();
    if (start.is("assert") && ts_.peek(1).is("(")) {
      ts_.next();
      ts_.next();
      Node n = at(NK::Assert, start);
      n.pred = pred_or();
      ts_.expect(")");
      ts_.expect("@");
      n.args.push_back(client_expr());
      return make(std::move(n));
    }
    if (start.is("out") && ts_.peek(1).is("@")) {
      ts_.next();
      ts_.next();
      Node n = at(NK::Output, start);
      n.args.push_back(client_expr());
      ts_.expect(":=");
      return rhs_and_source(n, false);
    }
    VarKind kind;
    if (!ctor_word(start, kind) || !ts_.peek(1).is("[")) return nullptr;
    if (kind != VarKind::Mesg && kind != VarKind::Reveal) return nullptr;
    const std::size_t save = ts_.position();
    ts_.next();
    ts_.next();
    MetaExpr name = expr();
    ts_.expect("]");
    if (kind == VarKind::Mesg && ts_.accept("@")) {
      Node n = at(NK::Send, start);
      n.args.push_back(name);
      n.args.push_back(client_expr());
      ts_.expect(":=");
      return rhs_and_source(n, true);
    }
    if (kind == VarKind::Reveal && ts_.accept(":=")) {
      Node n = at(NK::Reveal, start);
      n.args.push_back(name);
      return rhs_and_source(n, false);
    }
    ts_.rewind(save);
    return nullptr;
  }

  MetaExpr binary(const Token& t, MetaOp op, MetaExpr l, MetaExpr r) {
    Node n = at(NK::Binary, t);
    n.op = op;
    n.args = {std::move(l), std::move(r)};
    return make(std::move(n));
  }

  MetaExpr expr() {
    MetaExpr e = xor_level();
    while (ts_.peek().is("or")) {
      const Token t = ts_.next();
      e = binary(t, MetaOp::Or, e, xor_level());
    }
    return e;
  }

  MetaExpr xor_level() {
    MetaExpr e = and_level();
    for (;;) {
      const Token t = ts_.peek();
      MetaOp op;
      if (t.is("xor")) op = MetaOp::Xor;
      else if (t.is("+")) op = MetaOp::Add;
      else if (t.is("-")) op = MetaOp::Sub;
      else if (t.is("++")) op = MetaOp::Concat;
      else return e;
      ts_.next();
      e = binary(t, op, e, and_level());
    }
  }

  MetaExpr and_level() {
    MetaExpr e = unary();
    for (;;) {
      const Token t = ts_.peek();
      MetaOp op;
      if (t.is("and")) op = MetaOp::And;
      else if (t.is("*")) op = MetaOp::Mul;
      else return e;
      ts_.next();
      e = binary(t, op, e, unary());
    }
  }

  MetaExpr unary() {
    const Token t = ts_.peek();
    if (ts_.accept("not")) {
      Node n = at(NK::Not, t);
      n.args.push_back(unary());
      return make(std::move(n));
    }
    return postfix();
  }

  MetaExpr postfix() {
    MetaExpr e = primary();
    while (ts_.peek().is(".")) {
      const Token t = ts_.next();
      if (ts_.peek().kind != Token::Kind::Word) ts_.fail("expected a field name after '.'");
      Node n = at(NK::Proj, t);
      n.name = ts_.next().text;
      n.args.push_back(e);
      e = make(std::move(n));
    }
    return e;
  }

  MetaExpr primary() {
    const Token t = ts_.peek();
    if (t.kind == Token::Kind::Int) {
      ts_.next();
      Node n = at(NK::Value, t);
      n.value = {static_cast<std::int64_t>(std::stoll(t.text))};
      return make(std::move(n));
    }
    if (t.kind == Token::Kind::String) {
      ts_.next();
      Node n = at(NK::Value, t);
      n.value = {t.text};
      return make(std::move(n));
    }
    if (t.is("true") || t.is("false")) {
      ts_.next();
      Node n = at(NK::Value, t);
      n.value = {Expr::constant(t.text == "true" ? 1 : 0)};
      return make(std::move(n));
    }
    if (t.is("(")) {
      ts_.next();
      if (ts_.accept(")")) {
        Node n = at(NK::Value, t);
        n.value = {Unit{}};
        return make(std::move(n));
      }
      MetaExpr e = seq();
      ts_.expect(")");
      return e;
    }
    if (t.is("{")) {
      ts_.next();
      Node n = at(NK::Record, t);
      while (!ts_.peek().is("}")) {
        if (ts_.peek().kind != Token::Kind::Word) ts_.fail("expected a record field name");
        const Token f = ts_.next();
        for (const auto& existing : n.fields) {
          if (existing == f.text) ts_.fail_at(f, "duplicate record field " + f.text);
        }
        n.fields.push_back(f.text);
        ts_.expect("=");
        n.args.push_back(expr());
        if (!ts_.accept(";")) break;
      }
      ts_.expect("}");
      return make(std::move(n));
    }
    VarKind kind;
    if (ctor_word(t, kind) && ts_.peek(1).is("[")) {
      ts_.next();
      ts_.next();
      Node n = at(NK::Ctor, t);
      n.ctor = kind;
      n.args.push_back(expr());
      ts_.expect("]");
      return make(std::move(n));
    }
    // `in` only separates a let binding from its body after a complete
    // expression, so in operand position it is an ordinary name.
    if (t.kind == Token::Kind::Word && (!is_keyword(t.text) || t.text == "in")) {
      ts_.next();
      if (t.text != "in" && ts_.accept("(")) {
        Node n = at(NK::Call, t);
        n.name = t.text;
        if (!ts_.peek().is(")")) {
          do {
            n.args.push_back(expr());
          } while (ts_.accept(","));
        }
        ts_.expect(")");
        return make(std::move(n));
      }
      Node n = at(NK::Var, t);
      n.name = t.text;
      return make(std::move(n));
    }
    ts_.fail("expected an expression, found " + t.describe());
  }

  MetaPred pred_or() {
    MetaPred p = pred_and();
    while (ts_.accept("||")) {
      MetaPred q;
      q.kind = Pred::Kind::Or;
      q.children = {std::move(p), pred_and()};
      p = std::move(q);
    }
    return p;
  }

  MetaPred pred_and() {
    MetaPred p = pred_atom();
    while (ts_.accept("&&")) {
      MetaPred q;
      q.kind = Pred::Kind::And;
      q.children = {std::move(p), pred_atom()};
      p = std::move(q);
    }
    return p;
  }

  MetaPred pred_atom() {
    if (ts_.accept("!")) {
      MetaPred q;
      q.kind = Pred::Kind::Not;
      q.children = {pred_atom()};
      return q;
    }
    const std::size_t save = ts_.position();
    try {
      MetaPred p;
      p.lhs = expr();
      if (ts_.accept("==") || ts_.accept("=")) {
        p.kind = Pred::Kind::Eq;
        p.rhs = expr();
      } else if (ts_.accept("!=")) {
        p.kind = Pred::Kind::Ne;
        p.rhs = expr();
      } else if (ts_.peek().is("&&") || ts_.peek().is("||") || ts_.peek().is(")")) {
        p.kind = Pred::Kind::Truthy;
      } else {
        ts_.fail("expected a comparison, found " + ts_.peek().describe());
      }
      return p;
    } catch (const ParseError&) {
      ts_.rewind(save);
      if (!ts_.accept("(")) throw;
      MetaPred p = pred_or();
      ts_.expect(")");
      return p;
    }
  }

  TokenStream ts_;
};

}  // namespace

Program parse_prelude(std::string_view source) {
  try {
    return Parser(source).program();
  } catch (const UsageError& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

MetaPred subst_pred(const MetaPred& p, const std::string& y, const MetaValue& v) {
  MetaPred out = p;
  if (p.lhs) out.lhs = subst(p.lhs, y, v);
  if (p.rhs) out.rhs = subst(p.rhs, y, v);
  for (auto& c : out.children) c = subst_pred(c, y, v);
  return out;
}

}  // namespace

MetaExpr subst(const MetaExpr& e, const std::string& y, const MetaValue& v) {
  if (!e) return e;
  switch (e->kind) {
    case NK::Value:
      return e;
    case NK::Var:
      if (e->name == y) {
        Node n = *e;
        n.kind = NK::Value;
        n.value = v;
        n.name.clear();
        return make(std::move(n));
      }
      return e;
    case NK::Let: {
      Node n = *e;
      n.args[0] = subst(e->args[0], y, v);
      if (e->name != y) n.args[1] = subst(e->args[1], y, v);
      return make(std::move(n));
    }
    default: {
      Node n = *e;
      for (auto& a : n.args) a = subst(a, y, v);
      if (e->kind == NK::Assert) n.pred = subst_pred(e->pred, y, v);
      return make(std::move(n));
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Expr to_expr(const Node& at_node, const MetaValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.v)) return Expr::constant(*i);
  if (const auto* e = std::get_if<Expr>(&v.v)) return *e;
  eval_fail(at_node, "expected a field expression, got " + v.to_string());
}

ClientId to_client(const Node& at_node, const MetaValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v.v); i && *i > 0) {
    return ClientId{static_cast<std::uint32_t>(*i)};
  }
  eval_fail(at_node, "expected a client id, got " + v.to_string());
}

std::string to_name(const Node& at_node, const MetaValue& v) {
  if (const auto* s = std::get_if<std::string>(&v.v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v.v)) return std::to_string(*i);
  eval_fail(at_node, "expected an identifier string, got " + v.to_string());
}

const MetaValue& field(const Node& at_node, const MetaValue& rec, const std::string& name) {
  const auto* r = std::get_if<std::shared_ptr<const RecordValue>>(&rec.v);
  if (!r) eval_fail(at_node, "projection ." + name + " of a non-record " + rec.to_string());
  for (const auto& [k, v] : (*r)->fields) {
    if (k == name) return v;
  }
  eval_fail(at_node, "record has no field " + name);
}

BinOp field_op(MetaOp op) {
  switch (op) {
    case MetaOp::Add: return BinOp::Add;
    case MetaOp::Sub: return BinOp::Sub;
    case MetaOp::Mul: return BinOp::Mul;
    case MetaOp::And: return BinOp::And;
    case MetaOp::Xor: return BinOp::Xor;
    case MetaOp::Or: return BinOp::Or;
    case MetaOp::Concat: break;
  }
  throw UsageError("concatenation is not a field operation");
}

MetaValue builtin(const Node& n, const std::vector<MetaValue>& args) {
  if (n.name == "nameof") {
    if (args.size() != 1) eval_fail(n, "nameof takes one argument");
    const Expr e = to_expr(n, args[0]);
    const auto* r = e.as<Expr::Ref>();
    if (!r) eval_fail(n, "nameof expects a variable, got " + e.to_string());
    return {r->name};
  }
  if (n.name == "OT") {
    if (args.size() != 5) eval_fail(n, "OT takes (choice, row1, row0, receiver, sender)");
    return {Expr::ot({to_expr(n, args[0])}, {to_expr(n, args[1]), to_expr(n, args[2])},
                     to_client(n, args[3]), to_client(n, args[4]))};
  }
  if (n.name == "OT4") {
    std::vector<Expr> rows;
    std::size_t next = 3;
    if (args.size() == 5) {
      for (const char* f : {"row1", "row2", "row3", "row4"}) rows.push_back(to_expr(n, field(n, args[2], f)));
    } else if (args.size() == 8) {
      for (std::size_t i = 2; i < 6; ++i) rows.push_back(to_expr(n, args[i]));
      next = 6;
    } else {
      eval_fail(n, "OT4 takes (c1, c2, table, receiver, sender)");
    }
    return {Expr::ot({to_expr(n, args[0]), to_expr(n, args[1])}, std::move(rows),
                     to_client(n, args[next]), to_client(n, args[next + 1]))};
  }
  eval_fail(n, "unknown function " + n.name);
}

// Flattened evaluation order of a predicate's expressions.
void pred_slots(const MetaPred& p, std::vector<const MetaExpr*>& out) {
  if (p.lhs) out.push_back(&p.lhs);
  if (p.rhs) out.push_back(&p.rhs);
  for (const auto& c : p.children) pred_slots(c, out);
}

MetaPred replace_slot(const MetaPred& p, const MetaExpr* slot, const MetaExpr& with) {
  MetaPred out = p;
  if (&p.lhs == slot) out.lhs = with;
  if (&p.rhs == slot) out.rhs = with;
  for (std::size_t i = 0; i < p.children.size(); ++i) out.children[i] = replace_slot(p.children[i], slot, with);
  return out;
}

Pred to_pred(const Node& n, const MetaPred& p) {
  switch (p.kind) {
    case Pred::Kind::Eq:
    case Pred::Kind::Ne:
      return Pred::compare(p.kind, to_expr(n, p.lhs->value), to_expr(n, p.rhs->value));
    case Pred::Kind::Truthy:
      return Pred::truthy(to_expr(n, p.lhs->value));
    case Pred::Kind::And:
      return Pred::conjunction(to_pred(n, p.children[0]), to_pred(n, p.children[1]));
    case Pred::Kind::Or:
      return Pred::disjunction(to_pred(n, p.children[0]), to_pred(n, p.children[1]));
    case Pred::Kind::Not:
      return Pred::negation(to_pred(n, p.children[0]));
  }
  throw UsageError("bad predicate");
}

class Stepper {
 public:
  Stepper(const Codebase& cb, Protocol& pi) : cb_(cb), pi_(pi) {}

  // Reduces e by one step. Precondition: e is not a value.
  MetaExpr reduce(const MetaExpr& e) {
    const Node& n = *e;
    switch (n.kind) {
      case NK::Value:
        throw UsageError("value does not reduce");
      case NK::Var:
        eval_fail(n, "unbound variable " + n.name);
      case NK::Let: {
        if (!is_value(n.args[0])) return with_arg(n, 0, reduce(n.args[0]));
        return subst(n.args[1], n.name, n.args[0]->value);
      }
      case NK::Seq: {
        if (!is_value(n.args[0])) return with_arg(n, 0, reduce(n.args[0]));
        if (n.args.size() == 2) return n.args[1];
        Node m = n;
        m.args.erase(m.args.begin());
        return make(std::move(m));
      }
      case NK::Assert: {
        std::vector<const MetaExpr*> slots;
        pred_slots(n.pred, slots);
        for (const MetaExpr* s : slots) {
          if (!is_value(*s)) {
            Node m = n;
            m.pred = replace_slot(n.pred, s, reduce(*s));
            return make(std::move(m));
          }
        }
        break;
      }
      default:
        break;
    }
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (n.args[i] && !is_value(n.args[i])) return with_arg(n, i, reduce(n.args[i]));
    }
    return value_node(n, apply(n));
  }

 private:
  static MetaExpr with_arg(const Node& n, std::size_t i, MetaExpr a) {
    Node m = n;
    m.args[i] = std::move(a);
    return make(std::move(m));
  }

  static MetaExpr value_node(const Node& n, MetaValue v) {
    Node m;
    m.kind = NK::Value;
    m.value = std::move(v);
    m.line = n.line;
    m.column = n.column;
    return make(std::move(m));
  }

  const MetaValue& arg(const Node& n, std::size_t i) { return n.args[i]->value; }

  MetaValue apply(const Node& n) {
    switch (n.kind) {
      case NK::Call: {
        if (const FunctionDecl* f = cb_.find(n.name)) {
          if (f->params.size() != n.args.size()) {
            eval_fail(n, n.name + " expects " + std::to_string(f->params.size()) + " arguments, got " +
                             std::to_string(n.args.size()));
          }
          pending_ = f->body;
          for (std::size_t i = 0; i < n.args.size(); ++i) pending_ = subst(pending_, f->params[i], arg(n, i));
          return {Unit{}};
        }
        std::vector<MetaValue> vals;
        for (const auto& a : n.args) vals.push_back(a->value);
        return builtin(n, vals);
      }
      case NK::Record: {
        auto r = std::make_shared<RecordValue>();
        for (std::size_t i = 0; i < n.fields.size(); ++i) r->fields.emplace_back(n.fields[i], arg(n, i));
        return {std::shared_ptr<const RecordValue>(std::move(r))};
      }
      case NK::Proj:
        return field(n, arg(n, 0), n.name);
      case NK::Binary: {
        const MetaValue& l = arg(n, 0);
        const MetaValue& r = arg(n, 1);
        if (n.op == MetaOp::Concat) return {to_name(n, l) + to_name(n, r)};
        return {Expr::binary(field_op(n.op), to_expr(n, l), to_expr(n, r))};
      }
      case NK::Not:
        return {Expr::negate(to_expr(n, arg(n, 0)))};
      case NK::Ctor: {
        std::string name = to_name(n, arg(n, 0));
        if (name.empty()) eval_fail(n, "empty variable name");
        for (char c : name) {
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            eval_fail(n, "variable names use [A-Za-z0-9_], got \"" + name + "\"");
          }
        }
        return {Expr::ref(n.ctor, std::move(name))};
      }
      case NK::Send: {
        std::string name = to_ctor_name(n, arg(n, 0));
        const ClientId dest = to_client(n, arg(n, 1));
        Expr e = to_expr(n, arg(n, 2));
        ClientId src;
        if (n.args[3]) {
          src = to_client(n, arg(n, 3));
        } else if (const auto* ot = e.as<Expr::Ot>()) {
          src = ot->sender;
        } else {
          eval_fail(n, "message send needs '@' and a computing client");
        }
        pi_.append(MesgSend{std::move(name), dest, std::move(e), src});
        return {Unit{}};
      }
      case NK::Reveal:
        pi_.append(RevealCmd{to_ctor_name(n, arg(n, 0)), to_expr(n, arg(n, 1)), to_client(n, arg(n, 2))});
        return {Unit{}};
      case NK::Output:
        pi_.append(OutputCmd{to_client(n, arg(n, 0)), to_expr(n, arg(n, 1)), to_client(n, arg(n, 2))});
        return {Unit{}};
      case NK::Assert:
        pi_.append(AssertCmd{to_pred(n, n.pred), to_client(n, arg(n, 0))});
        return {Unit{}};
      default:
        break;
    }
    eval_fail(n, "no reduction rule");
  }

  static std::string to_ctor_name(const Node& n, const MetaValue& v) {
    std::string name = to_name(n, v);
    if (name.empty()) eval_fail(n, "empty variable name");
    return name;
  }

 public:
  MetaExpr pending_;

 private:
  const Codebase& cb_;
  Protocol& pi_;
};

// Finds the leftmost-innermost redex and reduces it; calls to declared
// functions step to their instantiated bodies.
MetaExpr splice_step(const Codebase& cb, Protocol& pi, const MetaExpr& e);

MetaExpr splice_children(const Codebase& cb, Protocol& pi, const MetaExpr& e) {
  const Node& n = *e;
  switch (n.kind) {
    case NK::Let:
    case NK::Seq:
      if (!is_value(n.args[0])) {
        Node m = n;
        m.args[0] = splice_step(cb, pi, n.args[0]);
        return make(std::move(m));
      }
      return nullptr;
    case NK::Assert: {
      std::vector<const MetaExpr*> slots;
      pred_slots(n.pred, slots);
      for (const MetaExpr* slot : slots) {
        if (!is_value(*slot)) {
          Node m = n;
          m.pred = replace_slot(n.pred, slot, splice_step(cb, pi, *slot));
          return make(std::move(m));
        }
      }
      break;
    }
    default:
      break;
  }
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (n.args[i] && !is_value(n.args[i])) {
      Node m = n;
      m.args[i] = splice_step(cb, pi, n.args[i]);
      return make(std::move(m));
    }
  }
  return nullptr;
}

MetaExpr splice_step(const Codebase& cb, Protocol& pi, const MetaExpr& e) {
  if (is_value(e)) throw UsageError("value does not reduce");
  if (MetaExpr inner = splice_children(cb, pi, e)) return inner;
  Stepper s(cb, pi);
  MetaExpr out = s.reduce(e);
  if (e->kind == NK::Call && s.pending_) return s.pending_;
  return out;
}

}  // namespace

bool step_meta(const Codebase& codebase, MetaConfig& config) {
  if (is_value(config.expr)) return false;
  config.expr = splice_step(codebase, config.protocol, config.expr);
  return true;
}

EvalResult eval_meta(const Codebase& codebase, const MetaExpr& e, const EvalOptions& options) {
  MetaConfig config{Protocol({}, options.modulus), e};
  std::size_t steps = 0;
  while (step_meta(codebase, config)) {
    if (++steps > options.step_limit) {
      throw EvalError("metaprogram exceeded the step limit of " + std::to_string(options.step_limit));
    }
  }
  return {std::move(config.protocol), config.expr->value, steps};
}

EvalResult expand(std::string_view main_source, const std::vector<std::string>& libraries,
                  const EvalOptions& options) {
  std::string all;
  for (const auto& lib : libraries) all += lib + "\n";
  all += main_source;
  const Program p = parse_prelude(all);
  return eval_meta(p.codebase, p.main, options);
}

}  // namespace ovt::prelude
