#include "overture/syntax.hpp"

#include <cctype>

#include "overture/error.hpp"
#include "overture/field.hpp"

namespace ovt {

std::string Token::describe() const {
  switch (kind) {
    case Kind::End: return "end of input";
    case Kind::String: return "string \"" + text + "\"";
    default: return "'" + text + "'";
  }
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* const two_char[] = {":=", "==", "!=", "&&", "||", "++", "->"};
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      bool digits = true;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        digits = digits && std::isdigit(static_cast<unsigned char>(src[j]));
        ++j;
      }
      t.kind = digits ? Token::Kind::Int : Token::Kind::Word;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError("unterminated string", line, col);
      t.kind = Token::Kind::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else {
      t.kind = Token::Kind::Symbol;
      bool matched = false;
      for (const char* two : two_char) {
        if (src.substr(i, 2) == two) {
          t.text = two;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("[](){}@;,.=+-*!<>").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::accept(std::string_view sym) {
  if (peek().is(sym)) {
    next();
    return true;
  }
  return false;
}

const Token& TokenStream::expect(std::string_view sym) {
  if (!peek().is(sym)) fail("expected '" + std::string(sym) + "' but found " + peek().describe());
  return next();
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& t, const std::string& message) const {
  throw ParseError(message, t.line, t.column);
}

namespace {

bool is_name_token(const Token& t) {
  return t.kind == Token::Kind::Word || t.kind == Token::Kind::Int || t.kind == Token::Kind::String;
}

std::string parse_name(TokenStream& ts) {
  const Token& t = ts.peek();
  if (!is_name_token(t) || t.text.empty()) ts.fail("expected a variable name, found " + t.describe());
  for (char c : t.text) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      ts.fail("variable names use [A-Za-z0-9_]");
    }
  }
  return ts.next().text;
}

ClientId parse_client(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind != Token::Kind::Int) ts.fail("expected a client id, found " + t.describe());
  const long long v = std::stoll(t.text);
  if (v <= 0) ts.fail("client ids are positive");
  ts.next();
  return ClientId{static_cast<std::uint32_t>(v)};
}

std::optional<VarKind> ref_kind(const Token& t) {
  if (t.kind != Token::Kind::Word) return std::nullopt;
  if (t.text == "s") return VarKind::Secret;
  if (t.text == "r") return VarKind::Flip;
  if (t.text == "m") return VarKind::Mesg;
  if (t.text == "p") return VarKind::Reveal;
  return std::nullopt;
}

Expr parse_or(TokenStream& ts);

Expr parse_ot(TokenStream& ts, bool four) {
  ts.expect("(");
  std::vector<Expr> parts;
  std::vector<ClientId> clients;
  const std::size_t n_exprs = four ? 6 : 3;
  for (std::size_t k = 0; k < n_exprs; ++k) {
    parts.push_back(parse_or(ts));
    ts.expect(",");
  }
  clients.push_back(parse_client(ts));
  ts.expect(",");
  clients.push_back(parse_client(ts));
  ts.expect(")");
  const std::size_t n_choices = four ? 2 : 1;
  std::vector<Expr> choices(parts.begin(), parts.begin() + static_cast<long>(n_choices));
  std::vector<Expr> rows(parts.begin() + static_cast<long>(n_choices), parts.end());
  return Expr::ot(std::move(choices), std::move(rows), clients[0], clients[1]);
}

Expr parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.is("(")) {
    ts.next();
    Expr e = parse_or(ts);
    ts.expect(")");
    return e;
  }
  if (t.kind == Token::Kind::Int) {
    ts.next();
    return Expr::constant(std::stoll(t.text));
  }
  if (t.is("true")) {
    ts.next();
    return Expr::constant(1);
  }
  if (t.is("false")) {
    ts.next();
    return Expr::constant(0);
  }
  if (t.is("OT") || t.is("OT4")) {
    const bool four = t.text == "OT4";
    ts.next();
    return parse_ot(ts, four);
  }
  if (auto kind = ref_kind(t); kind && ts.peek(1).is("[")) {
    ts.next();
    ts.next();
    std::string name = parse_name(ts);
    ts.expect("]");
    return Expr::ref(*kind, std::move(name));
  }
  ts.fail("expected an expression, found " + t.describe());
}

Expr parse_unary(TokenStream& ts) {
  if (ts.accept("not")) return Expr::negate(parse_unary(ts));
  return parse_atom(ts);
}

Expr parse_mul(TokenStream& ts) {
  Expr e = parse_unary(ts);
  for (;;) {
    if (ts.accept("*")) {
      e = Expr::binary(BinOp::Mul, e, parse_unary(ts));
    } else if (ts.accept("and")) {
      e = Expr::binary(BinOp::And, e, parse_unary(ts));
    } else {
      return e;
    }
  }
}

Expr parse_add(TokenStream& ts) {
  Expr e = parse_mul(ts);
  for (;;) {
    if (ts.accept("+")) {
      e = Expr::binary(BinOp::Add, e, parse_mul(ts));
    } else if (ts.accept("-")) {
      e = Expr::binary(BinOp::Sub, e, parse_mul(ts));
    } else if (ts.accept("xor")) {
      e = Expr::binary(BinOp::Xor, e, parse_mul(ts));
    } else {
      return e;
    }
  }
}

Expr parse_or(TokenStream& ts) {
  Expr e = parse_add(ts);
  while (ts.accept("or")) e = Expr::binary(BinOp::Or, e, parse_add(ts));
  return e;
}

Pred parse_pred_or(TokenStream& ts);

Pred parse_pred_atom(TokenStream& ts) {
  if (ts.accept("!")) return Pred::negation(parse_pred_atom(ts));
  const std::size_t save = ts.position();
  try {
    Expr lhs = parse_or(ts);
    if (ts.accept("==") || ts.accept("=")) return Pred::compare(Pred::Kind::Eq, lhs, parse_or(ts));
    if (ts.accept("!=")) return Pred::compare(Pred::Kind::Ne, lhs, parse_or(ts));
    const Token& t = ts.peek();
    if (t.is("&&") || t.is("||") || t.is(")")) return Pred::truthy(lhs);
    ts.fail("expected a comparison, found " + t.describe());
  } catch (const ParseError&) {
    ts.rewind(save);
    if (!ts.accept("(")) throw;
    Pred p = parse_pred_or(ts);
    ts.expect(")");
    return p;
  }
}

Pred parse_pred_and(TokenStream& ts) {
  Pred p = parse_pred_atom(ts);
  while (ts.accept("&&")) p = Pred::conjunction(p, parse_pred_atom(ts));
  return p;
}

Pred parse_pred_or(TokenStream& ts) {
  Pred p = parse_pred_and(ts);
  while (ts.accept("||")) p = Pred::disjunction(p, parse_pred_and(ts));
  return p;
}

Command parse_command(TokenStream& ts) {
  const Token start = ts.peek();
  if (ts.accept("assert")) {
    ts.expect("(");
    Pred p = parse_pred_or(ts);
    ts.expect(")");
    ts.expect("@");
    return AssertCmd{std::move(p), parse_client(ts)};
  }
  if (ts.accept("out")) {
    ts.expect("@");
    const ClientId c = parse_client(ts);
    ts.expect(":=");
    Expr e = parse_or(ts);
    ts.expect("@");
    return OutputCmd{c, std::move(e), parse_client(ts)};
  }
  const auto kind = ref_kind(start);
  if (!kind || (*kind != VarKind::Mesg && *kind != VarKind::Reveal) || !ts.peek(1).is("[")) {
    ts.fail("expected a command, found " + start.describe());
  }
  ts.next();
  ts.next();
  std::string name = parse_name(ts);
  ts.expect("]");
  if (*kind == VarKind::Reveal) {
    ts.expect(":=");
    Expr e = parse_or(ts);
    ts.expect("@");
    return RevealCmd{std::move(name), std::move(e), parse_client(ts)};
  }
  ts.expect("@");
  const ClientId dest = parse_client(ts);
  ts.expect(":=");
  Expr e = parse_or(ts);
  if (const auto* ot = e.as<Expr::Ot>()) {
    const ClientId sender = ot->sender;
    if (ts.accept("@")) {
      const Token& at = ts.peek();
      if (parse_client(ts) != sender) ts.fail_at(at, "OT is computed by its sender");
    }
    return MesgSend{std::move(name), dest, std::move(e), sender};
  }
  ts.expect("@");
  return MesgSend{std::move(name), dest, std::move(e), parse_client(ts)};
}

}  // namespace

Expr parse_expr(TokenStream& ts) { return parse_or(ts); }

Pred parse_pred(TokenStream& ts) { return parse_pred_or(ts); }

Expr parse_expr_text(std::string_view text) {
  TokenStream ts(tokenize(text));
  Expr e = parse_or(ts);
  if (!ts.at_end()) ts.fail("trailing input after expression");
  return e;
}

Protocol parse_protocol(std::string_view source, std::uint32_t modulus) {
  if (!is_prime(modulus)) throw UsageError("field size must be prime");
  TokenStream ts(tokenize(source));
  std::vector<Command> cmds;
  while (!ts.at_end()) {
    const Token start = ts.peek();
    Command c = parse_command(ts);
    if (!ts.accept(";") && !ts.at_end()) ts.fail("expected ';' after command");
    if (modulus != 2) {
      const Expr* e = command_expr(c);
      const bool sugar = e ? e->uses_boolean_sugar() : std::get<AssertCmd>(c).pred.uses_boolean_sugar();
      if (sugar) ts.fail_at(start, "boolean connectives are only available over F2");
    }
    cmds.push_back(std::move(c));
  }
  return Protocol(std::move(cmds), modulus);
}

}  // namespace ovt
