#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "overture/protocol.hpp"

namespace ovt {

struct Token {
  enum class Kind : std::uint8_t { Word, Int, String, Symbol, End };

  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is(std::string_view sym) const {
    return (kind == Kind::Symbol || kind == Kind::Word) && text == sym;
  }
  std::string describe() const;
};

// Shared tokenizer for Overture and Prelude. Comments run from '#' or '//' to
// end of line. Runs of [A-Za-z0-9_] are words, or integers when all digits.
std::vector<Token> tokenize(std::string_view source);

// Cursor over a token vector with position save/restore for backtracking.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept(std::string_view sym);
  const Token& expect(std::string_view sym);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const;

  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Overture concrete syntax, one `;`-terminated command at a time:
//   m[w]@i := e@j;   p[w] := e@j;   out@i := e@j;   assert(pred)@i;
//   m[w]@i := OT(c, r1, r0, i, j);   m[w]@i := OT4(c1, c2, r11, r10, r01, r00, i, j);
// Boolean connectives are rejected unless modulus == 2.
Protocol parse_protocol(std::string_view source, std::uint32_t modulus = 2);

// Expression and predicate parsers over an existing stream (used by tests and the CLI).
Expr parse_expr(TokenStream& ts);
Pred parse_pred(TokenStream& ts);
Expr parse_expr_text(std::string_view text);

}  // namespace ovt
