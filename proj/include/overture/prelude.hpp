#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "overture/protocol.hpp"

namespace ovt::prelude {

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};

struct RecordValue;

// Values of the metalanguage: unit, integers (client ids or field constants),
// identifier strings, field expressions and records.
struct MetaValue {
  std::variant<Unit, std::int64_t, std::string, Expr, std::shared_ptr<const RecordValue>> v;

  bool is_unit() const { return std::holds_alternative<Unit>(v); }
  std::string to_string() const;
  friend bool operator==(const MetaValue& a, const MetaValue& b);
};

struct RecordValue {
  std::vector<std::pair<std::string, MetaValue>> fields;
};

struct Node;
using MetaExpr = std::shared_ptr<const Node>;

enum class MetaOp : std::uint8_t { Add, Sub, Mul, And, Xor, Or, Concat };

struct MetaPred {
  Pred::Kind kind = Pred::Kind::Truthy;
  MetaExpr lhs;
  MetaExpr rhs;
  std::vector<MetaPred> children;
};

struct Node {
  enum class Kind : std::uint8_t {
    Value,      // value
    Var,        // name
    Call,       // name(args...)
    Let,        // let name = args[0] in args[1]
    Seq,        // args[0]; args[1]; ...
    Record,     // { fields[i] = args[i]; ... }
    Proj,       // args[0].name
    Binary,     // args[0] op args[1]
    Not,        // not args[0]
    Ctor,       // s/r/m/p [args[0]]
    Send,       // m[args[0]]@args[1] := args[2] @ args[3]   (args[3] null for OT)
    Reveal,     // p[args[0]] := args[1] @ args[2]
    Output,     // out@args[0] := args[1] @ args[2]
    Assert,     // assert(pred)@args[0]
  };

  Kind kind = Kind::Value;
  MetaValue value;
  std::string name;
  MetaOp op = MetaOp::Add;
  VarKind ctor = VarKind::Mesg;
  std::vector<MetaExpr> args;
  std::vector<std::string> fields;
  MetaPred pred;
  std::size_t line = 0;
  std::size_t column = 0;
};

MetaExpr make_value(MetaValue v);
bool is_value(const MetaExpr& e);

struct FunctionDecl {
  std::string name;
  std::vector<std::string> params;
  MetaExpr body;
};

class Codebase {
 public:
  void add(FunctionDecl decl);
  const FunctionDecl* find(const std::string& name) const;
  const std::vector<FunctionDecl>& decls() const { return decls_; }
  std::size_t size() const { return decls_.size(); }

 private:
  std::vector<FunctionDecl> decls_;
  std::map<std::string, std::size_t> index_;
};

struct Program {
  Codebase codebase;
  MetaExpr main;  // unit when the source has only declarations
};

// Declarations `f(a, b) { seq }` followed by an optional main sequence.
Program parse_prelude(std::string_view source);

// Capture-free substitution of a closed value for free occurrences of y.
MetaExpr subst(const MetaExpr& e, const std::string& y, const MetaValue& v);

struct MetaConfig {
  Protocol protocol;
  MetaExpr expr;
};

// One small step, leftmost-innermost. Returns false when expr is already a value.
bool step_meta(const Codebase& codebase, MetaConfig& config);

struct EvalOptions {
  std::size_t step_limit = 1'000'000;
  std::uint32_t modulus = 2;
};

struct EvalResult {
  Protocol protocol;
  MetaValue value;
  std::size_t steps = 0;
};

EvalResult eval_meta(const Codebase& codebase, const MetaExpr& e, const EvalOptions& options = {});

// Parses and evaluates, with any number of library sources placed before `main_source`.
EvalResult expand(std::string_view main_source, const std::vector<std::string>& libraries = {},
                  const EvalOptions& options = {});

}  // namespace ovt::prelude
