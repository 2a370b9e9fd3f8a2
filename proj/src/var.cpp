#include "overture/var.hpp"

#include <cctype>

#include "overture/error.hpp"

namespace ovt {

const char* kind_prefix(VarKind kind) {
  switch (kind) {
    case VarKind::Secret: return "s";
    case VarKind::Flip: return "r";
    case VarKind::Mesg: return "m";
    case VarKind::Reveal: return "p";
    case VarKind::Out: return "out";
    case VarKind::GlobalView: return "m";
  }
  return "?";
}

std::string Var::to_string() const {
  switch (kind) {
    case VarKind::Out:
      return "out@" + owner.to_string();
    case VarKind::Reveal:
      return "p[" + name + "]";
    case VarKind::GlobalView:
      return "<m[" + name + "]>";
    default:
      return std::string(kind_prefix(kind)) + "[" + name + "]@" + owner.to_string();
  }
}

namespace {

std::uint32_t parse_client(const std::string& text, std::size_t pos, const std::string& whole) {
  if (pos >= text.size()) throw ParseError("missing client in variable '" + whole + "'", 1, 1);
  std::uint32_t id = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("bad client in variable '" + whole + "'", 1, 1);
    }
    id = id * 10 + static_cast<std::uint32_t>(text[i] - '0');
  }
  if (id == 0) throw ParseError("client ids are positive in '" + whole + "'", 1, 1);
  return id;
}

}  // namespace

Var parse_var(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  if (text.rfind("out@", 0) == 0) return Var::output(parse_client(text, 4, raw));
  if (text.size() > 2 && text.front() == '<' && text.back() == '>') {
    const Var inner = parse_var(text.substr(1, text.size() - 2) + "@1");
    if (inner.kind != VarKind::Mesg) throw ParseError("global views are over messages: " + raw, 1, 1);
    return Var::global_view(inner.name);
  }
  if (text.size() < 4 || text[1] != '[') throw ParseError("malformed variable '" + raw + "'", 1, 1);
  const auto close = text.find(']');
  if (close == std::string::npos) throw ParseError("malformed variable '" + raw + "'", 1, 1);
  std::string name = text.substr(2, close - 2);
  if (name.empty()) throw ParseError("empty variable name in '" + raw + "'", 1, 1);
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      throw ParseError("bad character in variable name '" + raw + "'", 1, 1);
    }
  }
  const char k = text[0];
  if (k == 'p') {
    if (close + 1 != text.size()) throw ParseError("reveals carry no owner: '" + raw + "'", 1, 1);
    return Var::reveal(std::move(name));
  }
  if (close + 1 >= text.size() || text[close + 1] != '@') {
    throw ParseError("missing owner in variable '" + raw + "'", 1, 1);
  }
  const auto owner = parse_client(text, close + 2, raw);
  switch (k) {
    case 's': return Var::secret(std::move(name), owner);
    case 'r': return Var::flip(std::move(name), owner);
    case 'm': return Var::message(std::move(name), owner);
    default: throw ParseError("unknown variable kind in '" + raw + "'", 1, 1);
  }
}

}  // namespace ovt
