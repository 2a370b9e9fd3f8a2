#include "overture/memory.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "overture/error.hpp"

namespace ovt {

std::string cell_to_string(const Cell& c) { return c ? c->to_string() : "bot"; }

const Cell& Memory::at(const Var& x) const {
  const auto it = cells_.find(x);
  if (it == cells_.end()) throw UsageError(x.to_string() + " is not in the memory's domain");
  return it->second;
}

Memory Memory::extended(const Var& x, Cell v) const {
  Memory out = *this;
  out.extend(x, std::move(v));
  return out;
}

void Memory::extend(const Var& x, Cell v) {
  if (!cells_.emplace(x, std::move(v)).second) {
    throw UsageError(x.to_string() + " is already defined");
  }
}

Memory Memory::restrict_to(const VarSet& xs) const {
  Map out;
  for (const auto& x : xs) {
    const auto it = cells_.find(x);
    if (it == cells_.end()) throw UsageError(x.to_string() + " is not in the memory's domain");
    out.emplace(x, it->second);
  }
  return Memory(std::move(out));
}

VarSet Memory::domain() const {
  VarSet out;
  for (const auto& [x, v] : cells_) out.insert(x);
  return out;
}

Memory operator|(const Memory& a, const Memory& b) {
  Memory out = a;
  for (const auto& [x, v] : b.cells_) {
    const auto [it, inserted] = out.cells_.emplace(x, v);
    if (!inserted && it->second != v) {
      throw UsageError("memories disagree on " + x.to_string());
    }
  }
  return out;
}

std::string Memory::to_string() const {
  std::vector<std::string> parts;
  parts.reserve(cells_.size());
  for (const auto& [x, v] : cells_) parts.push_back(x.to_string() + "=" + cell_to_string(v));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

Memory parse_memory(const std::string& text, std::uint32_t modulus) {
  Memory out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw UsageError("expected var=value in '" + token + "'");
    const Var x = parse_var(token.substr(0, eq));
    const std::string value = token.substr(eq + 1);
    if (value == "bot") {
      out.extend(x, std::nullopt);
    } else {
      if (value.empty() || !std::all_of(value.begin(), value.end(),
                                        [](unsigned char c) { return std::isdigit(c); })) {
        throw UsageError("bad value in '" + token + "'");
      }
      out.extend(x, FieldElem(std::stoll(value), modulus));
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace ovt
