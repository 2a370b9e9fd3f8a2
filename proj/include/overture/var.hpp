#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>

namespace ovt {

// Clients are identified by positive integers; 0 is reserved for "no owner".
struct ClientId {
  std::uint32_t id = 0;

  constexpr ClientId() = default;
  constexpr explicit ClientId(std::uint32_t value) : id(value) {}

  constexpr bool valid() const { return id != 0; }
  friend constexpr auto operator<=>(ClientId, ClientId) = default;
  std::string to_string() const { return std::to_string(id); }
};

using ClientSet = std::set<ClientId>;

enum class VarKind : std::uint8_t {
  Secret,
  Flip,
  Mesg,
  Reveal,
  Out,
  // Synthetic <m[w]> = m[w]@1 + m[w]@2. Only appears in pmfs, never in protocol memories.
  GlobalView,
};

const char* kind_prefix(VarKind kind);

// A protocol variable: s[w]@i, r[w]@i, m[w]@i, p[w], out@i, or the synthetic <m[w]>.
struct Var {
  VarKind kind = VarKind::Secret;
  std::string name;
  ClientId owner;

  static Var secret(std::string name, std::uint32_t owner) {
    return {VarKind::Secret, std::move(name), ClientId{owner}};
  }
  static Var flip(std::string name, std::uint32_t owner) {
    return {VarKind::Flip, std::move(name), ClientId{owner}};
  }
  static Var message(std::string name, std::uint32_t owner) {
    return {VarKind::Mesg, std::move(name), ClientId{owner}};
  }
  static Var reveal(std::string name) { return {VarKind::Reveal, std::move(name), ClientId{}}; }
  static Var output(std::uint32_t owner) { return {VarKind::Out, "", ClientId{owner}}; }
  static Var global_view(std::string name) {
    return {VarKind::GlobalView, std::move(name), ClientId{}};
  }

  bool has_owner() const { return owner.valid(); }

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;

  // Concrete syntax: s[x]@1, p[w], out@2, <m[z]>.
  std::string to_string() const;
};

using VarSet = std::set<Var>;

// Parses the concrete syntax produced by Var::to_string.
Var parse_var(const std::string& text);

}  // namespace ovt

template <>
struct std::hash<ovt::Var> {
  std::size_t operator()(const ovt::Var& v) const noexcept {
    std::size_t h = std::hash<std::string>{}(v.name);
    h ^= (static_cast<std::size_t>(v.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::size_t>(v.owner.id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    return h;
  }
};
