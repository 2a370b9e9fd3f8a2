#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "overture/memory.hpp"

namespace ovt {

inline constexpr std::size_t kMaxSlots = 128;

// An F2 memory over at most 128 slots of some Layout. Bit i of `val` is the
// value of slot i and bit i of `bot` marks it as bottom.
struct PackedMemory {
  std::array<std::uint64_t, 2> val{};
  std::array<std::uint64_t, 2> bot{};

  bool get(std::size_t slot) const { return (val[slot >> 6] >> (slot & 63)) & 1; }
  bool is_bot(std::size_t slot) const { return (bot[slot >> 6] >> (slot & 63)) & 1; }
  void set(std::size_t slot, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (slot & 63);
    val[slot >> 6] = v ? (val[slot >> 6] | bit) : (val[slot >> 6] & ~bit);
    bot[slot >> 6] &= ~bit;
  }
  void set_bot(std::size_t slot) {
    const std::uint64_t bit = std::uint64_t{1} << (slot & 63);
    val[slot >> 6] &= ~bit;
    bot[slot >> 6] |= bit;
  }
  bool any_bot() const { return bot[0] != 0 || bot[1] != 0; }

  PackedMemory masked(const PackedMemory& mask) const {
    return {{val[0] & mask.val[0], val[1] & mask.val[1]}, {bot[0] & mask.val[0], bot[1] & mask.val[1]}};
  }

  friend bool operator==(const PackedMemory&, const PackedMemory&) = default;
  friend auto operator<=>(const PackedMemory&, const PackedMemory&) = default;
};

struct PackedHash {
  std::size_t operator()(const PackedMemory& m) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t w : {m.val[0], m.val[1], m.bot[0], m.bot[1]}) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
      h ^= h >> 33;
    }
    return static_cast<std::size_t>(h);
  }
};

template <typename V>
using PackedMap = std::unordered_map<PackedMemory, V, PackedHash>;

// Assignment of variables to slots.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<Var> vars);

  const std::vector<Var>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  std::optional<std::size_t> find(const Var& x) const;
  // Throws UsageError when x has no slot.
  std::size_t slot(const Var& x) const;
  bool contains(const Var& x) const { return index_.contains(x); }
  VarSet domain() const { return {vars_.begin(), vars_.end()}; }

  // Mask word with the slots of xs set; throws if some x has no slot.
  PackedMemory mask(const VarSet& xs) const;
  std::vector<std::size_t> slots(const VarSet& xs) const;

  PackedMemory pack(const Memory& m) const;
  // Only the slots set in `mask` are unpacked.
  Memory unpack(const PackedMemory& p, const PackedMemory& mask) const;
  Memory unpack(const PackedMemory& p) const;

  friend bool operator==(const Layout& a, const Layout& b) { return a.vars_ == b.vars_; }

 private:
  std::vector<Var> vars_;
  std::unordered_map<Var, std::size_t> index_;
};

// Copies the listed source slots into consecutive destination slots 0..n-1.
PackedMemory extract(const PackedMemory& p, const std::vector<std::size_t>& slots);

// In-place transpose of a 64x64 bit matrix (row i, bit j) -> (row j, bit i).
void transpose64(std::array<std::uint64_t, 64>& rows);

}  // namespace ovt
