#include "overture/packed.hpp"

#include "overture/error.hpp"

namespace ovt {

Layout::Layout(std::vector<Var> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxSlots) {
    throw UsageError("packed memories hold at most " + std::to_string(kMaxSlots) + " variables, got " +
                     std::to_string(vars_.size()));
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!index_.emplace(vars_[i], i).second) throw UsageError("duplicate variable " + vars_[i].to_string());
  }
}

std::optional<std::size_t> Layout::find(const Var& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Layout::slot(const Var& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) throw UsageError("variable " + x.to_string() + " is not in the domain");
  return it->second;
}

PackedMemory Layout::mask(const VarSet& xs) const {
  PackedMemory m;
  for (const Var& x : xs) m.set(slot(x), true);
  return m;
}

std::vector<std::size_t> Layout::slots(const VarSet& xs) const {
  std::vector<std::size_t> out;
  out.reserve(xs.size());
  for (const Var& x : xs) out.push_back(slot(x));
  return out;
}

PackedMemory Layout::pack(const Memory& m) const {
  PackedMemory p;
  for (const auto& [x, cell] : m) {
    const std::size_t s = slot(x);
    if (!cell) {
      p.set_bot(s);
    } else {
      if (cell->modulus() != 2) throw UnsupportedOperation("packed memories are F2 only");
      p.set(s, cell->value() != 0);
    }
  }
  return p;
}

Memory Layout::unpack(const PackedMemory& p, const PackedMemory& mask) const {
  Memory::Map cells;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!mask.get(i)) continue;
    cells.emplace(vars_[i], p.is_bot(i) ? Cell{} : Cell{FieldElem::bit(p.get(i))});
  }
  return Memory(std::move(cells));
}

Memory Layout::unpack(const PackedMemory& p) const {
  PackedMemory all;
  for (std::size_t i = 0; i < vars_.size(); ++i) all.set(i, true);
  return unpack(p, all);
}

PackedMemory extract(const PackedMemory& p, const std::vector<std::size_t>& slots) {
  PackedMemory out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (p.is_bot(slots[i])) {
      out.set_bot(i);
    } else if (p.get(slots[i])) {
      out.set(i, true);
    }
  }
  return out;
}

void transpose64(std::array<std::uint64_t, 64>& a) {
  std::uint64_t m = 0x00000000FFFFFFFFULL;
  for (std::size_t j = 32; j != 0; j >>= 1, m ^= m << j) {
    for (std::size_t k = 0; k < 64; k = (k + j + 1) & ~j) {
      const std::uint64_t t = ((a[k] >> j) ^ a[k + j]) & m;
      a[k] ^= t << j;
      a[k + j] ^= t;
    }
  }
}

}  // namespace ovt
