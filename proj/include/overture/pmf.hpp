#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "overture/packed.hpp"

namespace ovt {

using Prob = boost::rational<std::int64_t>;

std::string prob_to_string(const Prob& p);

// Exact pmf over the F2 memories of a fixed variable set. Weights are integer
// counts over a common total, so P(m) = count(m) / total.
class Pmf {
 public:
  using Entry = std::pair<PackedMemory, std::uint64_t>;

  Pmf() = default;
  // Entries with equal memories are merged; zero counts are dropped.
  Pmf(Layout layout, std::vector<Entry> entries);

  // Uniform over the given memories, counted with multiplicity.
  static Pmf uniform(const std::vector<Memory>& memories);
  static Pmf weighted(const std::vector<std::pair<Memory, std::uint64_t>>& memories);

  const Layout& layout() const { return layout_; }
  VarSet domain() const { return layout_.domain(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  std::uint64_t total() const { return total_; }

  // Marginal probability of a (partial) realization.
  Prob prob(const Memory& m) const;
  std::uint64_t count(const Memory& m) const;
  // P(m1 | m2), zero when P(m2) = 0.
  Prob conditional(const Memory& m1, const Memory& m2) const;

  Pmf marginal(const VarSet& xs) const;
  // Conditional pmf of xs given the realization m2 (empty pmf with total 0 when P(m2) = 0).
  Pmf given(const VarSet& xs, const Memory& m2) const;

  // |- X1 * X2
  bool independent(const VarSet& x1, const VarSet& x2) const;
  bool cond_det(const VarSet& x1, const VarSet& x2) const;
  bool cond_uni(const VarSet& x1, const VarSet& x2) const;
  bool cond_sep(const VarSet& x1, const VarSet& x2, const VarSet& x3) const;

  // Adds the synthetic <m[w]> = m[w]@1 + m[w]@2 column (bottom if either share is).
  Pmf with_global_view(const std::string& w) const;
  // Distribution of <m[w]> alone.
  Pmf global_view_pmf(const std::string& w) const;

  // Total mass of memories with at least one bottom cell.
  Prob bottom_mass() const;

  // One line per support memory: sorted var=val pairs, then weight=N/D.
  std::string dump() const;

  bool operator==(const Pmf& other) const;

 private:
  Layout layout_;
  std::vector<Entry> entries_;  // sorted by memory
  std::uint64_t total_ = 0;
};

// Mass and conditioning witnesses use the same rational type.
Prob make_prob(std::uint64_t num, std::uint64_t den);

}  // namespace ovt
