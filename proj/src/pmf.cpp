#include "overture/pmf.hpp"

#include <algorithm>
#include <map>

#include "overture/error.hpp"

namespace ovt {

namespace {

using u128 = unsigned __int128;

bool disjoint(const VarSet& a, const VarSet& b) {
  return std::none_of(a.begin(), a.end(), [&](const Var& x) { return b.contains(x); });
}

struct Group {
  std::uint64_t count = 0;
  PackedMap<std::uint64_t> inner;
};

// Counts grouped by the realization of `outer`, with counts of `inner` inside each group.
PackedMap<Group> grouped(const std::vector<Pmf::Entry>& entries, const PackedMemory& outer,
                         const PackedMemory& inner) {
  PackedMap<Group> out;
  for (const auto& [m, c] : entries) {
    Group& g = out[m.masked(outer)];
    g.count += c;
    g.inner[m.masked(inner)] += c;
  }
  return out;
}

PackedMap<std::uint64_t> counts(const std::vector<Pmf::Entry>& entries, const PackedMemory& mask) {
  PackedMap<std::uint64_t> out;
  for (const auto& [m, c] : entries) out[m.masked(mask)] += c;
  return out;
}

PackedMemory combine(const PackedMemory& a, const PackedMemory& b) {
  return {{a.val[0] | b.val[0], a.val[1] | b.val[1]}, {a.bot[0] | b.bot[0], a.bot[1] | b.bot[1]}};
}

}  // namespace

std::string prob_to_string(const Prob& p) {
  return std::to_string(p.numerator()) + "/" + std::to_string(p.denominator());
}

Prob make_prob(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return Prob(0);
  return Prob(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Pmf::Pmf(Layout layout, std::vector<Entry> entries) : layout_(std::move(layout)) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& e : entries) {
    if (e.second == 0) continue;
    total_ += e.second;
    if (!entries_.empty() && entries_.back().first == e.first) {
      entries_.back().second += e.second;
    } else {
      entries_.push_back(e);
    }
  }
}

Pmf Pmf::uniform(const std::vector<Memory>& memories) {
  std::vector<std::pair<Memory, std::uint64_t>> w;
  w.reserve(memories.size());
  for (const auto& m : memories) w.emplace_back(m, 1);
  return weighted(w);
}

Pmf Pmf::weighted(const std::vector<std::pair<Memory, std::uint64_t>>& memories) {
  if (memories.empty()) throw UsageError("a pmf needs at least one memory");
  const VarSet dom = memories.front().first.domain();
  Layout layout(std::vector<Var>(dom.begin(), dom.end()));
  std::vector<Entry> entries;
  entries.reserve(memories.size());
  for (const auto& [m, w] : memories) {
    if (m.domain() != dom) throw UsageError("memories of a pmf share one domain");
    entries.emplace_back(layout.pack(m), w);
  }
  return Pmf(std::move(layout), std::move(entries));
}

std::uint64_t Pmf::count(const Memory& m) const {
  const PackedMemory mask = layout_.mask(m.domain());
  const PackedMemory key = layout_.pack(m);
  std::uint64_t c = 0;
  for (const auto& [p, n] : entries_) {
    if (p.masked(mask) == key) c += n;
  }
  return c;
}

Prob Pmf::prob(const Memory& m) const { return make_prob(count(m), total_); }

Prob Pmf::conditional(const Memory& m1, const Memory& m2) const {
  if (!disjoint(m1.domain(), m2.domain())) throw UsageError("conditional needs disjoint variable sets");
  const std::uint64_t den = count(m2);
  if (den == 0) return Prob(0);
  return make_prob(count(m1 | m2), den);
}

Pmf Pmf::marginal(const VarSet& xs) const {
  for (const Var& x : xs) {
    if (!layout_.contains(x)) throw UsageError("marginal over " + x.to_string() + " outside the domain");
  }
  const std::vector<std::size_t> slots = layout_.slots(xs);
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [m, c] : entries_) out.emplace_back(extract(m, slots), c);
  return Pmf(Layout(std::vector<Var>(xs.begin(), xs.end())), std::move(out));
}

Pmf Pmf::given(const VarSet& xs, const Memory& m2) const {
  if (!disjoint(xs, m2.domain())) throw UsageError("conditional needs disjoint variable sets");
  const PackedMemory mask = layout_.mask(m2.domain());
  const PackedMemory key = layout_.pack(m2);
  const std::vector<std::size_t> slots = layout_.slots(xs);
  std::vector<Entry> out;
  for (const auto& [m, c] : entries_) {
    if (m.masked(mask) == key) out.emplace_back(extract(m, slots), c);
  }
  return Pmf(Layout(std::vector<Var>(xs.begin(), xs.end())), std::move(out));
}

bool Pmf::independent(const VarSet& x1, const VarSet& x2) const {
  if (!disjoint(x1, x2)) throw UsageError("independence needs disjoint variable sets");
  const PackedMemory m1 = layout_.mask(x1);
  const PackedMemory m2 = layout_.mask(x2);
  const auto c1 = counts(entries_, m1);
  const auto c2 = counts(entries_, m2);
  const auto c12 = counts(entries_, combine(m1, m2));
  // Every realization outside the product of supports has zero on both sides.
  if (c12.size() != c1.size() * c2.size()) return false;
  for (const auto& [a, ca] : c1) {
    for (const auto& [b, cb] : c2) {
      const auto it = c12.find(combine(a, b));
      const std::uint64_t joint = it == c12.end() ? 0 : it->second;
      if (u128(joint) * total_ != u128(ca) * cb) return false;
    }
  }
  return true;
}

bool Pmf::cond_det(const VarSet& x1, const VarSet& x2) const {
  const auto g = grouped(entries_, layout_.mask(x1), layout_.mask(x2));
  return std::all_of(g.begin(), g.end(), [](const auto& kv) { return kv.second.inner.size() == 1; });
}

bool Pmf::cond_uni(const VarSet& x1, const VarSet& x2) const {
  if (x2.size() >= 63) throw UsageError("uniformity over too many variables");
  const std::uint64_t n = std::uint64_t{1} << x2.size();
  const auto g = grouped(entries_, layout_.mask(x1), layout_.mask(x2));
  for (const auto& [k, group] : g) {
    if (group.inner.size() != n) return false;
    for (const auto& [m, c] : group.inner) {
      if (m.any_bot() || u128(c) * n != group.count) return false;
    }
  }
  return true;
}

bool Pmf::cond_sep(const VarSet& x1, const VarSet& x2, const VarSet& x3) const {
  const PackedMemory k1 = layout_.mask(x1);
  const PackedMemory k2 = layout_.mask(x2);
  const PackedMemory k3 = layout_.mask(x3);
  struct Triple {
    std::uint64_t count = 0;
    PackedMap<std::uint64_t> c2, c3, c23;
  };
  PackedMap<Triple> groups;
  for (const auto& [m, c] : entries_) {
    Triple& t = groups[m.masked(k1)];
    t.count += c;
    t.c2[m.masked(k2)] += c;
    t.c3[m.masked(k3)] += c;
    t.c23[m.masked(combine(k2, k3))] += c;
  }
  for (const auto& [k, t] : groups) {
    for (const auto& [a, ca] : t.c2) {
      for (const auto& [b, cb] : t.c3) {
        // Overlapping X2 and X3 must agree on shared slots to be a realization.
        const PackedMemory ab = combine(a, b);
        if (ab.masked(k2) != a || ab.masked(k3) != b) continue;
        const auto it = t.c23.find(ab);
        const std::uint64_t joint = it == t.c23.end() ? 0 : it->second;
        if (u128(joint) * t.count != u128(ca) * cb) return false;
      }
    }
  }
  return true;
}

Pmf Pmf::with_global_view(const std::string& w) const {
  const Var g = Var::global_view(w);
  if (layout_.contains(g)) return *this;
  const auto s1 = layout_.find(Var::message(w, 1));
  const auto s2 = layout_.find(Var::message(w, 2));
  if (!s1 || !s2) throw UsageError("global view <m[" + w + "]> needs both m[" + w + "]@1 and m[" + w + "]@2");
  std::vector<Var> vars = layout_.vars();
  vars.push_back(g);
  const std::size_t slot = layout_.size();
  Layout layout(std::move(vars));
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (auto [m, c] : entries_) {
    if (m.is_bot(*s1) || m.is_bot(*s2)) {
      m.set_bot(slot);
    } else {
      m.set(slot, m.get(*s1) != m.get(*s2));
    }
    out.emplace_back(m, c);
  }
  return Pmf(std::move(layout), std::move(out));
}

Pmf Pmf::global_view_pmf(const std::string& w) const {
  return with_global_view(w).marginal({Var::global_view(w)});
}

Prob Pmf::bottom_mass() const {
  std::uint64_t c = 0;
  for (const auto& [m, n] : entries_) {
    if (m.any_bot()) c += n;
  }
  return make_prob(c, total_);
}

std::string Pmf::dump() const {
  std::vector<std::string> lines;
  lines.reserve(entries_.size());
  for (const auto& [m, c] : entries_) {
    std::string mem = layout_.unpack(m).to_string();
    lines.push_back(mem + (mem.empty() ? "" : " ") + "weight=" + prob_to_string(make_prob(c, total_)));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

bool Pmf::operator==(const Pmf& other) const {
  if (domain() != other.domain() || entries_.size() != other.entries_.size()) return false;
  std::vector<Entry> theirs;
  if (layout_ == other.layout_) {
    theirs = other.entries_;
  } else {
    theirs.reserve(other.entries_.size());
    for (const auto& [m, c] : other.entries_) theirs.emplace_back(layout_.pack(other.layout_.unpack(m)), c);
    std::sort(theirs.begin(), theirs.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first != theirs[i].first) return false;
    if (u128(entries_[i].second) * other.total_ != u128(theirs[i].second) * total_) return false;
  }
  return true;
}

}  // namespace ovt
