#include "overture/checks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "overture/error.hpp"

namespace ovt {

namespace {

using u128 = unsigned __int128;

struct Group {
  std::uint64_t count = 0;
  std::map<PackedMemory, std::uint64_t> inner;
};

std::map<PackedMemory, Group> grouped(const Pmf& p, const PackedMemory& outer, const PackedMemory& inner) {
  std::map<PackedMemory, Group> out;
  for (const auto& [m, c] : p.entries()) {
    Group& g = out[m.masked(outer)];
    g.count += c;
    g.inner[m.masked(inner)] += c;
  }
  return out;
}

std::uint64_t lookup(const std::map<PackedMemory, std::uint64_t>& m, const PackedMemory& k) {
  const auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

bool same_ratio(std::uint64_t a, std::uint64_t ta, std::uint64_t b, std::uint64_t tb) {
  return static_cast<u128>(a) * tb == static_cast<u128>(b) * ta;
}

VarSet of_kind(const VarSet& xs, VarKind kind) {
  VarSet out;
  for (const Var& x : xs) {
    if (x.kind == kind) out.insert(x);
  }
  return out;
}

VarSet united(std::initializer_list<VarSet> parts) {
  VarSet out;
  for (const auto& p : parts) out.insert(p.begin(), p.end());
  return out;
}

VarSet minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  for (const Var& x : a) {
    if (!b.contains(x)) out.insert(x);
  }
  return out;
}

VarSet secrets_of(const PreprocPredicate& preproc, const Protocol& pi) {
  return of_kind(bd_domain(pi, preproc), VarKind::Secret);
}

}  // namespace

std::string Witness::to_string() const {
  std::ostringstream os;
  for (const auto& [label, m] : memories) os << "  " << label << " = " << m.to_string() << "\n";
  if (lhs) os << "  lhs = " << prob_to_string(*lhs) << "\n";
  if (rhs) os << "  rhs = " << prob_to_string(*rhs) << "\n";
  if (!note.empty()) os << "  " << note << "\n";
  return os.str();
}

Verdict Verdict::pass(std::string property, std::string detail) { return {std::move(property), true, std::move(detail), {}}; }

Verdict Verdict::fail(std::string property, std::string detail, Witness w) {
  return {std::move(property), false, std::move(detail), std::move(w)};
}

std::string Verdict::to_string() const {
  std::string out = property + ": " + (ok ? "true" : "false");
  if (!detail.empty()) out += " (" + detail + ")";
  out += "\n";
  if (witness) out += "witness:\n" + witness->to_string();
  return out;
}

Verdict check_passive_correct(const Protocol& pi, const Functionality& f, const PreprocPredicate& preproc,
                              const EngineOptions& options) {
  const VarSet dom = united({f.inputs(), f.outputs()});
  const Pmf p = bd(pi, preproc, dom, options);
  const Layout& l = p.layout();
  const auto groups = grouped(p, l.mask(f.inputs()), l.mask(f.outputs()));
  for (const Memory& s : all_memories(f.inputs())) {
    const Memory& want = f(s);
    const auto it = groups.find(l.pack(s));
    const std::uint64_t total = it == groups.end() ? 0 : it->second.count;
    const std::uint64_t hit = it == groups.end() ? 0 : lookup(it->second.inner, l.pack(want));
    if (total == 0 || hit != total) {
      Witness w{{{"m", s}, {"F(m)", want}}, make_prob(hit, total), Prob(1), ""};
      if (it != groups.end()) {
        for (const auto& [o, c] : it->second.inner) {
          if (o != l.pack(want)) {
            w.memories.emplace_back("observed", l.unpack(o, l.mask(f.outputs())));
            break;
          }
        }
      } else {
        w.note = "secret memory has probability 0";
      }
      return Verdict::fail("passive-correct", "BD(F(m) | m) != 1", std::move(w));
    }
  }
  return Verdict::pass("passive-correct", std::to_string(std::size_t{1} << f.inputs().size()) + " secret memories");
}

Verdict check_passive_correct(const Protocol& pi, const Functionality& f) {
  return check_passive_correct(pi, f, PreprocPredicate::default_for(pi));
}

Verdict check_nimo(const Protocol& pi, const Partition& part, const PreprocPredicate& preproc,
                   const EngineOptions& options) {
  const VarSet s = secrets_of(preproc, pi);
  const VarSet s_c = owned_by(s, part.corrupt);
  const VarSet s_h = minus(s, s_c);
  const VarSet o = pi.outputs();
  const VarSet v = corrupt_views(pi, part);
  const Pmf p = bd(pi, preproc, united({s, o, v}), options);
  const Layout& l = p.layout();
  const PackedMemory k1 = l.mask(united({s_c, o}));
  const PackedMemory k2 = l.mask(united({s_c, o, v}));
  const PackedMemory inner = l.mask(s_h);
  const auto g1 = grouped(p, k1, inner);
  const auto g2 = grouped(p, k2, inner);
  for (const auto& [key2, grp2] : g2) {
    const Group& grp1 = g1.at(key2.masked(k1));
    for (const auto& [sh, c1] : grp1.inner) {
      const std::uint64_t c2 = lookup(grp2.inner, sh);
      if (!same_ratio(c1, grp1.count, c2, grp2.count)) {
        Witness w{{{"m1", l.unpack(key2, k1)}, {"m2", l.unpack(key2, l.mask(v))}, {"s_H", l.unpack(sh, inner)}},
                  make_prob(c1, grp1.count), make_prob(c2, grp2.count),
                  "P(s_H | m1) != P(s_H | m1 + m2)"};
        return Verdict::fail("nimo", part.to_string(), std::move(w));
      }
    }
  }
  return Verdict::pass("nimo", part.to_string());
}

Verdict check_nimo(const Protocol& pi, const Partition& part) {
  return check_nimo(pi, part, PreprocPredicate::default_for(pi));
}

Verdict check_gradual_release(const Protocol& pi, const Partition& part, const PreprocPredicate& preproc,
                              const EngineOptions& options) {
  const VarSet s_h = owned_by(secrets_of(preproc, pi), part.honest);
  const VarSet m_c = owned_by(pi.messages(), part.corrupt);
  const Pmf p = bd(pi, preproc, united({s_h, m_c}), options);
  Verdict v = check_independent(p, m_c, s_h);
  v.property = "gradual-release";
  v.detail = part.to_string() + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

Verdict check_gradual_release(const Protocol& pi, const Partition& part) {
  return check_gradual_release(pi, part, PreprocPredicate::default_for(pi));
}

Verdict check_cond_det(const Pmf& p, const VarSet& given, const VarSet& target) {
  const Layout& l = p.layout();
  const PackedMemory km = l.mask(given), tm = l.mask(target);
  for (const auto& [k, g] : grouped(p, km, tm)) {
    if (g.inner.size() > 1) {
      const auto a = g.inner.begin();
      const auto b = std::next(a);
      Witness w{{{"given", l.unpack(k, km)}, {"m_a", l.unpack(a->first, tm)}, {"m_b", l.unpack(b->first, tm)}},
                make_prob(a->second, g.count), make_prob(b->second, g.count),
                "two target realizations with positive probability"};
      return Verdict::fail("cond-det", "", std::move(w));
    }
  }
  return Verdict::pass("cond-det");
}

Verdict check_cond_uni(const Pmf& p, const VarSet& given, const VarSet& target) {
  const Layout& l = p.layout();
  const PackedMemory km = l.mask(given), tm = l.mask(target);
  if (target.size() >= 63) throw BudgetError("uniformity over too many variables");
  const std::uint64_t n = std::uint64_t{1} << target.size();
  for (const auto& [k, g] : grouped(p, km, tm)) {
    for (const auto& [m, c] : g.inner) {
      if (m.any_bot() || !same_ratio(c, g.count, 1, n) || g.inner.size() != n) {
        Witness w{{{"given", l.unpack(k, km)}, {"m", l.unpack(m, tm)}}, make_prob(c, g.count), make_prob(1, n),
                  std::to_string(g.inner.size()) + " of " + std::to_string(n) + " realizations reached"};
        return Verdict::fail("cond-uni", "", std::move(w));
      }
    }
  }
  return Verdict::pass("cond-uni");
}

Verdict check_cond_sep(const Pmf& p, const VarSet& given, const VarSet& x2, const VarSet& x3) {
  const Layout& l = p.layout();
  const PackedMemory km = l.mask(given), m2 = l.mask(x2), m3 = l.mask(x3);
  const PackedMemory both = l.mask(united({x2, x3}));
  for (const auto& [k, g] : grouped(p, km, both)) {
    std::map<PackedMemory, std::uint64_t> a, b;
    for (const auto& [m, c] : g.inner) {
      a[m.masked(m2)] += c;
      b[m.masked(m3)] += c;
    }
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        PackedMemory joint = ma;
        for (int w = 0; w < 2; ++w) {
          joint.val[w] |= mb.val[w];
          joint.bot[w] |= mb.bot[w];
        }
        const std::uint64_t cj = lookup(g.inner, joint);
        if (static_cast<u128>(cj) * g.count != static_cast<u128>(ca) * cb) {
          Witness w{{{"given", l.unpack(k, km)}, {"m2", l.unpack(ma, m2)}, {"m3", l.unpack(mb, m3)}},
                    make_prob(cj, g.count), make_prob(ca, g.count) * make_prob(cb, g.count),
                    "joint != product of conditionals"};
          return Verdict::fail("cond-sep", "", std::move(w));
        }
      }
    }
  }
  return Verdict::pass("cond-sep");
}

Verdict check_independent(const Pmf& p, const VarSet& x1, const VarSet& x2) {
  Verdict v = check_cond_sep(p, {}, x1, x2);
  v.property = "independent";
  if (v.witness) v.witness->memories.erase(v.witness->memories.begin());
  return v;
}

bool TacticReport::ok() const {
  return det.ok && sep.ok && std::all_of(uni.begin(), uni.end(), [](const Verdict& v) { return v.ok; });
}

std::string TacticReport::to_string() const {
  std::string out = det.to_string();
  for (const auto& u : uni) out += u.to_string();
  return out + sep.to_string();
}

TacticReport and_gate_tactic(const Protocol& gate, const std::string& x, const std::string& y,
                             const std::string& z) {
  const VarSet written = gate.messages();
  for (std::uint32_t i : {1u, 2u}) {
    if (!written.contains(Var::message(z, i))) throw UsageError("gate does not write m[" + z + "]@" + std::to_string(i));
  }
  const Pmf p = bd(gate, PreprocPredicate::uniform_for(gate))
                    .with_global_view(x)
                    .with_global_view(y)
                    .with_global_view(z);
  const VarSet in{Var::global_view(x), Var::global_view(y)};
  const VarSet out{Var::global_view(z)};
  TacticReport r{check_cond_det(p, in, out), {}, {}};
  r.det.property = "and-tactic det";
  for (std::uint32_t i : {1u, 2u}) {
    Verdict u = check_cond_uni(p, in, {Var::message(z, i)});
    u.property = "and-tactic uni@" + std::to_string(i);
    r.uni.push_back(std::move(u));
  }
  r.sep = check_cond_sep(p, in, out, {Var::message(z, 1), Var::message(z, 2)});
  r.sep.property = "and-tactic sep";
  return r;
}

Verdict check_and_gate_tactic(const Protocol& gate, const std::string& x, const std::string& y,
                              const std::string& z) {
  const TacticReport r = and_gate_tactic(gate, x, y, z);
  if (!r.det.ok) return r.det;
  for (const auto& u : r.uni) {
    if (!u.ok) return u;
  }
  if (!r.sep.ok) return r.sep;
  return Verdict::pass("and-tactic", "det, uni@1, uni@2, sep");
}

std::string InvariantReport::to_string() const { return det.to_string() + uni.to_string() + sep.to_string(); }

InvariantReport gmw_invariant(const Protocol& prefix, const std::string& w, const Partition& part,
                              CorruptMessages m_c) {
  const PreprocPredicate pre = PreprocPredicate::default_for(prefix);
  const Pmf p = bd(prefix, pre).with_global_view(w);
  const VarSet s = secrets_of(pre, prefix);
  const VarSet held = m_c == CorruptMessages::Received ? of_kind(corrupt_views(prefix, part), VarKind::Mesg)
                                                      : owned_by(prefix.messages(), part.corrupt);
  InvariantReport r{check_cond_det(p, s, {Var::global_view(w)}), check_cond_uni(p, s, held),
                    check_cond_sep(p, s, {Var::global_view(w)}, {Var::message(w, 1), Var::message(w, 2)})};
  const std::string c = " " + part.to_string();
  r.det.property = "gmw-invariant det" + c;
  r.uni.property = "gmw-invariant uni" + c;
  r.sep.property = "gmw-invariant sep" + c;
  return r;
}

Verdict check_gmw_invariant(const Protocol& prefix, const std::string& w, const Partition& part,
                            CorruptMessages m_c) {
  const InvariantReport r = gmw_invariant(prefix, w, part, m_c);
  for (const Verdict* v : {&r.det, &r.uni, &r.sep}) {
    if (!v->ok) return *v;
  }
  return Verdict::pass("gmw-invariant", part.to_string());
}

const char* reading_name(Reading r) { return r == Reading::PerDraw ? "per-draw" : "marginal"; }

namespace {

struct AdvSetup {
  VarSet initial;    // preprocessing and flips
  VarSet s;          // secrets
  VarSet s_c, s_h;
  VarSet v_ch, v_hc, o_h;
};

AdvSetup setup(const Protocol& pi, const Partition& part, const PreprocPredicate& preproc) {
  AdvSetup a;
  a.initial = united({preproc.domain(), pi.flips()});
  a.s = of_kind(a.initial, VarKind::Secret);
  a.s_c = owned_by(a.s, part.corrupt);
  a.s_h = minus(a.s, a.s_c);
  a.v_ch = honest_views(pi, part);
  a.v_hc = corrupt_views(pi, part);
  a.o_h = owned_by(pi.outputs(), part.honest);
  return a;
}

// Defined honest-to-corrupt views and honest outputs of one adversarial run.
VarSet defined_in(const Layout& l, const PackedMemory& m, const VarSet& xs) {
  VarSet out;
  for (const Var& x : xs) {
    if (!m.is_bot(l.slot(x))) out.insert(x);
  }
  return out;
}

std::string strategy_label(const AdversaryStrategy& a) {
  const std::string s = a.to_string();
  return s.empty() ? "identity" : s;
}

}  // namespace

Verdict check_cheating_detection(const Protocol& pi, const Partition& part,
                                 const std::vector<AdversaryStrategy>& strategies, const PreprocPredicate& preproc,
                                 const AdversarialOptions& options) {
  const AdvSetup a = setup(pi, part, preproc);
  const VarSet pinned = options.reading == Reading::PerDraw ? minus(a.initial, a.s_c) : VarSet{};
  const VarSet project = united({pinned, a.v_ch, a.v_hc, a.o_h});
  if (project.size() > kMaxSlots) throw BudgetError("cheating detection needs more than 128 slots");
  const Pmf passive = bd(pi, preproc, project, options.engine);
  const Layout& l = passive.layout();

  std::map<VarSet, VarSet> inputs_of;
  std::map<VarSet, PackedMap<bool>> passive_keys;
  std::size_t failing = 0;
  std::optional<Witness> first;
  for (const AdversaryStrategy& adv : strategies) {
    const Pmf p = bd_adv(pi, adv, part, preproc, project, options.engine);
    bool bad = false;
    for (const auto& [m, c] : p.entries()) {
      const VarSet x_h = defined_in(l, m, united({a.v_hc, a.o_h}));
      auto it = inputs_of.find(x_h);
      if (it == inputs_of.end()) {
        it = inputs_of.emplace(x_h, adversarial_inputs(pi, part, x_h, options.inputs, &passive)).first;
      }
      const VarSet& x_c = it->second;
      auto pk = passive_keys.find(x_c);
      if (pk == passive_keys.end()) {
        const PackedMemory mask = l.mask(united({pinned, x_c}));
        PackedMap<bool> keys;
        for (const auto& [pm, pc] : passive.entries()) keys[pm.masked(mask)] = true;
        pk = passive_keys.emplace(x_c, std::move(keys)).first;
      }
      const PackedMemory mask = l.mask(united({pinned, x_c}));
      if (!pk->second.contains(m.masked(mask))) {
        bad = true;
        if (!first) {
          first = Witness{{{"X_C", l.unpack(m, l.mask(x_c))}, {"X_H", l.unpack(m, l.mask(x_h))}},
                          std::nullopt, std::nullopt,
                          "strategy " + strategy_label(adv) + ": no passive run agrees on the adversarial inputs"};
          if (!pinned.empty()) first->memories.emplace_back("draw", l.unpack(m, l.mask(pinned)));
        }
        break;
      }
    }
    if (bad) ++failing;
  }
  const std::string detail = std::string(reading_name(options.reading)) + ", " + part.to_string() + ", " +
                             std::to_string(failing) + "/" + std::to_string(strategies.size()) +
                             " strategies undetected";
  if (failing == 0) return Verdict::pass("cheating-detection", detail);
  return Verdict::fail("cheating-detection", detail, std::move(*first));
}

Verdict check_integrity(const Protocol& pi, const Partition& part, const std::vector<AdversaryStrategy>& strategies,
                        const PreprocPredicate& preproc, const AdversarialOptions& options) {
  const AdvSetup a = setup(pi, part, preproc);
  const VarSet d_h = options.reading == Reading::PerDraw ? minus(owned_by(preproc.domain(), part.honest), a.s)
                                                         : VarSet{};
  const VarSet x_all = united({a.v_hc, a.o_h});
  const VarSet project = united({a.s, d_h, a.v_ch, x_all});
  if (project.size() > kMaxSlots) throw BudgetError("integrity needs more than 128 slots");
  const Pmf passive = bd(pi, preproc, project, options.engine);
  const Layout& l = passive.layout();

  const PackedMemory passive_key = l.mask(united({a.s, d_h}));
  const PackedMemory honest_key = l.mask(united({a.s_h, d_h}));
  const PackedMemory adv_key = l.mask(united({a.s_h, d_h, a.v_ch}));
  // Passive conditionals of every X given m' over S u D_H, indexed by their honest part.
  std::map<VarSet, std::map<PackedMemory, std::vector<const Group*>>> by_honest;
  std::map<VarSet, std::map<PackedMemory, Group>> passive_groups;
  auto candidates = [&](const VarSet& x) -> const std::map<PackedMemory, std::vector<const Group*>>& {
    auto it = by_honest.find(x);
    if (it != by_honest.end()) return it->second;
    auto& groups = passive_groups[x] = grouped(passive, passive_key, l.mask(x));
    auto& index = by_honest[x];
    for (const auto& [k, g] : groups) index[k.masked(honest_key)].push_back(&g);
    return index;
  };

  std::size_t failing = 0;
  std::optional<Witness> first;
  for (const AdversaryStrategy& adv : strategies) {
    const Pmf p = bd_adv(pi, adv, part, preproc, project, options.engine);
    std::map<PackedMemory, std::vector<Pmf::Entry>> by_key;
    for (const auto& e : p.entries()) by_key[e.first.masked(adv_key)].push_back(e);
    bool bad = false;
    for (const auto& [k, rows] : by_key) {
      std::map<VarSet, bool> done;
      for (const auto& [m, c] : rows) {
        const VarSet x = defined_in(l, m, x_all);
        if (done[x]) continue;
        done[x] = true;
        Group want;
        for (const auto& [m2, c2] : rows) {
          want.count += c2;
          want.inner[m2.masked(l.mask(x))] += c2;
        }
        const auto& index = candidates(x);
        const auto it = index.find(k.masked(honest_key));
        bool matched = false;
        if (it != index.end()) {
          for (const Group* g : it->second) {
            if (g->inner.size() != want.inner.size()) continue;
            bool same = true;
            for (const auto& [xm, xc] : want.inner) {
              if (!same_ratio(xc, want.count, lookup(g->inner, xm), g->count)) {
                same = false;
                break;
              }
            }
            if (same) {
              matched = true;
              break;
            }
          }
        }
        if (!matched) {
          bad = true;
          if (!first) {
            const auto& [xm, xc] = *want.inner.begin();
            first = Witness{{{"condition", l.unpack(k, adv_key)}, {"X", l.unpack(xm, l.mask(x))}},
                            make_prob(xc, want.count), std::nullopt,
                            "strategy " + strategy_label(adv) +
                                ": no secret memory reproduces the adversarial conditional of X"};
          }
          break;
        }
      }
      if (bad) break;
    }
    if (bad) ++failing;
  }
  const std::string detail = std::string(reading_name(options.reading)) + ", " + part.to_string() + ", " +
                             std::to_string(failing) + "/" + std::to_string(strategies.size()) +
                             " strategies violate";
  if (failing == 0) return Verdict::pass("integrity", detail);
  return Verdict::fail("integrity", detail, std::move(*first));
}

}  // namespace ovt
