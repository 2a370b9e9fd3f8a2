#include "overture/adversary.hpp"

#include <limits>
#include <map>

#include "overture/error.hpp"

namespace ovt {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out = saturating_mul(out, base);
  return out;
}

std::uint64_t tables_for(const DecisionPoint& p) {
  if (p.inputs.size() >= 6) return std::numeric_limits<std::uint64_t>::max();
  return pow_sat(2, std::uint64_t{1} << p.inputs.size());
}

}  // namespace

std::vector<DecisionPoint> decision_points(const Protocol& pi, const Partition& part, DecisionScope scope) {
  const VarSet visible = honest_views(pi, part);
  std::vector<DecisionPoint> out;
  const auto cmds = pi.commands();
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const auto x = target(cmds[i]);
    if (!x || !part.is_corrupt(computing_client(cmds[i]))) continue;
    if (scope == DecisionScope::Visible && !visible.contains(*x)) continue;
    DecisionPoint p{i, *x, {}};
    for (const Var& y : reads(cmds[i])) {
      if (y.kind == VarKind::Reveal || part.is_corrupt(y.owner)) p.inputs.push_back(y);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t family_size(const Protocol& pi, const Partition& part, const FamilyOptions& options) {
  const auto points = decision_points(pi, part, options.scope);
  std::uint64_t n = pow_sat(3, points.size());
  if (!points.empty() && points.size() <= options.budget) {
    std::uint64_t t = 1;
    for (const auto& p : points) t = saturating_mul(t, tables_for(p));
    n = n > std::numeric_limits<std::uint64_t>::max() - t ? std::numeric_limits<std::uint64_t>::max() : n + t;
  }
  return n;
}

std::vector<AdversaryStrategy> enumerate_adversaries(const Protocol& pi, const Partition& part,
                                                     const FamilyOptions& options) {
  const std::uint64_t n = family_size(pi, part, options);
  if (n > options.cap) {
    throw BudgetError("adversary family of size " + std::to_string(n) + " exceeds the cap " +
                      std::to_string(options.cap));
  }
  const auto points = decision_points(pi, part, options.scope);
  std::vector<AdversaryStrategy> out;
  out.reserve(n);

  const std::uint64_t constants = pow_sat(3, points.size());
  for (std::uint64_t code = 0; code < constants; ++code) {
    AdversaryStrategy a;
    std::uint64_t c = code;
    for (const auto& p : points) {
      const std::uint64_t digit = c % 3;
      c /= 3;
      if (digit != 0) a.set(p.command, Replacement::constant(static_cast<std::uint32_t>(digit - 1)));
    }
    out.push_back(std::move(a));
  }

  if (points.empty() || points.size() > options.budget) return out;
  std::vector<std::uint64_t> radix;
  std::uint64_t total = 1;
  for (const auto& p : points) {
    radix.push_back(tables_for(p));
    total = saturating_mul(total, radix.back());
  }
  for (std::uint64_t code = 0; code < total; ++code) {
    AdversaryStrategy a;
    std::uint64_t c = code;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const std::uint64_t fn = c % radix[k];
      c /= radix[k];
      std::vector<std::uint8_t> table(std::size_t{1} << points[k].inputs.size());
      for (std::size_t row = 0; row < table.size(); ++row) table[row] = (fn >> row) & 1;
      a.set(points[k].command, Replacement::lookup(points[k].inputs, std::move(table)));
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

VarSet data_flow_inputs(const Protocol& pi, const Partition& part, const VarSet& x_h) {
  const VarSet boundary = honest_views(pi, part);
  const auto cmds = pi.commands();
  std::map<Var, std::size_t> writer;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (const auto x = target(cmds[i])) writer[*x] = i;
  }

  VarSet out;
  std::vector<bool> visited(cmds.size(), false);
  std::vector<std::size_t> work;
  auto visit_var = [&](const Var& y) {
    if (boundary.contains(y)) {
      out.insert(y);
      return;
    }
    const auto it = writer.find(y);
    if (it == writer.end()) return;
    if (!part.is_corrupt(computing_client(cmds[it->second]))) work.push_back(it->second);
  };
  auto visit_cmd = [&](std::size_t i) {
    if (visited[i]) return;
    visited[i] = true;
    for (const Var& y : reads(cmds[i])) visit_var(y);
    for (std::size_t j = 0; j < i; ++j) {
      if (std::holds_alternative<AssertCmd>(cmds[j]) && !part.is_corrupt(computing_client(cmds[j]))) {
        work.push_back(j);
      }
    }
  };
  for (const Var& x : x_h) visit_var(x);
  while (!work.empty()) {
    const std::size_t i = work.back();
    work.pop_back();
    visit_cmd(i);
  }
  return out;
}

VarSet statistical_inputs(const Protocol& pi, const Partition& part, const VarSet& x_h, const Pmf& passive) {
  const VarSet candidates = honest_views(pi, part);
  const VarSet dom = passive.domain();
  VarSet target;
  for (const Var& x : x_h) {
    if (dom.contains(x)) target.insert(x);
  }
  VarSet out;
  for (const Var& y : candidates) {
    if (dom.contains(y) && !passive.independent({y}, target)) out.insert(y);
  }
  bool grown = true;
  while (grown) {
    grown = false;
    VarSet both = target;
    both.insert(out.begin(), out.end());
    for (const Var& y : candidates) {
      if (out.contains(y) || !dom.contains(y)) continue;
      if (!passive.independent({y}, both)) {
        out.insert(y);
        grown = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

VarSet adversarial_inputs(const Protocol& pi, const Partition& part, const VarSet& x_h, InputsMode mode,
                          const Pmf* passive) {
  if (mode == InputsMode::DataFlow) return data_flow_inputs(pi, part, x_h);
  if (!passive) throw UsageError("statistical adversarial inputs need a passive pmf");
  return statistical_inputs(pi, part, x_h, *passive);
}

}  // namespace ovt
