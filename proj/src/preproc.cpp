#include "overture/preproc.hpp"

#include <algorithm>

#include "overture/error.hpp"

namespace ovt {

bool Formula::eval(const Memory& m) const {
  switch (kind) {
    case Kind::Var: {
      const Cell& c = m.at(var);
      if (!c) throw EvalError("formula reads bottom at " + var.to_string());
      return c->value() != 0;
    }
    case Kind::Const: return value;
    case Kind::Xor: return args[0].eval(m) != args[1].eval(m);
    case Kind::And: return args[0].eval(m) && args[1].eval(m);
    case Kind::Not: return !args[0].eval(m);
  }
  return false;
}

VarSet Formula::vars() const {
  VarSet out;
  if (kind == Kind::Var) out.insert(var);
  for (const auto& a : args) {
    const VarSet sub = a.vars();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::string Formula::to_string() const {
  switch (kind) {
    case Kind::Var: return var.to_string();
    case Kind::Const: return value ? "1" : "0";
    case Kind::Xor: return "(" + args[0].to_string() + " xor " + args[1].to_string() + ")";
    case Kind::And: return "(" + args[0].to_string() + " and " + args[1].to_string() + ")";
    case Kind::Not: return "not " + args[0].to_string();
  }
  return "?";
}

PreprocPredicate::PreprocPredicate(std::string name, std::vector<Var> free,
                                   std::vector<std::pair<Var, Formula>> derived)
    : name_(std::move(name)), free_(std::move(free)), derived_(std::move(derived)) {
  if (free_.size() >= 63) throw BudgetError("too many free preprocessing variables");
  VarSet seen;
  for (const Var& x : free_) {
    if (!seen.insert(x).second) throw UsageError("duplicate preprocessing variable " + x.to_string());
  }
  for (const auto& [x, f] : derived_) {
    for (const Var& y : f.vars()) {
      if (!seen.contains(y)) throw UsageError(x.to_string() + " is derived from undefined " + y.to_string());
    }
    if (!seen.insert(x).second) throw UsageError("duplicate preprocessing variable " + x.to_string());
  }
}

PreprocPredicate PreprocPredicate::default_for(const Protocol& pi) {
  const VarSet s = pi.secrets();
  return {"default", {s.begin(), s.end()}, {}};
}

PreprocPredicate PreprocPredicate::uniform_for(const Protocol& pi) {
  VarSet vars = pi.secrets();
  const VarSet pre = pi.preprocessed();
  vars.insert(pre.begin(), pre.end());
  return uniform(vars);
}

PreprocPredicate PreprocPredicate::uniform(const VarSet& vars, std::string name) {
  return {std::move(name), {vars.begin(), vars.end()}, {}};
}

namespace {

Var share(const std::string& w, std::uint32_t i) { return Var::message(w + "s", i); }
Var mac(const std::string& w, std::uint32_t i) { return Var::message(w + "m", i); }
Var key(const std::string& w, std::uint32_t i) { return Var::message(w + "k", i); }
Var delta(std::uint32_t i) { return Var::message("delta", i); }

const char* const kLabels[] = {"a", "b", "c", "x", "y"};

}  // namespace

VarSet bdoz_domain() {
  VarSet out{Var::secret("x", 1), Var::secret("y", 2), delta(1), delta(2)};
  for (const char* w : kLabels) {
    for (std::uint32_t i : {1u, 2u}) {
      out.insert(share(w, i));
      out.insert(mac(w, i));
      out.insert(key(w, i));
    }
  }
  return out;
}

PreprocPredicate PreprocPredicate::bdoz(const BdozOptions& options) {
  using F = Formula;
  std::vector<Var> free{Var::secret("x", 1), Var::secret("y", 2), share("x", 1), share("y", 1),
                        share("a", 1),       share("a", 2),       share("b", 1), share("b", 2),
                        share("c", 1)};
  for (std::uint32_t i : {1u, 2u}) {
    for (const char* w : kLabels) free.push_back(key(w, i));
  }
  free.push_back(delta(1));
  free.push_back(delta(2));

  std::vector<std::pair<Var, Formula>> derived;
  derived.emplace_back(share("x", 2), F::of(Var::secret("x", 1)) ^ F::of(share("x", 1)));
  derived.emplace_back(share("y", 2), F::of(Var::secret("y", 2)) ^ F::of(share("y", 1)));
  derived.emplace_back(share("c", 2), ((F::of(share("a", 1)) ^ F::of(share("a", 2))) &
                                       (F::of(share("b", 1)) ^ F::of(share("b", 2)))) ^
                                          F::of(share("c", 1)));
  for (std::uint32_t i : {1u, 2u}) {
    const std::uint32_t other = 3 - i;
    for (const char* w : kLabels) {
      derived.emplace_back(mac(w, i), F::of(key(w, other)) ^ (F::of(delta(other)) & F::of(share(w, i))));
    }
  }
  PreprocPredicate p("bdoz", std::move(free), std::move(derived));
  for (const auto& [x, v] : options.fixed) p = p.fixed(x, v);
  return p;
}

PreprocPredicate PreprocPredicate::fixed(const Var& x, bool v) const {
  const auto it = std::find(free_.begin(), free_.end(), x);
  if (it == free_.end()) throw UsageError(x.to_string() + " is not a free preprocessing variable");
  std::vector<Var> free = free_;
  free.erase(free.begin() + (it - free_.begin()));
  std::vector<std::pair<Var, Formula>> derived;
  derived.emplace_back(x, Formula::constant(v));
  derived.insert(derived.end(), derived_.begin(), derived_.end());
  return {name_, std::move(free), std::move(derived)};
}

VarSet PreprocPredicate::domain() const {
  VarSet out(free_.begin(), free_.end());
  for (const auto& [x, f] : derived_) out.insert(x);
  return out;
}

std::uint64_t PreprocPredicate::count() const { return std::uint64_t{1} << free_.size(); }

Memory PreprocPredicate::memory(std::uint64_t index) const {
  Memory m;
  for (std::size_t j = 0; j < free_.size(); ++j) m.extend(free_[j], FieldElem::bit((index >> j) & 1));
  for (const auto& [x, f] : derived_) m.extend(x, FieldElem::bit(f.eval(m)));
  return m;
}

void PreprocPredicate::for_each(const std::function<void(const Memory&)>& fn) const {
  const std::uint64_t n = count();
  for (std::uint64_t i = 0; i < n; ++i) fn(memory(i));
}

std::vector<Memory> PreprocPredicate::enumerate() const {
  std::vector<Memory> out;
  out.reserve(count());
  for_each([&](const Memory& m) { out.push_back(m); });
  return out;
}

bool bdoz_constraints_hold(const Memory& m) {
  auto bit = [&](const Var& x) { return m.at(x)->value() != 0; };
  auto global = [&](const std::string& w) { return bit(share(w, 1)) != bit(share(w, 2)); };
  if (global("x") != bit(Var::secret("x", 1))) return false;
  if (global("y") != bit(Var::secret("y", 2))) return false;
  if ((global("a") && global("b")) != global("c")) return false;
  for (std::uint32_t i : {1u, 2u}) {
    const std::uint32_t other = 3 - i;
    for (const char* w : kLabels) {
      if (bit(mac(w, i)) != (bit(key(w, other)) != (bit(delta(other)) && bit(share(w, i))))) return false;
    }
  }
  return true;
}

}  // namespace ovt
