#include "overture/datalog.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "overture/error.hpp"
#include "overture/memset.hpp"

namespace ovt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_atom(const std::string& a) {
  return !a.empty() && std::all_of(a.begin(), a.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

std::string DatalogProgram::to_string() const {
  std::string out;
  for (const Clause& c : clauses) {
    out += c.head;
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      out += i == 0 ? " :- " : ", ";
      if (c.body[i].negated) out += "not ";
      out += c.body[i].atom;
    }
    out += ".\n";
  }
  return out;
}

std::string mangle(const Var& x) {
  switch (x.kind) {
    case VarKind::Secret: return "s_" + x.name + "_c" + x.owner.to_string();
    case VarKind::Flip: return "r_" + x.name + "_c" + x.owner.to_string();
    case VarKind::Mesg: return "m_" + x.name + "_c" + x.owner.to_string();
    case VarKind::Reveal: return "p_" + x.name;
    case VarKind::Out: return "out_c" + x.owner.to_string();
    case VarKind::GlobalView: break;
  }
  throw UsageError("global views have no datalog atom");
}

Var demangle(const std::string& atom) {
  auto owned = [&](VarKind kind) {
    const std::string rest = atom.substr(2);
    const auto at = rest.rfind("_c");
    if (at == std::string::npos || at == 0 || at + 2 >= rest.size()) throw ParseError("bad atom " + atom, 0, 0);
    const std::string digits = rest.substr(at + 2);
    if (!std::all_of(digits.begin(), digits.end(), ::isdigit)) throw ParseError("bad atom " + atom, 0, 0);
    return Var{kind, rest.substr(0, at), ClientId{static_cast<std::uint32_t>(std::stoul(digits))}};
  };
  if (atom.rfind("out_c", 0) == 0) {
    const std::string digits = atom.substr(5);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw ParseError("bad atom " + atom, 0, 0);
    }
    return Var::output(static_cast<std::uint32_t>(std::stoul(digits)));
  }
  if (atom.size() > 2 && atom[1] == '_') {
    switch (atom[0]) {
      case 's': return owned(VarKind::Secret);
      case 'r': return owned(VarKind::Flip);
      case 'm': return owned(VarKind::Mesg);
      case 'p': return Var::reveal(atom.substr(2));
      default: break;
    }
  }
  throw ParseError("bad atom " + atom, 0, 0);
}

DatalogProgram to_datalog(const Protocol& pi) {
  if (pi.modulus() != 2) throw UnsupportedOperation("datalog export is defined over F2");
  DatalogProgram out;
  for (const Command& cmd : pi.commands()) {
    const auto x = target(cmd);
    if (!x) throw UsageError("datalog export needs an assert-free protocol");
    const Expr& e = *command_expr(cmd);
    const VarSet local = e.vars(computing_client(cmd));
    const MemSet models = solve(MemSet::all(local), e, computing_client(cmd));
    const std::string head = mangle(*x);
    const std::vector<Var> order(local.begin(), local.end());
    for (const PackedMemory& row : models.rows()) {
      Clause c{head, {}};
      for (std::size_t i = 0; i < order.size(); ++i) c.body.push_back({mangle(order[i]), !row.get(i)});
      out.clauses.push_back(std::move(c));
    }
  }
  return out;
}

DatalogProgram facts(const Memory& m) {
  DatalogProgram out;
  for (const auto& [x, cell] : m) {
    if (!cell) throw UsageError("facts need a total memory");
    if (cell->value() > 1) throw UsageError("facts need binary values");
    if (cell->value() == 1) out.clauses.push_back(Clause{mangle(x), {}});
  }
  return out;
}

Memory lhm_eval(const DatalogProgram& fact_base, const DatalogProgram& prog) {
  std::vector<std::string> atoms;
  std::map<std::string, std::size_t> id;
  auto intern = [&](const std::string& a) {
    const auto [it, fresh] = id.emplace(a, atoms.size());
    if (fresh) atoms.push_back(a);
    return it->second;
  };
  std::vector<bool> truth;
  for (const Clause& c : fact_base.clauses) {
    if (!c.body.empty()) throw UsageError("fact base contains a rule for " + c.head);
    intern(c.head);
  }
  for (const Clause& c : prog.clauses) {
    intern(c.head);
    for (const Literal& l : c.body) intern(l.atom);
  }
  const std::size_t n = atoms.size();
  truth.assign(n, false);
  for (const Clause& c : fact_base.clauses) truth[id[c.head]] = true;

  // Dependency graph head -> body atoms; strongly connected components come
  // out of Tarjan's algorithm dependencies first.
  std::vector<std::vector<std::pair<std::size_t, bool>>> deps(n);
  std::vector<std::vector<const Clause*>> rules(n);
  for (const Clause& c : prog.clauses) {
    const std::size_t h = id[c.head];
    rules[h].push_back(&c);
    for (const Literal& l : c.body) deps[h].emplace_back(id[l.atom], l.negated);
  }
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> sccs;
  int counter = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& [w, neg] : deps[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> scc;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = static_cast<int>(sccs.size());
        scc.push_back(w);
      } while (w != v);
      sccs.push_back(std::move(scc));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [w, neg] : deps[v]) {
      if (neg && comp[v] == comp[w]) throw UsageError("program is not stratified at " + atoms[v]);
    }
  }
  for (const auto& scc : sccs) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v : scc) {
        if (truth[v]) continue;
        for (const Clause* c : rules[v]) {
          const bool holds = std::all_of(c->body.begin(), c->body.end(), [&](const Literal& l) {
            return truth[id.at(l.atom)] != l.negated;
          });
          if (holds) {
            truth[v] = true;
            changed = true;
            break;
          }
        }
      }
    }
  }
  Memory out;
  for (std::size_t v = 0; v < n; ++v) out.extend(demangle(atoms[v]), FieldElem::bit(truth[v]));
  return out;
}

DatalogProgram parse_datalog(const std::string& text) {
  DatalogProgram out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto pct = line.find('%'); pct != std::string::npos) line.erase(pct);
    line = trim(line);
    if (line.empty()) continue;
    if (line.back() != '.') throw ParseError("clause must end with '.'", lineno, line.size());
    line.pop_back();
    Clause c;
    const auto arrow = line.find(":-");
    c.head = trim(line.substr(0, arrow));
    if (!valid_atom(c.head)) throw ParseError("bad head atom '" + c.head + "'", lineno, 1);
    demangle(c.head);
    if (arrow != std::string::npos) {
      std::istringstream body(line.substr(arrow + 2));
      std::string lit;
      while (std::getline(body, lit, ',')) {
        lit = trim(lit);
        Literal l;
        if (lit.rfind("not ", 0) == 0) {
          l.negated = true;
          lit = trim(lit.substr(4));
        }
        if (!valid_atom(lit)) throw ParseError("bad body atom '" + lit + "'", lineno, 1);
        demangle(lit);
        l.atom = lit;
        c.body.push_back(std::move(l));
      }
      if (c.body.empty()) throw ParseError("empty body after ':-'", lineno, arrow + 1);
    }
    out.clauses.push_back(std::move(c));
  }
  return out;
}

DatalogProgram parse_facts(const std::string& text) {
  DatalogProgram out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected atom=0|1 in '" + item + "'", 1, 1);
    const std::string atom = trim(item.substr(0, eq));
    const std::string v = trim(item.substr(eq + 1));
    demangle(atom);
    if (v != "0" && v != "1") throw ParseError("fact values are 0 or 1", 1, eq + 1);
    if (v == "1") out.clauses.push_back(Clause{atom, {}});
  }
  return out;
}

}  // namespace ovt
