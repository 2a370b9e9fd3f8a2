#include "overture/functionality.hpp"

#include <sstream>

#include "overture/error.hpp"

namespace ovt {

std::vector<Memory> all_memories(const VarSet& xs) {
  if (xs.size() >= 30) throw BudgetError("too many variables to enumerate");
  const std::vector<Var> vars(xs.begin(), xs.end());
  std::vector<Memory> out;
  out.reserve(std::size_t{1} << vars.size());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << vars.size()); ++i) {
    Memory m;
    for (std::size_t j = 0; j < vars.size(); ++j) m.extend(vars[j], FieldElem::bit((i >> j) & 1));
    out.push_back(std::move(m));
  }
  return out;
}

Functionality::Functionality(VarSet inputs, VarSet outputs, std::map<Memory, Memory> table)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), table_(std::move(table)) {
  for (const auto& [in, out] : table_) {
    if (in.domain() != inputs_) throw UsageError("functionality row over the wrong inputs: " + in.to_string());
    if (out.domain() != outputs_) throw UsageError("functionality row over the wrong outputs: " + out.to_string());
  }
  if (table_.size() != (std::size_t{1} << inputs_.size())) {
    throw UsageError("functionality is not total: " + std::to_string(table_.size()) + " of " +
                     std::to_string(std::size_t{1} << inputs_.size()) + " input memories");
  }
}

Functionality Functionality::tabulate(const VarSet& inputs, const VarSet& outputs,
                                      const std::function<Memory(const Memory&)>& fn) {
  std::map<Memory, Memory> table;
  for (const Memory& m : all_memories(inputs)) table.emplace(m, fn(m));
  return {inputs, outputs, std::move(table)};
}

Functionality Functionality::broadcast(const VarSet& inputs, const VarSet& outputs,
                                       const std::function<bool(const Memory&)>& fn) {
  return tabulate(inputs, outputs, [&](const Memory& m) {
    Memory out;
    const FieldElem v = FieldElem::bit(fn(m));
    for (const Var& o : outputs) out.extend(o, v);
    return out;
  });
}

const Memory& Functionality::operator()(const Memory& m) const {
  const auto it = table_.find(m);
  if (it == table_.end()) throw UsageError("functionality undefined on " + m.to_string());
  return it->second;
}

std::string Functionality::to_string() const {
  std::string s;
  for (const auto& [in, out] : table_) s += in.to_string() + " -> " + out.to_string() + "\n";
  return s;
}

Functionality parse_functionality(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::map<Memory, Memory> table;
  std::optional<VarSet> inputs;
  std::optional<VarSet> outputs;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) throw ParseError("expected 'inputs -> outputs'", lineno, 1);
    Memory in;
    Memory out;
    try {
      in = parse_memory(line.substr(0, arrow));
      out = parse_memory(line.substr(arrow + 2));
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno, 1);
    }
    if (!inputs) {
      inputs = in.domain();
      outputs = out.domain();
    }
    if (!table.emplace(in, out).second) throw ParseError("duplicate row for " + in.to_string(), lineno, 1);
  }
  if (!inputs) throw ParseError("empty functionality", lineno, 1);
  return {*inputs, *outputs, std::move(table)};
}

std::vector<Memory> kernel(const Functionality& f, const Memory& m_out) {
  std::vector<Memory> out;
  for (const auto& [in, o] : f.table()) {
    if (o == m_out) out.push_back(in);
  }
  return out;
}

}  // namespace ovt
