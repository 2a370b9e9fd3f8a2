#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "overture/memory.hpp"

namespace ovt {

// A deterministic ideal functionality tabulated over every F2 memory of its inputs.
class Functionality {
 public:
  Functionality() = default;
  Functionality(VarSet inputs, VarSet outputs, std::map<Memory, Memory> table);

  // Tabulates fn over mems(inputs); fn must return a memory over `outputs`.
  static Functionality tabulate(const VarSet& inputs, const VarSet& outputs,
                                const std::function<Memory(const Memory&)>& fn);
  // Every output receives the same bit computed from the inputs.
  static Functionality broadcast(const VarSet& inputs, const VarSet& outputs,
                                 const std::function<bool(const Memory&)>& fn);

  const VarSet& inputs() const { return inputs_; }
  const VarSet& outputs() const { return outputs_; }
  const std::map<Memory, Memory>& table() const { return table_; }

  // F(m) for m over exactly the input variables.
  const Memory& operator()(const Memory& m) const;

  std::string to_string() const;

 private:
  VarSet inputs_;
  VarSet outputs_;
  std::map<Memory, Memory> table_;
};

// Lines of the form `s[s1]@1=0 s[s2]@2=1 -> out@1=0 out@2=0`; '#' starts a comment.
Functionality parse_functionality(const std::string& text);

// { m | F(m) = m_out }
std::vector<Memory> kernel(const Functionality& f, const Memory& m_out);

// All F2 memories over xs, in binary order with the first variable as the low bit.
std::vector<Memory> all_memories(const VarSet& xs);

}  // namespace ovt
