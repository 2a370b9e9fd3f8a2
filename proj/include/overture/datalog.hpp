#pragma once

#include <string>
#include <vector>

#include "overture/memory.hpp"
#include "overture/protocol.hpp"

namespace ovt {

struct Literal {
  std::string atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::string head;
  std::vector<Literal> body;  // empty for a fact

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct DatalogProgram {
  std::vector<Clause> clauses;

  // .dl text: `head :- a, not b.` per clause, `head.` per fact.
  std::string to_string() const;
  friend bool operator==(const DatalogProgram&, const DatalogProgram&) = default;
};

// s[x]@1 -> s_x_c1, p[w] -> p_w, out@2 -> out_c2.
std::string mangle(const Var& x);
Var demangle(const std::string& atom);

// One clause per satisfying local memory of each command, in protocol order.
DatalogProgram to_datalog(const Protocol& pi);
// One fact per variable of m set to 1.
DatalogProgram facts(const Memory& m);

// Least Herbrand model, evaluated stratum by stratum. Every mentioned atom
// appears in the result: derived and fact atoms as 1, the rest as 0.
Memory lhm_eval(const DatalogProgram& facts, const DatalogProgram& prog);

DatalogProgram parse_datalog(const std::string& text);
// `s_x_c1=1,r_y_c1=0`
DatalogProgram parse_facts(const std::string& text);

}  // namespace ovt
