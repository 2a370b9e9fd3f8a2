#pragma once

#include <cstdint>
#include <vector>

#include "overture/interpreter.hpp"
#include "overture/pmf.hpp"

namespace ovt {

enum class DecisionScope : std::uint8_t {
  Visible,  // corrupt-computed writes that honest clients read
  All,      // every corrupt-computed write
};

struct DecisionPoint {
  std::size_t command = 0;
  Var target;
  // Corrupt-readable variables the original right-hand side depends on.
  std::vector<Var> inputs;
};

std::vector<DecisionPoint> decision_points(const Protocol& pi, const Partition& part,
                                           DecisionScope scope = DecisionScope::Visible);

struct FamilyOptions {
  // Table strategies are added when there are at most this many decision points.
  std::size_t budget = 0;
  DecisionScope scope = DecisionScope::Visible;
  std::uint64_t cap = 1'000'000;
};

// Constants family {keep, 0, 1}^points, then (within budget) every table
// strategy over the local inputs of each point. BudgetError past the cap.
std::vector<AdversaryStrategy> enumerate_adversaries(const Protocol& pi, const Partition& part,
                                                     const FamilyOptions& options = {});
std::uint64_t family_size(const Protocol& pi, const Partition& part, const FamilyOptions& options = {});

enum class InputsMode : std::uint8_t { DataFlow, Statistical };

// X_C for a set X_H of honest-computed views and outputs. DataFlow follows
// reads back from X_H (and the honest asserts before them) and stops at
// V_{C>H}. Statistical grows X_C from the V_{C>H} variables that are
// dependent with X_H under `passive` until X_H u X_C is independent of the rest.
VarSet adversarial_inputs(const Protocol& pi, const Partition& part, const VarSet& x_h,
                          InputsMode mode = InputsMode::DataFlow, const Pmf* passive = nullptr);

}  // namespace ovt
