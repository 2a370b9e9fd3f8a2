#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "overture/interpreter.hpp"
#include "overture/pmf.hpp"
#include "overture/preproc.hpp"

namespace ovt {

struct EngineOptions {
  // 0 uses the OpenMP default thread count.
  int workers = 0;
};

struct RunCounts {
  Pmf pmf;
  std::uint64_t runs = 0;
  std::uint64_t aborted = 0;
};

// Domain of every final memory: preprocessing variables, flips and written variables.
VarSet bd_domain(const Protocol& pi, const PreprocPredicate& preproc);

// The variables enumerated to produce initial memories, in index-bit order:
// free preprocessing variables first, then the flips of pi.
std::vector<Var> initial_free_vars(const Protocol& pi, const PreprocPredicate& preproc);
// Initial memory number `index` (preprocessing memory plus random tape).
Memory initial_memory(const Protocol& pi, const PreprocPredicate& preproc, std::uint64_t index);
std::uint64_t initial_count(const Protocol& pi, const PreprocPredicate& preproc);

// A protocol compiled to 64-lane bitsliced code. Lane l of batch b runs
// initial memory 64b + l.
class Kernel {
 public:
  Kernel(const Protocol& pi, const PreprocPredicate& preproc, const AdversaryStrategy* adversary = nullptr,
         const Partition* part = nullptr);
  ~Kernel();
  Kernel(Kernel&&) noexcept;
  Kernel& operator=(Kernel&&) noexcept;

  const Layout& layout() const;
  std::uint64_t initial_count() const;

  // Enumerates every initial memory and counts final memories restricted to `project`.
  RunCounts count(const VarSet& project, const EngineOptions& options = {}) const;
  RunCounts count_serial(const VarSet& project) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// BD(pi), optionally marginalized onto `project` while counting.
Pmf bd(const Protocol& pi, const PreprocPredicate& preproc, const std::optional<VarSet>& project = std::nullopt,
       const EngineOptions& options = {});
// BD(pi, A) over bottom-padded adversarial runs.
Pmf bd_adv(const Protocol& pi, const AdversaryStrategy& adversary, const Partition& part,
           const PreprocPredicate& preproc, const std::optional<VarSet>& project = std::nullopt,
           const EngineOptions& options = {});
RunCounts count_runs(const Protocol& pi, const PreprocPredicate& preproc, const AdversaryStrategy* adversary,
                     const Partition* part, const std::optional<VarSet>& project,
                     const EngineOptions& options = {});

// Serial reference path: the interpreter run once per initial memory.
RunCounts count_runs_reference(const Protocol& pi, const PreprocPredicate& preproc,
                               const AdversaryStrategy* adversary, const Partition* part,
                               const std::optional<VarSet>& project);
Pmf bd_reference(const Protocol& pi, const PreprocPredicate& preproc,
                 const std::optional<VarSet>& project = std::nullopt);

// Every final memory of run(m0, pi), one per initial memory, in index order.
std::vector<Memory> run_sweep(const Protocol& pi, const PreprocPredicate& preproc);

}  // namespace ovt
