#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "overture/adversary.hpp"
#include "overture/engine.hpp"
#include "overture/functionality.hpp"

namespace ovt {

struct Witness {
  // Labelled realizations, e.g. {"m1", ...}, {"m2", ...}, {"s_H", ...}.
  std::vector<std::pair<std::string, Memory>> memories;
  std::optional<Prob> lhs;
  std::optional<Prob> rhs;
  std::string note;

  std::string to_string() const;
};

struct Verdict {
  std::string property;
  bool ok = true;
  std::string detail;
  std::optional<Witness> witness;

  static Verdict pass(std::string property, std::string detail = {});
  static Verdict fail(std::string property, std::string detail, Witness w);

  explicit operator bool() const { return ok; }
  std::string to_string() const;
};

Verdict check_passive_correct(const Protocol& pi, const Functionality& f, const PreprocPredicate& preproc,
                              const EngineOptions& options = {});
Verdict check_passive_correct(const Protocol& pi, const Functionality& f);

// Secrets of the pmf domain: S_H conditioned against S_C u O and the corrupt views.
Verdict check_nimo(const Protocol& pi, const Partition& part, const PreprocPredicate& preproc,
                   const EngineOptions& options = {});
Verdict check_nimo(const Protocol& pi, const Partition& part);

// M_C (messages held by corrupt clients) independent of S_H.
Verdict check_gradual_release(const Protocol& pi, const Partition& part, const PreprocPredicate& preproc,
                              const EngineOptions& options = {});
Verdict check_gradual_release(const Protocol& pi, const Partition& part);

// Exhaustive conditioning checks with witnesses.
Verdict check_cond_det(const Pmf& p, const VarSet& given, const VarSet& target);
Verdict check_cond_uni(const Pmf& p, const VarSet& given, const VarSet& target);
Verdict check_cond_sep(const Pmf& p, const VarSet& given, const VarSet& x2, const VarSet& x3);
Verdict check_independent(const Pmf& p, const VarSet& x1, const VarSet& x2);

struct TacticReport {
  Verdict det;
  std::vector<Verdict> uni;  // one per client
  Verdict sep;

  bool ok() const;
  std::string to_string() const;
};

// Gate protocol reading m[x], m[y] shares and writing both m[z] shares,
// under uniform preprocessing of the input shares.
TacticReport and_gate_tactic(const Protocol& gate, const std::string& x, const std::string& y, const std::string& z);
Verdict check_and_gate_tactic(const Protocol& gate, const std::string& x = "x", const std::string& y = "y",
                              const std::string& z = "z");

enum class CorruptMessages : std::uint8_t {
  Received,  // messages honest clients send to C
  Held,      // every message owned by C
};

struct InvariantReport {
  Verdict det;
  Verdict uni;
  Verdict sep;

  bool ok() const { return det.ok && uni.ok && sep.ok; }
  std::string to_string() const;
};

// Circuit prefix ending before decode; w names the gate output.
InvariantReport gmw_invariant(const Protocol& prefix, const std::string& w, const Partition& part,
                              CorruptMessages m_c = CorruptMessages::Received);
Verdict check_gmw_invariant(const Protocol& prefix, const std::string& w, const Partition& part,
                            CorruptMessages m_c = CorruptMessages::Received);

enum class Reading : std::uint8_t {
  // The passive run draws the same preprocessing and tape, except corrupt secrets.
  PerDraw,
  // The passive run is any run of pi.
  Marginal,
};

const char* reading_name(Reading r);

struct AdversarialOptions {
  Reading reading = Reading::PerDraw;
  InputsMode inputs = InputsMode::DataFlow;
  EngineOptions engine;
};

Verdict check_cheating_detection(const Protocol& pi, const Partition& part,
                                 const std::vector<AdversaryStrategy>& strategies, const PreprocPredicate& preproc,
                                 const AdversarialOptions& options = {});
Verdict check_integrity(const Protocol& pi, const Partition& part, const std::vector<AdversaryStrategy>& strategies,
                        const PreprocPredicate& preproc, const AdversarialOptions& options = {});

}  // namespace ovt
