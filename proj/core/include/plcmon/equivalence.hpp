#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plcmon/semantics.hpp"

namespace plcmon {

// Witness for a failed relation check. `trace` is the observable
// distinguishing trace when one exists (always for trace equivalence);
// `strong_trace` is its tau-padded realization, replayable action for
// action on the side named by `side`.
struct Counterexample {
  std::string side;  // "left" or "right"
  Trace trace;
  Trace strong_trace;
  std::string explanation;
};

struct EquivVerdict {
  std::string relation;  // "trace-eq" | "weak-sim" | "weak-bisim"
  bool holds = false;
  std::optional<Counterexample> counterexample;

  std::string text() const;
  std::string json() const;
};

// Saturated variant of a graph: per-state edges plus a flag telling strong
// (original) edges apart from the added weak ones. A weak edge s =a=> t
// stands for tau* a tau*; for a = tau it stands for tau* (including the
// empty sequence, hence the reflexive tau self-loops).
struct WeakLts {
  Lts graph;
  std::vector<std::vector<bool>> strong;  // parallel to graph.out
};

WeakLts weak_transitions(const Lts& lts);

// Decides equality of the tau-abstracted trace languages (tick and end stay
// observable) by synchronized subset exploration. Throws BudgetExceeded when
// the number of explored subset pairs passes the budget.
EquivVerdict trace_equivalent(const Lts& a, const Lts& b,
                              std::uint64_t pair_budget = 10'000'000);

// Greatest weak simulation: holds iff the initial state of `a` is simulated
// by the initial state of `b`.
EquivVerdict weakly_simulated_by(const Lts& a, const Lts& b,
                                 std::uint64_t pair_budget = 10'000'000);

EquivVerdict weakly_bisimilar(const Lts& a, const Lts& b,
                              std::uint64_t pair_budget = 10'000'000);

}  // namespace plcmon
