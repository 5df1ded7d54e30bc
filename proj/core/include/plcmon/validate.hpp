#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plcmon/terms.hpp"

namespace plcmon {

// Violations are data, not failures: validation never throws.
struct Violation {
  std::string code;    // stable identifier, e.g. "unguarded-recursion"
  std::string detail;  // human-readable context
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
  std::string text() const;
};

// Checks a source controller: phase discipline, time-guarded recursion,
// closedness, declared names, non-empty sums, no runtime end-continuations.
// In deterministic mode duplicate guards in a sum are also flagged.
ValidationReport validate_controller(const CtrlPtr& term, const Alphabet& alphabet,
                                     bool deterministic = false);

ValidationReport validate_malware(const MalwPtr& term, const Alphabet& alphabet);

ValidationReport validate_automaton(const EditPtr& term, const Alphabet& alphabet);

ValidationReport validate_system(const System& system, bool deterministic = false);

// Size metric of a controller: the number of prefixes occurring in it, with
// branch sums contributing their arity.
std::uint64_t term_size(const CtrlPtr& term);

}  // namespace plcmon
