#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "plcmon/terms.hpp"

namespace plcmon {

struct SynthesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SynthesisReport {
  EditPtr automaton;
  std::uint64_t input_size = 0;          // size of the controller
  std::uint64_t output_branch_count = 0; // branches of the materialized form
  std::chrono::nanoseconds elapsed{0};
};

// Maps a valid deterministic controller to the enforcing edit automaton.
// Suppression sums are produced intensionally (one complement branch per
// state); the branch count reports the materialized form. Throws
// SynthesisError on invalid or nondeterministic input.
SynthesisReport synthesize(const CtrlPtr& p, const Alphabet& alphabet);

// The synthesis recursion on any phase fragment, without validation.
EditPtr synthesize_fragment(const CtrlPtr& term, const Alphabet& alphabet);

// Replaces complement branches by their explicit expansions.
EditPtr expand_automaton(const EditPtr& e, const Alphabet& alphabet);

// Number of branches after expanding complements.
std::uint64_t materialized_branch_count(const EditPtr& e, const Alphabet& alphabet);

// True when every sum has pairwise-distinct input actions. Complements are
// treated as covering all of Act* ∪ Chn* minus their exceptions; two
// complements in one sum are conservatively reported as overlapping.
bool check_syntactic_determinism(const EditPtr& e);

struct ComplexityRow {
  std::uint64_t input_size = 0;
  std::uint64_t branches = 0;
  std::chrono::nanoseconds elapsed{0};
};

std::vector<ComplexityRow> measure_complexity(const std::vector<CtrlPtr>& corpus,
                                              const Alphabet& alphabet);

}  // namespace plcmon
