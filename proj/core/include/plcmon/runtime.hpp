#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plcmon/semantics.hpp"

namespace plcmon {

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class EventKind {
  Allowed,
  Detected,  // the run stalled while the controller still proposed actions
  Corrected,
  Suppressed,
  Mitigated,
  FalsePositive,
};
const char* event_kind_name(EventKind k);

struct EnforcementEvent {
  std::size_t pos = 0;  // index into the executed trace
  Action attempted;
  std::optional<Action> emitted;  // absent when no transition existed
  EventKind kind = EventKind::Allowed;
  std::uint32_t state_before = 0;
  std::uint32_t state_after = 0;
};

std::string event_line(const EnforcementEvent& e);

struct Run {
  Trace trace;  // emitted actions
  std::vector<EnforcementEvent> events;
  bool stalled = false;
  bool detection() const;  // any event other than Allowed
};

std::string run_json(const Run& run);

struct Schedule {
  enum class Kind { Exhaustive, Seeded, Scripted };
  Kind kind = Kind::Seeded;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::size_t, std::size_t>> script;  // (step, choice)

  static Schedule exhaustive();
  static Schedule seeded(std::uint64_t seed);
  static Schedule scripted(std::vector<std::pair<std::size_t, std::size_t>> s);
};

struct ExecutionResult {
  std::vector<Run> runs;
  Lts lts;  // monitored system graph; event state references point here
};

// Runs a single monitored controller step by step, classifying every
// monitor decision against the genuine controller's behaviour. Exhaustive
// schedules fan out into one run per resolution of the nondeterminism, up
// to `max_steps` deep.
ExecutionResult execute(const System& system, const Schedule& schedule,
                        std::size_t max_steps,
                        std::uint64_t budget = 1'000'000,
                        std::size_t max_runs = 65536);

struct DetectVerdict {
  bool detected = false;
  enum class Response { None, Suppressed, Corrected, Mitigated } response =
      Response::None;
  std::optional<Action> beta;
};

// Checks whether the synthesized monitor blocks `alpha` after the genuine
// trace `t` of `p`, per the trace-based notion of anomaly detection.
// Preconditions (t genuine for p, and p|m able to extend t with alpha) are
// reported as PreconditionError.
DetectVerdict detect_on_trace(const CtrlPtr& p, const MalwPtr& m,
                              const Alphabet& alphabet, const Trace& t,
                              const Action& alpha, bool mitigation = false);

}  // namespace plcmon
