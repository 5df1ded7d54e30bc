#include "plcmon/runtime.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "plcmon/synthesis.hpp"

namespace plcmon {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Allowed: return "allowed";
    case EventKind::Detected: return "detected";
    case EventKind::Corrected: return "corrected";
    case EventKind::Suppressed: return "suppressed";
    case EventKind::Mitigated: return "mitigated";
    case EventKind::FalsePositive: return "false-positive";
  }
  return "?";
}

std::string event_line(const EnforcementEvent& e) {
  std::ostringstream os;
  os << e.pos << ' ' << event_kind_name(e.kind) << ' ' << e.attempted.text()
     << " -> " << (e.emitted ? e.emitted->text() : "-") << ' ' << e.state_before
     << " -> " << e.state_after;
  return os.str();
}

bool Run::detection() const {
  return std::any_of(events.begin(), events.end(), [](const EnforcementEvent& e) {
    return e.kind != EventKind::Allowed;
  });
}

std::string run_json(const Run& run) {
  nlohmann::json j;
  auto trace = nlohmann::json::array();
  for (const auto& a : run.trace) trace.push_back(a.text());
  j["trace"] = std::move(trace);
  j["stalled"] = run.stalled;
  auto events = nlohmann::json::array();
  for (const auto& e : run.events) {
    nlohmann::json je;
    je["pos"] = e.pos;
    je["kind"] = event_kind_name(e.kind);
    je["attempted"] = e.attempted.text();
    if (e.emitted) je["emitted"] = e.emitted->text();
    je["state_before"] = e.state_before;
    je["state_after"] = e.state_after;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  return j.dump(2);
}

Schedule Schedule::exhaustive() {
  Schedule s;
  s.kind = Kind::Exhaustive;
  return s;
}
Schedule Schedule::seeded(std::uint64_t seed) {
  Schedule s;
  s.kind = Kind::Seeded;
  s.seed = seed;
  return s;
}
Schedule Schedule::scripted(std::vector<std::pair<std::size_t, std::size_t>> sc) {
  Schedule s;
  s.kind = Kind::Scripted;
  s.script = std::move(sc);
  return s;
}

namespace {

struct NetStateHash {
  std::size_t operator()(const NetState& s) const {
    std::size_t h = s.size();
    for (const auto& n : s) {
      h = h * 1099511628211ull ^ std::hash<const void*>{}(n.mon.get());
      h = h * 1099511628211ull ^ std::hash<const void*>{}(n.ctrl.get());
      h = h * 1099511628211ull ^ std::hash<const void*>{}(n.mal.get());
    }
    return h;
  }
};

// Tracks which states of the genuine controller are reachable by the
// emitted observable prefix; empty means the run left genuine territory.
struct GenuineTracker {
  const Lts* golden;
  std::vector<std::uint32_t> current;

  explicit GenuineTracker(const Lts& g) : golden(&g), current{g.initial} {}

  bool can(const Action& a) const {
    for (auto s : current)
      for (const auto& [act, dst] : golden->out[s])
        if (golden->actions[act] == a) return true;
    return false;
  }
  void advance(const Action& a) {
    if (a.is_tau()) return;
    std::vector<std::uint32_t> next;
    for (auto s : current)
      for (const auto& [act, dst] : golden->out[s])
        if (golden->actions[act] == a) next.push_back(dst);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current = std::move(next);
  }
};

struct Executor {
  const System* system;
  Lts lts;
  Lts golden;
  std::unordered_map<NetState, std::uint32_t, NetStateHash> ids;

  Executor(const System& sys, std::uint64_t budget) : system(&sys) {
    if (sys.nodes.size() != 1)
      throw PreconditionError("execute expects a single monitored controller");
    ExploreOptions opts;
    opts.budget = budget;
    lts = explore(sys, opts);
    if (!lts.complete)
      throw BudgetExceeded("monitored system exceeded the state budget");
    golden = explore(golden_of(sys), opts);
    if (!golden.complete)
      throw BudgetExceeded("genuine controller exceeded the state budget");
    for (std::uint32_t i = 0; i < lts.states.size(); ++i)
      ids.emplace(lts.states[i], i);
  }

  std::vector<MonMove> annotated(const NetState& s) const {
    return monitored_step(s[0], system->alphabet, system->nodes[0].mitigation);
  }

  EnforcementEvent classify(const MonMove& m, const GenuineTracker& genuine) const {
    EnforcementEvent e;
    e.attempted = m.attempted;
    e.emitted = m.emitted;
    if (m.inserted) {
      e.kind = EventKind::Mitigated;
    } else if (m.emitted == m.attempted) {
      e.kind = EventKind::Allowed;
    } else if (m.attempted.observable() && genuine.can(m.attempted)) {
      e.kind = EventKind::FalsePositive;
    } else if (m.emitted.is_tau()) {
      e.kind = EventKind::Suppressed;
    } else {
      e.kind = EventKind::Corrected;
    }
    return e;
  }

  // Stall events: the controller still proposes actions but the monitored
  // system has no transition for any of them.
  void log_stall(Run& run, const NetState& s, std::uint32_t id) const {
    auto jsucc = compromised_step({s[0].ctrl, s[0].mal});
    std::set<Action> proposed;
    for (const auto& [a, j] : jsucc) proposed.insert(a);
    for (const auto& a : proposed) {
      EnforcementEvent e;
      e.pos = run.trace.size();
      e.attempted = a;
      e.kind = EventKind::Detected;
      e.state_before = id;
      e.state_after = id;
      run.events.push_back(e);
    }
    run.stalled = true;
  }

  Run play(const Schedule& schedule, std::size_t max_steps) {
    Run run;
    NetState state = lts.states[lts.initial];
    std::uint32_t id = lts.initial;
    GenuineTracker genuine(golden);
    std::mt19937_64 rng(schedule.seed);
    std::unordered_map<std::size_t, std::size_t> script(schedule.script.begin(),
                                                        schedule.script.end());
    for (std::size_t step = 0; step < max_steps; ++step) {
      auto moves = annotated(state);
      if (moves.empty()) {
        log_stall(run, state, id);
        return run;
      }
      std::size_t choice = 0;
      if (schedule.kind == Schedule::Kind::Seeded) {
        choice = std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng);
      } else if (schedule.kind == Schedule::Kind::Scripted) {
        auto it = script.find(step);
        if (it != script.end()) {
          if (it->second >= moves.size())
            throw PreconditionError("scripted choice out of range at step " +
                                    std::to_string(step));
          choice = it->second;
        }
      }
      apply(run, state, id, moves[choice], genuine);
    }
    return run;
  }

  void apply(Run& run, NetState& state, std::uint32_t& id, const MonMove& m,
             GenuineTracker& genuine) {
    EnforcementEvent e = classify(m, genuine);
    e.pos = run.trace.size();
    e.state_before = id;
    NetState next = canonical_state({m.next});
    id = ids.at(next);
    e.state_after = id;
    state = std::move(next);
    genuine.advance(m.emitted);
    run.trace.push_back(m.emitted);
    run.events.push_back(e);
  }

  void exhaustive(std::vector<Run>& out, Run prefix, const NetState& state,
                  std::uint32_t id, GenuineTracker genuine, std::size_t depth,
                  std::size_t max_runs) {
    if (depth == 0) {
      out.push_back(std::move(prefix));
      return;
    }
    auto moves = annotated(state);
    if (moves.empty()) {
      log_stall(prefix, state, id);
      out.push_back(std::move(prefix));
      return;
    }
    for (const auto& m : moves) {
      if (out.size() >= max_runs)
        throw BudgetExceeded("exhaustive execution exceeded the run budget");
      Run branch = prefix;
      NetState s = state;
      std::uint32_t i = id;
      GenuineTracker g = genuine;
      apply(branch, s, i, m, g);
      exhaustive(out, std::move(branch), s, i, std::move(g), depth - 1, max_runs);
    }
  }
};

}  // namespace

ExecutionResult execute(const System& system, const Schedule& schedule,
                        std::size_t max_steps, std::uint64_t budget,
                        std::size_t max_runs) {
  Executor ex(system, budget);
  ExecutionResult result;
  if (schedule.kind == Schedule::Kind::Exhaustive) {
    GenuineTracker genuine(ex.golden);
    ex.exhaustive(result.runs, Run{}, ex.lts.states[ex.lts.initial],
                  ex.lts.initial, genuine, max_steps, max_runs);
  } else {
    result.runs.push_back(ex.play(schedule, max_steps));
  }
  result.lts = std::move(ex.lts);
  return result;
}

DetectVerdict detect_on_trace(const CtrlPtr& p, const MalwPtr& m,
                              const Alphabet& alphabet, const Trace& t,
                              const Action& alpha, bool mitigation) {
  System genuine{alphabet, {MonNode{edit_go(), p, nullptr, false}}};
  if (run_trace(genuine, t).empty())
    throw PreconditionError("trace is not a genuine trace of the controller");

  System bare{alphabet, {MonNode{edit_go(), p, m, false}}};
  Trace talpha = t;
  talpha.push_back(alpha);
  if (run_trace(bare, talpha).empty())
    throw PreconditionError("compromised controller cannot extend the trace");

  EditPtr monitor = synthesize(p, alphabet).automaton;
  System monitored{alphabet, {MonNode{monitor, p, m, mitigation}}};

  auto reached = run_trace(monitored, t);
  DetectVerdict verdict;
  verdict.detected = !reached.empty() && run_trace(monitored, talpha).empty();
  if (!verdict.detected) return verdict;

  for (const auto& state : reached) {
    for (const auto& mv :
         monitored_step(state[0], alphabet, mitigation)) {
      if (!mv.inserted && mv.attempted == alpha && mv.emitted.is_tau()) {
        verdict.response = DetectVerdict::Response::Suppressed;
        verdict.beta = mv.emitted;
        return verdict;
      }
    }
  }
  for (const auto& state : reached) {
    for (const auto& mv : monitored_step(state[0], alphabet, mitigation)) {
      if (mv.inserted) {
        verdict.response = DetectVerdict::Response::Mitigated;
        verdict.beta = mv.emitted;
        return verdict;
      }
    }
  }
  for (const auto& state : reached) {
    for (const auto& mv : monitored_step(state[0], alphabet, mitigation)) {
      if (!mv.inserted && mv.attempted == alpha && !mv.emitted.is_tau() &&
          mv.emitted != alpha) {
        verdict.response = DetectVerdict::Response::Corrected;
        verdict.beta = mv.emitted;
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace plcmon
