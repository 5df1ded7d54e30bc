#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "plcmon/terms.hpp"

namespace plcmon {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- single-component successor functions ----------------------------------

using CtrlSuccs = std::vector<std::pair<Action, CtrlPtr>>;
using MalwSuccs = std::vector<std::pair<Action, MalwPtr>>;

// Successors of a closed controller term: recursion unfolds transparently,
// timeouts offer their guarded branches plus a tick into the else branch.
CtrlSuccs ctrl_step(const CtrlPtr& term);

MalwSuccs malware_step(const MalwPtr& term);

// A controller running next to an (optional) injected malware process.
struct Compromised {
  CtrlPtr ctrl;
  MalwPtr malware;  // may be null
  friend bool operator==(const Compromised&, const Compromised&) = default;
};
using CompSuccs = std::vector<std::pair<Action, Compromised>>;

// Interleaves controller and malware: genuine non-tick controller moves,
// malicious injections (anything but tick and drops), the silent
// synchronisation of a command with its drop, and joint time passage.
CompSuccs compromised_step(const Compromised& j);

// --- edit automaton ----------------------------------------------------------

struct EditMove {
  Action in;
  Action out;
  EditPtr next;
};

// Every transition of the automaton over the closed action universe of the
// given alphabet; go admits each action unchanged, complements expand to one
// suppression per action they cover.
std::vector<EditMove> edit_step(const EditPtr& e, const Alphabet& alphabet);

// Transitions matching one concrete input action.
std::vector<std::pair<Action, EditPtr>> edit_moves_on(const EditPtr& e,
                                                      const Action& in);

// Identity transitions whose action the automaton may emit on its own:
// channel actions, actuator commands, and tick.
std::vector<std::pair<Action, EditPtr>> edit_insertion_moves(
    const EditPtr& e, const Alphabet& alphabet);

// --- monitored controllers and networks --------------------------------------

struct NodeState {
  EditPtr mon;
  CtrlPtr ctrl;
  MalwPtr mal;  // may be null
  friend bool operator==(const NodeState&, const NodeState&) = default;
};
using NetState = std::vector<NodeState>;

int cmp(const NodeState& a, const NodeState& b);
int cmp(const NetState& a, const NetState& b);

struct MonMove {
  Action attempted;  // proposed by the compromised controller
  Action emitted;    // what the monitor let through (or inserted)
  bool inserted;     // derived by the insertion rule
  NodeState next;
};

// One monitored controller: the enforcement rule pairs every controller
// move with a matching automaton branch; when enabled, the insertion rule
// additionally lets the automaton emit safe actions while the controller is
// stuck signalling the end of its scan cycle.
std::vector<MonMove> monitored_step(const NodeState& node,
                                    const Alphabet& alphabet, bool mitigation);

// The network semantics: interleaving of non-tick moves, silent pairing of
// matching sends and receives across distinct nodes, and a global tick that
// requires every node to tick and no silent move to be available.
std::vector<std::pair<Action, NetState>> network_step(const NetState& state,
                                                      const System& system);

NetState initial_state(const System& system);
// Binder-renamed form used as the interning key during exploration.
NetState canonical_state(const NetState& state);
std::string state_text(const NetState& state);

// --- explored graphs ----------------------------------------------------------

struct Lts {
  Alphabet alphabet;
  std::vector<NetState> states;
  std::vector<Action> actions;
  // per state, sorted (action index, target) pairs
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out;
  std::uint32_t initial = 0;
  bool complete = true;

  std::size_t num_edges() const;
  std::string state_label(std::uint32_t id) const;
};

struct ExploreOptions {
  std::uint64_t budget = 1'000'000;
  int jobs = 1;
};

// Breadth-first fixpoint over network_step with canonical-state interning.
// Exceeding the state budget yields the partial graph with complete=false.
Lts explore(const System& system, const ExploreOptions& opts = {});

// States reachable by exactly the given action sequence (strong matching).
std::vector<NetState> run_trace(const System& system, const Trace& t,
                                std::uint64_t state_budget = 1'000'000);

// Indices of states with no outgoing edge. Requires a complete graph.
std::vector<std::uint32_t> find_deadlocks(const Lts& lts);

std::string lts_json(const Lts& lts);
std::string lts_dot(const Lts& lts);

std::uint64_t default_budget();  // PLCMON_BUDGET env var, else 1e6

}  // namespace plcmon
