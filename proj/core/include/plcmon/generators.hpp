#pragma once

#include <cstdint>
#include <vector>

#include "plcmon/dsl.hpp"
#include "plcmon/terms.hpp"

namespace plcmon {

// --- water transmission network ----------------------------------------------

struct WtnParams {
  int n = 1;                          // number of tank subsystems
  std::vector<bool> include_malware;  // per node (1-based index - 1)

  bool malware_on(int i) const {
    return i - 1 < static_cast<int>(include_malware.size()) &&
           include_malware[static_cast<std::size_t>(i - 1)];
  }
};

// Tank controller i of an n-node cascade. Node i sleeps one slot, reads its
// level, asks its upstream neighbour i-1 for more or less water, serves pump
// requests arriving from downstream, drives its own pump and valve, and ends
// the cycle. The last node has no downstream neighbour, so its request
// branches are pruned.
CtrlPtr wtn_controller(int i, int n);
// Malware for node i: requests upstream shut-off, then drops the valve-close
// command, aiming to drain the tank.
MalwPtr wtn_malware(int i);
Alphabet wtn_alphabet(int n);

// Source file with the tank controllers, their malware, and three networks:
// `clean` (transparent monitors, genuine code), `monitored` (synthesized
// monitors, genuine code) and `attacked` (synthesized monitors, malware on
// the flagged nodes). For n >= 2 a sink node consumes node 1's upstream
// requests. Throws std::invalid_argument when n < 1.
SourceFile wtn_source(const WtnParams& params);

// The stand-alone generic tank node with both neighbours' channels declared,
// as a single-node source file (`clean` / `monitored` / `attacked`).
SourceFile wtn_node_source();

// --- deadlock scenarios ---------------------------------------------------------

struct Scenario {
  Alphabet alphabet;
  CtrlPtr ctrl;
  MalwPtr malware;
};

// Malware mimics a protocol step the controller has not taken yet, then goes
// quiet; the misled monitor ends up expecting an actuation the controller
// will never repeat.
Scenario scenario_inject();
// Malware drops the only actuator command; the controller reaches the end of
// its cycle while the monitor still waits for the actuation.
Scenario scenario_drop();

// Monitored system for a scenario: synthesized monitor over ctrl | malware.
System scenario_system(const Scenario& sc, bool mitigation);

// --- random corpus ---------------------------------------------------------------

Alphabet small_alphabet();  // two sensors, two actuators, two channels

// Valid deterministic controller, reproducible by seed.
CtrlPtr random_controller(const Alphabet& alphabet, std::uint64_t seed, int depth);

// Valid closed time-guarded malware, reproducible by seed. depth >= 1.
MalwPtr random_malware(const Alphabet& alphabet, std::uint64_t seed, int depth);

// --- synthesis complexity ladder ---------------------------------------------------

// Chain controller with k fresh channels and k fresh actuators; its size is
// 3k+2 and its alphabet grows with k, so the synthesized automaton's
// materialized branch count grows quadratically.
Alphabet ladder_alphabet(int k);
CtrlPtr ladder_controller(int k);

}  // namespace plcmon
