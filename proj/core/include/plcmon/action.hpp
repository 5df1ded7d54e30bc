#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace plcmon {

// Label alphabet of the calculus: sensor reads, actuator commands,
// actuator-command drops, channel sends, channel receives, the silent
// action, the passage of one time slot, and the end of a scan cycle.
enum class ActKind : std::uint8_t {
  Read = 0,
  Cmd = 1,
  Drop = 2,
  Send = 3,
  Recv = 4,
  Tau = 5,
  Tick = 6,
  End = 7,
};

struct Action {
  ActKind kind{ActKind::Tau};
  std::string name;  // empty for Tau/Tick/End

  static Action read(std::string s) { return {ActKind::Read, std::move(s)}; }
  static Action cmd(std::string a) { return {ActKind::Cmd, std::move(a)}; }
  static Action drop(std::string a) { return {ActKind::Drop, std::move(a)}; }
  static Action send(std::string c) { return {ActKind::Send, std::move(c)}; }
  static Action recv(std::string c) { return {ActKind::Recv, std::move(c)}; }
  static Action tau() { return {ActKind::Tau, {}}; }
  static Action tick() { return {ActKind::Tick, {}}; }
  static Action end() { return {ActKind::End, {}}; }

  bool observable() const { return kind != ActKind::Tau; }
  bool is_tick() const { return kind == ActKind::Tick; }
  bool is_tau() const { return kind == ActKind::Tau; }
  bool is_end() const { return kind == ActKind::End; }

  // Membership in Act* (commands and drops) or Chn* (sends and receives).
  bool in_act_chn() const {
    return kind == ActKind::Cmd || kind == ActKind::Drop ||
           kind == ActKind::Send || kind == ActKind::Recv;
  }

  // Concrete syntax used by the DSL, trace output and JSON exports.
  std::string text() const;

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action& a, const Action& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.name <=> b.name;
  }
};

struct ActionHash {
  std::size_t operator()(const Action& a) const {
    return std::hash<std::string>{}(a.name) * 31u +
           static_cast<std::size_t>(a.kind);
  }
};

using Trace = std::vector<Action>;

std::string trace_text(const Trace& t);

// Declared name sets of a system. The three sets must be pairwise disjoint;
// every name occurring in a term has to be a member of the matching set.
struct Alphabet {
  std::vector<std::string> sensors;
  std::vector<std::string> actuators;
  std::vector<std::string> channels;

  // Sorts the three sets and drops duplicates.
  void normalize();

  // Returns invariant violations (bad identifier, overlap between sets).
  std::vector<std::string> check() const;

  bool has_sensor(const std::string& n) const;
  bool has_actuator(const std::string& n) const;
  bool has_channel(const std::string& n) const;

  // True when the action's name component is declared appropriately.
  bool knows(const Action& a) const;

  // Act* ∪ Chn* in canonical order.
  std::vector<Action> act_chn_actions() const;
  // Full closed action universe: reads, Act*, Chn*, tau, tick, end.
  std::vector<Action> all_actions() const;
  // Actions an automaton may insert on its own: Chn* ∪ commands ∪ {tick}.
  std::vector<Action> insertable_actions() const;
};

bool valid_identifier(const std::string& n);

}  // namespace plcmon
