#pragma once

#include <string>

#include "plcmon/dsl.hpp"
#include "plcmon/generators.hpp"
#include "plcmon/semantics.hpp"
#include "plcmon/synthesis.hpp"
#include "plcmon/terms.hpp"

namespace plcmon::test {

inline Alphabet abc() {  // one sensor, one actuator, one channel
  Alphabet a;
  a.sensors = {"s"};
  a.actuators = {"a"};
  a.channels = {"c"};
  a.normalize();
  return a;
}

inline System single(const Alphabet& ab, EditPtr mon, CtrlPtr p,
                     MalwPtr m = nullptr, bool mitigation = false) {
  return System{ab, {MonNode{std::move(mon), std::move(p), std::move(m), mitigation}}};
}

inline System go_system(const Alphabet& ab, CtrlPtr p, MalwPtr m = nullptr) {
  return single(ab, edit_go(), std::move(p), std::move(m));
}

inline System monitored_system(const Alphabet& ab, CtrlPtr p, MalwPtr m = nullptr,
                               bool mitigation = false) {
  EditPtr mon = synthesize(p, ab).automaton;
  return single(ab, mon, std::move(p), std::move(m), mitigation);
}

// Successor set as sorted "action => term" lines, for terse assertions.
template <typename Succs>
std::string succs_text(const Succs& succs) {
  std::string out;
  for (const auto& [a, t] : succs) {
    out += a.text();
    out += "; ";
  }
  return out;
}

}  // namespace plcmon::test
