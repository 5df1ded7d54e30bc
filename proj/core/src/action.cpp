#include "plcmon/action.hpp"

#include <algorithm>

namespace plcmon {

std::string Action::text() const {
  switch (kind) {
    case ActKind::Read: return name;
    case ActKind::Cmd: return "cmd " + name;
    case ActKind::Drop: return "drop " + name;
    case ActKind::Send: return "snd " + name;
    case ActKind::Recv: return "rcv " + name;
    case ActKind::Tau: return "tau";
    case ActKind::Tick: return "tick";
    case ActKind::End: return "end";
  }
  return "?";
}

std::string trace_text(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].text();
  }
  return out;
}

bool valid_identifier(const std::string& n) {
  if (n.empty()) return false;
  if (n.front() < 'a' || n.front() > 'z') return false;
  return std::all_of(n.begin(), n.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

void Alphabet::normalize() {
  for (auto* v : {&sensors, &actuators, &channels}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
}

std::vector<std::string> Alphabet::check() const {
  std::vector<std::string> errs;
  auto check_names = [&](const std::vector<std::string>& v, const char* what) {
    for (const auto& n : v)
      if (!valid_identifier(n))
        errs.push_back(std::string("bad ") + what + " name '" + n + "'");
  };
  check_names(sensors, "sensor");
  check_names(actuators, "actuator");
  check_names(channels, "channel");
  auto overlap = [&](const std::vector<std::string>& a,
                     const std::vector<std::string>& b, const char* what) {
    for (const auto& n : a)
      if (std::find(b.begin(), b.end(), n) != b.end())
        errs.push_back(std::string("name '") + n + "' declared in " + what);
  };
  overlap(sensors, actuators, "both sensors and actuators");
  overlap(sensors, channels, "both sensors and channels");
  overlap(actuators, channels, "both actuators and channels");
  return errs;
}

static bool contains(const std::vector<std::string>& v, const std::string& n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}

bool Alphabet::has_sensor(const std::string& n) const { return contains(sensors, n); }
bool Alphabet::has_actuator(const std::string& n) const { return contains(actuators, n); }
bool Alphabet::has_channel(const std::string& n) const { return contains(channels, n); }

bool Alphabet::knows(const Action& a) const {
  switch (a.kind) {
    case ActKind::Read: return has_sensor(a.name);
    case ActKind::Cmd:
    case ActKind::Drop: return has_actuator(a.name);
    case ActKind::Send:
    case ActKind::Recv: return has_channel(a.name);
    default: return true;
  }
}

std::vector<Action> Alphabet::act_chn_actions() const {
  std::vector<Action> out;
  out.reserve(2 * actuators.size() + 2 * channels.size());
  for (const auto& a : actuators) out.push_back(Action::cmd(a));
  for (const auto& a : actuators) out.push_back(Action::drop(a));
  for (const auto& c : channels) out.push_back(Action::send(c));
  for (const auto& c : channels) out.push_back(Action::recv(c));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Action> Alphabet::all_actions() const {
  std::vector<Action> out;
  for (const auto& s : sensors) out.push_back(Action::read(s));
  auto ac = act_chn_actions();
  out.insert(out.end(), ac.begin(), ac.end());
  out.push_back(Action::tau());
  out.push_back(Action::tick());
  out.push_back(Action::end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Action> Alphabet::insertable_actions() const {
  std::vector<Action> out;
  for (const auto& a : actuators) out.push_back(Action::cmd(a));
  for (const auto& c : channels) out.push_back(Action::send(c));
  for (const auto& c : channels) out.push_back(Action::recv(c));
  out.push_back(Action::tick());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace plcmon
