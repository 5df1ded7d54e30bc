#include "plcmon/generators.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "plcmon/synthesis.hpp"

namespace plcmon {

namespace {

std::string num(int i) { return std::to_string(i); }

}  // namespace

Alphabet wtn_alphabet(int n) {
  Alphabet a;
  for (int i = 1; i <= n; ++i) {
    a.sensors.push_back("l" + num(i));
    a.sensors.push_back("h" + num(i));
    a.sensors.push_back("m" + num(i));
    a.actuators.push_back("on" + num(i));
    a.actuators.push_back("off" + num(i));
    a.actuators.push_back("open" + num(i));
    a.actuators.push_back("close" + num(i));
  }
  for (int j = 0; j < n; ++j) {
    a.channels.push_back("req_on" + num(j));
    a.channels.push_back("req_off" + num(j));
  }
  a.normalize();
  return a;
}

CtrlPtr wtn_controller(int i, int n) {
  const std::string up_on = "req_on" + num(i - 1);
  const std::string up_off = "req_off" + num(i - 1);
  const std::string down_on = "req_on" + num(i);
  const std::string down_off = "req_off" + num(i);
  const std::string pump_on = "on" + num(i);
  const std::string pump_off = "off" + num(i);
  const std::string valve_open = "open" + num(i);
  const std::string valve_close = "close" + num(i);
  const bool downstream = i < n;

  auto end = ctrl_end_var("X");
  auto cycle_end = [&](const std::string& valve) {
    return ctrl_cmd(valve, end);
  };

  // serve downstream pump requests, then set the valve
  auto serve = [&](const std::string& valve) -> CtrlPtr {
    CtrlPtr after = valve.empty() ? end : cycle_end(valve);
    if (!downstream) return after;
    std::vector<Ctrl::Branch> branches{
        {Action::recv(down_on), ctrl_cmd(pump_on, after)},
        {Action::recv(down_off), ctrl_cmd(pump_off, after)},
    };
    return ctrl_timeout(std::move(branches), after);
  };

  auto request = [&](const std::string& chan, const std::string& valve) {
    std::vector<Ctrl::Branch> branches{{Action::send(chan), serve(valve)}};
    return ctrl_timeout(std::move(branches), cycle_end(valve));
  };

  std::vector<Ctrl::Branch> levels{
      {Action::read("l" + num(i)), request(up_on, valve_close)},
      {Action::read("h" + num(i)), request(up_off, valve_open)},
      {Action::read("m" + num(i)), serve("")},
  };
  return ctrl_fix("X", ctrl_sleep(ctrl_timeout(std::move(levels), end)));
}

MalwPtr wtn_malware(int i) {
  auto var = malw_var("X");
  std::vector<Malw::Branch> drop{{Action::drop("close" + num(i)), var}};
  auto wait_drop = malw_timeout(std::move(drop), var);
  std::vector<Malw::Branch> send{
      {Action::send("req_off" + num(i - 1)), wait_drop}};
  return malw_fix("X", malw_tick(malw_timeout(std::move(send), var)));
}

namespace {

CtrlPtr wtn_sink() {
  auto end = ctrl_end_var("X");
  std::vector<Ctrl::Branch> branches{
      {Action::recv("req_on0"), end},
      {Action::recv("req_off0"), end},
  };
  return ctrl_fix("X", ctrl_sleep(ctrl_timeout(std::move(branches), end)));
}

}  // namespace

SourceFile wtn_source(const WtnParams& params) {
  if (params.n < 1) throw std::invalid_argument("wtn needs at least one node");
  const int n = params.n;

  SourceFile file;
  file.alphabet = wtn_alphabet(n);

  std::vector<std::string> names;
  if (n >= 2) {
    file.controllers.emplace_back("p0", wtn_sink());
    names.push_back("p0");
  }
  for (int i = 1; i <= n; ++i) {
    std::string name = "p" + num(i);
    file.controllers.emplace_back(name, wtn_controller(i, n));
    names.push_back(name);
    if (params.malware_on(i))
      file.malware.emplace_back("mal" + num(i), wtn_malware(i));
  }

  NetworkDef clean, monitored, attacked;
  for (const auto& name : names) {
    clean.nodes.push_back({NodeRef::Mon::Go, "", name, ""});
    monitored.nodes.push_back({NodeRef::Mon::Synth, name, name, ""});
    NodeRef atk{NodeRef::Mon::Synth, name, name, ""};
    if (name != "p0") {
      int i = std::stoi(name.substr(1));
      if (params.malware_on(i)) atk.mal = "mal" + num(i);
    }
    attacked.nodes.push_back(atk);
  }
  file.networks.emplace_back("clean", clean);
  file.networks.emplace_back("monitored", monitored);
  file.networks.emplace_back("attacked", attacked);
  file.entry = "attacked";
  return file;
}

SourceFile wtn_node_source() {
  SourceFile file;
  file.alphabet = wtn_alphabet(2);
  // the generic node: node 1 of a 2-node cascade has both neighbours
  file.controllers.emplace_back("p1", wtn_controller(1, 2));
  file.malware.emplace_back("mal1", wtn_malware(1));
  NetworkDef clean, monitored, attacked;
  clean.nodes.push_back({NodeRef::Mon::Go, "", "p1", ""});
  monitored.nodes.push_back({NodeRef::Mon::Synth, "p1", "p1", ""});
  attacked.nodes.push_back({NodeRef::Mon::Synth, "p1", "p1", "mal1"});
  file.networks.emplace_back("clean", clean);
  file.networks.emplace_back("monitored", monitored);
  file.networks.emplace_back("attacked", attacked);
  file.entry = "attacked";
  return file;
}

// --- deadlock scenarios ---------------------------------------------------------

Scenario scenario_inject() {
  Scenario sc;
  sc.alphabet.actuators = {"open", "shut"};
  sc.alphabet.channels = {"req_open", "req_shut"};
  sc.alphabet.normalize();

  auto end = ctrl_end_var("X");
  std::vector<Ctrl::Branch> branches{
      {Action::recv("req_open"), ctrl_cmd("open", end)},
      {Action::recv("req_shut"), ctrl_cmd("shut", end)},
  };
  sc.ctrl = ctrl_fix("X", ctrl_sleep(ctrl_timeout(std::move(branches), end)));

  // pretend a req_open arrived, then fall silent
  std::vector<Malw::Branch> inject{{Action::recv("req_open"), malw_nil()}};
  sc.malware = malw_fix("X", malw_tick(malw_timeout(std::move(inject), malw_var("X"))));
  return sc;
}

Scenario scenario_drop() {
  Scenario sc;
  sc.alphabet.actuators = {"open"};
  sc.alphabet.normalize();

  sc.ctrl = ctrl_fix("X", ctrl_sleep(ctrl_cmd("open", ctrl_end_var("X"))));
  std::vector<Malw::Branch> drop{{Action::drop("open"), malw_nil()}};
  sc.malware = malw_fix("X", malw_tick(malw_timeout(std::move(drop), malw_nil())));
  return sc;
}

System scenario_system(const Scenario& sc, bool mitigation) {
  EditPtr monitor = synthesize(sc.ctrl, sc.alphabet).automaton;
  return System{sc.alphabet, {MonNode{monitor, sc.ctrl, sc.malware, mitigation}}};
}

// --- random corpus ---------------------------------------------------------------

Alphabet small_alphabet() {
  Alphabet a;
  a.sensors = {"lo", "hi"};
  a.actuators = {"pump", "valve"};
  a.channels = {"ask", "tell"};
  a.normalize();
  return a;
}

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int pick(int n) {  // uniform in [0, n)
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(gen));
  }
  bool chance(int percent) { return pick(100) < percent; }
};

// distinct sample of up to k names
std::vector<std::string> sample(Rng& rng, const std::vector<std::string>& pool,
                                int k) {
  std::vector<std::string> names = pool;
  for (int i = 0; i < static_cast<int>(names.size()); ++i)
    std::swap(names[i], names[rng.pick(static_cast<int>(names.size()))]);
  names.resize(std::min<std::size_t>(names.size(), static_cast<std::size_t>(k)));
  return names;
}

CtrlPtr gen_act(Rng& rng, const Alphabet& ab, int d) {
  CtrlPtr t = ctrl_end_var("X");
  int cmds = d <= 0 ? rng.pick(2) : rng.pick(3);
  for (int i = 0; i < cmds && !ab.actuators.empty(); ++i)
    t = ctrl_cmd(ab.actuators[rng.pick(static_cast<int>(ab.actuators.size()))], t);
  return t;
}

CtrlPtr gen_comm(Rng& rng, const Alphabet& ab, int d) {
  if (d <= 0 || ab.channels.empty()) return gen_act(rng, ab, d);
  int roll = rng.pick(100);
  if (roll < 30) {
    auto chans = sample(rng, ab.channels, 1 + rng.pick(2));
    std::vector<Ctrl::Branch> bs;
    for (const auto& c : chans)
      bs.push_back({Action::recv(c), gen_comm(rng, ab, d - 1)});
    return ctrl_timeout(std::move(bs), gen_comm(rng, ab, d - 1));
  }
  if (roll < 55) {
    std::vector<Ctrl::Branch> bs{
        {Action::send(ab.channels[rng.pick(static_cast<int>(ab.channels.size()))]),
         gen_comm(rng, ab, d - 1)}};
    return ctrl_timeout(std::move(bs), gen_comm(rng, ab, d - 1));
  }
  return gen_act(rng, ab, d);
}

CtrlPtr gen_sens(Rng& rng, const Alphabet& ab, int d) {
  if (d <= 0) return gen_comm(rng, ab, 0);
  int roll = rng.pick(100);
  if (roll < 20) return ctrl_sleep(gen_sens(rng, ab, d - 1));
  if (roll < 55 && !ab.sensors.empty()) {
    auto sensors = sample(rng, ab.sensors, 1 + rng.pick(3));
    std::vector<Ctrl::Branch> bs;
    for (const auto& s : sensors)
      bs.push_back({Action::read(s), gen_sens(rng, ab, d - 1)});
    return ctrl_timeout(std::move(bs), gen_sens(rng, ab, d - 1));
  }
  return gen_comm(rng, ab, d);
}

MalwPtr gen_malw(Rng& rng, const Alphabet& ab, int d, bool under_fix) {
  if (d <= 0) return under_fix && rng.chance(50) ? malw_var("X") : malw_nil();
  int roll = rng.pick(100);
  if (roll < 15) return malw_nil();
  if (roll < 40) return malw_tick(gen_malw(rng, ab, d - 1, under_fix));
  if (roll < 55 && d >= 2 && !under_fix)
    return malw_fix("X", malw_tick(gen_malw(rng, ab, d - 1, true)));
  std::vector<Action> pool;
  for (const auto& a : ab.actuators) {
    pool.push_back(Action::cmd(a));
    pool.push_back(Action::drop(a));
  }
  for (const auto& c : ab.channels) {
    pool.push_back(Action::send(c));
    pool.push_back(Action::recv(c));
  }
  if (pool.empty()) return malw_nil();
  int want = 1 + rng.pick(2);
  std::vector<Malw::Branch> bs;
  std::vector<Action> used;
  for (int i = 0; i < want; ++i) {
    Action a = pool[rng.pick(static_cast<int>(pool.size()))];
    if (std::find(used.begin(), used.end(), a) != used.end()) continue;
    used.push_back(a);
    bs.push_back({a, gen_malw(rng, ab, d - 1, under_fix)});
  }
  if (bs.empty()) bs.push_back({pool[0], gen_malw(rng, ab, d - 1, under_fix)});
  // the timeout edge is time-guarded, so a bare variable is fine there
  MalwPtr els = under_fix && rng.chance(40) ? malw_var("X")
                                            : gen_malw(rng, ab, d - 1, under_fix);
  return malw_timeout(std::move(bs), els);
}

}  // namespace

CtrlPtr random_controller(const Alphabet& alphabet, std::uint64_t seed, int depth) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  return ctrl_fix("X", ctrl_sleep(gen_sens(rng, alphabet, depth)));
}

MalwPtr random_malware(const Alphabet& alphabet, std::uint64_t seed, int depth) {
  if (depth < 1) throw std::invalid_argument("malware depth must be >= 1");
  Rng rng(seed * 0xda942042e4dd58b5ull + 0x9e3779b97f4a7c15ull);
  return gen_malw(rng, alphabet, depth, false);
}

// --- synthesis complexity ladder ---------------------------------------------------

Alphabet ladder_alphabet(int k) {
  Alphabet a;
  for (int i = 1; i <= k; ++i) {
    a.actuators.push_back("act" + num(i));
    a.channels.push_back("link" + num(i));
  }
  a.normalize();
  return a;
}

CtrlPtr ladder_controller(int k) {
  CtrlPtr t = ctrl_end_var("X");
  for (int i = k; i >= 1; --i) t = ctrl_cmd("act" + num(i), t);
  for (int i = k; i >= 1; --i) {
    std::vector<Ctrl::Branch> bs{{Action::send("link" + num(i)), t}};
    t = ctrl_timeout(std::move(bs), ctrl_end_var("X"));
  }
  return ctrl_fix("X", ctrl_sleep(t));
}

}  // namespace plcmon
