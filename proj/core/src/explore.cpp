#include <cstdlib>
#include <future>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "plcmon/dsl.hpp"
#include "plcmon/semantics.hpp"

namespace plcmon {

NetState canonical_state(const NetState& s) {
  NetState out;
  out.reserve(s.size());
  for (const auto& n : s)
    out.push_back({canonical(n.mon), canonical(n.ctrl), canonical(n.mal)});
  return out;
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

std::string squash(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == '\n' || c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::size_t Lts::num_edges() const {
  std::size_t n = 0;
  for (const auto& v : out) n += v.size();
  return n;
}

std::string Lts::state_label(std::uint32_t id) const {
  return state_text(states[id]);
}

std::string state_text(const NetState& state) {
  std::string out;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += " || ";
    out += squash(print_automaton(state[i].mon));
    out += " |- ";
    if (state[i].mal) {
      out += "( " + squash(print_controller(state[i].ctrl)) + " | " +
             squash(print_malware(state[i].mal)) + " )";
    } else {
      out += squash(print_controller(state[i].ctrl));
    }
  }
  return out;
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("PLCMON_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1'000'000;
}

Lts explore(const System& system, const ExploreOptions& opts) {
  Lts lts;
  lts.alphabet = system.alphabet;

  std::unordered_map<NetState, std::uint32_t, NetStateHash> ids;
  std::map<Action, std::uint32_t> action_ids;
  auto action_id = [&](const Action& a) {
    auto it = action_ids.find(a);
    if (it != action_ids.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(lts.actions.size());
    lts.actions.push_back(a);
    action_ids.emplace(a, id);
    return id;
  };
  auto intern = [&](const NetState& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return std::make_pair(it->second, false);
    std::uint32_t id = static_cast<std::uint32_t>(lts.states.size());
    lts.states.push_back(s);
    lts.out.emplace_back();
    ids.emplace(s, id);
    return std::make_pair(id, true);
  };

  NetState init = canonical_state(initial_state(system));
  intern(init);
  lts.initial = 0;

  using Succs = std::vector<std::pair<Action, NetState>>;
  auto successors = [&system](const NetState& s) {
    Succs raw = network_step(s, system);
    for (auto& [a, t] : raw) t = canonical_state(t);
    return raw;
  };

  const int jobs = std::max(1, opts.jobs);
  std::vector<std::uint32_t> frontier{0};
  bool truncated = false;

  while (!frontier.empty() && !truncated) {
    std::vector<Succs> layer(frontier.size());
    if (jobs == 1 || frontier.size() < 2) {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        layer[i] = successors(lts.states[frontier[i]]);
    } else {
      std::vector<std::future<void>> tasks;
      std::size_t chunk = (frontier.size() + jobs - 1) / jobs;
      for (int w = 0; w < jobs; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(frontier.size(), lo + chunk);
        if (lo >= hi) break;
        tasks.push_back(std::async(std::launch::async, [&, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i)
            layer[i] = successors(lts.states[frontier[i]]);
        }));
      }
      for (auto& t : tasks) t.get();
    }

    std::vector<std::uint32_t> next;
    for (std::size_t i = 0; i < frontier.size() && !truncated; ++i) {
      std::uint32_t src = frontier[i];
      for (const auto& [a, target] : layer[i]) {
        if (ids.find(target) == ids.end() && lts.states.size() >= opts.budget) {
          truncated = true;
          break;
        }
        auto [dst, fresh] = intern(target);
        lts.out[src].push_back({action_id(a), dst});
        if (fresh) next.push_back(dst);
      }
    }
    frontier = std::move(next);
  }
  lts.complete = !truncated;

  // renumber actions into canonical order so exports and tests are stable
  std::vector<std::uint32_t> remap(lts.actions.size());
  {
    std::vector<std::uint32_t> order(lts.actions.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return lts.actions[a] < lts.actions[b];
    });
    std::vector<Action> sorted;
    sorted.reserve(lts.actions.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
      remap[order[i]] = i;
      sorted.push_back(lts.actions[order[i]]);
    }
    lts.actions = std::move(sorted);
  }
  for (auto& edges : lts.out) {
    for (auto& [act, dst] : edges) act = remap[act];
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return lts;
}

std::vector<NetState> run_trace(const System& system, const Trace& t,
                                std::uint64_t state_budget) {
  std::vector<NetState> current{canonical_state(initial_state(system))};
  std::uint64_t visited = 1;
  for (const auto& step : t) {
    std::vector<NetState> next;
    std::unordered_set<NetState, NetStateHash> seen;
    for (const auto& s : current) {
      for (const auto& [a, target] : network_step(s, system)) {
        if (a != step) continue;
        NetState c = canonical_state(target);
        if (seen.insert(c).second) {
          next.push_back(std::move(c));
          if (++visited > state_budget)
            throw BudgetExceeded("run_trace exceeded the state budget");
        }
      }
    }
    if (next.empty()) return {};
    std::sort(next.begin(), next.end(),
              [](const NetState& a, const NetState& b) { return cmp(a, b) < 0; });
    current = std::move(next);
  }
  return current;
}

std::vector<std::uint32_t> find_deadlocks(const Lts& lts) {
  if (!lts.complete)
    throw std::invalid_argument("find_deadlocks requires a complete graph");
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < lts.out.size(); ++i)
    if (lts.out[i].empty()) out.push_back(i);
  return out;
}

std::string lts_json(const Lts& lts) {
  nlohmann::json j;
  j["initial"] = lts.initial;
  j["complete"] = lts.complete;
  auto states = nlohmann::json::array();
  for (std::uint32_t i = 0; i < lts.states.size(); ++i)
    states.push_back({{"id", i}, {"term", lts.state_label(i)}});
  j["states"] = std::move(states);
  auto edges = nlohmann::json::array();
  for (std::uint32_t src = 0; src < lts.out.size(); ++src)
    for (const auto& [act, dst] : lts.out[src])
      edges.push_back(
          {{"src", src}, {"action", lts.actions[act].text()}, {"dst", dst}});
  j["edges"] = std::move(edges);
  return j.dump(2);
}

std::string lts_dot(const Lts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n";
  os << "  node [shape=circle];\n";
  os << "  " << lts.initial << " [shape=doublecircle];\n";
  for (std::uint32_t src = 0; src < lts.out.size(); ++src)
    for (const auto& [act, dst] : lts.out[src])
      os << "  " << src << " -> " << dst << " [label=\""
         << lts.actions[act].text() << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace plcmon
