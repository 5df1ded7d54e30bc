#include <map>
#include <tuple>
#include "doctest.h"
#include "helpers.hpp"
#include "plcmon/equivalence.hpp"

using namespace plcmon;
using namespace plcmon::test;

namespace {

// a tiny graph builder for saturation tests
Lts graph(std::uint32_t n,
          std::vector<std::tuple<std::uint32_t, Action, std::uint32_t>> edges) {
  Lts l;
  l.states.resize(n);
  l.out.resize(n);
  std::map<Action, std::uint32_t> ids;
  for (auto& [src, a, dst] : edges) {
    auto it = ids.find(a);
    std::uint32_t id;
    if (it == ids.end()) {
      id = static_cast<std::uint32_t>(l.actions.size());
      l.actions.push_back(a);
      ids.emplace(a, id);
    } else {
      id = it->second;
    }
    l.out[src].push_back({id, dst});
  }
  return l;
}

bool has_edge(const WeakLts& w, std::uint32_t src, const Action& a,
              std::uint32_t dst, bool strong) {
  for (std::size_t i = 0; i < w.graph.out[src].size(); ++i) {
    const auto& [act, d] = w.graph.out[src][i];
    if (d == dst && w.graph.actions[act] == a && w.strong[src][i] == strong)
      return true;
  }
  return false;
}

System remark_system(bool mitigation) {
  return scenario_system(scenario_inject(), mitigation);
}

}  // namespace

TEST_CASE("weak saturation of a tau cycle") {
  auto l = graph(2, {{0, Action::tau(), 1}, {1, Action::tau(), 0}});
  WeakLts w = weak_transitions(l);
  // both states weakly reach both (the self loops are the empty tau run)
  for (std::uint32_t s : {0u, 1u}) {
    CHECK(has_edge(w, s, Action::tau(), s, false));
    CHECK(has_edge(w, s, Action::tau(), 1 - s, s == 0));
  }
}

TEST_CASE("weak saturation of a tau-then-a chain") {
  auto l = graph(3, {{0, Action::tau(), 1}, {1, Action::cmd("a"), 2}});
  WeakLts w = weak_transitions(l);
  CHECK(has_edge(w, 0, Action::cmd("a"), 2, false));  // the added weak edge
  CHECK(has_edge(w, 1, Action::cmd("a"), 2, true));
}

TEST_CASE("weak saturation without tau adds only reflexive tau edges") {
  auto l = graph(2, {{0, Action::tick(), 1}});
  WeakLts w = weak_transitions(l);
  CHECK(w.graph.num_edges() == 3);  // tick + two tau self loops
  CHECK(has_edge(w, 0, Action::tick(), 1, true));
  CHECK(has_edge(w, 0, Action::tau(), 0, false));
  CHECK(has_edge(w, 1, Action::tau(), 1, false));
}

TEST_CASE("trace equivalence is reflexive and tick-sensitive") {
  Alphabet ab = abc();
  auto p = parse_controller("fix X . tick . end");
  Lts lp = explore(go_system(ab, p));
  CHECK(trace_equivalent(lp, lp).holds);

  auto q = parse_controller("fix X . tick . tick . end");
  Lts lq = explore(go_system(ab, q));
  auto verdict = trace_equivalent(lp, lq);
  CHECK(!verdict.holds);
  REQUIRE(verdict.counterexample.has_value());
  // shortest distinguishing trace: after one tick only p can end
  CHECK(verdict.counterexample->trace.size() == 2);
}

TEST_CASE("counterexample traces replay on exactly one side") {
  Alphabet ab = abc();
  auto p = parse_controller("fix X . tick . [ s . cmd a . end ] else ( end )");
  auto q = parse_controller("fix X . tick . [ s . end ] else ( end )");
  System sp = go_system(ab, p), sq = go_system(ab, q);
  auto verdict = trace_equivalent(explore(sp), explore(sq));
  REQUIRE(!verdict.holds);
  REQUIRE(verdict.counterexample.has_value());
  const auto& cex = *verdict.counterexample;
  const System& accept = cex.side == "left" ? sp : sq;
  const System& reject = cex.side == "left" ? sq : sp;
  CHECK(!run_trace(accept, cex.strong_trace).empty());
  CHECK(run_trace(reject, cex.strong_trace).empty());
}

TEST_CASE("weak simulation in both directions on a compromised node") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto p = random_controller(ab, seed, 3);
    auto m = random_malware(ab, seed + 1, 3);
    Lts attacked = explore(monitored_system(ab, p, m));
    Lts clean = explore(monitored_system(ab, p));
    Lts golden = explore(go_system(ab, p));
    CHECK(weakly_simulated_by(attacked, clean).holds);
    CHECK(weakly_simulated_by(clean, attacked).holds);
    CHECK(weakly_simulated_by(attacked, golden).holds);
    CHECK(weakly_simulated_by(golden, attacked).holds);
  }
}

TEST_CASE("simulation counterexamples name an unmatched move") {
  Alphabet ab = abc();
  auto big = parse_controller("fix X . tick . [ s . cmd a . end ] else ( end )");
  auto small = parse_controller("fix X . tick . end");
  auto verdict =
      weakly_simulated_by(explore(go_system(ab, big)), explore(go_system(ab, small)));
  CHECK(!verdict.holds);
  REQUIRE(verdict.counterexample.has_value());
  CHECK(verdict.counterexample->side == "left");
  CHECK(!verdict.counterexample->strong_trace.empty());
  CHECK(!verdict.counterexample->explanation.empty());
  // the path replays on the side that owns it
  CHECK(!run_trace(go_system(ab, big), verdict.counterexample->strong_trace).empty());
}

TEST_CASE("transparent monitors are weakly bisimilar to the plain controller") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto p = random_controller(ab, seed, 3);
    auto verdict = weakly_bisimilar(explore(monitored_system(ab, p)),
                                    explore(go_system(ab, p)));
    CHECK(verdict.holds);
  }
}

TEST_CASE("the stalled-injection scenario separates bisimilarity from traces") {
  Scenario sc = scenario_inject();
  System golden = go_system(sc.alphabet, sc.ctrl);
  Lts lg = explore(golden);

  System off = remark_system(false);
  Lts loff = explore(off);
  CHECK(trace_equivalent(loff, lg).holds);  // traces survive the deadlock
  auto bis = weakly_bisimilar(loff, lg);
  CHECK(!bis.holds);
  REQUIRE(bis.counterexample.has_value());
  const System& owner = bis.counterexample->side == "left" ? off : golden;
  CHECK(!run_trace(owner, bis.counterexample->strong_trace).empty());

  System on = remark_system(true);
  CHECK(weakly_bisimilar(explore(on), lg).holds);
}

TEST_CASE("relation sanity lattice on assorted pairs") {
  Alphabet ab = small_alphabet();
  std::vector<std::pair<Lts, Lts>> pairs;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto p = random_controller(ab, seed, 3);
    auto q = random_controller(ab, seed + 100, 3);
    auto m = random_malware(ab, seed, 2);
    pairs.emplace_back(explore(monitored_system(ab, p, m, true)),
                       explore(go_system(ab, p)));
    pairs.emplace_back(explore(go_system(ab, p)), explore(go_system(ab, q)));
  }
  for (const auto& [a, b] : pairs) {
    bool bis = weakly_bisimilar(a, b).holds;
    bool tr = trace_equivalent(a, b).holds;
    bool simLR = weakly_simulated_by(a, b).holds;
    bool simRL = weakly_simulated_by(b, a).holds;
    if (bis) CHECK(tr);
    if (tr) {
      CHECK(simLR);
      CHECK(simRL);
    }
    // reflexivity and symmetry spot checks
    CHECK(weakly_bisimilar(a, a).holds);
    CHECK(trace_equivalent(b, b).holds);
    CHECK(weakly_bisimilar(a, b).holds == weakly_bisimilar(b, a).holds);
    CHECK(trace_equivalent(a, b).holds == trace_equivalent(b, a).holds);
  }
}

TEST_CASE("budget overruns raise a distinct error") {
  Alphabet ab = small_alphabet();
  auto p = random_controller(ab, 3, 4);
  auto m = random_malware(ab, 4, 3);
  Lts a = explore(monitored_system(ab, p, m));
  Lts g = explore(go_system(ab, p));
  CHECK_THROWS_AS((void)weakly_bisimilar(a, g, 10), BudgetExceeded);
  CHECK_THROWS_AS((void)trace_equivalent(a, g, 1), BudgetExceeded);

  Lts partial = explore(go_system(ab, p), {.budget = 2, .jobs = 1});
  CHECK_THROWS_AS((void)trace_equivalent(partial, g), std::invalid_argument);
}

TEST_CASE("verdict serialization") {
  Alphabet ab = abc();
  auto p = parse_controller("fix X . tick . end");
  auto q = parse_controller("fix X . tick . tick . end");
  auto verdict = trace_equivalent(explore(go_system(ab, p)), explore(go_system(ab, q)));
  auto text = verdict.text();
  CHECK(text.find("trace-eq: fails") != std::string::npos);
  CHECK(verdict.json().find("\"holds\": false") != std::string::npos);
}
