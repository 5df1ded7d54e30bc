#include "plcmon/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace plcmon {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

// Shared action numbering across the two graphs under comparison.
struct Aligned {
  std::vector<Action> actions;
  std::vector<std::uint32_t> mapA, mapB;  // local action id -> global id
  std::uint32_t tau = kNone;

  Aligned(const Lts& a, const Lts& b) {
    std::map<Action, std::uint32_t> ids;
    auto add = [&](const Action& act) {
      auto it = ids.find(act);
      if (it != ids.end()) return it->second;
      std::uint32_t id = static_cast<std::uint32_t>(actions.size());
      actions.push_back(act);
      ids.emplace(act, id);
      return id;
    };
    for (const auto& act : a.actions) mapA.push_back(add(act));
    for (const auto& act : b.actions) mapB.push_back(add(act));
    auto it = ids.find(Action::tau());
    if (it != ids.end()) tau = it->second;
  }
};

// Weak-move view of one graph: tau reachability and tau* a tau* successor
// sets, memoized per state and per (state, action).
class WeakView {
 public:
  WeakView(const Lts& l, const std::vector<std::uint32_t>& toGlobal,
           std::uint32_t tauId)
      : tau_(tauId) {
    edges_.resize(l.out.size());
    for (std::uint32_t s = 0; s < l.out.size(); ++s) {
      edges_[s].reserve(l.out[s].size());
      for (const auto& [act, dst] : l.out[s])
        edges_[s].push_back({toGlobal[act], dst});
    }
    tau_memo_.resize(edges_.size());
    init_ = l.initial;
  }

  std::uint32_t initial() const { return init_; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& strong(
      std::uint32_t s) const {
    return edges_[s];
  }

  const std::vector<std::uint32_t>& tau_reach(std::uint32_t s) {
    if (!tau_memo_[s].empty()) return tau_memo_[s];
    std::vector<std::uint32_t> reach{s};
    std::unordered_set<std::uint32_t> seen{s};
    std::deque<std::uint32_t> q{s};
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop_front();
      for (const auto& [a, v] : edges_[u])
        if (a == tau_ && seen.insert(v).second) {
          reach.push_back(v);
          q.push_back(v);
        }
    }
    std::sort(reach.begin(), reach.end());
    tau_memo_[s] = std::move(reach);
    return tau_memo_[s];
  }

  // Weak successors on an observable action.
  const std::vector<std::uint32_t>& weak_succ(std::uint32_t s, std::uint32_t a) {
    std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | a;
    auto it = weak_memo_.find(key);
    if (it != weak_memo_.end()) return it->second;
    std::vector<std::uint32_t> out;
    for (std::uint32_t u : tau_reach(s))
      for (const auto& [act, v] : edges_[u])
        if (act == a) {
          const auto& tail = tau_reach(v);
          out.insert(out.end(), tail.begin(), tail.end());
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return weak_memo_.emplace(key, std::move(out)).first->second;
  }

  // Weak matching set for a challenger move: tau moves may be answered by
  // staying put.
  const std::vector<std::uint32_t>& answers(std::uint32_t s, std::uint32_t a) {
    return a == tau_ ? tau_reach(s) : weak_succ(s, a);
  }

  // Shortest strong path from the initial state to `target`.
  Trace path_to(std::uint32_t target, const std::vector<Action>& actions) {
    std::vector<std::uint32_t> parent(edges_.size(), kNone);
    std::vector<std::uint32_t> via(edges_.size(), kNone);
    std::deque<std::uint32_t> q{init_};
    parent[init_] = init_;
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop_front();
      if (u == target) break;
      for (const auto& [a, v] : edges_[u])
        if (parent[v] == kNone) {
          parent[v] = u;
          via[v] = a;
          q.push_back(v);
        }
    }
    Trace t;
    if (parent[target] == kNone) return t;
    for (std::uint32_t s = target; s != init_; s = parent[s])
      t.push_back(actions[via[s]]);
    std::reverse(t.begin(), t.end());
    return t;
  }

  // Strong realization of an observable weak trace, if one exists.
  std::optional<Trace> realize(const Trace& w, const std::vector<Action>& actions,
                               const std::map<Action, std::uint32_t>& gid) {
    std::vector<std::uint32_t> goal_ids;
    for (const auto& a : w) {
      auto it = gid.find(a);
      if (it == gid.end()) return std::nullopt;
      goal_ids.push_back(it->second);
    }
    const std::uint64_t W = w.size() + 1;
    auto key = [&](std::uint32_t s, std::uint32_t pos) {
      return static_cast<std::uint64_t>(s) * W + pos;
    };
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint32_t>> parent;
    std::deque<std::uint64_t> q;
    std::uint64_t start = key(init_, 0);
    parent[start] = {start, kNone};
    q.push_back(start);
    std::optional<std::uint64_t> goal;
    while (!q.empty() && !goal) {
      std::uint64_t cur = q.front();
      q.pop_front();
      std::uint32_t s = static_cast<std::uint32_t>(cur / W);
      std::uint32_t pos = static_cast<std::uint32_t>(cur % W);
      if (pos == w.size()) {
        goal = cur;
        break;
      }
      for (const auto& [a, v] : edges_[s]) {
        std::uint64_t nxt;
        if (a == tau_)
          nxt = key(v, pos);
        else if (a == goal_ids[pos])
          nxt = key(v, pos + 1);
        else
          continue;
        if (parent.emplace(nxt, std::make_pair(cur, a)).second) q.push_back(nxt);
      }
    }
    if (!goal) return std::nullopt;
    Trace t;
    for (std::uint64_t cur = *goal; parent[cur].first != cur; cur = parent[cur].first)
      t.push_back(actions[parent[cur].second]);
    std::reverse(t.begin(), t.end());
    return t;
  }

 private:
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges_;
  std::vector<std::vector<std::uint32_t>> tau_memo_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> weak_memo_;
  std::uint32_t tau_;
  std::uint32_t init_ = 0;
};

void require_complete(const Lts& a, const Lts& b) {
  if (!a.complete || !b.complete)
    throw std::invalid_argument("equivalence checks need complete graphs");
}

std::map<Action, std::uint32_t> global_ids(const Aligned& al) {
  std::map<Action, std::uint32_t> m;
  for (std::uint32_t i = 0; i < al.actions.size(); ++i) m.emplace(al.actions[i], i);
  return m;
}

}  // namespace

std::string EquivVerdict::text() const {
  std::ostringstream os;
  os << relation << ": " << (holds ? "holds" : "fails");
  if (!holds && counterexample) {
    os << "\ncounterexample (" << counterexample->side << ")";
    if (!counterexample->trace.empty())
      os << "\n  observable trace: " << trace_text(counterexample->trace);
    if (!counterexample->strong_trace.empty())
      os << "\n  strong replay:    " << trace_text(counterexample->strong_trace);
    if (!counterexample->explanation.empty())
      os << "\n" << counterexample->explanation;
  }
  return os.str();
}

std::string EquivVerdict::json() const {
  nlohmann::json j;
  j["relation"] = relation;
  j["holds"] = holds;
  if (counterexample) {
    nlohmann::json c;
    c["side"] = counterexample->side;
    auto dump = [](const Trace& t) {
      auto arr = nlohmann::json::array();
      for (const auto& a : t) arr.push_back(a.text());
      return arr;
    };
    c["trace"] = dump(counterexample->trace);
    c["strong_trace"] = dump(counterexample->strong_trace);
    c["explanation"] = counterexample->explanation;
    j["counterexample"] = std::move(c);
  }
  return j.dump(2);
}

WeakLts weak_transitions(const Lts& lts) {
  Aligned al(lts, lts);
  WeakView view(lts, al.mapA, al.tau);

  WeakLts out;
  out.graph = lts;
  out.strong.resize(lts.out.size());

  std::map<Action, std::uint32_t> action_ids;
  for (std::uint32_t i = 0; i < out.graph.actions.size(); ++i)
    action_ids.emplace(out.graph.actions[i], i);
  auto action_id = [&](const Action& a) {
    auto it = action_ids.find(a);
    if (it != action_ids.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(out.graph.actions.size());
    out.graph.actions.push_back(a);
    action_ids.emplace(a, id);
    return id;
  };
  std::uint32_t tau_local = action_id(Action::tau());

  for (std::uint32_t s = 0; s < lts.out.size(); ++s) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> strongSet(
        lts.out[s].begin(), lts.out[s].end());
    std::set<std::pair<std::uint32_t, std::uint32_t>> weakSet;
    for (std::uint32_t t : view.tau_reach(s)) weakSet.insert({tau_local, t});
    for (std::uint32_t a = 0; a < lts.actions.size(); ++a) {
      if (lts.actions[a].is_tau()) continue;
      for (std::uint32_t t : view.weak_succ(s, al.mapA[a])) weakSet.insert({a, t});
    }
    auto& edges = out.graph.out[s];
    auto& flags = out.strong[s];
    edges.clear();
    for (const auto& e : strongSet) {
      edges.push_back(e);
      flags.push_back(true);
    }
    for (const auto& e : weakSet) {
      if (strongSet.count(e)) continue;
      edges.push_back(e);
      flags.push_back(false);
    }
    // keep (action, target) order with strong edges marked
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return edges[x] < edges[y];
    });
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e2(edges.size());
    std::vector<bool> f2(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      e2[i] = edges[order[i]];
      f2[i] = flags[order[i]];
    }
    edges = std::move(e2);
    flags = std::move(f2);
  }
  return out;
}

// --- weak trace equivalence ---------------------------------------------------

EquivVerdict trace_equivalent(const Lts& a, const Lts& b,
                              std::uint64_t pair_budget) {
  require_complete(a, b);
  EquivVerdict verdict;
  verdict.relation = "trace-eq";

  Aligned al(a, b);
  WeakView va(a, al.mapA, al.tau), vb(b, al.mapB, al.tau);

  using Subset = std::vector<std::uint32_t>;
  struct PairKeyHash {
    std::size_t operator()(const std::pair<Subset, Subset>& p) const {
      std::size_t h = 1469598103934665603ull;
      for (auto v : p.first) h = (h ^ v) * 1099511628211ull;
      h = (h ^ 0xabcdefu) * 1099511628211ull;
      for (auto v : p.second) h = (h ^ v) * 1099511628211ull;
      return h;
    }
  };

  std::unordered_map<std::pair<Subset, Subset>, std::uint32_t, PairKeyHash> ids;
  std::vector<std::pair<Subset, Subset>> pairs;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> parent;  // (pair, action)

  auto enabled = [&](WeakView& view, const Subset& s) {
    std::set<std::uint32_t> acts;
    for (std::uint32_t u : s)
      for (const auto& [act, v] : view.strong(u))
        if (act != al.tau) acts.insert(act);
    return acts;
  };
  auto step = [&](WeakView& view, const Subset& s, std::uint32_t act) {
    Subset out;
    for (std::uint32_t u : s)
      for (const auto& [a2, v] : view.strong(u))
        if (a2 == act) {
          const auto& tail = view.tau_reach(v);
          out.insert(out.end(), tail.begin(), tail.end());
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  std::pair<Subset, Subset> init{va.tau_reach(va.initial()),
                                 vb.tau_reach(vb.initial())};
  ids.emplace(init, 0);
  pairs.push_back(init);
  parent.push_back({0, kNone});

  auto build_trace = [&](std::uint32_t pairIdx, std::uint32_t extra) {
    Trace t;
    for (std::uint32_t i = pairIdx; parent[i].second != kNone; i = parent[i].first)
      t.push_back(al.actions[parent[i].second]);
    std::reverse(t.begin(), t.end());
    if (extra != kNone) t.push_back(al.actions[extra]);
    return t;
  };

  auto gids = global_ids(al);
  for (std::uint32_t cur = 0; cur < pairs.size(); ++cur) {
    if (pairs.size() > pair_budget)
      throw BudgetExceeded("trace equivalence exceeded the subset budget");
    auto ea = enabled(va, pairs[cur].first);
    auto eb = enabled(vb, pairs[cur].second);
    if (ea != eb) {
      std::uint32_t diff = kNone;
      bool leftHas = false;
      for (auto x : ea)
        if (!eb.count(x)) { diff = x; leftHas = true; break; }
      if (diff == kNone)
        for (auto x : eb)
          if (!ea.count(x)) { diff = x; break; }
      Counterexample cex;
      cex.side = leftHas ? "left" : "right";
      cex.trace = build_trace(cur, diff);
      auto strong = (leftHas ? va : vb).realize(cex.trace, al.actions, gids);
      if (strong) cex.strong_trace = *strong;
      cex.explanation = "after the observable trace only the " + cex.side +
                        " system can perform " + al.actions[diff].text();
      verdict.holds = false;
      verdict.counterexample = std::move(cex);
      return verdict;
    }
    for (std::uint32_t act : ea) {
      std::pair<Subset, Subset> next{step(va, pairs[cur].first, act),
                                     step(vb, pairs[cur].second, act)};
      if (ids.emplace(next, static_cast<std::uint32_t>(pairs.size())).second) {
        pairs.push_back(next);
        parent.push_back({cur, act});
      }
    }
  }
  verdict.holds = true;
  return verdict;
}

// --- weak simulation and bisimulation ------------------------------------------

namespace {

struct GameMove {
  std::uint8_t side;  // 0: left challenges, 1: right challenges
  std::uint32_t act;  // global action id
  std::uint32_t succ;
  std::vector<std::uint32_t> matches;  // pair indices
};

struct Game {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::vector<GameMove>> moves;
  std::vector<std::uint32_t> removed_round;  // 0 = alive
  std::vector<std::uint32_t> reason;         // failing move index
};

// Candidate discovery plus synchronous greatest-fixpoint refinement. Pairs
// removed in round r have a refutation of depth r, so following reasons
// into the earliest-removed matches yields a minimal-depth explanation.
Game play(WeakView& va, WeakView& vb, bool bisim, std::uint64_t budget) {
  Game g;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::uint64_t work = 0;

  auto pair_id = [&](std::uint32_t p, std::uint32_t q) {
    std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(g.pairs.size());
    index.emplace(key, id);
    g.pairs.push_back({p, q});
    return id;
  };

  pair_id(va.initial(), vb.initial());
  for (std::uint32_t cur = 0; cur < g.pairs.size(); ++cur) {
    auto [p, q] = g.pairs[cur];
    std::vector<GameMove> ms;
    for (const auto& [act, p2] : va.strong(p)) {
      GameMove m{0, act, p2, {}};
      for (std::uint32_t q2 : vb.answers(q, act)) m.matches.push_back(pair_id(p2, q2));
      work += m.matches.size() + 1;
      ms.push_back(std::move(m));
    }
    if (bisim) {
      for (const auto& [act, q2] : vb.strong(q)) {
        GameMove m{1, act, q2, {}};
        for (std::uint32_t p2 : va.answers(p, act)) m.matches.push_back(pair_id(p2, q2));
        work += m.matches.size() + 1;
        ms.push_back(std::move(m));
      }
    }
    g.moves.push_back(std::move(ms));
    if (g.pairs.size() > budget || work > budget)
      throw BudgetExceeded("weak relation check exceeded the pair budget");
  }

  g.removed_round.assign(g.pairs.size(), 0);
  g.reason.assign(g.pairs.size(), kNone);
  for (std::uint32_t round = 1;; ++round) {
    std::vector<std::uint32_t> dying;
    for (std::uint32_t i = 0; i < g.pairs.size(); ++i) {
      if (g.removed_round[i]) continue;
      for (std::uint32_t mi = 0; mi < g.moves[i].size(); ++mi) {
        const auto& m = g.moves[i][mi];
        bool matched = std::any_of(m.matches.begin(), m.matches.end(),
                                   [&](std::uint32_t j) { return !g.removed_round[j]; });
        if (!matched) {
          dying.push_back(i);
          g.reason[i] = mi;
          break;
        }
      }
    }
    if (dying.empty()) break;
    for (std::uint32_t i : dying) g.removed_round[i] = round;
    if (g.removed_round[0]) break;
  }
  return g;
}

std::string describe_pair(const Game& g, const Lts& a, const Lts& b,
                          std::uint32_t idx) {
  auto [p, q] = g.pairs[idx];
  (void)a;
  (void)b;
  return "(left#" + std::to_string(p) + ", right#" + std::to_string(q) + ")";
}

void explain(const Game& g, const Aligned& al, const Lts& a, const Lts& b,
             std::uint32_t idx, int depth, std::string indent,
             std::ostringstream& os) {
  if (g.reason[idx] == kNone) return;
  const auto& m = g.moves[idx][g.reason[idx]];
  const char* who = m.side == 0 ? "left" : "right";
  os << indent << "at " << describe_pair(g, a, b, idx) << " the " << who
     << " side moves '" << al.actions[m.act].text() << "' to "
     << (m.side == 0 ? "left#" : "right#") << m.succ;
  if (m.matches.empty()) {
    os << "; the other side has no weak answer\n";
    return;
  }
  os << "; every weak answer fails:\n";
  if (depth <= 0) {
    os << indent << "  ...\n";
    return;
  }
  std::vector<std::uint32_t> picks(m.matches.begin(), m.matches.end());
  std::sort(picks.begin(), picks.end(), [&](std::uint32_t x, std::uint32_t y) {
    return g.removed_round[x] < g.removed_round[y];
  });
  std::size_t shown = std::min<std::size_t>(picks.size(), 2);
  for (std::size_t i = 0; i < shown; ++i)
    explain(g, al, a, b, picks[i], depth - 1, indent + "  ", os);
  if (picks.size() > shown)
    os << indent << "  (" << picks.size() - shown << " more answers omitted)\n";
}

EquivVerdict weak_game_verdict(const Lts& a, const Lts& b, bool bisim,
                               std::uint64_t budget, const char* relation) {
  require_complete(a, b);
  EquivVerdict verdict;
  verdict.relation = relation;

  Aligned al(a, b);
  WeakView va(a, al.mapA, al.tau), vb(b, al.mapB, al.tau);
  Game g = play(va, vb, bisim, budget);

  if (!g.removed_round[0]) {
    verdict.holds = true;
    return verdict;
  }

  // Find a depth-one refutation reachable through the reason chain: a pair
  // whose challenger move has no weak answer at all.
  std::uint32_t at = 0;
  while (!g.moves[at][g.reason[at]].matches.empty()) {
    const auto& m = g.moves[at][g.reason[at]];
    std::uint32_t best = m.matches.front();
    for (std::uint32_t j : m.matches)
      if (g.removed_round[j] < g.removed_round[best]) best = j;
    at = best;
  }
  const auto& m = g.moves[at][g.reason[at]];

  Counterexample cex;
  cex.side = m.side == 0 ? "left" : "right";
  WeakView& owner = m.side == 0 ? va : vb;
  std::uint32_t state = m.side == 0 ? g.pairs[at].first : g.pairs[at].second;
  cex.strong_trace = owner.path_to(state, al.actions);
  cex.strong_trace.push_back(al.actions[m.act]);
  for (const auto& act : cex.strong_trace)
    if (!act.is_tau()) cex.trace.push_back(act);
  std::ostringstream os;
  explain(g, al, a, b, 0, 4, "  ", os);
  cex.explanation = os.str();
  verdict.holds = false;
  verdict.counterexample = std::move(cex);
  return verdict;
}

}  // namespace

EquivVerdict weakly_simulated_by(const Lts& a, const Lts& b,
                                 std::uint64_t pair_budget) {
  return weak_game_verdict(a, b, false, pair_budget, "weak-sim");
}

EquivVerdict weakly_bisimilar(const Lts& a, const Lts& b,
                              std::uint64_t pair_budget) {
  return weak_game_verdict(a, b, true, pair_budget, "weak-bisim");
}

}  // namespace plcmon
