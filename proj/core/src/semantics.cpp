#include "plcmon/semantics.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace plcmon {

namespace {

constexpr int kMaxUnfold = 4096;

template <typename T>
void sort_unique(std::vector<T>& v, bool (*less)(const T&, const T&)) {
  std::sort(v.begin(), v.end(), less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool ctrl_succ_less(const std::pair<Action, CtrlPtr>& a,
                    const std::pair<Action, CtrlPtr>& b) {
  if (a.first != b.first) return a.first < b.first;
  return cmp(a.second.get(), b.second.get()) < 0;
}

bool malw_succ_less(const std::pair<Action, MalwPtr>& a,
                    const std::pair<Action, MalwPtr>& b) {
  if (a.first != b.first) return a.first < b.first;
  return cmp(a.second.get(), b.second.get()) < 0;
}

template <typename K, typename V, typename H>
class Memo {
 public:
  bool get(const K& k, V& out) {
    std::lock_guard<std::mutex> lock(m_);
    auto it = cache_.find(k);
    if (it == cache_.end()) return false;
    out = it->second;
    return true;
  }
  void put(const K& k, const V& v) {
    std::lock_guard<std::mutex> lock(m_);
    cache_.emplace(k, v);
  }

 private:
  std::unordered_map<K, V, H> cache_;
  std::mutex m_;
};

struct PtrHash {
  std::size_t operator()(const void* p) const {
    return std::hash<const void*>{}(p);
  }
};

}  // namespace

CtrlSuccs ctrl_step(const CtrlPtr& term) {
  static Memo<const void*, CtrlSuccs, PtrHash> memo;
  if (!term) return {};
  CtrlSuccs cached;
  if (memo.get(term.get(), cached)) return cached;

  CtrlPtr t = term;
  for (int i = 0; t && t->tag == Ctrl::Tag::Fix; ++i) {
    CtrlPtr unfolded = subst(t->child, t->name, t);
    if (unfolded == t || i > kMaxUnfold) return {};
    t = unfolded;
  }

  CtrlSuccs out;
  if (t) {
    switch (t->tag) {
      case Ctrl::Tag::Sleep:
        out.push_back({Action::tick(), t->child});
        break;
      case Ctrl::Tag::Timeout:
        for (const auto& b : t->branches) out.push_back({b.guard, b.body});
        out.push_back({Action::tick(), t->child});
        break;
      case Ctrl::Tag::Cmd:
        out.push_back({Action::cmd(t->name), t->child});
        break;
      case Ctrl::Tag::End:
        if (t->child) out.push_back({Action::end(), t->child});
        break;
      case Ctrl::Tag::Var:
      case Ctrl::Tag::Fix:
        break;
    }
  }
  sort_unique(out, ctrl_succ_less);
  memo.put(term.get(), out);
  return out;
}

MalwSuccs malware_step(const MalwPtr& term) {
  static Memo<const void*, MalwSuccs, PtrHash> memo;
  if (!term) return {};
  MalwSuccs cached;
  if (memo.get(term.get(), cached)) return cached;

  MalwPtr t = term;
  for (int i = 0; t && t->tag == Malw::Tag::Fix; ++i) {
    MalwPtr unfolded = subst(t->child, t->name, t);
    if (unfolded == t || i > kMaxUnfold) return {};
    t = unfolded;
  }

  MalwSuccs out;
  if (t) {
    switch (t->tag) {
      case Malw::Tag::Nil:
        out.push_back({Action::tick(), t});
        break;
      case Malw::Tag::Tick:
        out.push_back({Action::tick(), t->child});
        break;
      case Malw::Tag::Timeout:
        for (const auto& b : t->branches) out.push_back({b.guard, b.body});
        out.push_back({Action::tick(), t->child});
        break;
      case Malw::Tag::Var:
      case Malw::Tag::Fix:
        break;
    }
  }
  sort_unique(out, malw_succ_less);
  memo.put(term.get(), out);
  return out;
}

namespace {

bool comp_succ_less(const std::pair<Action, Compromised>& a,
                    const std::pair<Action, Compromised>& b) {
  if (a.first != b.first) return a.first < b.first;
  if (int c = cmp(a.second.ctrl.get(), b.second.ctrl.get())) return c < 0;
  return cmp(a.second.malware.get(), b.second.malware.get()) < 0;
}

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    return std::hash<const void*>{}(p.first) * 31 ^
           std::hash<const void*>{}(p.second);
  }
};

}  // namespace

CompSuccs compromised_step(const Compromised& j) {
  static Memo<std::pair<const void*, const void*>, CompSuccs, PairHash> memo;
  std::pair<const void*, const void*> key{j.ctrl.get(), j.malware.get()};
  CompSuccs cached;
  if (memo.get(key, cached)) return cached;

  CompSuccs out;
  auto zsucc = ctrl_step(j.ctrl);
  if (!j.malware) {
    for (const auto& [a, z] : zsucc) out.push_back({a, {z, nullptr}});
  } else {
    auto msucc = malware_step(j.malware);
    for (const auto& [a, z] : zsucc)
      if (a.kind != ActKind::Tick) out.push_back({a, {z, j.malware}});
    for (const auto& [a, m] : msucc)
      if (a.kind != ActKind::Tick && a.kind != ActKind::Drop)
        out.push_back({a, {j.ctrl, m}});
    for (const auto& [az, z] : zsucc) {
      if (az.kind == ActKind::Cmd) {
        for (const auto& [am, m] : msucc)
          if (am.kind == ActKind::Drop && am.name == az.name)
            out.push_back({Action::tau(), {z, m}});
      } else if (az.kind == ActKind::Tick) {
        for (const auto& [am, m] : msucc)
          if (am.kind == ActKind::Tick)
            out.push_back({Action::tick(), {z, m}});
      }
    }
  }
  sort_unique(out, comp_succ_less);
  memo.put(key, out);
  return out;
}

namespace {

EditPtr unfold_edit(const EditPtr& e) {
  EditPtr t = e;
  for (int i = 0; t && t->tag == Edit::Tag::Fix; ++i) {
    EditPtr unfolded = subst(t->child, t->name, t);
    if (unfolded == t || i > kMaxUnfold) return nullptr;
    t = unfolded;
  }
  return t;
}

bool insertable(const Action& a) {
  return a.kind == ActKind::Tick || a.kind == ActKind::Cmd ||
         a.kind == ActKind::Send || a.kind == ActKind::Recv;
}

bool edit_move_less(const std::pair<Action, EditPtr>& a,
                    const std::pair<Action, EditPtr>& b) {
  if (a.first != b.first) return a.first < b.first;
  return cmp(a.second.get(), b.second.get()) < 0;
}

struct ActionPtrHash {
  std::size_t operator()(const std::pair<const void*, Action>& k) const {
    return std::hash<const void*>{}(k.first) * 131 ^ ActionHash{}(k.second);
  }
};

}  // namespace

std::vector<EditMove> edit_step(const EditPtr& e, const Alphabet& alphabet) {
  std::vector<EditMove> out;
  EditPtr t = unfold_edit(e);
  if (!t) return out;
  switch (t->tag) {
    case Edit::Tag::Go:
      for (const auto& a : alphabet.all_actions()) out.push_back({a, a, t});
      break;
    case Edit::Tag::Sum: {
      for (const auto& b : t->branches) out.push_back({b.in, b.out, b.next});
      for (const auto& k : t->complements)
        for (const auto& a : alphabet.act_chn_actions())
          if (!std::binary_search(k.except.begin(), k.except.end(), a))
            out.push_back({a, Action::tau(), k.next});
      break;
    }
    default:
      break;
  }
  std::sort(out.begin(), out.end(), [](const EditMove& a, const EditMove& b) {
    if (a.in != b.in) return a.in < b.in;
    if (a.out != b.out) return a.out < b.out;
    return cmp(a.next.get(), b.next.get()) < 0;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const EditMove& a, const EditMove& b) {
                          return a.in == b.in && a.out == b.out &&
                                 a.next == b.next;
                        }),
            out.end());
  return out;
}

std::vector<std::pair<Action, EditPtr>> edit_moves_on(const EditPtr& e,
                                                      const Action& in) {
  static Memo<std::pair<const void*, Action>,
              std::vector<std::pair<Action, EditPtr>>, ActionPtrHash>
      memo;
  std::pair<const void*, Action> key{e.get(), in};
  std::vector<std::pair<Action, EditPtr>> out;
  if (memo.get(key, out)) return out;

  EditPtr t = unfold_edit(e);
  if (t) {
    switch (t->tag) {
      case Edit::Tag::Go:
        out.push_back({in, t});
        break;
      case Edit::Tag::Sum: {
        for (const auto& b : t->branches)
          if (b.in == in) out.push_back({b.out, b.next});
        if (in.in_act_chn())
          for (const auto& k : t->complements)
            if (!std::binary_search(k.except.begin(), k.except.end(), in))
              out.push_back({Action::tau(), k.next});
        break;
      }
      default:
        break;
    }
  }
  sort_unique(out, edit_move_less);
  memo.put(key, out);
  return out;
}

std::vector<std::pair<Action, EditPtr>> edit_insertion_moves(
    const EditPtr& e, const Alphabet& alphabet) {
  std::vector<std::pair<Action, EditPtr>> out;
  EditPtr t = unfold_edit(e);
  if (!t) return out;
  switch (t->tag) {
    case Edit::Tag::Go:
      for (const auto& a : alphabet.insertable_actions()) out.push_back({a, t});
      break;
    case Edit::Tag::Sum:
      for (const auto& b : t->branches)
        if (b.in == b.out && insertable(b.in)) out.push_back({b.in, b.next});
      break;
    default:
      break;
  }
  sort_unique(out, edit_move_less);
  return out;
}

int cmp(const NodeState& a, const NodeState& b) {
  if (int c = cmp(a.mon.get(), b.mon.get())) return c;
  if (int c = cmp(a.ctrl.get(), b.ctrl.get())) return c;
  return cmp(a.mal.get(), b.mal.get());
}

int cmp(const NetState& a, const NetState& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = cmp(a[i], b[i])) return c;
  return 0;
}

std::vector<MonMove> monitored_step(const NodeState& node,
                                    const Alphabet& alphabet, bool mitigation) {
  std::vector<MonMove> out;
  auto jsucc = compromised_step({node.ctrl, node.mal});
  bool j_can_end = false;
  for (const auto& [alpha, j2] : jsucc) {
    if (alpha.kind == ActKind::End) j_can_end = true;
    for (const auto& [beta, e2] : edit_moves_on(node.mon, alpha))
      out.push_back({alpha, beta, false, {e2, j2.ctrl, j2.malware}});
  }
  if (mitigation && j_can_end) {
    for (const auto& [alpha, e2] : edit_insertion_moves(node.mon, alphabet))
      out.push_back({Action::end(), alpha, true, {e2, node.ctrl, node.mal}});
  }
  std::sort(out.begin(), out.end(), [](const MonMove& a, const MonMove& b) {
    if (a.emitted != b.emitted) return a.emitted < b.emitted;
    if (a.attempted != b.attempted) return a.attempted < b.attempted;
    if (a.inserted != b.inserted) return a.inserted < b.inserted;
    return cmp(a.next, b.next) < 0;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const MonMove& a, const MonMove& b) {
                          return a.attempted == b.attempted &&
                                 a.emitted == b.emitted &&
                                 a.inserted == b.inserted && a.next == b.next;
                        }),
            out.end());
  return out;
}

std::vector<std::pair<Action, NetState>> network_step(const NetState& state,
                                                      const System& system) {
  const std::size_t n = state.size();
  std::vector<std::vector<MonMove>> moves(n);
  for (std::size_t i = 0; i < n; ++i)
    moves[i] =
        monitored_step(state[i], system.alphabet, system.nodes[i].mitigation);

  std::vector<std::pair<Action, NetState>> out;
  auto with_node = [&](std::size_t i, const NodeState& ns) {
    NetState next = state;
    next[i] = ns;
    return next;
  };

  if (n == 1) {
    for (const auto& m : moves[0]) out.push_back({m.emitted, {m.next}});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& m : moves[i])
        if (m.emitted.kind != ActKind::Tick)
          out.push_back({m.emitted, with_node(i, m.next)});

    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& mi : moves[i]) {
        if (mi.emitted.kind != ActKind::Send) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          for (const auto& mj : moves[j]) {
            if (mj.emitted.kind != ActKind::Recv ||
                mj.emitted.name != mi.emitted.name)
              continue;
            NetState next = state;
            next[i] = mi.next;
            next[j] = mj.next;
            out.push_back({Action::tau(), std::move(next)});
          }
        }
      }
    }

    // Time may pass only when no silent move is possible anywhere in the
    // network and every node offers a tick.
    bool any_tau = std::any_of(out.begin(), out.end(), [](const auto& e) {
      return e.first.kind == ActKind::Tau;
    });
    if (!any_tau) {
      std::vector<std::vector<const MonMove*>> ticks(n);
      bool all_tick = true;
      for (std::size_t i = 0; i < n && all_tick; ++i) {
        for (const auto& m : moves[i])
          if (m.emitted.kind == ActKind::Tick) ticks[i].push_back(&m);
        if (ticks[i].empty()) all_tick = false;
      }
      if (all_tick) {
        NetState next(state);
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
          for (std::size_t i = 0; i < n; ++i) next[i] = ticks[i][idx[i]]->next;
          out.push_back({Action::tick(), next});
          std::size_t k = 0;
          while (k < n && ++idx[k] == ticks[k].size()) idx[k++] = 0;
          if (k == n) break;
        }
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return cmp(a.second, b.second) < 0;
            });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NetState initial_state(const System& system) {
  NetState st;
  st.reserve(system.nodes.size());
  for (const auto& n : system.nodes)
    st.push_back({canonical(n.monitor), canonical(n.ctrl), canonical(n.malware)});
  return st;
}

}  // namespace plcmon
