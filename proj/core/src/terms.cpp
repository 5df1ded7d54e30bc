#include "plcmon/terms.hpp"

#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace plcmon {

namespace {

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h * 1099511628211ull ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

inline std::size_t hash_action(const Action& a) {
  return ActionHash{}(a);
}

inline std::size_t hash_str(const std::string& s) {
  return std::hash<std::string>{}(s);
}

template <typename Ptr>
inline std::size_t hash_ptr(const Ptr& p) {
  return std::hash<const void*>{}(p.get());
}

// --- controller interning -------------------------------------------------

struct CtrlShallowHash {
  std::size_t operator()(const CtrlPtr& n) const {
    std::size_t h = static_cast<std::size_t>(n->tag);
    h = mix(h, hash_str(n->name));
    for (const auto& b : n->branches) {
      h = mix(h, hash_action(b.guard));
      h = mix(h, hash_ptr(b.body));
    }
    h = mix(h, hash_ptr(n->child));
    return h;
  }
};
struct CtrlShallowEq {
  bool operator()(const CtrlPtr& a, const CtrlPtr& b) const {
    if (a->tag != b->tag || a->name != b->name || a->child != b->child ||
        a->branches.size() != b->branches.size())
      return false;
    for (std::size_t i = 0; i < a->branches.size(); ++i)
      if (a->branches[i].guard != b->branches[i].guard ||
          a->branches[i].body != b->branches[i].body)
        return false;
    return true;
  }
};

CtrlPtr intern(Ctrl&& node) {
  static std::unordered_set<CtrlPtr, CtrlShallowHash, CtrlShallowEq> table;
  static std::mutex m;
  auto candidate = std::make_shared<const Ctrl>(std::move(node));
  std::lock_guard<std::mutex> lock(m);
  auto [it, _] = table.insert(candidate);
  return *it;
}

// --- malware interning ----------------------------------------------------

struct MalwShallowHash {
  std::size_t operator()(const MalwPtr& n) const {
    std::size_t h = static_cast<std::size_t>(n->tag) + 101;
    h = mix(h, hash_str(n->name));
    for (const auto& b : n->branches) {
      h = mix(h, hash_action(b.guard));
      h = mix(h, hash_ptr(b.body));
    }
    h = mix(h, hash_ptr(n->child));
    return h;
  }
};
struct MalwShallowEq {
  bool operator()(const MalwPtr& a, const MalwPtr& b) const {
    if (a->tag != b->tag || a->name != b->name || a->child != b->child ||
        a->branches.size() != b->branches.size())
      return false;
    for (std::size_t i = 0; i < a->branches.size(); ++i)
      if (a->branches[i].guard != b->branches[i].guard ||
          a->branches[i].body != b->branches[i].body)
        return false;
    return true;
  }
};

MalwPtr intern(Malw&& node) {
  static std::unordered_set<MalwPtr, MalwShallowHash, MalwShallowEq> table;
  static std::mutex m;
  auto candidate = std::make_shared<const Malw>(std::move(node));
  std::lock_guard<std::mutex> lock(m);
  auto [it, _] = table.insert(candidate);
  return *it;
}

// --- edit automaton interning ----------------------------------------------

struct EditShallowHash {
  std::size_t operator()(const EditPtr& n) const {
    std::size_t h = static_cast<std::size_t>(n->tag) + 211;
    h = mix(h, hash_str(n->name));
    for (const auto& b : n->branches) {
      h = mix(h, hash_action(b.in));
      h = mix(h, hash_action(b.out));
      h = mix(h, hash_ptr(b.next));
    }
    for (const auto& k : n->complements) {
      for (const auto& a : k.except) h = mix(h, hash_action(a));
      h = mix(h, hash_ptr(k.next));
    }
    h = mix(h, hash_ptr(n->child));
    return h;
  }
};
struct EditShallowEq {
  bool operator()(const EditPtr& a, const EditPtr& b) const {
    if (a->tag != b->tag || a->name != b->name || a->child != b->child ||
        a->branches.size() != b->branches.size() ||
        a->complements.size() != b->complements.size())
      return false;
    for (std::size_t i = 0; i < a->branches.size(); ++i)
      if (a->branches[i].in != b->branches[i].in ||
          a->branches[i].out != b->branches[i].out ||
          a->branches[i].next != b->branches[i].next)
        return false;
    for (std::size_t i = 0; i < a->complements.size(); ++i)
      if (a->complements[i].except != b->complements[i].except ||
          a->complements[i].next != b->complements[i].next)
        return false;
    return true;
  }
};

EditPtr intern(Edit&& node) {
  static std::unordered_set<EditPtr, EditShallowHash, EditShallowEq> table;
  static std::mutex m;
  auto candidate = std::make_shared<const Edit>(std::move(node));
  std::lock_guard<std::mutex> lock(m);
  auto [it, _] = table.insert(candidate);
  return *it;
}

}  // namespace

CtrlPtr ctrl_fix(const std::string& var, CtrlPtr body) {
  return intern(Ctrl(Ctrl::Tag::Fix, var, {}, std::move(body)));
}
CtrlPtr ctrl_sleep(CtrlPtr body) {
  return intern(Ctrl(Ctrl::Tag::Sleep, {}, {}, std::move(body)));
}
CtrlPtr ctrl_timeout(std::vector<Ctrl::Branch> branches, CtrlPtr els) {
  return intern(Ctrl(Ctrl::Tag::Timeout, {}, std::move(branches), std::move(els)));
}
CtrlPtr ctrl_cmd(const std::string& actuator, CtrlPtr body) {
  return intern(Ctrl(Ctrl::Tag::Cmd, actuator, {}, std::move(body)));
}
CtrlPtr ctrl_end_var(const std::string& var) {
  return intern(Ctrl(Ctrl::Tag::End, var, {}, nullptr));
}
CtrlPtr ctrl_end_cont(CtrlPtr controller) {
  return intern(Ctrl(Ctrl::Tag::End, {}, {}, std::move(controller)));
}
CtrlPtr ctrl_var(const std::string& var) {
  return intern(Ctrl(Ctrl::Tag::Var, var, {}, nullptr));
}

MalwPtr malw_timeout(std::vector<Malw::Branch> branches, MalwPtr els) {
  return intern(Malw(Malw::Tag::Timeout, {}, std::move(branches), std::move(els)));
}
MalwPtr malw_fix(const std::string& var, MalwPtr body) {
  return intern(Malw(Malw::Tag::Fix, var, {}, std::move(body)));
}
MalwPtr malw_var(const std::string& var) {
  return intern(Malw(Malw::Tag::Var, var, {}, nullptr));
}
MalwPtr malw_tick(MalwPtr body) {
  return intern(Malw(Malw::Tag::Tick, {}, {}, std::move(body)));
}
MalwPtr malw_nil() {
  return intern(Malw(Malw::Tag::Nil, {}, {}, nullptr));
}

EditPtr edit_go() { return intern(Edit(Edit::Tag::Go, {}, {}, {}, nullptr)); }
EditPtr edit_sum(std::vector<Edit::Branch> branches,
                 std::vector<Edit::Complement> complements) {
  return intern(Edit(Edit::Tag::Sum, {}, std::move(branches),
                     std::move(complements), nullptr));
}
EditPtr edit_fix(const std::string& var, EditPtr body) {
  return intern(Edit(Edit::Tag::Fix, var, {}, {}, std::move(body)));
}
EditPtr edit_var(const std::string& var) {
  return intern(Edit(Edit::Tag::Var, var, {}, {}, nullptr));
}

// --- structural comparison --------------------------------------------------

namespace {
template <typename T>
int cmp_basic(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}
int cmp_action(const Action& a, const Action& b) {
  if (auto c = cmp_basic(a.kind, b.kind)) return c;
  return cmp_basic(a.name, b.name);
}
}  // namespace

int cmp(const Ctrl* a, const Ctrl* b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (auto c = cmp_basic(a->tag, b->tag)) return c;
  if (auto c = cmp_basic(a->name, b->name)) return c;
  if (auto c = cmp_basic(a->branches.size(), b->branches.size())) return c;
  for (std::size_t i = 0; i < a->branches.size(); ++i) {
    if (auto c = cmp_action(a->branches[i].guard, b->branches[i].guard)) return c;
    if (auto c = cmp(a->branches[i].body.get(), b->branches[i].body.get())) return c;
  }
  return cmp(a->child.get(), b->child.get());
}

int cmp(const Malw* a, const Malw* b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (auto c = cmp_basic(a->tag, b->tag)) return c;
  if (auto c = cmp_basic(a->name, b->name)) return c;
  if (auto c = cmp_basic(a->branches.size(), b->branches.size())) return c;
  for (std::size_t i = 0; i < a->branches.size(); ++i) {
    if (auto c = cmp_action(a->branches[i].guard, b->branches[i].guard)) return c;
    if (auto c = cmp(a->branches[i].body.get(), b->branches[i].body.get())) return c;
  }
  return cmp(a->child.get(), b->child.get());
}

int cmp(const Edit* a, const Edit* b) {
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (auto c = cmp_basic(a->tag, b->tag)) return c;
  if (auto c = cmp_basic(a->name, b->name)) return c;
  if (auto c = cmp_basic(a->branches.size(), b->branches.size())) return c;
  if (auto c = cmp_basic(a->complements.size(), b->complements.size())) return c;
  for (std::size_t i = 0; i < a->branches.size(); ++i) {
    if (auto c = cmp_action(a->branches[i].in, b->branches[i].in)) return c;
    if (auto c = cmp_action(a->branches[i].out, b->branches[i].out)) return c;
    if (auto c = cmp(a->branches[i].next.get(), b->branches[i].next.get())) return c;
  }
  for (std::size_t i = 0; i < a->complements.size(); ++i) {
    const auto& x = a->complements[i];
    const auto& y = b->complements[i];
    if (auto c = cmp_basic(x.except.size(), y.except.size())) return c;
    for (std::size_t j = 0; j < x.except.size(); ++j)
      if (auto c = cmp_action(x.except[j], y.except[j])) return c;
    if (auto c = cmp(x.next.get(), y.next.get())) return c;
  }
  return cmp(a->child.get(), b->child.get());
}

// --- substitution -----------------------------------------------------------

namespace {

struct SubstKey {
  const void* term;
  std::string var;
  const void* repl;
  bool operator==(const SubstKey&) const = default;
};
struct SubstKeyHash {
  std::size_t operator()(const SubstKey& k) const {
    std::size_t h = std::hash<const void*>{}(k.term);
    h = mix(h, hash_str(k.var));
    return mix(h, std::hash<const void*>{}(k.repl));
  }
};

template <typename Ptr, typename Fn>
Ptr memo_subst(const Ptr& term, const std::string& var, const Ptr& repl, Fn&& fn) {
  static std::unordered_map<SubstKey, Ptr, SubstKeyHash> cache;
  static std::mutex m;
  SubstKey key{term.get(), var, repl.get()};
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Ptr out = fn();
  std::lock_guard<std::mutex> lock(m);
  cache.emplace(std::move(key), out);
  return out;
}

}  // namespace

CtrlPtr subst(const CtrlPtr& term, const std::string& var, const CtrlPtr& repl) {
  if (!term) return term;
  return memo_subst(term, var, repl, [&]() -> CtrlPtr {
    switch (term->tag) {
      case Ctrl::Tag::Var:
        return term->name == var ? repl : term;
      case Ctrl::Tag::Fix:
        if (term->name == var) return term;  // shadowed
        return ctrl_fix(term->name, subst(term->child, var, repl));
      case Ctrl::Tag::Sleep:
        return ctrl_sleep(subst(term->child, var, repl));
      case Ctrl::Tag::Cmd:
        return ctrl_cmd(term->name, subst(term->child, var, repl));
      case Ctrl::Tag::End:
        if (term->child) return ctrl_end_cont(subst(term->child, var, repl));
        if (term->name == var) return ctrl_end_cont(repl);
        return term;
      case Ctrl::Tag::Timeout: {
        std::vector<Ctrl::Branch> bs;
        bs.reserve(term->branches.size());
        for (const auto& b : term->branches)
          bs.push_back({b.guard, subst(b.body, var, repl)});
        return ctrl_timeout(std::move(bs), subst(term->child, var, repl));
      }
    }
    return term;
  });
}

MalwPtr subst(const MalwPtr& term, const std::string& var, const MalwPtr& repl) {
  if (!term) return term;
  return memo_subst(term, var, repl, [&]() -> MalwPtr {
    switch (term->tag) {
      case Malw::Tag::Var:
        return term->name == var ? repl : term;
      case Malw::Tag::Fix:
        if (term->name == var) return term;
        return malw_fix(term->name, subst(term->child, var, repl));
      case Malw::Tag::Tick:
        return malw_tick(subst(term->child, var, repl));
      case Malw::Tag::Nil:
        return term;
      case Malw::Tag::Timeout: {
        std::vector<Malw::Branch> bs;
        bs.reserve(term->branches.size());
        for (const auto& b : term->branches)
          bs.push_back({b.guard, subst(b.body, var, repl)});
        return malw_timeout(std::move(bs), subst(term->child, var, repl));
      }
    }
    return term;
  });
}

EditPtr subst(const EditPtr& term, const std::string& var, const EditPtr& repl) {
  if (!term) return term;
  return memo_subst(term, var, repl, [&]() -> EditPtr {
    switch (term->tag) {
      case Edit::Tag::Go:
        return term;
      case Edit::Tag::Var:
        return term->name == var ? repl : term;
      case Edit::Tag::Fix:
        if (term->name == var) return term;
        return edit_fix(term->name, subst(term->child, var, repl));
      case Edit::Tag::Sum: {
        std::vector<Edit::Branch> bs;
        bs.reserve(term->branches.size());
        for (const auto& b : term->branches)
          bs.push_back({b.in, b.out, subst(b.next, var, repl)});
        std::vector<Edit::Complement> ks;
        ks.reserve(term->complements.size());
        for (const auto& k : term->complements)
          ks.push_back({k.except, subst(k.next, var, repl)});
        return edit_sum(std::move(bs), std::move(ks));
      }
    }
    return term;
  });
}

// --- canonical binder renaming ----------------------------------------------

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

const std::string* env_lookup(const Env& env, const std::string& var) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == var) return &it->second;
  return nullptr;
}

CtrlPtr canon_ctrl(const CtrlPtr& t, Env& env, int& counter);
MalwPtr canon_malw(const MalwPtr& t, Env& env, int& counter);
EditPtr canon_edit(const EditPtr& t, Env& env, int& counter);

CtrlPtr canon_ctrl(const CtrlPtr& t, Env& env, int& counter) {
  if (!t) return t;
  switch (t->tag) {
    case Ctrl::Tag::Fix: {
      std::string fresh = "V" + std::to_string(++counter);
      env.emplace_back(t->name, fresh);
      auto body = canon_ctrl(t->child, env, counter);
      env.pop_back();
      return ctrl_fix(fresh, body);
    }
    case Ctrl::Tag::Sleep:
      return ctrl_sleep(canon_ctrl(t->child, env, counter));
    case Ctrl::Tag::Cmd:
      return ctrl_cmd(t->name, canon_ctrl(t->child, env, counter));
    case Ctrl::Tag::End:
      if (t->child) return ctrl_end_cont(canon_ctrl(t->child, env, counter));
      if (const auto* r = env_lookup(env, t->name)) return ctrl_end_var(*r);
      return t;
    case Ctrl::Tag::Var:
      if (const auto* r = env_lookup(env, t->name)) return ctrl_var(*r);
      return t;
    case Ctrl::Tag::Timeout: {
      std::vector<Ctrl::Branch> bs;
      bs.reserve(t->branches.size());
      for (const auto& b : t->branches)
        bs.push_back({b.guard, canon_ctrl(b.body, env, counter)});
      return ctrl_timeout(std::move(bs), canon_ctrl(t->child, env, counter));
    }
  }
  return t;
}

MalwPtr canon_malw(const MalwPtr& t, Env& env, int& counter) {
  if (!t) return t;
  switch (t->tag) {
    case Malw::Tag::Fix: {
      std::string fresh = "V" + std::to_string(++counter);
      env.emplace_back(t->name, fresh);
      auto body = canon_malw(t->child, env, counter);
      env.pop_back();
      return malw_fix(fresh, body);
    }
    case Malw::Tag::Tick:
      return malw_tick(canon_malw(t->child, env, counter));
    case Malw::Tag::Nil:
      return t;
    case Malw::Tag::Var:
      if (const auto* r = env_lookup(env, t->name)) return malw_var(*r);
      return t;
    case Malw::Tag::Timeout: {
      std::vector<Malw::Branch> bs;
      bs.reserve(t->branches.size());
      for (const auto& b : t->branches)
        bs.push_back({b.guard, canon_malw(b.body, env, counter)});
      return malw_timeout(std::move(bs), canon_malw(t->child, env, counter));
    }
  }
  return t;
}

EditPtr canon_edit(const EditPtr& t, Env& env, int& counter) {
  if (!t) return t;
  switch (t->tag) {
    case Edit::Tag::Go:
      return t;
    case Edit::Tag::Fix: {
      std::string fresh = "V" + std::to_string(++counter);
      env.emplace_back(t->name, fresh);
      auto body = canon_edit(t->child, env, counter);
      env.pop_back();
      return edit_fix(fresh, body);
    }
    case Edit::Tag::Var:
      if (const auto* r = env_lookup(env, t->name)) return edit_var(*r);
      return t;
    case Edit::Tag::Sum: {
      std::vector<Edit::Branch> bs;
      bs.reserve(t->branches.size());
      for (const auto& b : t->branches)
        bs.push_back({b.in, b.out, canon_edit(b.next, env, counter)});
      std::vector<Edit::Complement> ks;
      ks.reserve(t->complements.size());
      for (const auto& k : t->complements)
        ks.push_back({k.except, canon_edit(k.next, env, counter)});
      return edit_sum(std::move(bs), std::move(ks));
    }
  }
  return t;
}

template <typename Ptr, typename Fn>
Ptr memo_canon(const Ptr& term, Fn&& fn) {
  static std::unordered_map<const void*, Ptr> cache;
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(term.get());
    if (it != cache.end()) return it->second;
  }
  Ptr out = fn();
  std::lock_guard<std::mutex> lock(m);
  cache.emplace(term.get(), out);
  return out;
}

}  // namespace

CtrlPtr canonical(const CtrlPtr& term) {
  if (!term) return term;
  return memo_canon(term, [&] {
    Env env;
    int counter = 0;
    return canon_ctrl(term, env, counter);
  });
}

MalwPtr canonical(const MalwPtr& term) {
  if (!term) return term;
  return memo_canon(term, [&] {
    Env env;
    int counter = 0;
    return canon_malw(term, env, counter);
  });
}

EditPtr canonical(const EditPtr& term) {
  if (!term) return term;
  return memo_canon(term, [&] {
    Env env;
    int counter = 0;
    return canon_edit(term, env, counter);
  });
}

System golden_of(const System& s) {
  System out;
  out.alphabet = s.alphabet;
  out.nodes.reserve(s.nodes.size());
  for (const auto& n : s.nodes)
    out.nodes.push_back(MonNode{edit_go(), n.ctrl, nullptr, false});
  return out;
}

}  // namespace plcmon
