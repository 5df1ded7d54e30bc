#include "plcmon/validate.hpp"

#include <algorithm>
#include <set>

namespace plcmon {

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::text() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    out += v.code;
    if (!v.detail.empty()) out += ": " + v.detail;
    out += "\n";
  }
  return out;
}

namespace {

enum class Phase { Sens, Comm, Act };

struct Ctx {
  const Alphabet* alphabet;
  bool deterministic;
  std::vector<Violation>* out;

  void add(const std::string& code, const std::string& detail) const {
    out->push_back({code, detail});
  }
};

// (binder, seen-a-tick-producing-step-on-this-path) pairs, innermost last.
using Scope = std::vector<std::pair<std::string, bool>>;

void mark_guarded(Scope& scope) {
  for (auto& e : scope) e.second = true;
}

void check_occurrence(const Ctx& ctx, const Scope& scope, const std::string& var) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    if (it->first == var) {
      if (!it->second)
        ctx.add("unguarded-recursion",
                "variable " + var + " reachable without crossing a tick");
      return;
    }
  }
  ctx.add("free-variable", "variable " + var + " is not bound");
}

void check_duplicate_guards(const Ctx& ctx, const std::vector<Ctrl::Branch>& bs) {
  if (!ctx.deterministic) return;
  std::set<Action> seen;
  for (const auto& b : bs)
    if (!seen.insert(b.guard).second)
      ctx.add("duplicate-guard", "guard " + b.guard.text() + " listed twice");
}

void walk_ctrl(const Ctx& ctx, const CtrlPtr& t, Phase phase, Scope scope);

void walk_timeout(const Ctx& ctx, const CtrlPtr& t, Phase phase, Scope& scope) {
  if (t->branches.empty()) {
    ctx.add("empty-sum", "timeout with no branches");
    walk_ctrl(ctx, t->child, phase, scope);
    return;
  }
  ActKind kind = t->branches.front().guard.kind;
  bool homogeneous = std::all_of(
      t->branches.begin(), t->branches.end(),
      [&](const Ctrl::Branch& b) { return b.guard.kind == kind; });
  if (!homogeneous) {
    ctx.add("phase-violation", "timeout mixes guard kinds");
    kind = ActKind::Recv;  // keep walking to catch more problems
  }

  Phase bodyPhase = Phase::Comm;
  switch (kind) {
    case ActKind::Read:
      if (phase != Phase::Sens)
        ctx.add("phase-violation", "sensing timeout outside the sensing phase");
      bodyPhase = Phase::Sens;
      break;
    case ActKind::Recv:
      if (phase == Phase::Act)
        ctx.add("phase-violation", "channel input in the actuation phase");
      bodyPhase = Phase::Comm;
      break;
    case ActKind::Send:
      if (phase == Phase::Act)
        ctx.add("phase-violation", "channel output in the actuation phase");
      if (t->branches.size() != 1)
        ctx.add("phase-violation", "channel output with more than one branch");
      bodyPhase = Phase::Comm;
      break;
    default:
      ctx.add("phase-violation",
              "guard " + t->branches.front().guard.text() + " not allowed here");
      break;
  }

  for (const auto& b : t->branches) {
    if (!ctx.alphabet->knows(b.guard))
      ctx.add("unknown-name", "guard " + b.guard.text() + " not declared");
    walk_ctrl(ctx, b.body, bodyPhase, scope);  // branch edge: no tick
  }
  check_duplicate_guards(ctx, t->branches);

  Scope elseScope = scope;  // the timeout edge itself produces a tick
  mark_guarded(elseScope);
  walk_ctrl(ctx, t->child, bodyPhase, elseScope);
}

void walk_ctrl(const Ctx& ctx, const CtrlPtr& t, Phase phase, Scope scope) {
  if (!t) return;
  switch (t->tag) {
    case Ctrl::Tag::Fix:
      ctx.add("phase-violation", "nested fix inside a controller body");
      scope.emplace_back(t->name, false);
      walk_ctrl(ctx, t->child, Phase::Sens, scope);
      return;
    case Ctrl::Tag::Sleep: {
      if (phase != Phase::Sens)
        ctx.add("phase-violation", "tick prefix outside the sensing phase");
      mark_guarded(scope);
      walk_ctrl(ctx, t->child, Phase::Sens, scope);
      return;
    }
    case Ctrl::Tag::Timeout:
      walk_timeout(ctx, t, phase, scope);
      return;
    case Ctrl::Tag::Cmd:
      if (!ctx.alphabet->has_actuator(t->name))
        ctx.add("unknown-name", "actuator " + t->name + " not declared");
      walk_ctrl(ctx, t->child, Phase::Act, scope);
      return;
    case Ctrl::Tag::End:
      if (t->child) {
        ctx.add("end-cont-in-source", "end with an inline continuation");
        walk_ctrl(ctx, t->child, Phase::Sens, scope);
      } else {
        check_occurrence(ctx, scope, t->name);
      }
      return;
    case Ctrl::Tag::Var:
      ctx.add("phase-violation", "variable " + t->name + " outside an end prefix");
      check_occurrence(ctx, scope, t->name);
      return;
  }
}

void walk_malw(const Ctx& ctx, const MalwPtr& t, Scope scope) {
  if (!t) return;
  switch (t->tag) {
    case Malw::Tag::Fix:
      scope.emplace_back(t->name, false);
      walk_malw(ctx, t->child, scope);
      return;
    case Malw::Tag::Tick: {
      mark_guarded(scope);
      walk_malw(ctx, t->child, scope);
      return;
    }
    case Malw::Tag::Nil:
      return;
    case Malw::Tag::Var:
      check_occurrence(ctx, scope, t->name);
      return;
    case Malw::Tag::Timeout: {
      if (t->branches.empty()) ctx.add("empty-sum", "timeout with no branches");
      for (const auto& b : t->branches) {
        switch (b.guard.kind) {
          case ActKind::Send:
          case ActKind::Recv:
          case ActKind::Cmd:
          case ActKind::Drop:
            break;
          default:
            ctx.add("phase-violation",
                    "malicious prefix " + b.guard.text() + " not allowed");
        }
        if (!ctx.alphabet->knows(b.guard))
          ctx.add("unknown-name", "prefix " + b.guard.text() + " not declared");
        walk_malw(ctx, b.body, scope);
      }
      Scope elseScope = scope;
      mark_guarded(elseScope);
      walk_malw(ctx, t->child, elseScope);
      return;
    }
  }
}

void walk_edit(const Ctx& ctx, const EditPtr& t, std::vector<std::string> bound) {
  if (!t) return;
  switch (t->tag) {
    case Edit::Tag::Go:
      return;
    case Edit::Tag::Fix:
      bound.push_back(t->name);
      walk_edit(ctx, t->child, bound);
      return;
    case Edit::Tag::Var:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end())
        ctx.add("free-variable", "variable " + t->name + " is not bound");
      return;
    case Edit::Tag::Sum: {
      if (t->branches.empty() && t->complements.empty())
        ctx.add("empty-sum", "replacement sum with no branches");
      for (const auto& b : t->branches) {
        if (!ctx.alphabet->knows(b.in))
          ctx.add("unknown-name", "input " + b.in.text() + " not declared");
        if (!ctx.alphabet->knows(b.out))
          ctx.add("unknown-name", "output " + b.out.text() + " not declared");
        walk_edit(ctx, b.next, bound);
      }
      for (const auto& k : t->complements) {
        for (const auto& a : k.except) {
          if (!a.in_act_chn())
            ctx.add("bad-complement",
                    "exception " + a.text() + " outside Act* and Chn*");
          else if (!ctx.alphabet->knows(a))
            ctx.add("unknown-name", "exception " + a.text() + " not declared");
        }
        walk_edit(ctx, k.next, bound);
      }
      return;
    }
  }
}

}  // namespace

ValidationReport validate_controller(const CtrlPtr& term, const Alphabet& alphabet,
                                     bool deterministic) {
  ValidationReport report;
  Ctx ctx{&alphabet, deterministic, &report.violations};
  if (!term) {
    ctx.add("phase-violation", "missing controller term");
    return report;
  }
  if (term->tag != Ctrl::Tag::Fix) {
    ctx.add("phase-violation", "controller must start with fix");
    walk_ctrl(ctx, term, Phase::Sens, {});
    return report;
  }
  Scope scope;
  scope.emplace_back(term->name, false);
  walk_ctrl(ctx, term->child, Phase::Sens, scope);
  return report;
}

ValidationReport validate_malware(const MalwPtr& term, const Alphabet& alphabet) {
  ValidationReport report;
  Ctx ctx{&alphabet, false, &report.violations};
  if (!term) {
    ctx.add("phase-violation", "missing malware term");
    return report;
  }
  walk_malw(ctx, term, {});
  return report;
}

ValidationReport validate_automaton(const EditPtr& term, const Alphabet& alphabet) {
  ValidationReport report;
  Ctx ctx{&alphabet, false, &report.violations};
  if (!term) {
    ctx.add("phase-violation", "missing automaton term");
    return report;
  }
  walk_edit(ctx, term, {});
  return report;
}

ValidationReport validate_system(const System& system, bool deterministic) {
  ValidationReport report;
  for (const auto& e : system.alphabet.check())
    report.violations.push_back({"bad-alphabet", e});
  if (system.nodes.empty())
    report.violations.push_back({"empty-network", "network needs at least one node"});
  for (std::size_t i = 0; i < system.nodes.size(); ++i) {
    const auto& n = system.nodes[i];
    auto tag = [&](const ValidationReport& r) {
      for (const auto& v : r.violations)
        report.violations.push_back(
            {v.code, "node " + std::to_string(i) + ": " + v.detail});
    };
    tag(validate_automaton(n.monitor, system.alphabet));
    tag(validate_controller(n.ctrl, system.alphabet, deterministic));
    if (n.malware) tag(validate_malware(n.malware, system.alphabet));
  }
  return report;
}

std::uint64_t term_size(const CtrlPtr& term) {
  if (!term) return 0;
  switch (term->tag) {
    case Ctrl::Tag::Fix:
      return term_size(term->child);
    case Ctrl::Tag::Sleep:
      return 1 + term_size(term->child);
    case Ctrl::Tag::Cmd:
      return 1 + term_size(term->child);
    case Ctrl::Tag::End:
      return 1;
    case Ctrl::Tag::Var:
      return 0;
    case Ctrl::Tag::Timeout: {
      std::uint64_t total = term->branches.size();
      for (const auto& b : term->branches) total += term_size(b.body);
      return total + term_size(term->child);
    }
  }
  return 0;
}

}  // namespace plcmon
