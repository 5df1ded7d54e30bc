#include "plcmon/synthesis.hpp"

#include <algorithm>
#include <set>

#include "plcmon/validate.hpp"

namespace plcmon {

namespace {

struct Synth {
  const Alphabet* alphabet;
  int fresh = 0;

  std::string next_var() { return "Y" + std::to_string(++fresh); }

  EditPtr run(const CtrlPtr& t) {
    switch (t->tag) {
      case Ctrl::Tag::Fix:
        return edit_fix(t->name, run(t->child));

      case Ctrl::Tag::Sleep: {
        std::string y = next_var();
        std::vector<Edit::Branch> bs{{Action::tick(), Action::tick(), run(t->child)}};
        std::vector<Edit::Complement> ks{{{}, edit_var(y)}};
        return edit_fix(y, edit_sum(std::move(bs), std::move(ks)));
      }

      case Ctrl::Tag::Timeout: {
        std::string y = next_var();
        std::vector<Edit::Branch> bs;
        std::vector<Action> except;
        for (const auto& b : t->branches) {
          bs.push_back({b.guard, b.guard, run(b.body)});
          // listed channel actions drop out of the suppression sum; sensor
          // reads sit outside Act* ∪ Chn* and need no exception
          if (b.guard.in_act_chn()) except.push_back(b.guard);
        }
        bs.push_back({Action::tick(), Action::tick(), run(t->child)});
        std::sort(except.begin(), except.end());
        except.erase(std::unique(except.begin(), except.end()), except.end());
        std::vector<Edit::Complement> ks{{std::move(except), edit_var(y)}};
        return edit_fix(y, edit_sum(std::move(bs), std::move(ks)));
      }

      case Ctrl::Tag::Cmd: {
        std::string y = next_var();
        Action cmd = Action::cmd(t->name);
        std::vector<Edit::Branch> bs{
            {cmd, cmd, run(t->child)},
            {Action::tau(), Action::tau(), edit_var(y)},
        };
        std::vector<Edit::Complement> ks{
            {{Action::cmd(t->name), Action::drop(t->name)}, edit_var(y)}};
        return edit_fix(y, edit_sum(std::move(bs), std::move(ks)));
      }

      case Ctrl::Tag::End: {
        if (t->child)
          throw SynthesisError("end with inline continuation is a runtime form");
        std::string y = next_var();
        std::vector<Edit::Branch> bs{
            {Action::end(), Action::end(), edit_var(t->name)}};
        std::vector<Edit::Complement> ks{{{}, edit_var(y)}};
        return edit_fix(y, edit_sum(std::move(bs), std::move(ks)));
      }

      case Ctrl::Tag::Var:
        throw SynthesisError("variable outside an end prefix");
    }
    throw SynthesisError("unreachable controller form");
  }
};

}  // namespace

EditPtr synthesize_fragment(const CtrlPtr& term, const Alphabet& alphabet) {
  Synth s{&alphabet, 0};
  return s.run(term);
}

SynthesisReport synthesize(const CtrlPtr& p, const Alphabet& alphabet) {
  auto report = validate_controller(p, alphabet, /*deterministic=*/true);
  if (!report.ok())
    throw SynthesisError("controller rejected: " + report.text());

  SynthesisReport out;
  out.input_size = term_size(p);
  auto start = std::chrono::steady_clock::now();
  out.automaton = synthesize_fragment(p, alphabet);
  out.output_branch_count = materialized_branch_count(out.automaton, alphabet);
  out.elapsed = std::chrono::steady_clock::now() - start;
  return out;
}

std::uint64_t materialized_branch_count(const EditPtr& e, const Alphabet& alphabet) {
  if (!e) return 0;
  switch (e->tag) {
    case Edit::Tag::Go:
    case Edit::Tag::Var:
      return 0;
    case Edit::Tag::Fix:
      return materialized_branch_count(e->child, alphabet);
    case Edit::Tag::Sum: {
      std::uint64_t total = e->branches.size();
      const auto universe = alphabet.act_chn_actions();
      for (const auto& k : e->complements) {
        std::uint64_t covered = 0;
        for (const auto& a : universe)
          if (!std::binary_search(k.except.begin(), k.except.end(), a)) ++covered;
        total += covered;
        total += materialized_branch_count(k.next, alphabet);
      }
      for (const auto& b : e->branches)
        total += materialized_branch_count(b.next, alphabet);
      return total;
    }
  }
  return 0;
}

EditPtr expand_automaton(const EditPtr& e, const Alphabet& alphabet) {
  if (!e) return e;
  switch (e->tag) {
    case Edit::Tag::Go:
    case Edit::Tag::Var:
      return e;
    case Edit::Tag::Fix:
      return edit_fix(e->name, expand_automaton(e->child, alphabet));
    case Edit::Tag::Sum: {
      std::vector<Edit::Branch> bs;
      for (const auto& b : e->branches)
        bs.push_back({b.in, b.out, expand_automaton(b.next, alphabet)});
      for (const auto& k : e->complements) {
        EditPtr next = expand_automaton(k.next, alphabet);
        for (const auto& a : alphabet.act_chn_actions())
          if (!std::binary_search(k.except.begin(), k.except.end(), a))
            bs.push_back({a, Action::tau(), next});
      }
      return edit_sum(std::move(bs), {});
    }
  }
  return e;
}

bool check_syntactic_determinism(const EditPtr& e) {
  if (!e) return true;
  switch (e->tag) {
    case Edit::Tag::Go:
    case Edit::Tag::Var:
      return true;
    case Edit::Tag::Fix:
      return check_syntactic_determinism(e->child);
    case Edit::Tag::Sum: {
      if (e->complements.size() > 1) return false;
      std::set<Action> inputs;
      for (const auto& b : e->branches)
        if (!inputs.insert(b.in).second) return false;
      for (const auto& k : e->complements)
        for (const auto& in : inputs)
          if (in.in_act_chn() &&
              !std::binary_search(k.except.begin(), k.except.end(), in))
            return false;
      for (const auto& b : e->branches)
        if (!check_syntactic_determinism(b.next)) return false;
      for (const auto& k : e->complements)
        if (!check_syntactic_determinism(k.next)) return false;
      return true;
    }
  }
  return true;
}

std::vector<ComplexityRow> measure_complexity(const std::vector<CtrlPtr>& corpus,
                                              const Alphabet& alphabet) {
  std::vector<ComplexityRow> rows;
  rows.reserve(corpus.size());
  for (const auto& p : corpus) {
    auto r = synthesize(p, alphabet);
    rows.push_back({r.input_size, r.output_branch_count, r.elapsed});
  }
  return rows;
}

}  // namespace plcmon
