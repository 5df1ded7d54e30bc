#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "plcmon/validate.hpp"

using namespace plcmon;
using namespace plcmon::test;

namespace {

// Independent size oracle: enumerate the prefixes of the term (branch
// guards, tick and command prefixes, end markers) and count them.
void collect_prefix_tokens(const CtrlPtr& t, std::vector<Action>& out) {
  if (!t) return;
  switch (t->tag) {
    case Ctrl::Tag::Fix:
      collect_prefix_tokens(t->child, out);
      return;
    case Ctrl::Tag::Sleep:
      out.push_back(Action::tick());
      collect_prefix_tokens(t->child, out);
      return;
    case Ctrl::Tag::Cmd:
      out.push_back(Action::cmd(t->name));
      collect_prefix_tokens(t->child, out);
      return;
    case Ctrl::Tag::End:
      out.push_back(Action::end());
      return;
    case Ctrl::Tag::Var:
      return;
    case Ctrl::Tag::Timeout:
      for (const auto& b : t->branches) {
        out.push_back(b.guard);
        collect_prefix_tokens(b.body, out);
      }
      collect_prefix_tokens(t->child, out);
      return;
  }
}

std::uint64_t size_oracle(const CtrlPtr& t) {
  std::vector<Action> tokens;
  collect_prefix_tokens(t, tokens);
  return tokens.size();
}

}  // namespace

TEST_CASE("alphabet invariants") {
  Alphabet a = abc();
  CHECK(a.check().empty());
  a.actuators.push_back("s");  // clashes with the sensor set
  CHECK(!a.check().empty());

  Alphabet bad;
  bad.sensors = {"Bad"};
  CHECK(!bad.check().empty());
}

TEST_CASE("action universe enumeration") {
  Alphabet a = abc();
  // per kind: one read, command + drop per actuator, send + receive per
  // channel, plus tau, tick, end
  std::size_t expected = a.sensors.size() + 2 * a.actuators.size() +
                         2 * a.channels.size() + 3;
  CHECK(a.all_actions().size() == expected);
  CHECK(a.act_chn_actions().size() ==
        2 * a.actuators.size() + 2 * a.channels.size());
  // insertions: commands, sends, receives, tick — drops stay out
  CHECK(a.insertable_actions().size() ==
        a.actuators.size() + 2 * a.channels.size() + 1);
}

TEST_CASE("validate accepts the guarded scan cycle") {
  auto p = parse_controller("fix X . tick . [ s . cmd a . end ] else ( end )");
  auto report = validate_controller(p, abc());
  CHECK(report.ok());
  // validation is pure: a second run returns the same report
  CHECK(validate_controller(p, abc()).ok());
}

TEST_CASE("validate flags unguarded recursion") {
  auto p = parse_controller("fix X . end");
  auto report = validate_controller(p, abc());
  CHECK(report.has("unguarded-recursion"));
}

TEST_CASE("validate flags unknown names") {
  auto p = parse_controller("fix X . [ rcv nope . end ] else ( end )");
  auto report = validate_controller(p, abc());
  CHECK(report.has("unknown-name"));
}

TEST_CASE("recursion through a timeout else branch is guarded") {
  // the else edge of a timeout produces a tick, so this cycle is fine
  auto p = parse_controller(
      "fix X . [ s . tick . end ] else ( cmd a . end )");
  CHECK(validate_controller(p, abc()).ok());
  // reaching the variable through a branch is not
  auto q = parse_controller("fix X . [ rcv c . end ] else ( tick . end )");
  CHECK(validate_controller(q, abc()).has("unguarded-recursion"));
}

TEST_CASE("phase discipline") {
  // command before the communication phase is fine (actuation is a tail)
  CHECK(validate_controller(
            parse_controller("fix X . tick . cmd a . end"), abc())
            .ok());
  // sensing after a command is not
  auto p = parse_controller("fix X . tick . cmd a . [ s . end ] else ( end )");
  CHECK(validate_controller(p, abc()).has("phase-violation"));
  // mixed guard kinds in one sum
  auto q = parse_controller("fix X . tick . [ s . end + rcv c . end ] else ( end )");
  CHECK(validate_controller(q, abc()).has("phase-violation"));
}

TEST_CASE("empty sums are rejected") {
  auto t = ctrl_timeout({}, ctrl_end_var("X"));
  auto p = ctrl_fix("X", ctrl_sleep(t));
  CHECK(validate_controller(p, abc()).has("empty-sum"));
}

TEST_CASE("end continuations are a runtime form") {
  auto inner = parse_controller("fix X . tick . end");
  auto p = ctrl_fix("X", ctrl_sleep(ctrl_end_cont(inner)));
  CHECK(validate_controller(p, abc()).has("end-cont-in-source"));
}

TEST_CASE("duplicate guards only flagged in deterministic mode") {
  auto p = parse_controller("fix X . tick . [ s . end + s . cmd a . end ] else ( end )");
  CHECK(validate_controller(p, abc()).ok());
  CHECK(validate_controller(p, abc(), true).has("duplicate-guard"));
}

TEST_CASE("malware validation") {
  Alphabet ab = abc();
  auto m = parse_malware("fix X . tick . [ inj-snd c . [ drop a . X ] else ( X ) ] else ( X )");
  CHECK(validate_malware(m, ab).ok());
  CHECK(validate_malware(parse_malware("nil"), ab).ok());
  // free variable
  CHECK(validate_malware(parse_malware("X"), ab).has("free-variable"));
  // unguarded cycle through a branch
  auto bad = parse_malware("fix X . [ inj-cmd a . X ] else ( nil )");
  CHECK(validate_malware(bad, ab).has("unguarded-recursion"));
  // the else edge of a timeout guards the cycle
  auto ok = parse_malware("fix X . [ inj-cmd a . nil ] else ( X )");
  CHECK(validate_malware(ok, ab).ok());
}

TEST_CASE("size of the appendix base cases") {
  CHECK(term_size(parse_controller("end . X")) == 1);
  CHECK(term_size(parse_controller("cmd a . end . X")) == 2);
  // tick . [ s . cmd a . end + s2 . end ] else ( end ): 1 + (2 + 2 + 1 + 1)
  auto p = parse_controller(
      "fix X . tick . [ lo . cmd pump . end + hi . end ] else ( end )");
  CHECK(term_size(p) == 7);
}

TEST_CASE("size equals the prefix-count oracle on random controllers") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto p = random_controller(ab, seed, 3 + static_cast<int>(seed % 3));
    REQUIRE(validate_controller(p, ab).ok());
    CHECK(term_size(p) == size_oracle(p));
    CHECK(term_size(p) > 0);
  }
}

TEST_CASE("interning gives pointer equality for equal terms") {
  auto a = parse_controller("fix X . tick . end");
  auto b = parse_controller("fix X . tick . end");
  CHECK(a.get() == b.get());
  auto c = parse_controller("fix Y . tick . end");
  CHECK(a.get() != c.get());
  CHECK(canonical(a).get() == canonical(c).get());  // alpha-equivalent
}

TEST_CASE("substitution respects shadowing") {
  auto outer = parse_malware("fix X . tick . fix Y . tick . [ drop pump . X ] else ( Y )");
  // unfolding the outer binder must not touch the inner one
  auto unfolded = subst(outer->child, "X", outer);
  CHECK(validate_malware(unfolded, small_alphabet()).ok());

  // a same-name inner binder shadows the outer occurrence entirely
  auto shadow = parse_malware("fix X . tick . [ drop pump . fix X . tick . X ] else ( X )");
  auto u2 = subst(shadow->child, "X", shadow);
  CHECK(validate_malware(u2, small_alphabet()).ok());
  auto inner = u2->child->branches.front().body;  // under tick, first branch
  CHECK(inner->tag == Malw::Tag::Fix);
  CHECK(inner->child->child->tag == Malw::Tag::Var);  // still the bound X
}
