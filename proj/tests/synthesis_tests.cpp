#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "plcmon/validate.hpp"

using namespace plcmon;
using namespace plcmon::test;

namespace {

// Expected monitor-state shape for one controller position: which inputs are
// let through unchanged and which are suppressed.
struct StateShape {
  std::set<Action> allowed;
  std::set<Action> suppressed;
};

std::set<Action> act_chn(const Alphabet& ab) {
  auto v = ab.act_chn_actions();
  return {v.begin(), v.end()};
}

// Mirror of the synthesis equations, used as an oracle: computes the shape
// of the sum generated for a controller position directly from the grammar
// case and the alphabet.
StateShape expected_shape(const CtrlPtr& t, const Alphabet& ab) {
  StateShape s;
  switch (t->tag) {
    case Ctrl::Tag::Sleep:
      s.allowed = {Action::tick()};
      s.suppressed = act_chn(ab);
      return s;
    case Ctrl::Tag::Timeout: {
      s.allowed = {Action::tick()};
      s.suppressed = act_chn(ab);
      for (const auto& b : t->branches) {
        s.allowed.insert(b.guard);
        s.suppressed.erase(b.guard);
      }
      return s;
    }
    case Ctrl::Tag::Cmd: {
      Action cmd = Action::cmd(t->name);
      s.allowed = {cmd, Action::tau()};
      s.suppressed = act_chn(ab);
      s.suppressed.erase(cmd);
      s.suppressed.erase(Action::drop(t->name));
      return s;
    }
    case Ctrl::Tag::End:
      s.allowed = {Action::end()};
      s.suppressed = act_chn(ab);
      return s;
    default:
      return s;
  }
}

// Walk controller and synthesized automaton side by side, comparing each
// generated sum against the oracle shape.
void check_shapes(const CtrlPtr& ctrl, const EditPtr& mon, const Alphabet& ab) {
  if (ctrl->tag == Ctrl::Tag::Fix) {
    REQUIRE(mon->tag == Edit::Tag::Fix);
    check_shapes(ctrl->child, mon->child, ab);
    return;
  }
  REQUIRE(mon->tag == Edit::Tag::Fix);  // the fresh recursion binder
  const EditPtr sum = mon->child;
  REQUIRE(sum->tag == Edit::Tag::Sum);

  StateShape want = expected_shape(ctrl, ab);
  std::set<Action> allowed, suppressed;
  std::map<Action, EditPtr> continuations;
  for (const auto& b : sum->branches) {
    if (b.in == b.out) {
      allowed.insert(b.in);
      continuations[b.in] = b.next;
    } else {
      CHECK(b.out.is_tau());
      suppressed.insert(b.in);
    }
  }
  REQUIRE(sum->complements.size() == 1);
  for (const auto& a : act_chn(ab))
    if (!std::binary_search(sum->complements[0].except.begin(),
                            sum->complements[0].except.end(), a))
      suppressed.insert(a);
  CHECK(sum->complements[0].next.get() == edit_var(mon->name).get());

  CHECK(allowed == want.allowed);
  CHECK(suppressed == want.suppressed);

  // recurse into the allowed continuations
  switch (ctrl->tag) {
    case Ctrl::Tag::Sleep:
      check_shapes(ctrl->child, continuations.at(Action::tick()), ab);
      return;
    case Ctrl::Tag::Timeout:
      for (const auto& b : ctrl->branches)
        check_shapes(b.body, continuations.at(b.guard), ab);
      check_shapes(ctrl->child, continuations.at(Action::tick()), ab);
      return;
    case Ctrl::Tag::Cmd:
      check_shapes(ctrl->child, continuations.at(Action::cmd(ctrl->name)), ab);
      CHECK(continuations.at(Action::tau()).get() == edit_var(mon->name).get());
      return;
    case Ctrl::Tag::End:
      CHECK(continuations.at(Action::end()).get() == edit_var(ctrl->name).get());
      return;
    default:
      return;
  }
}

}  // namespace

TEST_CASE("synthesis of the end state") {
  Alphabet ab = abc();
  auto mon = synthesize_fragment(parse_controller("end . X"), ab);
  auto want = parse_automaton("fix Y1 . ( end/end . X + other / tau . Y1 )");
  CHECK(mon.get() == want.get());
}

TEST_CASE("synthesis of the minimal cycle, materialized") {
  Alphabet ab;
  ab.actuators = {"a"};
  auto p = parse_controller("fix X . tick . end");
  auto rep = synthesize(p, ab);
  auto want = parse_automaton(
      "fix X . fix Y1 . ( tick/tick . fix Y2 . ( end/end . X + other / tau . Y2 )"
      " + other / tau . Y1 )");
  CHECK(rep.automaton.get() == want.get());
  CHECK(rep.input_size == 2);
  CHECK(rep.output_branch_count == 6);  // two sums, each 1 + |Act*|

  auto expanded = expand_automaton(rep.automaton, ab);
  auto want_expanded = parse_automaton(
      "fix X . fix Y1 . ( tick/tick . fix Y2 . ( end/end . X + cmd a / tau . Y2"
      " + drop a / tau . Y2 ) + cmd a / tau . Y1 + drop a / tau . Y1 )");
  CHECK(expanded.get() == want_expanded.get());
}

TEST_CASE("channel input keeps unlisted channel actions suppressed") {
  Alphabet ab;
  ab.channels = {"c", "d"};
  ab.actuators = {"a"};
  auto p = parse_controller("fix X . tick . [ rcv c . end ] else ( end )");
  auto mon = synthesize(p, ab).automaton;
  // the listening state: allowed rcv c + tick; suppressed Act* and
  // Chn* minus the listed receive (snd c stays suppressed)
  const EditPtr sum = mon->child->child->branches[0].next->child;
  REQUIRE(sum->tag == Edit::Tag::Sum);
  REQUIRE(sum->complements.size() == 1);
  CHECK(sum->complements[0].except == std::vector<Action>{Action::recv("c")});
}

TEST_CASE("structural completeness against the equation oracle") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto p = random_controller(ab, seed, 4);
    auto mon = synthesize(p, ab).automaton;
    check_shapes(p, mon, ab);
  }
  // and on the tank controller with its full alphabet
  auto file = wtn_node_source();
  auto p1 = *file.find_controller("p1");
  check_shapes(p1, synthesize(p1, file.alphabet).automaton, file.alphabet);
}

TEST_CASE("tank node monitor matches the cascade automaton skeleton") {
  auto file = wtn_node_source();
  const Alphabet& ab = file.alphabet;
  auto p = *file.find_controller("p1");
  auto mon = synthesize(p, ab).automaton;

  // top level: fix X . fix Y ( tick/tick . check-level + suppress-all )
  REQUIRE(mon->tag == Edit::Tag::Fix);
  CHECK(mon->name == "X");
  auto top = mon->child;
  REQUIRE(top->tag == Edit::Tag::Fix);
  auto top_sum = top->child;
  REQUIRE(top_sum->branches.size() == 1);
  CHECK(top_sum->branches[0].in == Action::tick());
  REQUIRE(top_sum->complements.size() == 1);
  CHECK(top_sum->complements[0].except.empty());

  // check-level state: l/l, h/h, m/m, tick/tick, everything else suppressed
  auto chk = top_sum->branches[0].next->child;
  REQUIRE(chk->tag == Edit::Tag::Sum);
  std::set<Action> inputs;
  for (const auto& b : chk->branches) inputs.insert(b.in);
  CHECK(inputs == std::set<Action>{Action::read("l1"), Action::read("h1"),
                                   Action::read("m1"), Action::tick()});

  // low-level request state: allow the upstream send and tick only
  EditPtr req_l;
  for (const auto& b : chk->branches)
    if (b.in == Action::read("l1")) req_l = b.next->child;
  REQUIRE(req_l);
  std::set<Action> req_inputs;
  for (const auto& b : req_l->branches) req_inputs.insert(b.in);
  CHECK(req_inputs == std::set<Action>{Action::send("req_on0"), Action::tick()});
  REQUIRE(req_l->complements.size() == 1);
  CHECK(req_l->complements[0].except ==
        std::vector<Action>{Action::send("req_on0")});

  // no tau branch outside actuation states
  CHECK(edit_moves_on(mon, Action::tau()).empty());
}

TEST_CASE("syntactic determinism") {
  Alphabet ab = small_alphabet();
  CHECK(check_syntactic_determinism(edit_go()));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto p = random_controller(ab, seed, 4);
    CHECK(check_syntactic_determinism(synthesize(p, ab).automaton));
  }
  CHECK(!check_syntactic_determinism(
      parse_automaton("cmd pump/tau . go + cmd pump/cmd pump . go")));
  // an explicit input shadowed by a complement
  CHECK(!check_syntactic_determinism(
      parse_automaton("fix Y . ( cmd pump/cmd pump . Y + other / tau . Y )")));
  CHECK(check_syntactic_determinism(parse_automaton(
      "fix Y . ( cmd pump/cmd pump . Y + other \\ { cmd pump } / tau . Y )")));
}

TEST_CASE("synthesize rejects bad input") {
  Alphabet ab = small_alphabet();
  CHECK_THROWS_AS((void)synthesize(parse_controller("fix X . end"), ab),
                  SynthesisError);
  auto dup = parse_controller(
      "fix X . tick . [ lo . end + lo . cmd pump . end ] else ( end )");
  CHECK_THROWS_AS((void)synthesize(dup, ab), SynthesisError);
}

TEST_CASE("complexity measurement") {
  Alphabet ab;
  ab.actuators = {"a"};
  ab.channels = {"c"};
  // a lone end state materializes to |Act* ∪ Chn*| + 1 branches
  auto frag = synthesize_fragment(parse_controller("end . X"), ab);
  CHECK(materialized_branch_count(frag, ab) == ab.act_chn_actions().size() + 1);

  CHECK(measure_complexity({}, ab).empty());

  // ladder rungs: size 3k+2, branch count 8k^2 + 9k + 2, monotone
  std::uint64_t last = 0;
  for (int k : {2, 4, 8}) {
    auto lad = ladder_controller(k);
    Alphabet lab = ladder_alphabet(k);
    auto rows = measure_complexity({lad}, lab);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].input_size == static_cast<std::uint64_t>(3 * k + 2));
    CHECK(rows[0].branches == static_cast<std::uint64_t>(8 * k * k + 9 * k + 2));
    CHECK(rows[0].branches > last);
    last = rows[0].branches;
  }
}
