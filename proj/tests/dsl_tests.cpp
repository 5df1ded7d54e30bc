#include "doctest.h"
#include "helpers.hpp"
#include "plcmon/validate.hpp"

using namespace plcmon;
using namespace plcmon::test;

TEST_CASE("bare end sugar resolves to the enclosing binder") {
  auto sugar = parse_controller("fix X . tick . end");
  auto full = parse_controller("fix X . tick . end . X");
  CHECK(sugar.get() == full.get());
}

TEST_CASE("positioned syntax errors") {
  auto r = parse_source("alphabet sensors{ s } actuators{ a } channels{ }\n"
                        "controller p = fix X . tick . [ s . end ( end )\n");
  CHECK(!r.ok());
  REQUIRE(!r.errors.empty());
  CHECK(r.errors.front().line == 2);

  // missing else branch on a timeout
  CHECK_THROWS(parse_controller("fix X . [ s . end ] ( end )"));
  // end continuations cannot be written down
  CHECK_THROWS(parse_controller("fix X . tick . end . ( fix Y . tick . end )"));
}

TEST_CASE("duplicate definitions are reported") {
  auto r = parse_source(
      "alphabet sensors{ s } actuators{ } channels{ }\n"
      "controller p = fix X . tick . end\n"
      "controller p = fix X . tick . end\n");
  CHECK(!r.ok());
}

TEST_CASE("source files round-trip through print and parse") {
  WtnParams params;
  params.n = 2;
  params.include_malware = {true, true};
  SourceFile file = wtn_source(params);
  std::string text = print_source(file);
  auto r = parse_source(text);
  REQUIRE(r.ok());
  CHECK(r.file->alphabet.sensors == file.alphabet.sensors);
  CHECK(r.file->controllers.size() == file.controllers.size());
  for (std::size_t i = 0; i < file.controllers.size(); ++i) {
    CHECK(r.file->controllers[i].first == file.controllers[i].first);
    CHECK(r.file->controllers[i].second.get() == file.controllers[i].second.get());
  }
  for (std::size_t i = 0; i < file.malware.size(); ++i)
    CHECK(r.file->malware[i].second.get() == file.malware[i].second.get());
  CHECK(r.file->networks.size() == 3);
  CHECK(r.file->entry == "attacked");
}

TEST_CASE("automaton syntax round-trips with complements") {
  auto e = parse_automaton(
      "fix X . fix Y . ( tick/tick . X + end/end . X + other \\ { cmd a, drop a } / tau . Y )");
  auto text = print_automaton(e);
  CHECK(parse_automaton(text).get() == e.get());
  CHECK(parse_automaton("go").get() == edit_go().get());
}

TEST_CASE("synthesized monitors round-trip") {
  Alphabet ab = small_alphabet();
  auto p = random_controller(ab, 7, 4);
  auto mon = synthesize(p, ab).automaton;
  CHECK(parse_automaton(print_automaton(mon)).get() == mon.get());
}

TEST_CASE("round-trip on a generated corpus") {
  Alphabet ab = small_alphabet();
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 350; ++seed) {
    auto p = random_controller(ab, seed, 3 + static_cast<int>(seed % 4));
    CHECK(parse_controller(print_controller(p)).get() == p.get());
    auto m = random_malware(ab, seed, 1 + static_cast<int>(seed % 5));
    CHECK(parse_malware(print_malware(m)).get() == m.get());
    auto mon = synthesize_fragment(p, ab);
    CHECK(parse_automaton(print_automaton(mon)).get() == mon.get());
    checked += 3;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("parser totality on junk") {
  for (const char* junk : {"", "fix", "[ ] else", "controller", "((((",
                           "alphabet sensors{s", "end . ", "a/b", "\xff\xfe"}) {
    auto r = parse_source(junk);
    CHECK(!r.ok());  // structured errors, no crash
  }
}

TEST_CASE("network instantiation resolves monitors") {
  auto r = parse_source(
      "alphabet sensors{ s } actuators{ a } channels{ c }\n"
      "controller p = fix X . tick . [ s . cmd a . end ] else ( end )\n"
      "malware bad = fix X . tick . [ drop a . nil ] else ( X )\n"
      "network n1 = synth(p) |- ( p | bad ) || go |- p\n"
      "system n1\n");
  REQUIRE(r.ok());
  System sys = r.file->instantiate_entry();
  REQUIRE(sys.nodes.size() == 2);
  CHECK(sys.nodes[0].malware != nullptr);
  CHECK(sys.nodes[0].monitor->tag == Edit::Tag::Fix);
  CHECK(sys.nodes[1].monitor->tag == Edit::Tag::Go);
  CHECK(validate_system(sys).ok());
}

TEST_CASE("action and trace parsing") {
  CHECK(parse_action("cmd a")->kind == ActKind::Cmd);
  CHECK(parse_action("drop a")->kind == ActKind::Drop);
  CHECK(parse_action("snd c")->kind == ActKind::Send);
  CHECK(parse_action("rcv c")->kind == ActKind::Recv);
  CHECK(parse_action("tick")->kind == ActKind::Tick);
  CHECK(parse_action("tau")->kind == ActKind::Tau);
  CHECK(parse_action("lvl")->kind == ActKind::Read);
  CHECK(!parse_action("cmd").has_value());
  auto t = parse_trace("tick, s, snd c, end");
  REQUIRE(t.has_value());
  CHECK(t->size() == 4);
  CHECK(trace_text(*t) == "tick, s, snd c, end");
}
