#include "doctest.h"
#include "helpers.hpp"
#include "plcmon/validate.hpp"

using namespace plcmon;
using namespace plcmon::test;

TEST_CASE("tank cascade sources validate for one to three nodes") {
  for (int n = 1; n <= 3; ++n) {
    WtnParams params;
    params.n = n;
    params.include_malware.assign(static_cast<std::size_t>(n), true);
    SourceFile file = wtn_source(params);
    for (const auto& [name, ctrl] : file.controllers) {
      auto report = validate_controller(ctrl, file.alphabet, true);
      INFO(name << ": " << report.text());
      CHECK(report.ok());
    }
    for (const auto& [name, mal] : file.malware)
      CHECK(validate_malware(mal, file.alphabet).ok());
    for (const char* net : {"clean", "monitored", "attacked"})
      CHECK(validate_system(file.instantiate(net)).ok());
    // one sink node joins the cascade from two nodes on
    CHECK(file.controllers.size() == static_cast<std::size_t>(n == 1 ? 1 : n + 1));
  }
  CHECK_THROWS_AS((void)wtn_source(WtnParams{0, {}}), std::invalid_argument);
}

TEST_CASE("the generic tank node matches the cascade encoding") {
  auto file = wtn_node_source();
  auto p = *file.find_controller("p1");
  CHECK(validate_controller(p, file.alphabet, true).ok());
  // node 1 of a two-node cascade is the same term
  CHECK(p.get() == wtn_controller(1, 2).get());
  // its malware asks upstream to stop pumping, then drops the valve close
  auto m = *file.find_malware("mal1");
  CHECK(print_malware(m) ==
        "fix X . tick . [ inj-snd req_off0 . [ drop close1 . X ] else ( X ) ] "
        "else ( X )");
  // the last node of a cascade has no downstream listening branches
  auto last = wtn_controller(2, 2);
  CHECK(validate_controller(last, wtn_alphabet(2), true).ok());
  CHECK(print_controller(last).find("req_on2") == std::string::npos);
}

TEST_CASE("deadlock scenarios validate and behave as advertised") {
  for (auto make : {scenario_inject, scenario_drop}) {
    Scenario sc = make();
    CHECK(validate_controller(sc.ctrl, sc.alphabet, true).ok());
    CHECK(validate_malware(sc.malware, sc.alphabet).ok());
    Lts off = explore(scenario_system(sc, false));
    CHECK(!find_deadlocks(off).empty());
    Lts on = explore(scenario_system(sc, true));
    CHECK(find_deadlocks(on).empty());
  }
}

TEST_CASE("random controllers are valid and deterministic by seed") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto p = random_controller(ab, seed, 4);
    CHECK(validate_controller(p, ab, true).ok());
    CHECK(random_controller(ab, seed, 4).get() == p.get());
  }
  CHECK(random_controller(ab, 1, 4).get() != random_controller(ab, 2, 4).get());
}

TEST_CASE("random malware is valid, time-guarded, reproducible") {
  Alphabet ab = small_alphabet();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int depth = 1 + static_cast<int>(seed % 5);
    auto m = random_malware(ab, seed, depth);
    CHECK(validate_malware(m, ab).ok());
    CHECK(random_malware(ab, seed, depth).get() == m.get());
  }
  CHECK_THROWS_AS((void)random_malware(ab, 1, 0), std::invalid_argument);
}

TEST_CASE("random malware golden sample") {
  Alphabet ab = small_alphabet();
  auto m = random_malware(ab, 42, 3);
  // pinned from the first run; the generator must stay reproducible
  CHECK(print_malware(m) == "[ inj-rcv ask . tick . nil ] else ( tick . nil )");
}

TEST_CASE("depth-one malware stays within the three smallest shapes") {
  Alphabet ab = small_alphabet();
  auto nil = malw_nil();
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto m = random_malware(ab, seed, 1);
    bool small = m.get() == nil.get() ||
                 (m->tag == Malw::Tag::Tick && m->child.get() == nil.get()) ||
                 (m->tag == Malw::Tag::Timeout && m->branches.size() == 1 &&
                  m->branches[0].body.get() == nil.get() &&
                  m->child.get() == nil.get());
    CHECK(small);
  }
}

TEST_CASE("ladder controllers validate at every rung") {
  for (int k : {1, 3, 10}) {
    auto lad = ladder_controller(k);
    CHECK(validate_controller(lad, ladder_alphabet(k), true).ok());
  }
}
