#include <doctest.h>

#include <fstream>
#include <sstream>

#include <filtlab/generators.hpp>
#include <filtlab/hypotheses.hpp>
#include <filtlab/scenario.hpp>
#include <filtlab/verify.hpp>

#include "fixtures.hpp"

using namespace filtlab;
using namespace testfx;

namespace {

Scenario s1_scenario() {
  Scenario sc;
  sc.space = s1_space();
  sc.tau = s1_tau();
  return sc;
}

}  // namespace

TEST_CASE("the shipped reference fixture loads") {
  const Scenario sc = load_scenario(std::string(FILTLAB_FIXTURE_DIR) + "/s1.json");
  CHECK(sc.space.n_atoms() == 4);
  CHECK(sc.space.horizon() == 2);
  REQUIRE(sc.tau.has_value());
  CHECK((*sc.tau)[0] == 1);
  CHECK((*sc.tau)[3] == sc.space.timeline().inf_slot());
  // It is canonical on disk.
  std::ifstream in(std::string(FILTLAB_FIXTURE_DIR) + "/s1.json");
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(serialize_scenario(sc) == buf.str());
}

TEST_CASE("validation failures carry pointer-style locations") {
  SUBCASE("probabilities off by normalization") {
    const char* text = R"({"version":"1","atoms":["x","y"],"horizon":0,
      "probabilities":["1/2","5/8"],"filtration":[[["x","y"]]]})";
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("/probabilities"), Error);
  }
  SUBCASE("malformed json is a parse error") {
    CHECK_THROWS_WITH_AS(parse_scenario("{"), doctest::Contains("ParseError"), Error);
  }
  SUBCASE("unknown keys are rejected in strict mode only") {
    const char* text = R"({"version":"1","atoms":["x"],"horizon":0,
      "probabilities":["1"],"filtration":[[["x"]]],"extra":1})";
    CHECK_THROWS_WITH_AS(parse_scenario(text, true), doctest::Contains("/extra"), Error);
    CHECK_NOTHROW(parse_scenario(text, false));
  }
  SUBCASE("bad time literal") {
    const char* text = R"({"version":"1","atoms":["x"],"horizon":0,
      "probabilities":["1"],"filtration":[[["x"]]],"tau":["7"]})";
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("/tau/0"), Error);
  }
  SUBCASE("kind annotations are enforced") {
    const char* text = R"({"version":"1","atoms":["x","y"],"horizon":0,
      "probabilities":["1/2","1/2"],"filtration":[[["x","y"]]],
      "processes":{"p":{"kind":"predictable","values":[["0","1"],["0","1"]]}}})";
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("/processes/p"), Error);
    const char* text2 = R"({"version":"1","atoms":["x","y"],"horizon":0,
      "probabilities":["1/2","1/2"],"filtration":[[["x","y"]]],
      "processes":{"p":{"kind":"increasing","values":[["1","1"],["0","0"]]}}})";
    CHECK_THROWS_WITH_AS(parse_scenario(text2), doctest::Contains("not increasing"), Error);
  }
  SUBCASE("field tables must be dense") {
    Scenario sc = s1_scenario();
    std::string text = serialize_scenario(sc);
    // Splice a truncated field in by hand.
    text.insert(text.rfind('}'), R"(,"field": [[["0","0","0","0"]]])");
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("/field"), Error);
  }
}

TEST_CASE("round trips are byte-stable after canonicalization") {
  SUBCASE("plain space and tau") {
    const std::string first = serialize_scenario(s1_scenario());
    const Scenario back = parse_scenario(first);
    CHECK(serialize_scenario(back) == first);
  }
  SUBCASE("generated scenarios with attached structure") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      gen::Rng rng(seed);
      const gen::Fixture fx = (seed % 3 == 0) ? gen::ed_fixture(rng) : gen::generic_fixture(rng);
      Scenario sc;
      sc.space = fx.space;
      sc.tau = fx.tau;
      sc.field = fx.field;
      sc.ed = fx.ed;
      sc.processes["U"] = gen::martingale(rng, fx.space);
      const std::string once = serialize_scenario(sc);
      const std::string twice = serialize_scenario(parse_scenario(once));
      CHECK(once == twice);
    }
  }
  SUBCASE("rationals are re-canonicalized on load") {
    const char* text = R"({"version":"1","atoms":["x","y"],"horizon":0,
      "probabilities":["2/4","4/8"],"filtration":[[["x","y"]]]})";
    const Scenario sc = parse_scenario(text);
    CHECK(sc.space.prob(0).str() == "1/2");
  }
}

TEST_CASE("verify_scenario flags a field that contradicts tau") {
  gen::Rng rng(19);
  const gen::Fixture fx = gen::generic_fixture(rng);
  Scenario sc;
  sc.space = fx.space;
  sc.tau = fx.tau;
  // Attach the field of a different time.
  RandomTime other = fx.tau;
  other.value[0] = (other.value[0] == 0) ? 1 : 0;
  sc.field = conditional_distribution(fx.space, other);
  const Report report = verify_scenario(sc, 1);
  REQUIRE_FALSE(report.checks.empty());
  CHECK(report.checks.front().name == "field-matches-tau");
  CHECK(report.checks.front().status == CheckStatus::Fail);
  CHECK(report.any_fail());
}

TEST_CASE("attached structures survive the trip intact") {
  gen::Rng rng(12);
  const gen::Fixture fx = gen::ed_fixture(rng);
  Scenario sc;
  sc.space = fx.space;
  sc.tau = fx.tau;
  sc.field = fx.field;
  sc.ed = fx.ed;
  sc.market_x = gen::martingale(rng, fx.space);

  const Scenario back = parse_scenario(serialize_scenario(sc));
  REQUIRE(back.field.has_value());
  REQUIRE(back.ed.has_value());
  REQUIRE(back.market_x.has_value());
  const int S = fx.space.timeline().slots();
  for (int u = 0; u < S; ++u)
    for (int t = 0; t < S; ++t) CHECK(back.field->at(u, t) == fx.field.at(u, t));
  CHECK_FALSE(verify_ed(back.space, *back.field, *back.ed));
}
