#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "ratgame/suites.hpp"
#include "ratgame/words.hpp"

using namespace ratgame;

TEST_CASE("registry: canonical suite list and unknown-name errors") {
  const auto names = registered_suites();
  REQUIRE(names.size() == 8);
  CHECK(names.front() == "r1-equivalence");
  CHECK(names.back() == "wadge-basics");
  const std::set<std::string> unique(names.begin(), names.end());
  CHECK(unique.size() == names.size());
  CHECK_THROWS_AS(run_suite("no-such-suite", SuiteConfig{}), WordError);
}

TEST_CASE("reports are deterministic given seed and config") {
  SuiteConfig cfg;
  cfg.seed = 7;
  cfg.cases = 30;
  const SuiteReport a = run_suite("r2-complement", cfg);
  const SuiteReport b = run_suite("r2-complement", cfg);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_text(a) == report_to_text(b));

  SuiteConfig other = cfg;
  other.seed = 8;
  const SuiteReport c = run_suite("r2-complement", other);
  // Different seeds explore different pairs; coverage should not be frozen.
  CHECK(report_to_json(a) != report_to_json(c));
}

TEST_CASE("r2-complement: clean run with all six families covered") {
  SuiteConfig cfg;
  cfg.seed = 7;
  cfg.cases = 40;
  const SuiteReport r = run_suite("r2-complement", cfg);
  CHECK(r.cases == 40);
  CHECK(r.passed == 40);
  CHECK(r.failed == 0);
  CHECK(r.unknown == 0);
  CHECK(r.ok());
  int families = 0;
  for (const auto& [key, count] : r.coverage)
    if (key.size() == 2 && key[0] == 'C') {
      ++families;
      CHECK(count >= 1);  // the six crafted openers guarantee one hit each
    }
  CHECK(families == 6);
}

TEST_CASE("only-case runs exactly one case and keeps the verdict") {
  SuiteConfig cfg;
  cfg.seed = 7;
  cfg.cases = 40;
  cfg.only_case = 3;
  const SuiteReport r = run_suite("r2-complement", cfg);
  CHECK(r.cases == 1);
  CHECK(r.passed == 1);
  CHECK(r.failed == 0);
}

TEST_CASE("replay lines carry seed, case and non-default settings") {
  SuiteConfig cfg;
  cfg.seed = 11;
  cfg.cases = 25;
  const std::string plain = replay_command("phi-coding", cfg, 13);
  CHECK(plain == "ratgame check phi-coding --seed 11 --cases 25 --only 13");

  SuiteConfig tuned = cfg;
  tuned.bounds.max_depth = 60;
  tuned.bounds.max_counter = 30;
  tuned.horizon = 123;
  tuned.program = "./build/ratgame";
  const std::string full = replay_command("transfer-tournament", tuned, 2);
  CHECK(full ==
        "./build/ratgame check transfer-tournament --seed 11 --cases 25 "
        "--bounds 60,30,24 --horizon 123 --only 2");
}

TEST_CASE("r1-equivalence: small clean run") {
  SuiteConfig cfg;
  cfg.seed = 3;
  cfg.cases = 12;
  const SuiteReport r = run_suite("r1-equivalence", cfg);
  CHECK(r.cases == 12);
  CHECK(r.failed == 0);
  CHECK(r.passed + r.unknown == 12);
  CHECK(r.passed > 0);
  CHECK(r.horizon == 0);  // no plays in this suite
}

TEST_CASE("closure-identity: small clean run with both sides covered") {
  SuiteConfig cfg;
  cfg.seed = 5;
  cfg.cases = 40;
  const SuiteReport r = run_suite("closure-identity", cfg);
  CHECK(r.failed == 0);
  CHECK(r.passed == 40);
  std::uint64_t schedule = 0, marked = 0;
  for (const auto& [key, count] : r.coverage) {
    if (key.rfind("schedule:", 0) == 0) schedule += count;
    if (key.rfind("marked-schedule:", 0) == 0) marked += count;
  }
  CHECK(schedule == 20);
  CHECK(marked == 20);
}

TEST_CASE("winning-set-decomposition: small clean run") {
  SuiteConfig cfg;
  cfg.seed = 9;
  cfg.cases = 24;
  const SuiteReport r = run_suite("winning-set-decomposition", cfg);
  CHECK(r.failed == 0);
  CHECK(r.passed == 24);
  CHECK(r.coverage.count("part:settle") == 1);  // the zeros landmark at least
}

TEST_CASE("transfer-tournament: zero adverse plays") {
  SuiteConfig cfg;
  cfg.seed = 2;
  cfg.cases = 9;
  cfg.horizon = 300;
  const SuiteReport r = run_suite("transfer-tournament", cfg);
  CHECK(r.cases == 9);
  CHECK(r.failed == 0);
  CHECK(r.horizon == 300);
  // All three example machines take part.
  CHECK(r.coverage.at("machine:rejector") == 3);
  CHECK(r.coverage.at("machine:universal") == 3);
  CHECK(r.coverage.at("machine:inf-a") == 3);
}

TEST_CASE("phi-coding: small clean run covering every family") {
  SuiteConfig cfg;
  cfg.seed = 13;
  cfg.cases = 25;
  const SuiteReport r = run_suite("phi-coding", cfg);
  CHECK(r.failed == 0);
  CHECK(r.passed == 25);
  CHECK(r.coverage.at("round-trip") == 5);
  CHECK(r.coverage.at("image") == 5);
  CHECK(r.coverage.at("odd-run") == 5);
  CHECK(r.coverage.at("stall") == 5);
  CHECK(r.coverage.at("empty-block") == 5);
}

TEST_CASE("interleave-universality: small clean run") {
  SuiteConfig cfg;
  cfg.seed = 17;
  cfg.cases = 8;
  cfg.horizon = 200;
  const SuiteReport r = run_suite("interleave-universality", cfg);
  CHECK(r.failed == 0);
  CHECK(r.passed == 8);
}

TEST_CASE("wadge-basics: small clean run") {
  SuiteConfig cfg;
  cfg.seed = 19;
  cfg.cases = 12;
  cfg.horizon = 200;
  const SuiteReport r = run_suite("wadge-basics", cfg);
  CHECK(r.failed == 0);
  CHECK(r.passed == 12);
  CHECK(r.coverage.at("copycat") == 3);
  CHECK(r.coverage.at("skip") == 3);
  CHECK(r.coverage.at("swap") == 3);
  CHECK(r.coverage.at("constant") == 3);
}

TEST_CASE("json rendering follows the versioned schema") {
  SuiteConfig cfg;
  cfg.seed = 23;
  cfg.cases = 10;
  const SuiteReport r = run_suite("phi-coding", cfg);
  const std::string j = report_to_json(r);
  CHECK(j.find("\"schema\": \"report/1\"") != std::string::npos);
  CHECK(j.find("\"suite\": \"phi-coding\"") != std::string::npos);
  CHECK(j.find("\"failures\": []") != std::string::npos);
  CHECK(j.find("\"max_depth\": 256") != std::string::npos);

  const std::string t = report_to_text(r);
  CHECK(t.find("suite: phi-coding") != std::string::npos);
  CHECK(t.find("property: ") != std::string::npos);
  CHECK(t.find("result: 10/10 passed") != std::string::npos);
}

TEST_CASE("example machines: names resolve and unknown names throw") {
  for (const auto& name : example_machine_names()) {
    const BuchiAutomaton a = example_machine(name);
    CHECK(a.name == name);
    a.validate();
  }
  CHECK_THROWS_AS(example_machine("missing"), WordError);
}
