#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "ratgame/automata.hpp"
#include "ratgame/membership.hpp"

using namespace ratgame;

namespace {

LassoWord lasso(const std::string& expr) { return parse_lasso(expr); }

// Deterministic complete machine over {0,1} accepting "infinitely many 1s"
// (the omega-language (0^*1)^omega).
BuchiAutomaton inf_ones() {
  BuchiAutomaton b(Alphabet({"0", "1"}));
  b.name = "inf1";
  b.num_states = 2;
  b.initial = 0;
  b.accepting = {false, true};
  b.transitions = {{0, "0", {}, {}, 0},
                   {0, "1", {}, {}, 1},
                   {1, "0", {}, {}, 0},
                   {1, "1", {}, {}, 1}};
  return b;
}

// One-counter machine: counts a's, pops one per b down to zero, then loops
// accepting on c with the counter pinned at zero.  Accepts a^n b^n c^omega.
BuchiAutomaton popper() {
  BuchiAutomaton a(Alphabet({"a", "b", "c"}));
  a.name = "popper";
  a.num_states = 3;
  a.initial = 0;
  a.accepting = {false, false, true};
  a.num_counters = 1;
  a.transitions = {{0, "a", {0}, {1}, 0},  {0, "a", {1}, {1}, 0},
                   {0, "b", {1}, {-1}, 1}, {1, "b", {1}, {-1}, 1},
                   {1, "c", {0}, {0}, 2},  {2, "c", {0}, {0}, 2}};
  return a;
}

/// Replays a counter lasso run against the machine and word: checks letter
/// agreement, zero tests, nonnegativity, an accepting visit inside the loop,
/// and that the loop consumes at least one letter.  Returns the counter drift
/// over one loop traversal, or fails the test.
std::int64_t replay_counter_run(const BuchiAutomaton& a, const LassoWord& w,
                                const CounterLassoRun& run) {
  REQUIRE(a.num_counters == 1);
  int state = a.initial;
  std::int64_t counter = 0;
  std::uint64_t pos = 1;
  auto exec = [&](int ti) {
    REQUIRE(ti >= 0);
    REQUIRE(ti < static_cast<int>(a.transitions.size()));
    const Transition& t = a.transitions[ti];
    REQUIRE(t.from == state);
    if (t.zero_tests[0] == 0) REQUIRE(counter == 0);
    if (t.zero_tests[0] == 1) REQUIRE(counter >= 1);
    if (!t.letter.empty()) {
      REQUIRE(t.letter == letter_at(OmegaWord(w), pos));
      ++pos;
    }
    counter += t.deltas[0];
    REQUIRE(counter >= 0);
    state = t.to;
  };
  for (int ti : run.prefix) exec(ti);
  CHECK(pos == run.loop_start_position);
  CHECK(counter == static_cast<std::int64_t>(run.start_counter));
  // Two traversals: the run must be repeatable from where the first ends.
  std::int64_t drift = 0;
  for (int round = 0; round < 2; ++round) {
    std::int64_t c0 = counter;
    std::uint64_t p0 = pos;
    bool accepting_seen = a.accepting[state];
    int s0 = state;
    for (int ti : run.loop) {
      exec(ti);
      if (a.accepting[state]) accepting_seen = true;
    }
    CHECK(state == s0);
    CHECK(accepting_seen);
    CHECK(pos > p0);
    drift = counter - c0;
    CHECK(drift == run.net_delta);
    CHECK(drift >= 0);
  }
  return drift;
}

}  // namespace

TEST_CASE("lasso membership in Buchi automata") {
  BuchiAutomaton b = inf_ones();
  CHECK(lasso_in_buchi(b, lasso("(1)^w")));
  CHECK_FALSE(lasso_in_buchi(b, lasso("(0)^w")));
  CHECK_FALSE(lasso_in_buchi(b, lasso("1(0)^w")));
  CHECK(lasso_in_buchi(b, lasso("0000(000001)^w")));

  BuchiAutomaton c(Alphabet({"a"}));
  c.num_states = 1;
  c.accepting = {true};
  c.num_counters = 1;
  c.transitions = {{0, "a", {0}, {0}, 0}};
  CHECK_THROWS_AS(lasso_in_buchi(c, lasso("(a)^w")), AutomatonError);
}

TEST_CASE("lambda moves in Buchi membership") {
  // Accepting lambda-loop alone must not accept: the word is never read.
  BuchiAutomaton b(Alphabet({"0"}));
  b.num_states = 1;
  b.accepting = {true};
  b.transitions = {{0, "", {}, {}, 0}};
  CHECK_FALSE(lasso_in_buchi(b, lasso("(0)^w")));

  // Lambda move on the way around an accepting letter-consuming cycle is fine.
  BuchiAutomaton c(Alphabet({"0"}));
  c.num_states = 2;
  c.accepting = {false, true};
  c.transitions = {{0, "", {}, {}, 1}, {1, "0", {}, {}, 0}};
  CHECK(lasso_in_buchi(c, lasso("(0)^w")));
}

TEST_CASE("one-counter membership: matched pops") {
  BuchiAutomaton a = popper();
  SearchBounds bounds;

  CounterLassoRun run;
  Verdict v = lasso_in_counter(a, lasso("aabb(c)^w"), bounds, &run);
  CHECK(v.outcome == Outcome::Accept);
  replay_counter_run(a, lasso("aabb(c)^w"), run);

  CHECK(lasso_in_counter(a, lasso("aab(c)^w"), bounds).outcome ==
        Outcome::Reject);
  CHECK(lasso_in_counter(a, lasso("aabbb(c)^w"), bounds).outcome ==
        Outcome::Reject);
  CHECK(lasso_in_counter(a, lasso("(a)^w"), bounds).outcome ==
        Outcome::Reject);
  CHECK(lasso_in_counter(a, lasso("bc(c)^w"), bounds).outcome ==
        Outcome::Reject);
  Verdict deep = lasso_in_counter(a, lasso("aaaaaaaaaabbbbbbbbbb(c)^w"),
                                  bounds, &run);
  CHECK(deep.outcome == Outcome::Accept);
  replay_counter_run(a, lasso("aaaaaaaaaabbbbbbbbbb(c)^w"), run);

  // Without accepting states everything is rejected.
  BuchiAutomaton dead = popper();
  dead.accepting = {false, false, false};
  CHECK(lasso_in_counter(dead, lasso("aabb(c)^w"), bounds).outcome ==
        Outcome::Reject);
}

TEST_CASE("one-counter membership: counter-raising pump") {
  // Counter climbs forever on a's while the only state stays accepting: the
  // accepting run exists but visits no repeated configuration.
  BuchiAutomaton a(Alphabet({"a"}));
  a.name = "climber";
  a.num_states = 1;
  a.accepting = {true};
  a.num_counters = 1;
  a.transitions = {{0, "a", {0}, {1}, 0}, {0, "a", {1}, {1}, 0}};
  SearchBounds bounds;
  CounterLassoRun run;
  Verdict v = lasso_in_counter(a, lasso("(a)^w"), bounds, &run);
  CHECK(v.outcome == Outcome::Accept);
  CHECK(replay_counter_run(a, lasso("(a)^w"), run) > 0);

  // Same machine, accepting removed.
  a.accepting = {false};
  CHECK(lasso_in_counter(a, lasso("(a)^w"), bounds).outcome ==
        Outcome::Reject);
}

TEST_CASE("one-counter membership: zero tests on the accepting cycle") {
  // (a b)^omega with the counter toggling 0 -> 1 -> 0.
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.num_states = 2;
  a.accepting = {true, false};
  a.num_counters = 1;
  a.transitions = {{0, "a", {0}, {1}, 1}, {1, "b", {1}, {-1}, 0}};
  SearchBounds bounds;
  CounterLassoRun run;
  CHECK(lasso_in_counter(a, lasso("(ab)^w"), bounds, &run).outcome ==
        Outcome::Accept);
  CHECK(replay_counter_run(a, lasso("(ab)^w"), run) == 0);
  CHECK(lasso_in_counter(a, lasso("(aab)^w"), bounds).outcome ==
        Outcome::Reject);
  CHECK(lasso_in_counter(a, lasso("b(ab)^w"), bounds).outcome ==
        Outcome::Reject);
}

TEST_CASE("one-counter membership: lambda pops") {
  // a pushes, a lambda move pops, b requires zero: accepts (ab)^omega.
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.num_states = 3;
  a.accepting = {true, false, false};
  a.num_counters = 1;
  a.transitions = {{0, "a", {0}, {1}, 1},
                   {1, "", {1}, {-1}, 2},
                   {2, "b", {0}, {0}, 0}};
  SearchBounds bounds;
  CounterLassoRun run;
  CHECK(lasso_in_counter(a, lasso("(ab)^w"), bounds, &run).outcome ==
        Outcome::Accept);
  replay_counter_run(a, lasso("(ab)^w"), run);
  CHECK(lasso_in_counter(a, lasso("(aab)^w"), bounds).outcome ==
        Outcome::Reject);

  // A lambda self-loop that could stall forever on an accepting state does
  // not make the machine accept: the input must be consumed.
  BuchiAutomaton stall(Alphabet({"a"}));
  stall.num_states = 2;
  stall.accepting = {false, true};
  stall.num_counters = 1;
  stall.transitions = {{0, "a", {0}, {0}, 1}, {1, "", {0}, {0}, 1}};
  CHECK(lasso_in_counter(stall, lasso("(a)^w"), bounds).outcome ==
        Outcome::Reject);
}

TEST_CASE("one-counter verdicts are stable under a larger cutoff") {
  std::mt19937_64 rng(20260815);
  const std::vector<Letter> sigma{"a", "b"};
  SearchBounds bounds;
  int accepts = 0;
  for (int iter = 0; iter < 60; ++iter) {
    BuchiAutomaton a{Alphabet(sigma)};
    a.num_states = 1 + static_cast<int>(rng() % 3);
    a.num_counters = 1;
    a.accepting.assign(a.num_states, false);
    a.accepting[rng() % a.num_states] = true;
    int n_trans = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n_trans; ++i) {
      Transition t;
      t.from = static_cast<int>(rng() % a.num_states);
      t.to = static_cast<int>(rng() % a.num_states);
      t.letter = sigma[rng() % sigma.size()];
      int zt = static_cast<int>(rng() % 2);
      int d = zt == 0 ? static_cast<int>(rng() % 2)       // 0 or +1
                      : static_cast<int>(rng() % 3) - 1;  // -1, 0, +1
      t.zero_tests = {zt};
      t.deltas = {d};
      a.transitions.push_back(std::move(t));
    }
    std::string stem, period;
    for (int i = static_cast<int>(rng() % 3); i > 0; --i)
      stem += (rng() % 2 ? 'a' : 'b');
    for (int i = 1 + static_cast<int>(rng() % 2); i > 0; --i)
      period += (rng() % 2 ? 'a' : 'b');
    LassoWord w(Alphabet(sigma), parse_letters(stem), parse_letters(period));

    std::uint64_t cutoff =
        std::max<std::uint64_t>(a.num_states * (stem.size() + period.size()) + 2,
                                bounds.max_counter);
    CounterLassoRun run;
    Verdict v1 = lasso_in_counter(a, w, bounds, &run, cutoff);
    Verdict v2 = lasso_in_counter(a, w, bounds, nullptr, cutoff + 5);
    CHECK(v1.outcome == v2.outcome);
    if (v1.outcome == Outcome::Accept) {
      ++accepts;
      replay_counter_run(a, w, run);
    }
  }
  CHECK(accepts > 5);  // the sample exercises both verdicts
}

TEST_CASE("two or more counters fall back to the bounded engine") {
  BuchiAutomaton a(Alphabet({"a"}));
  a.num_states = 1;
  a.accepting = {true};
  a.num_counters = 2;
  SearchBounds bounds;

  // Both counters climb forever: no repeating configuration within bounds.
  a.transitions = {{0, "a", {0, 0}, {1, 1}, 0}, {0, "a", {1, 1}, {1, 1}, 0}};
  CHECK(lasso_in_counter(a, lasso("(a)^w"), bounds).outcome ==
        Outcome::Unknown);

  // Flat counters: exact accepting cycle.
  a.transitions = {{0, "a", {0, 0}, {0, 0}, 0}};
  CHECK(lasso_in_counter(a, lasso("(a)^w"), bounds).outcome ==
        Outcome::Accept);

  // Flat but non-accepting: the bounded exploration closes, so Reject.
  a.accepting = {false};
  CHECK(lasso_in_counter(a, lasso("(a)^w"), bounds).outcome ==
        Outcome::Reject);
}

TEST_CASE("two-tape lasso membership") {
  TwoTapeAutomaton t(Alphabet({"a"}), Alphabet({"a", "b"}));
  t.name = "sync";
  t.num_states = 1;
  t.accepting = {true};
  t.transitions = {{0, {"a"}, {"b"}, 0}};
  CHECK(lassopair_in_2tape(t, lasso("(a)^w"), lasso("(b)^w")));
  CHECK_FALSE(lassopair_in_2tape(t, lasso("(a)^w"), lasso("a(b)^w")));

  TwoTapeAutomaton u(Alphabet({"a"}), Alphabet({"b"}));
  u.name = "async";
  u.num_states = 1;
  u.accepting = {true};
  u.transitions = {{0, {"a"}, {}, 0}, {0, {}, {"b", "b"}, 0}};
  CHECK(lassopair_in_2tape(u, lasso("(a)^w"), lasso("(b)^w")));

  // Accepting but tape 2 never consumes: both tapes must be infinite.
  TwoTapeAutomaton one(Alphabet({"a"}), Alphabet({"b"}));
  one.num_states = 1;
  one.accepting = {true};
  one.transitions = {{0, {"a"}, {}, 0}};
  CHECK_FALSE(lassopair_in_2tape(one, lasso("(a)^w"), lasso("(b)^w")));

  // Silent accepting loop: neither tape consumes.
  TwoTapeAutomaton silent(Alphabet({"a"}), Alphabet({"b"}));
  silent.num_states = 1;
  silent.accepting = {true};
  silent.transitions = {{0, {}, {}, 0}};
  CHECK_FALSE(lassopair_in_2tape(silent, lasso("(a)^w"), lasso("(b)^w")));

  // Multi-letter labels.
  TwoTapeAutomaton m(Alphabet({"a", "b"}), Alphabet({"c"}));
  m.num_states = 1;
  m.accepting = {true};
  m.transitions = {{0, {"a", "b"}, {"c"}, 0}};
  CHECK(lassopair_in_2tape(m, lasso("(ab)^w"), lasso("(c)^w")));
  CHECK_FALSE(lassopair_in_2tape(m, lasso("(aab)^w"), lasso("(c)^w")));
}

TEST_CASE("run certificates validate by replay") {
  TwoTapeAutomaton t(Alphabet({"a"}), Alphabet({"b"}));
  t.name = "sync";
  t.num_states = 1;
  t.accepting = {true};
  t.transitions = {{0, {"a"}, {"b"}, 0}};

  RunCertificate c;
  c.machine_name = "sync";
  c.machine_states = 1;
  c.machine_transitions = 1;
  c.input = "(a)^w,(b)^w";
  c.loop = {{0, 1, 0}};
  CHECK(validate_certificate(t, c, 25));

  // Fingerprint mismatches.
  RunCertificate bad = c;
  bad.machine_name = "other";
  CHECK_FALSE(validate_certificate(t, bad, 5));
  bad = c;
  bad.machine_states = 2;
  CHECK_FALSE(validate_certificate(t, bad, 5));

  // Input letters that the schedule cannot produce.
  bad = c;
  bad.input = "(a)^w,(a)^w";
  CHECK_FALSE(validate_certificate(t, bad, 5));

  // No accepting visit.
  TwoTapeAutomaton t2 = t;
  t2.accepting = {false};
  CHECK_FALSE(validate_certificate(t2, c, 5));
}

TEST_CASE("run certificates with affine schedules") {
  // Two self-loops on an accepting state; block r reads r a's then one b.
  TwoTapeAutomaton t(Alphabet({"a"}), Alphabet({"b"}));
  t.name = "tri";
  t.num_states = 1;
  t.accepting = {true};
  t.transitions = {{0, {"a"}, {}, 0}, {0, {}, {"b"}, 0}};

  RunCertificate c;
  c.machine_name = "tri";
  c.machine_states = 1;
  c.machine_transitions = 2;
  c.input = "(a)^w,(b)^w";
  c.loop = {{0, 1, 1}, {1, 1, 0}};
  CHECK(validate_certificate(t, c, 12));

  // A schedule that goes negative is malformed.
  RunCertificate neg = c;
  neg.loop = {{0, 1, 0}, {1, 1, 0}, {0, 1, -2}};
  CHECK_THROWS_AS(validate_certificate(t, neg, 3), AutomatonError);

  // Tape-2 starving rounds are rejected.
  RunCertificate starve = c;
  starve.loop = {{0, 1, 0}};
  CHECK_FALSE(validate_certificate(t, starve, 3));
}

TEST_CASE("run certificates check prefix continuity") {
  TwoTapeAutomaton t(Alphabet({"a"}), Alphabet({"b"}));
  t.name = "two";
  t.num_states = 2;
  t.initial = 0;
  t.accepting = {true, false};
  t.transitions = {{0, {"a"}, {}, 1}, {1, {}, {"b"}, 0}};

  RunCertificate c;
  c.machine_name = "two";
  c.machine_states = 2;
  c.machine_transitions = 2;
  c.input = "(a)^w,(b)^w";
  c.loop = {{0, 1, 0}, {1, 1, 0}};
  CHECK(validate_certificate(t, c, 10));

  RunCertificate skewed = c;
  skewed.prefix = {1};  // transition 1 starts at state 1, not the initial
  CHECK_FALSE(validate_certificate(t, skewed, 3));

  RunCertificate full = c;
  full.prefix = {0, 1};  // one full loop first is fine
  CHECK(validate_certificate(t, full, 3));
}

TEST_CASE("verdict plumbing prints") {
  CHECK(to_string(Outcome::Accept) == "Accept");
  CHECK(to_string(Outcome::Reject) == "Reject");
  CHECK(to_string(Outcome::Unknown) == "Unknown");
  SearchBounds b;
  b.max_depth = 7;
  b.max_counter = 8;
  b.max_blocks = 9;
  CHECK(b.to_string() == "depth=7,counter=8,blocks=9");
}
