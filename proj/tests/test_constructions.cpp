#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "ratgame/automata.hpp"
#include "ratgame/codings.hpp"
#include "ratgame/constructions.hpp"
#include "ratgame/format.hpp"
#include "ratgame/membership.hpp"

using namespace ratgame;

namespace {

LassoWord lasso(const std::string& expr) { return parse_lasso(expr); }

LassoWord make_lasso(const FiniteWord& stem, const FiniteWord& period) {
  std::set<Letter> used(stem.begin(), stem.end());
  used.insert(period.begin(), period.end());
  return LassoWord(Alphabet(std::vector<Letter>(used.begin(), used.end())),
                   stem, period);
}

LassoWord random_lasso(std::mt19937_64& rng, const std::vector<Letter>& sigma,
                       std::size_t max_stem = 6, std::size_t max_period = 6) {
  std::uniform_int_distribution<std::size_t> stem_len(0, max_stem);
  std::uniform_int_distribution<std::size_t> period_len(1, max_period);
  std::uniform_int_distribution<std::size_t> pick(0, sigma.size() - 1);
  FiniteWord stem, period;
  const std::size_t s = stem_len(rng);
  const std::size_t p = period_len(rng);
  for (std::size_t i = 0; i < s; ++i) stem.push_back(sigma[pick(rng)]);
  for (std::size_t i = 0; i < p; ++i) period.push_back(sigma[pick(rng)]);
  return make_lasso(stem, period);
}

// One state, always accepting, counter pinned at zero: accepts every word.
BuchiAutomaton universal1() {
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.name = "universal";
  a.num_states = 1;
  a.initial = 0;
  a.accepting = {true};
  a.num_counters = 1;
  for (const Letter& l : {Letter("a"), Letter("b")}) {
    a.transitions.push_back({0, l, {0}, {0}, 0});
    a.transitions.push_back({0, l, {1}, {0}, 0});
  }
  return a;
}

// Same shape but no accepting state: accepts nothing.
BuchiAutomaton rejector() {
  BuchiAutomaton a = universal1();
  a.name = "rejector";
  a.accepting = {false};
  return a;
}

// Pushes on every letter: the counter is forced to i-1 before letter i.
BuchiAutomaton incrementer() {
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.name = "incrementer";
  a.num_states = 1;
  a.initial = 0;
  a.accepting = {true};
  a.num_counters = 1;
  for (const Letter& l : {Letter("a"), Letter("b")}) {
    a.transitions.push_back({0, l, {0}, {1}, 0});
    a.transitions.push_back({0, l, {1}, {1}, 0});
  }
  return a;
}

// Counts a's, pops one per b down to zero, then accepts on c at zero.
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

BuchiAutomaton random_counter_machine(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nstates(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> ntrans(1, 2);
  std::uniform_int_distribution<int> dpick(0, 2);
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.name = "random";
  a.num_states = nstates(rng);
  a.initial = 0;
  a.num_counters = 1;
  a.accepting.assign(a.num_states, false);
  for (int q = 0; q < a.num_states; ++q) a.accepting[q] = coin(rng) == 1;
  std::uniform_int_distribution<int> spick(0, a.num_states - 1);
  for (int q = 0; q < a.num_states; ++q)
    for (const Letter& l : {Letter("a"), Letter("b")})
      for (int k = ntrans(rng); k > 0; --k) {
        const int t = coin(rng);
        int delta = dpick(rng) - 1;
        if (t == 0 && delta < 0) delta = 0;
        a.transitions.push_back({q, l, {t}, {delta}, spick(rng)});
      }
  a.validate();
  return a;
}

PairWord coded_pair(const LassoWord& x) {
  return {OmegaWord(encode_h(x)), OmegaWord(PatternWord::alpha_word())};
}

std::set<ComplementTag> tags_of(const std::vector<ComplementClass>& classes) {
  std::set<ComplementTag> out;
  for (const auto& c : classes) out.insert(c.tag);
  return out;
}

// Zips two lassos into the word x(1) x'(1) x(2) x'(2) ... as one lasso.
LassoWord interleave_lasso(const LassoWord& x, const LassoWord& xp) {
  const std::uint64_t s =
      std::max<std::uint64_t>(x.stem().size(), xp.stem().size());
  const std::uint64_t p = std::lcm<std::uint64_t, std::uint64_t>(
      x.period().size(), xp.period().size());
  FiniteWord stem, period;
  for (std::uint64_t i = 1; i <= s; ++i) {
    stem.push_back(x.letter_at(i));
    stem.push_back(xp.letter_at(i));
  }
  for (std::uint64_t i = s + 1; i <= s + p; ++i) {
    period.push_back(x.letter_at(i));
    period.push_back(xp.letter_at(i));
  }
  return make_lasso(stem, period);
}

}  // namespace

TEST_CASE("coded simulation: shape, roles and the source annotation") {
  const BuchiAutomaton a = universal1();
  const TwoTapeAutomaton r1 = build_R1(a);
  r1.validate();

  // Tape alphabets: payload plus schedule letters on tape 1, schedule only
  // on tape 2.
  CHECK(r1.alphabet1.contains("a"));
  CHECK(r1.alphabet1.contains("b"));
  CHECK(r1.alphabet1.contains("0"));
  CHECK(r1.alphabet1.contains("A"));
  CHECK(r1.alphabet2.contains("0"));
  CHECK(r1.alphabet2.contains("A"));
  CHECK_FALSE(r1.alphabet2.contains("a"));

  // Role naming: a start state plus per-thread round and gap states in two
  // phases; only start and round states may accept.
  REQUIRE(static_cast<int>(r1.state_names.size()) == r1.num_states);
  CHECK(std::count(r1.state_names.begin(), r1.state_names.end(), "start") ==
        1);
  for (int q = 0; q < r1.num_states; ++q) {
    const std::string& nm = r1.state_names[q];
    const bool round = nm == "start" || nm.rfind("rs:", 0) == 0;
    if (!round) CHECK_FALSE(r1.accepting[q]);
  }

  // The source machine rides along and parses back to an identical print.
  REQUIRE(r1.annotations.count("r1.source") == 1);
  const AnyAutomaton parsed = parse_automaton(r1.annotations.at("r1.source"));
  REQUIRE(std::holds_alternative<BuchiAutomaton>(parsed));
  CHECK(print_automaton(std::get<BuchiAutomaton>(parsed)) ==
        print_automaton(a));

  // Only real-time one-counter machines can be simulated.
  BuchiAutomaton no_counter = universal1();
  no_counter.num_counters = 0;
  for (auto& t : no_counter.transitions) {
    t.zero_tests.clear();
    t.deltas.clear();
  }
  CHECK_THROWS_AS(build_R1(no_counter), AutomatonError);
  BuchiAutomaton lambda = universal1();
  lambda.transitions.push_back({0, "", {0}, {0}, 0});
  CHECK_THROWS_AS(build_R1(lambda), AutomatonError);
}

TEST_CASE("coded simulation: acceptance tracks the source machine") {
  SearchBounds bounds;
  bounds.max_depth = 60;
  bounds.max_counter = 30;

  SUBCASE("universal source accepts with a replayable certificate") {
    const TwoTapeAutomaton r1 = build_R1(universal1());
    const PairWord p = coded_pair(lasso("(ab)^w"));
    const Verdict v = bounded_run_search(r1, p, bounds);
    REQUIRE(v.outcome == Outcome::Accept);
    REQUIRE(v.certificate.has_value());
    CHECK(v.certificate->machine_name == r1.name);
    CHECK(v.certificate->input == certificate_input_string(p));
    CHECK(validate_certificate(r1, *v.certificate, 30));
    CHECK(validate_certificate(r1, *v.certificate, 60));

    // No accepting state in the source: same machine shape, opposite call.
    const TwoTapeAutomaton r1r = build_R1(rejector());
    SearchBounds shallow;
    shallow.max_depth = 40;
    const Verdict vr = bounded_run_search(r1r, p, shallow);
    CHECK(vr.outcome == Outcome::Reject);
  }

  SUBCASE("pop discipline carries over to the coded pair") {
    const TwoTapeAutomaton r1 = build_R1(popper());
    const Verdict in =
        bounded_run_search(r1, coded_pair(lasso("aabb(c)^w")), bounds);
    REQUIRE(in.outcome == Outcome::Accept);
    REQUIRE(in.certificate.has_value());
    CHECK(validate_certificate(r1, *in.certificate, 30));
    const Verdict out =
        bounded_run_search(r1, coded_pair(lasso("aab(c)^w")), bounds);
    CHECK(out.outcome == Outcome::Reject);
  }

  // True iff the segment repeats a transition that walks a counter-pairing
  // ("pair:...") state of the simulation.
  auto is_pairing = [](const TwoTapeAutomaton& m, const ScheduleSegment& s) {
    const Transition2& t = m.transitions[static_cast<std::size_t>(s.transition)];
    return m.state_names[static_cast<std::size_t>(t.to)].rfind("pair:", 0) ==
           0;
  };

  SUBCASE("growing counter needs a sloped pairing schedule") {
    const TwoTapeAutomaton r1 = build_R1(incrementer());
    const Verdict v =
        bounded_run_search(r1, coded_pair(lasso("a(b)^w")), bounds);
    REQUIRE(v.outcome == Outcome::Accept);
    REQUIRE(v.certificate.has_value());
    CHECK(validate_certificate(r1, *v.certificate, 30));
    bool sloped = false;
    for (const auto& seg : v.certificate->loop)
      sloped |= is_pairing(r1, seg) && seg.repeat_slope > 0;
    CHECK(sloped);
  }

  SUBCASE("pairing segments never slope for a pinned counter") {
    const TwoTapeAutomaton r1 = build_R1(universal1());
    const Verdict v =
        bounded_run_search(r1, coded_pair(lasso("(ba)^w")), bounds);
    REQUIRE(v.certificate.has_value());
    for (const auto& seg : v.certificate->loop)
      if (is_pairing(r1, seg)) CHECK(seg.repeat_slope == 0);
  }

  SUBCASE("verdicts are stable as the bounds grow") {
    const TwoTapeAutomaton r1 = build_R1(popper());
    SearchBounds big;
    big.max_depth = 400;
    big.max_counter = 128;
    CHECK(bounded_run_search(r1, coded_pair(lasso("aabb(c)^w")), big)
              .outcome == Outcome::Accept);
    CHECK(bounded_run_search(r1, coded_pair(lasso("aab(c)^w")), big).outcome ==
          Outcome::Reject);
  }
}

TEST_CASE("run builder rejects tampered runs") {
  const BuchiAutomaton a = popper();
  const LassoWord x = lasso("aabb(c)^w");
  CounterLassoRun run;
  REQUIRE(lasso_in_counter(a, x, SearchBounds{}, &run).outcome ==
          Outcome::Accept);
  CHECK_NOTHROW(run_builder_R1(a, x, run));

  CounterLassoRun wrong_letter = run;
  REQUIRE_FALSE(wrong_letter.prefix.empty());
  wrong_letter.prefix[0] = wrong_letter.prefix[0] == 2 ? 0 : 2;
  CHECK_THROWS_AS(run_builder_R1(a, x, wrong_letter), AutomatonError);

  CounterLassoRun cut = run;
  cut.loop.clear();
  CHECK_THROWS_AS(run_builder_R1(a, x, cut), AutomatonError);

  CounterLassoRun bad_id = run;
  bad_id.loop.push_back(999);
  CHECK_THROWS_AS(run_builder_R1(a, x, bad_id), AutomatonError);

  // A non-accepting loop is refused even if it replays fine.
  const BuchiAutomaton r = rejector();
  CounterLassoRun parked;
  parked.prefix = {};
  parked.loop = {0};  // (0,a,t=0,d=0,0), matches a^omega positionally
  parked.loop_start_position = 1;
  CHECK_THROWS_AS(run_builder_R1(r, lasso("(a)^w"), parked), AutomatonError);
}

TEST_CASE("bounded search: corrupted coded tapes are rejected outright") {
  SearchBounds bounds;
  bounds.max_depth = 40;
  const OmegaWord alpha{PatternWord::alpha_word()};

  // Block three lost its marker: no thread survives the third round.
  const TwoTapeAutomaton r1u = build_R1(universal1());
  const PairWord broken_marker{OmegaWord(lasso("0Aa00a000a(0)^w")), alpha};
  const Verdict vm = bounded_run_search(r1u, broken_marker, bounds);
  CHECK(vm.outcome == Outcome::Reject);

  // Block three is one zero too long for a counter forced to push: the
  // zero-run pairing cannot absorb it.
  const TwoTapeAutomaton r1i = build_R1(incrementer());
  const PairWord broken_length{OmegaWord(lasso("0Aa00a0000Aa(0)^w")), alpha};
  const Verdict vl = bounded_run_search(r1i, broken_length, bounds);
  CHECK(vl.outcome == Outcome::Reject);

  // Same verdicts with much larger bounds.
  SearchBounds big;
  big.max_depth = 300;
  CHECK(bounded_run_search(r1u, broken_marker, big).outcome ==
        Outcome::Reject);
  CHECK(bounded_run_search(r1i, broken_length, big).outcome ==
        Outcome::Reject);
}

TEST_CASE("bounded search: dispatch, bounds and annotation checks") {
  SearchBounds zero;
  zero.max_depth = 0;

  const TwoTapeAutomaton r1 = build_R1(universal1());
  const PairWord p = coded_pair(lasso("(ab)^w"));
  CHECK(bounded_run_search(r1, p, zero).outcome == Outcome::Unknown);
  CHECK(bounded_run_search(universal1(), OmegaWord(lasso("(a)^w")), zero)
            .outcome == Outcome::Unknown);

  // Lasso pairs go to the exact product engine regardless of annotations.
  TwoTapeAutomaton direct(Alphabet({"a"}), Alphabet({"b"}));
  direct.num_states = 1;
  direct.initial = 0;
  direct.accepting = {true};
  direct.transitions.push_back({0, {"a"}, {"b"}, 0});
  SearchBounds bounds;
  CHECK(bounded_run_search(direct, {OmegaWord(lasso("(a)^w")),
                                    OmegaWord(lasso("(b)^w"))},
                           bounds)
            .outcome == Outcome::Accept);
  CHECK(bounded_run_search(direct, {OmegaWord(lasso("(a)^w")),
                                    OmegaWord(lasso("b(a)^w"))},
                           bounds)
            .outcome == Outcome::Reject);

  // An annotation naming a machine with different reachable configurations
  // is caught by the block cross-check.
  TwoTapeAutomaton lying = build_R1(universal1());
  lying.annotations["r1.source"] = print_automaton(incrementer());
  const Verdict vl = bounded_run_search(lying, p, bounds);
  CHECK(vl.outcome == Outcome::Unknown);
  CHECK(vl.evidence.find("disagrees") != std::string::npos);

  // An unparsable annotation falls back to the positional engine, which
  // cannot close a run on the aperiodic coded pair.
  TwoTapeAutomaton garbled = build_R1(universal1());
  garbled.annotations["r1.source"] = "not an automaton";
  SearchBounds small;
  small.max_depth = 48;
  CHECK(bounded_run_search(garbled, p, small).outcome == Outcome::Unknown);
}

TEST_CASE("bounded search: single-word engine on pattern inputs") {
  SearchBounds bounds;
  bounds.max_depth = 64;
  bounds.max_counter = 5;

  // Lasso inputs are decided exactly.
  CHECK(bounded_run_search(popper(), OmegaWord(lasso("aabb(c)^w")), bounds)
            .outcome == Outcome::Accept);
  CHECK(bounded_run_search(popper(), OmegaWord(lasso("aab(c)^w")), bounds)
            .outcome == Outcome::Reject);

  // A code of a periodic sequence is itself ultimately periodic, so it is
  // recognized as a lasso and decided exactly.
  const OmegaWord phi{encode_phi(lasso("(01)^w"))};
  REQUIRE(is_lasso_class(phi));
  BuchiAutomaton all01(Alphabet({"0", "1"}));
  all01.num_states = 1;
  all01.initial = 0;
  all01.accepting = {true};
  all01.transitions = {{0, "0", {}, {}, 0}, {0, "1", {}, {}, 0}};
  CHECK(bounded_run_search(all01, phi, bounds).outcome == Outcome::Accept);

  // The block coding is aperiodic; over the wrong letters it kills every
  // prefix.
  const OmegaWord hcode{encode_h(lasso("(ab)^w"))};
  REQUIRE_FALSE(is_lasso_class(hcode));
  BuchiAutomaton only_x(Alphabet({"a", "b", "x"}));
  only_x.num_states = 1;
  only_x.initial = 0;
  only_x.accepting = {true};
  only_x.transitions = {{0, "x", {}, {}, 0}};
  CHECK(bounded_run_search(only_x, hcode, bounds).outcome == Outcome::Reject);

  // A machine that tracks the pattern forever stays undecided: the
  // breadth-first engine never invents an Accept.
  const std::vector<Letter> code_letters = {"0", "A", "a", "b"};
  BuchiAutomaton all4{Alphabet(code_letters)};
  all4.num_states = 1;
  all4.initial = 0;
  all4.accepting = {true};
  for (const Letter& l : code_letters)
    all4.transitions.push_back({0, l, {}, {}, 0});
  CHECK(bounded_run_search(all4, hcode, bounds).outcome == Outcome::Unknown);

  // Counter growth beyond the bound clips the exploration to Unknown
  // rather than a false Reject.
  BuchiAutomaton pusher{Alphabet(code_letters)};
  pusher.num_states = 1;
  pusher.initial = 0;
  pusher.accepting = {true};
  pusher.num_counters = 1;
  for (const Letter& l : code_letters) {
    pusher.transitions.push_back({0, l, {0}, {1}, 0});
    pusher.transitions.push_back({0, l, {1}, {1}, 0});
  }
  const Verdict clipped = bounded_run_search(pusher, hcode, bounds);
  CHECK(clipped.outcome == Outcome::Unknown);
}

TEST_CASE("block configurations match the source machine's") {
  auto agree = [](const BuchiAutomaton& a, const LassoWord& x, int blocks) {
    const TwoTapeAutomaton r1 = build_R1(a);
    const auto mine = r1_block_configurations(r1, x, blocks);
    const auto theirs = counter_configurations(a, x, blocks);
    REQUIRE(mine.size() == static_cast<std::size_t>(blocks) + 1);
    REQUIRE(theirs.size() == static_cast<std::size_t>(blocks) + 1);
    for (int i = 1; i <= blocks; ++i) {
      CAPTURE(i);
      CHECK(mine[static_cast<std::size_t>(i)] ==
            theirs[static_cast<std::size_t>(i)]);
    }
  };

  agree(universal1(), lasso("(ab)^w"), 8);
  agree(incrementer(), lasso("(a)^w"), 8);
  agree(popper(), lasso("aabb(c)^w"), 8);
  agree(popper(), lasso("aab(c)^w"), 8);
  agree(popper(), lasso("(abc)^w"), 8);
  agree(rejector(), lasso("(ba)^w"), 8);

  std::mt19937_64 rng(271828);
  const std::vector<Letter> ab = {"a", "b"};
  for (int t = 0; t < 20; ++t) {
    const BuchiAutomaton a = random_counter_machine(rng);
    const LassoWord x = random_lasso(rng, ab, 4, 4);
    CAPTURE(t);
    agree(a, x, 6);
  }
}

TEST_CASE("complement components agree with the classifier family by family") {
  const std::vector<TwoTapeAutomaton> comps =
      build_R2_components(Alphabet({"a", "b"}));
  REQUIRE(comps.size() == 6);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    comps[j].validate();
    CHECK(comps[j].name == "R2-C" + std::to_string(j + 1));
  }
  const TwoTapeAutomaton r2 = build_R2(Alphabet({"a", "b"}));
  r2.validate();
  const std::vector<ComplementTag> tag_order = {
      ComplementTag::C1, ComplementTag::C2, ComplementTag::C3,
      ComplementTag::C4, ComplementTag::C5, ComplementTag::C6};

  auto check_pair = [&](const LassoWord& w1, const LassoWord& w2) {
    const PairWord p{OmegaWord(w1), OmegaWord(w2)};
    const auto expect = tags_of(classify_complement(p, SearchBounds{}));
    bool any = false;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      const bool got = lassopair_in_2tape(comps[j], w1, w2);
      CAPTURE(j);
      CHECK(got == (expect.count(tag_order[j]) == 1));
      any |= got;
    }
    CHECK(lassopair_in_2tape(r2, w1, w2) == any);
    CHECK(any == !expect.empty());
  };

  SUBCASE("crafted pairs isolating each family") {
    const std::vector<std::pair<const char*, const char*>> crafted = {
        {"(0a)^w", "0AA00A000AA0000A(00000AA0000A)^w"},
        {"0Aa00b000Aa0000b00000b(00b)^w",
         "0AA00A000AA0000A(00000AA0000A)^w"},
        {"0Aa00b000Aa0000b00000AA(000AA)^w",
         "0AA00A000AA0000A0000000AA(0000A00000AA)^w"},
        {"0Aa00b000Aa0000b00000b(00b)^w",
         "0AA00A000AA000000A(00000AA0000A)^w"},
        {"0Aa00b000Aa000000b00000b(00b)^w",
         "0AA00A000AA000000A(00000AA0000A)^w"},
        {"0Aa00b000Aa0000b0000000AA(000AA)^w", "0AA00A000AA0000AA(0A)^w"},
    };
    for (const auto& [t1, t2] : crafted) {
      CAPTURE(t1);
      CAPTURE(t2);
      check_pair(lasso(t1), lasso(t2));
    }
  }

  SUBCASE("random lasso pairs") {
    std::mt19937_64 rng(424242);
    const std::vector<Letter> pool1 = {"0", "A", "a", "b"};
    const std::vector<Letter> pool2 = {"0", "A"};
    for (int t = 0; t < 40; ++t) {
      const LassoWord w1 = random_lasso(rng, pool1, 6, 6);
      const LassoWord w2 = random_lasso(rng, pool2, 6, 6);
      CAPTURE(t);
      check_pair(w1, w2);
    }
  }

  SUBCASE("the honest coded pair stays out of every component") {
    SearchBounds bounds;
    bounds.max_depth = 60;
    const PairWord p = coded_pair(lasso("(ab)^w"));
    CHECK(bounded_run_search(r2, p, bounds).outcome != Outcome::Accept);
    CHECK(classify_complement(p, SearchBounds{}).empty());
  }
}

TEST_CASE("winning set: parts, union and membership landmarks") {
  const BuchiAutomaton a = universal1();
  const WinningSetBundle ws = build_winning_set(a);
  ws.bprime.validate();
  ws.c.validate();
  ws.cprime.validate();
  ws.d.validate();
  CHECK(ws.bprime.name == "B-prime");
  CHECK(ws.c.name == "C");
  CHECK(ws.cprime.name == "C-prime");
  CHECK(ws.d.name == "winning-set");
  CHECK_FALSE(ws.provenance.empty());

  const GuardAutomata g = build_guard_automata(a.alphabet);
  const TwoTapeAutomaton r1 = build_R1(a);
  const TwoTapeAutomaton r2 = build_R2(a.alphabet);

  // The all-zero pair settles inside both closures.
  const LassoWord zeros = lasso("(0)^w");
  CHECK(lassopair_in_2tape(ws.c, zeros, zeros));
  CHECK(lassopair_in_2tape(ws.d, zeros, zeros));

  // A pair that exits the schedule region at an even length is in C'.
  const LassoWord exit1 = lasso("0AaA(a)^w");
  const LassoWord exit2 = lasso("0AA0(A)^w");
  CHECK(lassopair_in_2tape(ws.cprime, exit1, exit2));
  CHECK(lassopair_in_2tape(ws.d, exit1, exit2));
  // ... including with wild tails.
  CHECK(lassopair_in_2tape(ws.cprime, lasso("0AaA(0ab)^w"),
                           lasso("0AA0(A0)^w")));

  // A tape-1 failure at an odd position leaves no part to live in.
  CHECK_FALSE(lassopair_in_2tape(ws.d, lasso("0AA(0)^w"), lasso("0AA(0)^w")));

  // D is exactly the union of its parts, and B' restricted to the guard
  // region is the complement relation.
  std::mt19937_64 rng(987654);
  const std::vector<Letter> pool1 = {"0", "A", "a", "b"};
  const std::vector<Letter> pool2 = {"0", "A"};
  for (int t = 0; t < 60; ++t) {
    const LassoWord w1 = random_lasso(rng, pool1, 5, 5);
    const LassoWord w2 = random_lasso(rng, pool2, 5, 5);
    CAPTURE(t);
    const bool in_d = lassopair_in_2tape(ws.d, w1, w2);
    const bool in_b = lassopair_in_2tape(ws.bprime, w1, w2);
    const bool in_c = lassopair_in_2tape(ws.c, w1, w2);
    const bool in_cp = lassopair_in_2tape(ws.cprime, w1, w2);
    CHECK(in_d == (in_b || in_c || in_cp));
    const bool expected_b =
        lassopair_in_2tape(r1, w1, w2) ||
        (lassopair_in_2tape(r2, w1, w2) && lasso_in_buchi(g.H, w1) &&
         lasso_in_buchi(g.Hp, w2));
    CHECK(in_b == expected_b);
  }
}

TEST_CASE("interleaved game: even positions drive the target machine") {
  BuchiAutomaton t(Alphabet({"0", "1"}));
  t.name = "inf1";
  t.num_states = 2;
  t.initial = 0;
  t.accepting = {false, true};
  t.transitions = {{0, "0", {}, {}, 0},
                   {0, "1", {}, {}, 1},
                   {1, "0", {}, {}, 0},
                   {1, "1", {}, {}, 1}};
  const BuchiAutomaton game = build_interleaved_game(t);
  game.validate();
  CHECK(game.num_states == 2 * t.num_states);

  // Whatever the odd positions carry, acceptance is decided by the word on
  // the even positions.
  CHECK(lasso_in_buchi(game, interleave_lasso(lasso("(0)^w"), lasso("(1)^w"))));
  CHECK_FALSE(
      lasso_in_buchi(game, interleave_lasso(lasso("(1)^w"), lasso("(0)^w"))));

  std::mt19937_64 rng(13579);
  const std::vector<Letter> bits = {"0", "1"};
  for (int i = 0; i < 100; ++i) {
    const LassoWord x = random_lasso(rng, bits, 4, 3);
    const LassoWord xp = random_lasso(rng, bits, 4, 3);
    CAPTURE(i);
    CHECK(lasso_in_buchi(game, interleave_lasso(x, xp)) ==
          lasso_in_buchi(t, xp));
  }

  // Machines with spontaneous moves cannot be staged this way.
  BuchiAutomaton lam = t;
  lam.transitions.push_back({0, "", {}, {}, 1});
  CHECK_THROWS_AS(build_interleaved_game(lam), AutomatonError);
}

TEST_CASE("language sum: the first flagged letter routes the tail") {
  BuchiAutomaton t(Alphabet({"0", "1"}));
  t.num_states = 2;
  t.initial = 0;
  t.accepting = {false, true};
  t.transitions = {{0, "0", {}, {}, 0},
                   {0, "1", {}, {}, 1},
                   {1, "0", {}, {}, 0},
                   {1, "1", {}, {}, 1}};
  LanguageOracle lp = [t](const LassoWord& w) { return lasso_in_buchi(t, w); };
  LanguageOracle base = [](const LassoWord& w) {
    return w.letter_at(1) == "0";
  };
  const LanguageOracle sum =
      wadge_sum_oracle(lp, base, {"p"}, {"m"});

  // No flagged letter anywhere: the base language decides.
  CHECK(sum(lasso("(01)^w")));
  CHECK_FALSE(sum(lasso("(10)^w")));

  // Plus letter: the strict suffix goes to lp.
  CHECK(sum(lasso("1p(10)^w")));
  CHECK_FALSE(sum(lasso("0p(0)^w")));
  // The flag can sit inside the period.
  CHECK_FALSE(sum(lasso("(0p)^w")));

  // Minus letter: the suffix goes to the complement of lp.
  CHECK(sum(lasso("1m(0)^w")));
  CHECK_FALSE(sum(lasso("1m(10)^w")));
  // Only the first flag counts.
  CHECK(sum(lasso("1m0m(0)^w")));

  // Partitions must be disjoint and nonempty.
  CHECK_THROWS_AS(wadge_sum_oracle(lp, base, {}, {"m"}), WordError);
  CHECK_THROWS_AS(wadge_sum_oracle(lp, base, {"p"}, {}), WordError);
  CHECK_THROWS_AS(wadge_sum_oracle(lp, base, {"p"}, {"p"}), WordError);
}
