#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ratgame/automata.hpp"
#include "ratgame/codings.hpp"
#include "ratgame/constructions.hpp"
#include "ratgame/games.hpp"
#include "ratgame/membership.hpp"

using namespace ratgame;

namespace {

/// One-counter real-time machine over {a,b} that never moves its counter and
/// accepts everything (accept_all) or nothing.
BuchiAutomaton one_counter_base(const std::string& name, bool accept_all) {
  BuchiAutomaton a{Alphabet({"a", "b"})};
  a.name = name;
  a.num_states = 1;
  a.initial = 0;
  a.accepting = {accept_all};
  a.num_counters = 1;
  a.transitions.push_back({0, "a", {0}, {0}, 0});
  a.transitions.push_back({0, "b", {0}, {0}, 0});
  return a;
}

/// One-counter real-time machine accepting the words with infinitely many a.
BuchiAutomaton inf_a_machine() {
  BuchiAutomaton a{Alphabet({"a", "b"})};
  a.name = "inf-a";
  a.num_states = 2;
  a.initial = 0;
  a.accepting = {false, true};
  a.num_counters = 1;
  for (int q : {0, 1}) {
    a.transitions.push_back({q, "a", {0}, {0}, 1});
    a.transitions.push_back({q, "b", {0}, {0}, 0});
  }
  return a;
}

/// Deterministic complete counterless machine for "infinitely many 1s".
BuchiAutomaton inf_ones_machine() {
  BuchiAutomaton a{Alphabet({"0", "1"})};
  a.name = "inf-ones";
  a.num_states = 2;
  a.initial = 0;
  a.accepting = {false, true};
  for (int q : {0, 1}) {
    a.transitions.push_back({q, "1", {}, {}, 1});
    a.transitions.push_back({q, "0", {}, {}, 0});
  }
  return a;
}

/// Deterministic complete counterless machine for "infinitely many 0s".
BuchiAutomaton inf_zeros_machine() {
  BuchiAutomaton a{Alphabet({"0", "1"})};
  a.name = "inf-zeros";
  a.num_states = 2;
  a.initial = 0;
  a.accepting = {false, true};
  for (int q : {0, 1}) {
    a.transitions.push_back({q, "0", {}, {}, 1});
    a.transitions.push_back({q, "1", {}, {}, 0});
  }
  return a;
}

/// Deterministic complete machine accepting every omega-word over {0,1}.
BuchiAutomaton universal_machine() {
  BuchiAutomaton a{Alphabet({"0", "1"})};
  a.name = "universal";
  a.num_states = 1;
  a.initial = 0;
  a.accepting = {true};
  a.transitions.push_back({0, "0", {}, {}, 0});
  a.transitions.push_back({0, "1", {}, {}, 0});
  return a;
}

Strategy random_fm(Player owner, const Alphabet& ab, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mem_d(1, 4);
  FiniteMemoryStrategy fm;
  fm.num_memories = mem_d(rng);
  fm.initial = 0;
  std::uniform_int_distribution<std::size_t> letter_d(0, ab.size() - 1);
  std::uniform_int_distribution<int> state_d(0, fm.num_memories - 1);
  for (int m = 0; m < fm.num_memories; ++m) {
    fm.emit.push_back(ab.at(letter_d(rng)));
    for (const Letter& l : ab.letters()) {
      fm.update[{m, l}] = state_d(rng);
    }
  }
  return Strategy{owner, std::move(fm)};
}

/// Player 1 strategy playing 0, 1, 0, 1, ... at its own turns of a
/// two-player alternation (memory counts all letters mod 4).
Strategy alternating_01(Player owner) {
  FiniteMemoryStrategy fm;
  fm.num_memories = 4;
  fm.initial = 0;
  fm.emit = {"0", "0", "1", "1"};
  for (int m = 0; m < 4; ++m) {
    for (const Letter& l : {Letter("0"), Letter("1")}) {
      fm.update[{m, l}] = (m + 1) % 4;
    }
  }
  return Strategy{owner, std::move(fm)};
}

std::uint64_t units_total(std::uint64_t i) {
  return i * (i + 1) / 2 + i + (i + 1) / 2;
}

void split_moves(const FiniteWord& moves, FiniteWord& tape1,
                 FiniteWord& tape2) {
  for (const Letter& l : moves) {
    auto [x, y] = Alphabet::split_pair(l);
    tape1.push_back(std::move(x));
    tape2.push_back(std::move(y));
  }
}

LanguageOracle phi_language(std::shared_ptr<const PhiGuards> g,
                            std::size_t needed,
                            std::function<bool(const std::vector<std::uint64_t>&)>
                                pred) {
  return [g, needed, pred](const LassoWord& w) {
    if (lasso_in_buchi(g->d2, w) || lasso_in_buchi(g->d3, w) ||
        lasso_in_buchi(g->d4, w)) {
      return true;
    }
    if (!lasso_in_buchi(g->image, w)) return false;
    for (std::size_t len = 64; len <= (std::size_t{1} << 15); len *= 2) {
      auto dec = decode_phi(w.prefix(len));
      if (dec.values.size() >= needed) return pred(dec.values);
    }
    return false;
  };
}

}  // namespace

TEST_CASE("plays settle into lassos with exact verdicts") {
  const GSArena arena = buchi_arena(inf_ones_machine());

  SUBCASE("both play 1 forever") {
    auto rec = play_gs(arena, constant_strategy(Player::P1, "1"),
                       constant_strategy(Player::P2, "1"), 10);
    CHECK(rec.verdict == GameVerdict::P1Wins);
    REQUIRE(rec.settled_play.has_value());
    CHECK(lasso_in_buchi(*arena.win_buchi, *rec.settled_play));
    for (std::size_t i = 0; i < rec.authors.size(); ++i) {
      CHECK(rec.authors[i] == (i % 2 == 0 ? Player::P1 : Player::P2));
    }
  }

  SUBCASE("both play 0 forever") {
    auto rec = play_gs(arena, constant_strategy(Player::P1, "0"),
                       constant_strategy(Player::P2, "0"), 10);
    CHECK(rec.verdict == GameVerdict::P2Wins);
  }

  SUBCASE("alternating against constant zero") {
    auto rec = play_gs(arena, alternating_01(Player::P1),
                       constant_strategy(Player::P2, "0"), 10);
    CHECK(rec.verdict == GameVerdict::P1Wins);
    REQUIRE(rec.settled_play.has_value());
    bool has_one = false;
    for (const Letter& l : rec.settled_play->period()) {
      if (l == "1") has_one = true;
    }
    CHECK(has_one);
  }

  SUBCASE("finite-memory pairs settle even past a tiny horizon") {
    auto rec = play_gs(arena, alternating_01(Player::P1),
                       constant_strategy(Player::P2, "0"), 1);
    CHECK(rec.verdict == GameVerdict::P1Wins);
    CHECK(rec.moves.size() <= 2);
  }

  SUBCASE("callback strategies never settle") {
    CallbackStrategy echo = [](const FiniteWord& h) -> Letter {
      return h.empty() ? Letter("1") : h.back();
    };
    auto rec = play_gs(arena, Strategy{Player::P1, echo},
                       constant_strategy(Player::P2, "0"), 16);
    CHECK(rec.verdict == GameVerdict::Undetermined);
    CHECK(rec.moves.size() == 32);
  }

  SUBCASE("seats are checked") {
    CHECK_THROWS_AS(play_gs(arena, constant_strategy(Player::P2, "1"),
                            constant_strategy(Player::P2, "1"), 4),
                    WordError);
  }

  SUBCASE("letters outside the arena alphabet are rejected") {
    CHECK_THROWS_AS(play_gs(arena, constant_strategy(Player::P1, "x"),
                            constant_strategy(Player::P2, "0"), 4),
                    WordError);
  }
}

TEST_CASE("transferred strategies reproduce the coded play") {
  const BuchiAutomaton a = inf_a_machine();
  const GSArena arena = coded_arena(a);
  const Strategy t1 = transfer_strategy_to_coded(
      a, constant_strategy(Player::P1, "a"), Player::P1);
  const Strategy t2 = transfer_strategy_to_coded(
      a, constant_strategy(Player::P2, "b"), Player::P2);
  auto rec = play_gs(arena, t1, t2, 40);

  CHECK(rec.verdict == GameVerdict::Undetermined);
  CHECK_FALSE(rec.exit_event.has_value());
  REQUIRE(rec.moves.size() == 80);

  FiniteWord tape1, tape2;
  split_moves(rec.moves, tape1, tape2);
  CHECK(is_pref_of_coding(tape1, tape2));
  CHECK(tape2 == PatternWord::alpha_word().prefix(80));

  auto dec = decode_h(tape1);
  CHECK_FALSE(dec.error_position.has_value());
  REQUIRE(dec.letters.size() >= 8);
  for (std::size_t i = 0; i < dec.letters.size(); ++i) {
    CHECK(dec.letters[i] == (i % 2 == 0 ? "a" : "b"));
  }

  // The coded letter of unit i lands at position units_total(i) and is
  // authored by Player 1 exactly when i is odd.
  for (std::uint64_t i = 1; units_total(i) <= rec.moves.size(); ++i) {
    const std::size_t pos = static_cast<std::size_t>(units_total(i));
    CHECK(rec.authors[pos - 1] ==
          (i % 2 == 1 ? Player::P1 : Player::P2));
    auto [x, y] = Alphabet::split_pair(rec.moves[pos - 1]);
    CHECK(y == "A");
    CHECK(a.alphabet.contains(x));
  }

  // The letter closing every zero run of the second tape is Player 2's.
  for (std::size_t q = 1; q < tape2.size(); ++q) {
    if (tape2[q] != "0" && tape2[q - 1] == "0") {
      CHECK(rec.authors[q] == Player::P2);
    }
  }
}

TEST_CASE("transfer tournaments never lose for the base winner") {
  std::mt19937_64 rng(20260815);
  struct Row {
    BuchiAutomaton machine;
    Player owner;
    Letter base_move;
    int plays;
  };
  std::vector<Row> rows;
  rows.push_back({one_counter_base("universal", true), Player::P1, "a", 17});
  rows.push_back({inf_a_machine(), Player::P1, "a", 17});
  rows.push_back({one_counter_base("rejector", false), Player::P2, "a", 16});

  int played = 0;
  int exact = 0;
  for (const Row& row : rows) {
    const GSArena arena = coded_arena(row.machine);
    const Strategy mine = transfer_strategy_to_coded(
        row.machine, constant_strategy(row.owner, row.base_move), row.owner);
    const GameVerdict mine_wins = row.owner == Player::P1
                                      ? GameVerdict::P1Wins
                                      : GameVerdict::P2Wins;
    for (int k = 0; k < row.plays; ++k) {
      const Strategy foe =
          random_fm(other_player(row.owner), arena.alphabet, rng);
      const PlayRecord rec = row.owner == Player::P1
                                 ? play_gs(arena, mine, foe, 400)
                                 : play_gs(arena, foe, mine, 400);
      ++played;
      if (rec.verdict != GameVerdict::Undetermined) {
        ++exact;
        CHECK(rec.verdict == mine_wins);
      }
      if (rec.exit_event.has_value()) {
        CHECK((rec.exit_event->first == Player::P1) ==
              (rec.exit_event->second % 2 == 1));
      }
    }
  }
  CHECK(played == 50);
  CHECK(exact > 0);
}

TEST_CASE("a blatant deviation fires the exit guard and absorb mode") {
  const BuchiAutomaton a = one_counter_base("universal", true);
  const Strategy t1 = transfer_strategy_to_coded(
      a, constant_strategy(Player::P1, "a"), Player::P1);
  const Letter zz = Alphabet::pair_letter("0", "0");

  SUBCASE("a guard-killing exit is absorbed") {
    StrategyRuntime rt(t1);
    const Letter dev = Alphabet::pair_letter("b", "0");
    CHECK(rt.own_move() == zz);
    rt.observe(zz, true);
    rt.observe(dev, false);  // position 2 wanted the marker pair (A,A)
    REQUIRE(rt.state_key().has_value());
    CHECK(rt.state_key()->rfind("absorb", 0) == 0);
    CHECK(rt.own_move() == zz);

    const GuardAutomata guards = build_guard_automata(Alphabet({"a", "b"}));
    CHECK(guards.U.accepts(FiniteWord{zz, dev}));
    CHECK_FALSE(guards.U.accepts(FiniteWord{zz}));
  }

  SUBCASE("a guard-preserving exit turns into safe play") {
    StrategyRuntime rt(t1);
    rt.observe(rt.own_move(), true);
    rt.observe(zz, false);  // a zero pair where (A,A) was due keeps guards up
    REQUIRE(rt.state_key().has_value());
    CHECK(rt.state_key()->rfind("safe", 0) == 0);

    const GuardAutomata guards = build_guard_automata(Alphabet({"a", "b"}));
    const FiniteAutomaton pref1 = prefix_automaton(guards.H);
    const FiniteAutomaton pref2 = prefix_automaton(guards.Hp);
    FiniteWord tape1{"0", "0"}, tape2{"0", "0"};
    for (int round = 0; round < 6; ++round) {
      const Letter m = rt.own_move();
      rt.observe(m, true);
      auto [x, y] = Alphabet::split_pair(m);
      tape1.push_back(x);
      tape2.push_back(y);
      CHECK(pref1.accepts(tape1));
      CHECK(pref2.accepts(tape2));
      rt.observe(zz, false);
      tape1.push_back("0");
      tape2.push_back("0");
      CHECK(pref1.accepts(tape1));
      CHECK(pref2.accepts(tape2));
      CHECK(rt.state_key()->rfind("safe", 0) == 0);
    }
  }
}

TEST_CASE("player 2 punishes an odd-position exit and wins") {
  const BuchiAutomaton a = inf_a_machine();
  const GSArena arena = coded_arena(a);
  const Strategy t2 = transfer_strategy_to_coded(
      a, constant_strategy(Player::P2, "b"), Player::P2);
  const Strategy foe =
      constant_strategy(Player::P1, Alphabet::pair_letter("a", "A"));
  auto rec = play_gs(arena, foe, t2, 50);

  REQUIRE(rec.exit_event.has_value());
  CHECK(rec.exit_event->first == Player::P1);
  CHECK(rec.exit_event->second == 1);
  REQUIRE(rec.moves.size() >= 2);
  CHECK(rec.moves[1] == Alphabet::pair_letter("A", "0"));
  CHECK(rec.verdict == GameVerdict::P2Wins);
}

TEST_CASE("extraction inverts transfer on every short play") {
  const BuchiAutomaton a = inf_a_machine();
  for (Player owner : {Player::P1, Player::P2}) {
    CAPTURE(to_string(owner));
    FiniteMemoryStrategy fm;
    fm.num_memories = 2;
    fm.initial = 0;
    fm.emit = {"a", "b"};
    for (int m = 0; m < 2; ++m) {
      fm.update[{m, Letter("a")}] = m;
      fm.update[{m, Letter("b")}] = 1 - m;
    }
    const Strategy base{owner, fm};
    const Strategy roundtrip = extract_strategy_from_coded(
        a, transfer_strategy_to_coded(a, base, owner), owner);

    for (int mask = 0; mask < 256; ++mask) {
      StrategyRuntime s0(base);
      StrategyRuntime s1(roundtrip);
      for (int k = 0; k < 8; ++k) {
        const Letter opp = (mask >> k) & 1 ? "b" : "a";
        if (owner == Player::P2) {
          s0.observe(opp, false);
          s1.observe(opp, false);
        }
        const Letter m0 = s0.own_move();
        const Letter m1 = s1.own_move();
        REQUIRE(m0 == m1);
        s0.observe(m0, true);
        s1.observe(m0, true);
        if (owner == Player::P1) {
          s0.observe(opp, false);
          s1.observe(opp, false);
        }
      }
      REQUIRE(s1.state_key().has_value());
      CHECK(s1.state_key()->find("exit") == std::string::npos);
    }
  }
}

TEST_CASE("extraction reports a strategy that leaves the coding") {
  const BuchiAutomaton a = inf_a_machine();

  SUBCASE("wrong letter at the very first position") {
    const Strategy junk =
        constant_strategy(Player::P1, Alphabet::pair_letter("a", "A"));
    const Strategy ex = extract_strategy_from_coded(a, junk, Player::P1);
    StrategyRuntime rt(ex);
    CHECK(rt.own_move() == "a");  // fallback base letter
    rt.observe("a", true);
    REQUIRE(rt.state_key().has_value());
    CHECK(rt.state_key()->rfind("exit|", 0) == 0);
    CHECK(rt.state_key()->find("1:1") != std::string::npos);
    CHECK(rt.own_move() == "a");
  }

  SUBCASE("missing the first payload slot") {
    const Strategy zeros =
        constant_strategy(Player::P1, Alphabet::pair_letter("0", "0"));
    const Strategy ex = extract_strategy_from_coded(a, zeros, Player::P1);
    StrategyRuntime rt(ex);
    CHECK(rt.own_move() == "a");
    rt.observe("a", true);
    REQUIRE(rt.state_key().has_value());
    CHECK(rt.state_key()->rfind("exit|", 0) == 0);
    CHECK(rt.state_key()->find("1:3") != std::string::npos);
  }
}

TEST_CASE("phi transfer plays the integer game through the coding") {
  const Strategy p1 = transfer_phi_strategy(
      constant_strategy(Player::P1, "1"), Player::P1,
      PhiDirection::BaireToCantor);
  const Strategy p2 = transfer_phi_strategy(
      constant_strategy(Player::P2, "0"), Player::P2,
      PhiDirection::BaireToCantor);
  GSArena arena;
  arena.name = "phi-board";
  arena.alphabet = Alphabet({"0", "1"});
  arena.win_oracle = [](const LassoWord&) { return false; };

  auto rec = play_gs(arena, p1, p2, 30);
  CHECK(rec.verdict == GameVerdict::Undetermined);
  REQUIRE(rec.moves.size() == 60);
  auto dec = decode_phi(rec.moves);
  CHECK_FALSE(dec.error_position.has_value());
  REQUIRE(dec.values.size() >= 4);
  CHECK(dec.values[0] == 1);
  CHECK(dec.values[1] == 0);
  CHECK(dec.values[2] == 1);
  CHECK(dec.values[3] == 0);
}

TEST_CASE("phi tournaments never lose for the base winner") {
  auto guards = std::make_shared<const PhiGuards>(build_phi_guards());
  std::mt19937_64 rng(424242);

  struct Row {
    Player owner;
    Letter base_move;
    LanguageOracle oracle;
    int plays;
  };
  std::vector<Row> rows;
  rows.push_back({Player::P1, "1",
                  phi_language(guards, 1,
                               [](const std::vector<std::uint64_t>& v) {
                                 return v[0] == 1;
                               }),
                  17});
  rows.push_back({Player::P2, "0",
                  phi_language(guards, 1,
                               [](const std::vector<std::uint64_t>&) {
                                 return false;
                               }),
                  17});
  rows.push_back({Player::P2, "2",
                  phi_language(guards, 2,
                               [](const std::vector<std::uint64_t>& v) {
                                 return v[1] == 2;
                               }),
                  16});

  const Alphabet cantor({"0", "1"});
  int played = 0;
  int exact = 0;
  for (const Row& row : rows) {
    GSArena arena;
    arena.name = "phi-board";
    arena.alphabet = cantor;
    arena.win_oracle = row.oracle;
    const Strategy mine = transfer_phi_strategy(
        constant_strategy(row.owner, row.base_move), row.owner,
        PhiDirection::BaireToCantor);
    const GameVerdict mine_wins = row.owner == Player::P1
                                      ? GameVerdict::P1Wins
                                      : GameVerdict::P2Wins;
    for (int k = 0; k < row.plays; ++k) {
      const Strategy foe = random_fm(other_player(row.owner), cantor, rng);
      const PlayRecord rec = row.owner == Player::P1
                                 ? play_gs(arena, mine, foe, 400)
                                 : play_gs(arena, foe, mine, 400);
      ++played;
      if (rec.verdict != GameVerdict::Undetermined) {
        ++exact;
        CHECK(rec.verdict == mine_wins);
      }
    }
  }
  CHECK(played == 50);
  CHECK(exact > 0);
}

TEST_CASE("deviation machines recognize the textbook patterns") {
  const PhiGuards guards = build_phi_guards();
  CHECK(lasso_in_buchi(guards.d2, parse_lasso("10(0)^w")));
  CHECK(lasso_in_buchi(guards.d2, parse_lasso("11011010(0)^w")));
  CHECK_FALSE(lasso_in_buchi(guards.d2, parse_lasso("110(110)^w")));
  CHECK(lasso_in_buchi(guards.d3, parse_lasso("110(1)^w")));
  CHECK_FALSE(lasso_in_buchi(guards.d3, parse_lasso("110110(1)^w")));
  CHECK(lasso_in_buchi(guards.d4, parse_lasso("1100(0)^w")));
  CHECK_FALSE(lasso_in_buchi(guards.d4, parse_lasso("1101100(0)^w")));
  CHECK(lasso_in_buchi(guards.image, parse_lasso("(110)^w")));
  CHECK_FALSE(lasso_in_buchi(guards.image, parse_lasso("11010(11010)^w")));
}

TEST_CASE("integer strategies survive the round trip through the coding") {
  for (Player owner : {Player::P1, Player::P2}) {
    CAPTURE(to_string(owner));
    FiniteMemoryStrategy fm;
    fm.num_memories = 3;
    fm.initial = 0;
    fm.emit = {"0", "1", "2"};
    for (int m = 0; m < 3; ++m) {
      fm.update[{m, Letter("0")}] = m;
      fm.update[{m, Letter("1")}] = (m + 1) % 3;
      fm.update[{m, Letter("2")}] = (m + 2) % 3;
    }
    const Strategy base{owner, fm};
    const Strategy roundtrip = transfer_phi_strategy(
        transfer_phi_strategy(base, owner, PhiDirection::BaireToCantor),
        owner, PhiDirection::CantorToBaire);

    for (int path = 0; path < 81; ++path) {
      StrategyRuntime s0(base);
      StrategyRuntime s1(roundtrip);
      int rest = path;
      for (int k = 0; k < 4; ++k) {
        const Letter opp = std::to_string(rest % 3);
        rest /= 3;
        if (owner == Player::P2) {
          s0.observe(opp, false);
          s1.observe(opp, false);
        }
        const Letter m0 = s0.own_move();
        const Letter m1 = s1.own_move();
        REQUIRE(m0 == m1);
        s0.observe(m0, true);
        s1.observe(m0, true);
        if (owner == Player::P1) {
          s0.observe(opp, false);
          s1.observe(opp, false);
        }
      }
      REQUIRE(s1.state_key().has_value());
      CHECK(s1.state_key()->find("exit") == std::string::npos);
    }
  }
}

TEST_CASE("universality games are solved with strategies and witnesses") {
  std::mt19937_64 rng(99);

  SUBCASE("a universal machine hands the game to Player 1") {
    const BuchiAutomaton t = universal_machine();
    const auto sol = solve_universality_game(t);
    CHECK(sol.winner == Player::P1);
    CHECK_FALSE(sol.rejected_witness.has_value());
    CHECK(sol.strategy.owner == Player::P1);
    const GSArena arena = universality_arena(t);
    for (int k = 0; k < 10; ++k) {
      auto rec = play_gs(arena, sol.strategy,
                         random_fm(Player::P2, t.alphabet, rng), 60);
      CHECK(rec.verdict == GameVerdict::P1Wins);
    }
  }

  SUBCASE("a rejected word wins the game for Player 2") {
    const BuchiAutomaton t = inf_ones_machine();
    const auto sol = solve_universality_game(t);
    CHECK(sol.winner == Player::P2);
    REQUIRE(sol.rejected_witness.has_value());
    CHECK_FALSE(lasso_in_buchi(t, *sol.rejected_witness));
    CHECK(sol.strategy.owner == Player::P2);
    const GSArena arena = universality_arena(t);
    for (int k = 0; k < 10; ++k) {
      auto rec = play_gs(arena, random_fm(Player::P1, t.alphabet, rng),
                         sol.strategy, 60);
      CHECK(rec.verdict == GameVerdict::P2Wins);
    }
    auto rec = play_gs(arena, constant_strategy(Player::P1, "1"),
                       sol.strategy, 60);
    CHECK(rec.verdict == GameVerdict::P2Wins);
  }

  SUBCASE("nondeterministic machines are rejected") {
    BuchiAutomaton t = inf_ones_machine();
    t.transitions.push_back({0, "1", {}, {}, 0});
    CHECK_THROWS_AS(solve_universality_game(t), AutomatonError);
  }

  SUBCASE("incomplete machines are rejected") {
    BuchiAutomaton t = inf_ones_machine();
    t.transitions.pop_back();
    CHECK_THROWS_AS(universality_arena(t), AutomatonError);
  }
}

TEST_CASE("wadge games detect reductions") {
  const BuchiAutomaton ones = inf_ones_machine();
  const BuchiAutomaton zeros = inf_zeros_machine();
  WadgeArena arena;
  arena.name = "ones-to-ones";
  arena.x = Alphabet({"0", "1"});
  arena.y = Alphabet({"0", "1"});
  arena.in_l = [ones](const LassoWord& w) { return lasso_in_buchi(ones, w); };
  arena.in_lp = arena.in_l;

  SequentialTransducer identity;
  identity.num_states = 1;
  identity.initial = 0;
  identity.step[{0, Letter("0")}] = {FiniteWord{"0"}, 0};
  identity.step[{0, Letter("1")}] = {FiniteWord{"1"}, 0};

  SUBCASE("the copycat reduction always matches") {
    const Strategy copy = reduction_to_wadge_strategy(identity);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 10; ++k) {
      auto rec = play_wadge(arena, random_fm(Player::P1, arena.x, rng), copy,
                            100);
      CHECK(rec.verdict == GameVerdict::P2Wins);
    }
  }

  SUBCASE("skipping forever loses") {
    auto rec = play_wadge(arena, constant_strategy(Player::P1, "1"),
                          constant_strategy(Player::P2, kSkipLetter), 50);
    CHECK(rec.verdict == GameVerdict::P1Wins);
    CHECK(rec.evidence.find("skip") != std::string::npos);
  }

  SUBCASE("a one-round delay still reduces") {
    SequentialTransducer delay;
    delay.num_states = 3;  // nothing seen / saw 0 / saw 1
    delay.initial = 0;
    delay.step[{0, Letter("0")}] = {FiniteWord{}, 1};
    delay.step[{0, Letter("1")}] = {FiniteWord{}, 2};
    delay.step[{1, Letter("0")}] = {FiniteWord{"0"}, 1};
    delay.step[{1, Letter("1")}] = {FiniteWord{"0"}, 2};
    delay.step[{2, Letter("0")}] = {FiniteWord{"1"}, 1};
    delay.step[{2, Letter("1")}] = {FiniteWord{"1"}, 2};
    const Strategy lag = reduction_to_wadge_strategy(delay);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
      auto rec = play_wadge(arena, random_fm(Player::P1, arena.x, rng), lag,
                            100);
      CHECK(rec.verdict == GameVerdict::P2Wins);
    }
  }

  SUBCASE("swapping letters reduces into the zero game") {
    WadgeArena swapped = arena;
    swapped.name = "ones-to-zeros";
    swapped.in_lp = [zeros](const LassoWord& w) {
      return lasso_in_buchi(zeros, w);
    };
    SequentialTransducer swap;
    swap.num_states = 1;
    swap.initial = 0;
    swap.step[{0, Letter("0")}] = {FiniteWord{"1"}, 0};
    swap.step[{0, Letter("1")}] = {FiniteWord{"0"}, 0};
    const Strategy flip = reduction_to_wadge_strategy(swap);
    std::mt19937_64 rng(13);
    for (int k = 0; k < 10; ++k) {
      auto rec = play_wadge(swapped, random_fm(Player::P1, swapped.x, rng),
                            flip, 100);
      CHECK(rec.verdict == GameVerdict::P2Wins);
    }
  }

  SUBCASE("a wrong reduction is beaten") {
    WadgeArena mismatched = arena;
    mismatched.in_lp = [zeros](const LassoWord& w) {
      return lasso_in_buchi(zeros, w);
    };
    auto rec = play_wadge(mismatched, constant_strategy(Player::P1, "1"),
                          reduction_to_wadge_strategy(identity), 50);
    CHECK(rec.verdict == GameVerdict::P1Wins);
  }
}

TEST_CASE("malformed strategies and machines are rejected") {
  SUBCASE("finite-memory shape checks") {
    FiniteMemoryStrategy fm;
    fm.num_memories = 2;
    fm.emit = {"0"};
    CHECK_THROWS_AS(StrategyRuntime(Strategy{Player::P1, fm}), WordError);
    fm.emit = {"0", "1"};
    fm.initial = 5;
    CHECK_THROWS_AS(StrategyRuntime(Strategy{Player::P1, fm}), WordError);
  }

  SUBCASE("counter strategies need both callbacks") {
    CounterAugmentedStrategy ca;
    CHECK_THROWS_AS(StrategyRuntime(Strategy{Player::P1, ca}), WordError);
  }

  SUBCASE("transfer enforces ownership and machine shape") {
    const BuchiAutomaton a = inf_a_machine();
    CHECK_THROWS_AS(transfer_strategy_to_coded(
                        a, constant_strategy(Player::P2, "a"), Player::P1),
                    WordError);
    BuchiAutomaton lambda = a;
    lambda.transitions.push_back({0, "", {0}, {0}, 0});
    CHECK_THROWS_AS(transfer_strategy_to_coded(
                        lambda, constant_strategy(Player::P1, "a"),
                        Player::P1),
                    AutomatonError);
  }
}
