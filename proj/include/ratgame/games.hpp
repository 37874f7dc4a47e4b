#pragma once

// Gale-Stewart and Wadge play engines.
//
//   * Strategies come in three bodies: FiniteMemory (a Mealy machine whose
//     memory advances on every play letter), CounterAugmented (a pure-move /
//     pure-observe pair over a memory string and one counter), and Callback
//     (an oracle from play histories; excluded from exact verdicts).
//   * play_gs simulates alternating single-letter play and settles a verdict
//     exactly when the joint strategy state repeats, which presents the play
//     as a lasso that the membership engines can decide.
//   * transfer_strategy_to_coded / extract_strategy_from_coded move
//     strategies between the plain game over a one-counter machine's
//     language and the game over the coded winning set built by
//     build_winning_set, following the block coding while the opponent
//     conforms and switching to named punish modes when they deviate.
//   * transfer_phi_strategy does the same between games over a bounded
//     integer alphabet and games over {0,1} through the run-length coding,
//     using the deviation families D2/D3/D4.
//   * solve_universality_game decides the interleaved-play universality game
//     for a deterministic complete Büchi automaton and returns the winner
//     with a realizing strategy.
//   * play_wadge simulates the two-board comparison game where Player 2 may
//     skip, with the proviso that a Player 2 word that stays finite loses.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ratgame/automata.hpp"
#include "ratgame/codings.hpp"
#include "ratgame/constructions.hpp"
#include "ratgame/membership.hpp"
#include "ratgame/words.hpp"

namespace ratgame {

enum class Player { P1, P2 };

std::string to_string(Player p);
Player other_player(Player p);

// ---------------------------------------------------------------------------
// Strategy bodies

/// Deterministic transducer: `memory` advances on every play letter (own and
/// opponent moves alike; missing update entries stay put), and the strategy's
/// move from memory m is emit[m].
struct FiniteMemoryStrategy {
  int num_memories = 1;
  int initial = 0;
  std::vector<Letter> emit;                      // size num_memories
  std::map<std::pair<int, Letter>, int> update;  // (memory, letter) -> memory
};

/// Strategy with unbounded auxiliary state: a memory string plus one counter
/// (never negative).  `move` must be a pure function of the state; `observe`
/// advances the state on every play letter and says whether the letter was
/// the strategy's own move.
struct CounterAugmentedStrategy {
  std::string initial_memory;
  std::uint64_t initial_counter = 0;
  std::function<Letter(const std::string&, std::uint64_t)> move;
  std::function<std::pair<std::string, std::uint64_t>(
      const std::string&, std::uint64_t, const Letter&, bool)>
      observe;
};

/// Oracle from the full play history (all letters, both authors) to the next
/// move.  Carries no inspectable state, so plays using it never settle.
using CallbackStrategy = std::function<Letter(const FiniteWord&)>;

struct Strategy {
  Player owner = Player::P1;
  std::variant<FiniteMemoryStrategy, CounterAugmentedStrategy,
               CallbackStrategy>
      body;
};

/// The strategy that always plays `a`.
Strategy constant_strategy(Player owner, const Letter& a);

/// The strategy that plays `w`'s letters in order at its own turns, ignoring
/// what the opponent does.
Strategy lasso_playing_strategy(Player owner, const LassoWord& w);

/// Stateful view of one strategy inside one play.  own_move is pure in the
/// current state; observe advances it on every play letter.
class StrategyRuntime {
 public:
  explicit StrategyRuntime(const Strategy& s);

  Letter own_move() const;
  void observe(const Letter& a, bool own);
  /// Serialized state for repeat detection; nullopt for Callback bodies.
  std::optional<std::string> state_key() const;
  bool finite_state() const;
  /// Joint-state bound for two finite-state runtimes (repeat guarantee).
  std::uint64_t state_space() const;

 private:
  const Strategy* strategy_;
  int memory_int_ = 0;
  std::string memory_;
  std::uint64_t counter_ = 0;
  FiniteWord history_;
};

// ---------------------------------------------------------------------------
// Gale-Stewart arenas and plays

/// Alternating single-letter play over `alphabet`, Player 1 first; Player 1
/// wins iff the composed word lies in the winning set, given as a Büchi
/// automaton, a two-tape automaton (the play's product letters are split
/// componentwise onto the tapes), or a lasso oracle.
struct GSArena {
  std::string name;
  Alphabet alphabet;
  std::optional<BuchiAutomaton> win_buchi;
  std::optional<TwoTapeAutomaton> win_2tape;
  LanguageOracle win_oracle;    // used when neither automaton is set
  bool monitor_coding = false;  // track exits from the coded-pair prefixes

  GSArena() : alphabet(Alphabet({"0"})) {}
};

/// Arena whose winning set is L(win) over win's alphabet.
GSArena buchi_arena(const BuchiAutomaton& win, const std::string& name = "");

/// Arena over the product alphabet whose winning set is the coded
/// winning-set machine of `a` (build_winning_set(a).d), with coding-exit
/// monitoring enabled.
GSArena coded_arena(const BuchiAutomaton& a);

enum class GameVerdict { P1Wins, P2Wins, Undetermined };

std::string to_string(GameVerdict v);

struct PlayRecord {
  FiniteWord moves;             // letters in play order (<= 2*horizon)
  std::vector<Player> authors;  // parallel to moves
  /// Author and 1-based letter index of the first coding exit, when the
  /// arena monitors the coding and an exit happened.
  std::optional<std::pair<Player, std::uint64_t>> exit_event;
  GameVerdict verdict = GameVerdict::Undetermined;
  std::string evidence;
  /// The lasso presentation of the play when the verdict is exact.
  std::optional<LassoWord> settled_play;
};

/// Simulates `horizon` rounds (Player 1 then Player 2 each round).  The
/// verdict is exact when the joint strategy state repeats: the play is then
/// a lasso and the winning set decides it.  Two FiniteMemory strategies are
/// run past the horizon (without recording) until the guaranteed repeat, so
/// their plays always settle.  Throws WordError when a strategy emits a
/// letter outside the arena alphabet or owners do not match the seats.
PlayRecord play_gs(const GSArena& arena, const Strategy& s1,
                   const Strategy& s2, int horizon);

// ---------------------------------------------------------------------------
// Strategy transfer through the block coding

/// Turns a strategy for the plain game over L(a) (a real-time one-counter
/// Büchi automaton over sigma) into a strategy for the game over the coded
/// winning set.  While the joint play stays on the coded pair's prefixes the
/// result emits the schedule letters, embedding sigma's moves at its payload
/// slots (the counter tracks the current tape-1 zero-run length).  When the
/// opponent leaves the coding the result switches to a punish mode: the
/// owner of the guard-exit absorbing mode plays (0,0) forever once the
/// schedule guards die at an opponent position, a Player-1 owner otherwise
/// keeps both guard languages alive letter by letter, and a Player-2 owner
/// plays (A,0) forever, which starves every marker pattern.
Strategy transfer_strategy_to_coded(const BuchiAutomaton& a,
                                    const Strategy& sigma, Player owner);

/// Converse direction: feeds sigma_prime the coded image of the evolving
/// plain play and reads the base letters it embeds at its payload slots.  If
/// sigma_prime leaves the coding on its own move the extraction reports the
/// exit through its state key ("exit|<position>") and falls back to the
/// first base letter.
Strategy extract_strategy_from_coded(const BuchiAutomaton& a,
                                     const Strategy& sigma_prime,
                                     Player owner);

// ---------------------------------------------------------------------------
// Strategy transfer through the run-length coding

enum class PhiDirection { BaireToCantor, CantorToBaire };

/// Moves a strategy between the game over an integer alphabet (letters are
/// decimal numerals) and the game over {0,1} through the run-length coding
/// (11)^{n+1}.0 per integer n.  BaireToCantor emits the blocks letter by
/// letter — block terminators alternate authors by the coding's parity — and
/// enters a constant-1 punish mode on the opponent's deviation (the families
/// D2/D4 for an opponent zero in the wrong slot; stalling needs no mode
/// switch).  CantorToBaire decodes completed blocks and answers through the
/// given strategy.
Strategy transfer_phi_strategy(const Strategy& sigma, Player owner,
                               PhiDirection direction);

// ---------------------------------------------------------------------------
// Universality games

struct UniversalitySolution {
  Player winner = Player::P1;
  Strategy strategy;                        // realizing strategy for winner
  std::optional<LassoWord> rejected_witness;  // when Player 2 wins
};

/// Decides the interleaved-play game where even positions drive `t` (which
/// must be deterministic and complete): Player 1 wins iff t accepts every
/// omega-word, with any constant strategy; otherwise Player 2 wins by
/// playing a rejected lasso at its own turns.
UniversalitySolution solve_universality_game(const BuchiAutomaton& t);

/// Arena for the interleaved-play game of `t`.
GSArena universality_arena(const BuchiAutomaton& t);

// ---------------------------------------------------------------------------
// Wadge games

/// Player 2's skip token (the empty letter).
inline const Letter kSkipLetter{};

/// Comparison game between L over x^omega and Lp over y^omega: each round
/// Player 1 plays a letter of x, Player 2 plays a letter of y or skips.
/// Player 2 wins iff the two composed words a and b satisfy (a in L <=> b in
/// Lp) and b is infinite.
struct WadgeArena {
  std::string name;
  Alphabet x;
  Alphabet y;
  LanguageOracle in_l;
  LanguageOracle in_lp;

  WadgeArena() : x(Alphabet({"0"})), y(Alphabet({"0"})) {}
};

/// Simulates `horizon` rounds.  Exact when the joint strategy state repeats:
/// both boards are then lassos; if Player 2's settled cycle is all skips its
/// word is finite and Player 1 wins.  Skips are recorded as empty letters.
PlayRecord play_wadge(const WadgeArena& arena, const Strategy& s1,
                      const Strategy& s2, int horizon);

/// One-letter-in, word-out sequential transducer (missing entries emit
/// nothing and stay put).
struct SequentialTransducer {
  int num_states = 1;
  int initial = 0;
  std::map<std::pair<int, Letter>, std::pair<FiniteWord, int>> step;
};

/// Player-2 strategy that buffers f's outputs on Player 1's letters and
/// plays them one per round, skipping when the buffer is empty.
Strategy reduction_to_wadge_strategy(const SequentialTransducer& f);

}  // namespace ratgame
