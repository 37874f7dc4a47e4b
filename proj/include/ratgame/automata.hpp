#pragma once

// Automaton types and constructions.
//
// Three machine families share this module:
//   * BuchiAutomaton — Büchi automata over omega-words, optionally equipped
//     with k counters.  Counter transitions carry one zero-test and one delta
//     per counter; a test of 0 asserts the counter is currently zero (and the
//     delta must then be >= 0), a test of 1 asserts it is nonzero.  A machine
//     is real-time when it has no lambda transitions (empty-letter moves).
//   * TwoTapeAutomaton — Büchi automata reading a pair of omega-words; each
//     transition consumes a finite (possibly empty) word on each tape.  A
//     pair is accepted when some run visits accepting states infinitely often
//     AND consumes infinitely many letters on both tapes.
//   * FiniteAutomaton — plain NFAs over finite words, used for prefix
//     languages and deterministic products.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ratgame/words.hpp"

namespace ratgame {

class AutomatonError : public std::runtime_error {
 public:
  explicit AutomatonError(const std::string& what) : std::runtime_error(what) {}
};

// --------------------------------------------------------------------------
// One-tape (counter) Büchi automata

struct Transition {
  int from = 0;
  Letter letter;                 // empty string = lambda move
  std::vector<int> zero_tests;   // one entry per counter, each 0 or 1
  std::vector<int> deltas;       // one entry per counter, each in {-1,0,+1}
  int to = 0;

  bool operator==(const Transition&) const = default;
};

struct BuchiAutomaton {
  std::string name;
  Alphabet alphabet;
  int num_states = 0;
  std::vector<std::string> state_names;  // size num_states (display only)
  int initial = 0;
  std::vector<bool> accepting;           // size num_states
  int num_counters = 0;
  std::vector<Transition> transitions;

  BuchiAutomaton() : alphabet(Alphabet({"0"})) {}
  explicit BuchiAutomaton(Alphabet ab) : alphabet(std::move(ab)) {}

  bool is_realtime() const;  // no lambda transitions
  void validate() const;     // throws AutomatonError on malformed machines
  /// Ensures state_names has one entry per state, filling gaps with indices.
  void default_names();
  /// Transition indices grouped by source state.
  std::vector<std::vector<int>> outgoing() const;
};

/// s1 ∪ s2 via a fresh initial state that copies both initials' moves.
BuchiAutomaton union_buchi(const BuchiAutomaton& a, const BuchiAutomaton& b);

/// States that lie on some run from the initial state to an accepting cycle:
/// reachable and able to revisit an accepting state forever.
std::vector<bool> productive_states(const BuchiAutomaton& a);

/// Automaton for the topological closure of L(a): all states productive,
/// every state accepting — runs that never leave the productive part.
BuchiAutomaton closure_automaton(const BuchiAutomaton& a);

/// Complete deterministic Büchi universality check.  Returns std::nullopt if
/// the machine accepts every omega-word, otherwise a lasso it rejects.
std::optional<LassoWord> universal_det_buchi(const BuchiAutomaton& a);

// --------------------------------------------------------------------------
// Two-tape Büchi automata

struct Transition2 {
  int from = 0;
  FiniteWord first;   // finite word consumed on tape 1
  FiniteWord second;  // finite word consumed on tape 2
  int to = 0;

  bool operator==(const Transition2&) const = default;
};

struct TwoTapeAutomaton {
  std::string name;
  Alphabet alphabet1;
  Alphabet alphabet2;
  int num_states = 0;
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<bool> accepting;
  std::vector<Transition2> transitions;
  /// Free-form construction metadata (e.g. the source machine a builder
  /// translated); carried by value, ignored by the acceptance semantics.
  std::map<std::string, std::string> annotations;

  TwoTapeAutomaton() : alphabet1(Alphabet({"0"})), alphabet2(Alphabet({"0"})) {}
  TwoTapeAutomaton(Alphabet a1, Alphabet a2)
      : alphabet1(std::move(a1)), alphabet2(std::move(a2)) {}

  void validate() const;
  void default_names();
  std::vector<std::vector<int>> outgoing() const;
};

/// t1 ∪ t2 via a fresh initial state that copies both initials' moves.
TwoTapeAutomaton union_2tape(const TwoTapeAutomaton& a,
                             const TwoTapeAutomaton& b);

/// The pair language L(a1) × L(a2): tape moves interleave one letter at a
/// time; acceptance cycles through "tape-1 entered accepting" then "tape-2
/// entered accepting", which also forces both tapes to be infinite.
TwoTapeAutomaton product_2tape(const BuchiAutomaton& a1,
                               const BuchiAutomaton& a2);

/// Pairs of a's language whose tape-1 projection lies in L(g1) and tape-2
/// projection in L(g2).  Guards run over the finite words on the labels;
/// generalized Büchi (a-accepting, g1-accepting-passed, g2-accepting-passed)
/// is flattened into an index component.
TwoTapeAutomaton constrained_product_2tape(const TwoTapeAutomaton& a,
                                           const BuchiAutomaton& g1,
                                           const BuchiAutomaton& g2);

// --------------------------------------------------------------------------
// Finite-word automata

struct FiniteAutomaton {
  Alphabet alphabet;
  int num_states = 0;
  int initial = 0;
  std::vector<bool> final_states;
  std::vector<std::tuple<int, Letter, int>> transitions;

  FiniteAutomaton() : alphabet(Alphabet({"0"})) {}
  explicit FiniteAutomaton(Alphabet ab) : alphabet(std::move(ab)) {}

  void validate() const;
  bool accepts(const FiniteWord& w) const;  // NFA membership
};

/// NFA for the finite prefixes of L(a): a restricted to productive states,
/// every kept state final.
FiniteAutomaton prefix_automaton(const BuchiAutomaton& a);

/// Subset construction; the result is a complete DFA (a non-final sink
/// absorbs missing letters).
FiniteAutomaton determinize(const FiniteAutomaton& a);

// --------------------------------------------------------------------------
// Graph utilities

struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> adj;
};

/// Tarjan SCCs; returns component id per node, ids in reverse topological
/// order (a component's id is >= those of components it can reach... the
/// ordering is not relied upon, only equality of ids).
std::vector<int> strongly_connected_components(const Digraph& g);

/// Nodes reachable from `start` in g.
std::vector<bool> reachable_from(const Digraph& g, int start);

}  // namespace ratgame
