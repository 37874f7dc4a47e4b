#pragma once

// Textual interchange format for machines.
//
//   kind: buchi | counter-buchi | 2tape-buchi | nfa
//   name: <token>                         (optional)
//   alphabet: a b 0 A                     (2tape: tape1 letters | tape2 letters)
//   states: q0 q1 q2                      (names; a single integer means count)
//   initial: q0
//   accepting: q1 q2                      (nfa: header is "final:")
//   counters: 1                           (counter-buchi only)
//   realtime: true                        (counter-buchi only, informational)
//   annotation.<key>: <encoded>           (2tape only; percent-encoded value)
//   transitions:
//   q0 a q1                               (buchi/nfa; "~" is a lambda move)
//   q0 a 1 -1 q1                          (counter-buchi: test/delta per counter)
//   q0 "0A" "" q1                         (2tape: quoted finite word per tape)
//
// Blank lines and "#" comments are ignored.  Letters use the word syntax
// (single characters or bracketed tokens).

#include <variant>

#include "ratgame/automata.hpp"

namespace ratgame {

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

using AnyAutomaton =
    std::variant<BuchiAutomaton, TwoTapeAutomaton, FiniteAutomaton>;

std::string print_automaton(const BuchiAutomaton& a);
std::string print_automaton(const TwoTapeAutomaton& a);
std::string print_automaton(const FiniteAutomaton& a);
std::string print_automaton(const AnyAutomaton& a);

AnyAutomaton parse_automaton(const std::string& text);

}  // namespace ratgame
