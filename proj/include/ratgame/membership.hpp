#pragma once

// Decision procedures: exact lasso engines, bounded run search, and
// run-certificate validation.
//
// Exact engines (lasso inputs):
//   * lasso_in_buchi       — product with the lasso's position graph, SCC.
//   * lasso_in_counter     — one-counter configuration graph with a computed
//                            counter cutoff; growing-counter acceptance found
//                            by a pump search (repeatable counter-raising
//                            loop without zero tests).  Exact for k=1.
//   * lassopair_in_2tape   — product over (control, tape-1 position class,
//                            tape-2 position class); acceptance additionally
//                            requires the cycle to advance both tapes.
//
// bounded_run_search explores run prefixes breadth-first with state merging;
// it returns Accept only on a provably repeatable accepting loop, Reject only
// when the (merged) exploration is exhaustive and finds none, and Unknown
// otherwise.  Machines built by build_R1 carry annotations that enable an
// exact verdict on (h(x), alpha) inputs; see search.cpp.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratgame/automata.hpp"
#include "ratgame/words.hpp"

namespace ratgame {

enum class Outcome { Accept, Reject, Unknown };

std::string to_string(Outcome o);

struct SearchBounds {
  std::uint64_t max_depth = 256;   // exploration steps / path length
  std::uint64_t max_counter = 64;  // counter ceiling for bounded engines
  std::uint64_t max_blocks = 24;   // coded-block horizon for pattern inputs

  std::string to_string() const;
};

/// One piece of a periodic run schedule: transition `transition` executed
/// count(r) = repeat_base + repeat_slope * (r - 1) times in round r >= 1.
struct ScheduleSegment {
  int transition = 0;
  std::uint64_t repeat_base = 0;
  std::int64_t repeat_slope = 0;
};

/// Finite presentation of an infinite accepting run of a two-tape machine:
/// an explicit transition prefix followed by rounds of affine-repeat
/// segments.  Valid only for the named machine on the named input.
struct RunCertificate {
  std::string machine_name;
  std::size_t machine_states = 0;
  std::size_t machine_transitions = 0;
  std::string input;  // printable pair expression
  std::vector<int> prefix;
  std::vector<ScheduleSegment> loop;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::string evidence;
  std::optional<RunCertificate> certificate;
  SearchBounds bounds_used;
};

/// Accepting run witness of a one-counter machine on a lasso word: explicit
/// transition prefix, then a loop whose net counter drift is >= 0 and which
/// uses no zero test when the drift is positive, so it repeats forever.
struct CounterLassoRun {
  std::vector<int> prefix;  // transition ids from the initial configuration
  std::vector<int> loop;    // transition ids; repeats with shifted counter
  std::uint64_t loop_start_position = 1;  // 1-based word position at loop head
  std::uint64_t start_counter = 0;        // counter entering the loop first
  std::int64_t net_delta = 0;             // counter drift per iteration
};

/// Exact membership of a lasso in a counterless real-time Büchi automaton.
bool lasso_in_buchi(const BuchiAutomaton& b, const LassoWord& w);

/// Membership of a lasso in a k-counter Büchi automaton.  Exact for k=1
/// (Accept/Reject); k>=2 falls back to a bounded engine that may return
/// Unknown.  `witness` (optional) receives the accepting run for Accepts.
/// `cutoff_override`, if nonzero, replaces the computed counter cutoff —
/// used by the stability probe.
Verdict lasso_in_counter(const BuchiAutomaton& a, const LassoWord& w,
                         const SearchBounds& bounds,
                         CounterLassoRun* witness = nullptr,
                         std::uint64_t cutoff_override = 0);

/// Exact membership of a lasso pair in a two-tape Büchi automaton.
bool lassopair_in_2tape(const TwoTapeAutomaton& t, const LassoWord& w1,
                        const LassoWord& w2);

/// Bounded run search over a pair of omega-words.
Verdict bounded_run_search(const TwoTapeAutomaton& m, const PairWord& input,
                           const SearchBounds& bounds);

/// Bounded run search over a single omega-word.
Verdict bounded_run_search(const BuchiAutomaton& m, const OmegaWord& input,
                           const SearchBounds& bounds);

/// Concretely replays a certificate against the machine and input for
/// `probe_depth` rounds: the prefix must be a valid run prefix, every
/// scheduled transition must match the input's positional letters on both
/// tapes, an accepting state must occur in every round, and each round must
/// consume at least one letter per tape.
bool validate_certificate(const TwoTapeAutomaton& m, const RunCertificate& c,
                          std::uint64_t probe_depth);

/// The pair expression a certificate stores for its input.
std::string certificate_input_string(const PairWord& input);

// --------------------------------------------------------------------------
// Shared lasso-position helpers (used by the engines and the game module).

/// Positions of a lasso collapse to classes 1..stem+period; class of n.
std::uint64_t lasso_position_class(const LassoWord& w, std::uint64_t n);
/// Successor class (wraps from the last period class to the first).
std::uint64_t lasso_class_next(const LassoWord& w, std::uint64_t c);
/// The letter read at a class.
const Letter& lasso_class_letter(const LassoWord& w, std::uint64_t c);

}  // namespace ratgame
