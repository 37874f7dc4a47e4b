#pragma once

// Machines assembled from the block codings:
//
//   * build_R1 — two-tape simulation of a real-time one-counter machine A.
//     Tape-1 zero runs before each payload letter carry the counter value fed
//     into a step, tape-2 zero runs carry the value coming out, and the
//     pairing discipline between consecutive runs forces the values to chain
//     correctly on coded pairs (h(x), alpha).
//   * run_builder_R1 — turns an accepting counter run on x (as produced by
//     lasso_in_counter) into a replayable schedule certificate for
//     build_R1(A) on (h(x), alpha).
//   * counter_configurations / r1_block_configurations — (state, counter)
//     sets per input letter, computed on the source machine and recovered
//     from the two-tape simulation; they agree block by block.
//   * build_R2 — six pattern machines matching classify_complement's
//     families; their union accepts exactly the pairs that are not coded.
//   * build_winning_set — B' (coded acceptance, or complement inside the
//     schedule guards), C (one tape settles to zeros inside the closures),
//     C' (even-length exit from the guard region), and their union D.
//   * build_interleaved_game — accepts the interleavings x (x) x' with x'
//     in L(T) and the odd-position word x unconstrained.
//   * wadge_sum_oracle — language sum routed on the first extension letter.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ratgame/automata.hpp"
#include "ratgame/codings.hpp"
#include "ratgame/membership.hpp"
#include "ratgame/words.hpp"

namespace ratgame {

/// Two-tape simulation of `a`, which must be real-time with one counter.
/// On a coded pair (h(x), alpha) acceptance coincides with x in L(a); the
/// printed source machine travels along under annotations["r1.source"] so
/// membership engines can decide coded inputs exactly.
TwoTapeAutomaton build_R1(const BuchiAutomaton& a);

/// Certificate for build_R1(a) on (h(x), alpha), derived from an accepting
/// lasso run of `a` on x.  The run is replayed and checked first; malformed
/// or non-accepting runs raise AutomatonError.
RunCertificate run_builder_R1(const BuchiAutomaton& a, const LassoWord& x,
                              const CounterLassoRun& run);

/// A set of (state, counter value) configurations.
using ConfigSet = std::set<std::pair<int, std::uint64_t>>;

/// configs[i] = configurations `a` (real-time, one counter) can reach after
/// reading x(1..i), for i = 0..max_letters.
std::vector<ConfigSet> counter_configurations(const BuchiAutomaton& a,
                                              const LassoWord& x,
                                              int max_letters);

/// configs[i] = (thread state, zero-run budget) pairs observed when partial
/// runs of `r1` on (h(x), alpha) enter a round-start state having consumed i
/// full blocks, for i = 1..max_blocks (index 0 is left empty).  For machines
/// emitted by build_R1 these sets equal counter_configurations on the source.
std::vector<ConfigSet> r1_block_configurations(const TwoTapeAutomaton& r1,
                                               const LassoWord& x,
                                               int max_blocks);

/// The six pattern machines (named "R2-C1".."R2-C6") whose union accepts
/// exactly the pairs of omega-words that are not of the form (h(x), alpha).
std::vector<TwoTapeAutomaton> build_R2_components(const Alphabet& sigma);

/// Union of the six components.
TwoTapeAutomaton build_R2(const Alphabet& sigma);

/// Winning-set machine and its three parts.
struct WinningSetBundle {
  TwoTapeAutomaton bprime;  ///< coded acceptance or in-guard complement
  TwoTapeAutomaton c;       ///< one tape settles to zeros inside the closures
  TwoTapeAutomaton cprime;  ///< even-length exit from the guard region
  TwoTapeAutomaton d;       ///< union of the three
  std::map<std::string, std::string> provenance;
};

WinningSetBundle build_winning_set(const BuchiAutomaton& a);

/// Accepts { x (x) x' : x over t's alphabet, x' in L(t) }: odd positions may
/// carry any letter, even positions drive `t`.  Requires `t` real-time.
BuchiAutomaton build_interleaved_game(const BuchiAutomaton& t);

/// Membership test for an omega-language, restricted to lasso words.
using LanguageOracle = std::function<bool(const LassoWord&)>;

/// Language sum: a word whose letters all avoid `plus` and `minus` belongs
/// iff `l` holds; otherwise the first letter from plus/minus routes the rest
/// of the word to `lp` (plus) or to the complement of `lp` (minus).  The two
/// sets must be disjoint and nonempty.
LanguageOracle wadge_sum_oracle(LanguageOracle lp, LanguageOracle l,
                                const std::set<Letter>& plus,
                                const std::set<Letter>& minus);

}  // namespace ratgame
