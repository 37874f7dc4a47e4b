#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratgame/automata.hpp"
#include "ratgame/membership.hpp"
#include "ratgame/words.hpp"

namespace ratgame {

/// Alphabets used by the letter codings.  The markers 0 and A are reserved:
/// they must not occur in the base alphabet.
struct CodingAlphabets {
  Alphabet sigma;   ///< base alphabet
  Alphabet sigma1;  ///< base plus the markers 0 and A (tape-1 alphabet)
  Alphabet gamma;   ///< {0, A} (tape-2 alphabet)

  explicit CodingAlphabets(const Alphabet& base);
};

/// Result of reading a coded prefix back into base letters.  `letters` holds
/// every fully recovered base letter; `error_position` is the 1-based index
/// of the first letter that contradicts the coding schedule, if any.
struct DecodedPrefix {
  FiniteWord letters;
  std::optional<std::uint64_t> error_position;

  bool ok() const { return !error_position.has_value(); }
};

/// The block coding x -> 0.A.x(1).00.x(2).000.A.x(3)...  Rejects base words
/// that use the reserved letters 0 or A.
PatternWord encode_h(const LassoWord& x);

/// Reads base letters back out of a prefix of an h-coded word.
DecodedPrefix decode_h(const FiniteWord& prefix);

/// True iff (u, v) is a prefix pair of (h(x), alpha) for some base word x:
/// u must follow the h schedule and v must be a prefix of alpha.
bool is_pref_of_coding(const FiniteWord& u, const FiniteWord& v);

/// The regular guard languages attached to the coding.
///   H      tape-1 schedule with run lengths relaxed to any value of the
///          scheduled parity (odd-indexed runs odd, even-indexed runs even)
///   Hp     tape-2 schedule relaxed likewise (the alpha shape)
///   ClH/ClHp   topological closures of H and Hp
///   V/Vp   finite prefixes of H (resp. Hp) ending in 0
///   V0/Vp0 the omega-languages V.0^w and Vp.0^w
///   U      finite words over the product alphabet, of even length >= 2,
///          alive (componentwise prefix of H x Hp) up to the penultimate
///          letter and dead at the last one
struct GuardAutomata {
  BuchiAutomaton H;
  BuchiAutomaton Hp;
  BuchiAutomaton ClH;
  BuchiAutomaton ClHp;
  FiniteAutomaton V;
  FiniteAutomaton Vp;
  BuchiAutomaton V0;
  BuchiAutomaton Vp0;
  FiniteAutomaton U;
  Alphabet product_alphabet;
};

GuardAutomata build_guard_automata(const Alphabet& sigma);

/// Tags for the six pattern families covering the complement of the coded
/// pairs.  Every pair of omega-words that is not (h(x), alpha) matches at
/// least one of them.
enum class ComplementTag { C1, C2, C3, C4, C5, C6 };

std::string to_string(ComplementTag tag);

struct ComplementClass {
  ComplementTag tag;
  std::string witness;  ///< human-readable position/block data for the match
};

/// Returns every complement class whose pattern matches the pair, with a
/// witness each.  Exact for lasso pairs; for pattern pairs the probe bounds
/// limit how far the schedules are compared, and classes are only reported
/// when a full match is found inside the probed region.
std::vector<ComplementClass> classify_complement(const PairWord& p,
                                                 const SearchBounds& probe);

/// The run-length coding of integer sequences:
/// (n_1, n_2, ...) -> (11)^{n_1+1} 0 (11)^{n_2+1} 0 ...
PatternWord encode_phi(const LassoWord& counts);

/// Result of reading an integer sequence back out of a {0,1} prefix.
struct PhiDecoded {
  std::vector<std::uint64_t> values;
  std::optional<std::uint64_t> error_position;

  bool ok() const { return !error_position.has_value(); }
};

PhiDecoded decode_phi(const FiniteWord& prefix);

/// Deviation families for plays against the phi coding.
///   D2: an odd 1-run closed by 0 after an even number of complete blocks
///   D3: an odd number of complete blocks followed by 1 forever
///   D4: a 0 immediately after an odd number of complete blocks
enum class PhiGuardTag { D2, D3, D4 };

std::string to_string(PhiGuardTag tag);

struct PhiGuardClass {
  PhiGuardTag tag;
  std::uint64_t position;  ///< 1-based letter position completing the match
};

/// Buchi automata over {0,1} for the deviation families and the image
/// [(11)+0]^w of the phi coding.
struct PhiGuards {
  BuchiAutomaton d2;
  BuchiAutomaton d3;
  BuchiAutomaton d4;
  BuchiAutomaton image;
};

PhiGuards build_phi_guards();

/// Scans a finite {0,1} prefix for the first completed D2 or D4 match.
/// D3 has no finite witness (it needs 1 forever) and is never returned here.
std::optional<PhiGuardClass> detect_phi_deviation(const FiniteWord& prefix);

/// The gap coding x -> x(1) E^S x(2) E^{S^2} x(3) ... for S >= 2.
PatternWord encode_theta(const LassoWord& x, std::uint64_t s);

/// Reads base letters back out of a prefix of a theta-coded word.
DecodedPrefix decode_theta(const FiniteWord& prefix, std::uint64_t s);

}  // namespace ratgame
