#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ratgame {

/// A letter is an opaque token.  Single characters for plain alphabets,
/// "[a,0]" for letters of a product alphabet.
using Letter = std::string;
using FiniteWord = std::vector<Letter>;

class WordError : public std::runtime_error {
public:
  explicit WordError(const std::string& what) : std::runtime_error(what) {}
};

/// Finite ordered set of letters.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Letter> letters);

  bool contains(const Letter& a) const { return index_.count(a) != 0; }
  int index(const Letter& a) const;
  std::size_t size() const { return letters_.size(); }
  const Letter& at(std::size_t i) const { return letters_.at(i); }
  const std::vector<Letter>& letters() const { return letters_; }

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }
  bool operator!=(const Alphabet& o) const { return letters_ != o.letters_; }

  /// Extends with extra letters (duplicates rejected).
  Alphabet extended(const std::vector<Letter>& extra) const;

  /// Product alphabet; letters are "[x,y]".
  static Alphabet product(const Alphabet& a, const Alphabet& b);
  static Letter pair_letter(const Letter& x, const Letter& y);
  static std::pair<Letter, Letter> split_pair(const Letter& p);

private:
  std::vector<Letter> letters_;
  std::map<Letter, int> index_;
};

/// Ultimately periodic omega-word, presented as stem + repeating period.
class LassoWord {
public:
  LassoWord() = default;
  LassoWord(Alphabet alphabet, FiniteWord stem, FiniteWord period);

  const Alphabet& alphabet() const { return alphabet_; }
  const FiniteWord& stem() const { return stem_; }
  const FiniteWord& period() const { return period_; }

  /// 1-based positional access.
  const Letter& letter_at(std::uint64_t n) const;
  FiniteWord prefix(std::size_t n) const;

  bool operator==(const LassoWord& o) const;

private:
  Alphabet alphabet_;
  FiniteWord stem_;
  FiniteWord period_;
};

/// Canonical minimal (stem, period) presenting the same word.  Idempotent.
LassoWord normalize_lasso(const LassoWord& w);

/// r(2n-1) = x(n), r(2n) = x'(n).  Stems aligned, period = 2*lcm.
LassoWord interleave(const LassoWord& x, const LassoWord& xp);

enum class PatternKind { HCode, AlphaWord, PhiCode, ThetaCode };

/// Non-periodic omega-word given by a closed-form positional formula.
/// HCode(x):   0 A x(1) 00 x(2) 000 A x(3) ... (0-run i has length i, A
///             precedes the odd-indexed base letters)
/// AlphaWord:  0 AA 00 A 000 AA ... over {0, A}
/// PhiCode(s): (11)^{s(1)+1} 0 (11)^{s(2)+1} 0 ... over {0, 1}
/// ThetaCode:  x(1) E^S x(2) E^{S^2} x(3) ...
class PatternWord {
public:
  static PatternWord h_code(LassoWord base);
  static PatternWord alpha_word();
  static PatternWord phi_code(LassoWord int_base);
  static PatternWord theta_code(LassoWord base, std::uint64_t s);

  PatternKind kind() const { return kind_; }
  const LassoWord& base() const { return base_; }
  std::uint64_t theta_s() const { return s_; }
  const Alphabet& alphabet() const { return alphabet_; }

  Letter letter_at(std::uint64_t n) const;
  FiniteWord prefix(std::size_t n) const;

  bool operator==(const PatternWord& o) const;

private:
  PatternWord(PatternKind k, LassoWord base, std::uint64_t s);

  PatternKind kind_;
  LassoWord base_;
  std::uint64_t s_ = 0;
  Alphabet alphabet_;
};

/// Either presentation of an omega-word with positional access.
using OmegaWord = std::variant<LassoWord, PatternWord>;

Letter letter_at(const OmegaWord& w, std::uint64_t n);
FiniteWord word_prefix(const OmegaWord& w, std::size_t n);
const Alphabet& word_alphabet(const OmegaWord& w);

/// True when the word is ultimately periodic (a lasso, or a phi code whose
/// image is ultimately periodic).
bool is_lasso_class(const OmegaWord& w);
/// Lasso presentation for lasso-class words.  Throws otherwise.
LassoWord as_lasso(const OmegaWord& w);

struct PairWord {
  OmegaWord first;
  OmegaWord second;
};

// ---------------------------------------------------------------------------
// Textual syntax.
//
//   lasso          stem(period)^w          e.g.  ab(ba)^w
//   pattern        h{<lasso>}  alpha  phi{<int lasso>}  theta{S=<k>;<lasso>}
//
// Letters are single characters, or bracketed tokens: [a,0] is a product
// letter, [10] a multi-character scalar letter.

std::string to_string(const Letter& a);
std::string to_string(const FiniteWord& w);
std::string to_string(const LassoWord& w);
std::string to_string(const PatternWord& w);
std::string to_string(const OmegaWord& w);

LassoWord parse_lasso(const std::string& text);
OmegaWord parse_word(const std::string& text);
/// Splits "expr1,expr2" at the top-level comma and parses both sides.
PairWord parse_pair(const std::string& text);
/// Parses a bare concatenation of letters (no lasso structure), e.g. "0A[b,1]".
FiniteWord parse_letters(const std::string& text);

}  // namespace ratgame
