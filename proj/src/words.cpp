#include "ratgame/words.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

namespace ratgame {

namespace {

constexpr std::uint64_t kFar = std::numeric_limits<std::uint64_t>::max() / 4;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a >= kFar || b >= kFar || a + b >= kFar) return kFar;
  return a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kFar || b >= kFar || a > kFar / b) return kFar;
  return a * b;
}

bool is_plain_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
         c != '[' && c != ']' && c != ',' && c != '{' && c != '}' && c != '^';
}

}  // namespace

// --------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].empty()) throw WordError("alphabet: empty letter");
    if (!index_.emplace(letters_[i], static_cast<int>(i)).second)
      throw WordError("alphabet: duplicate letter '" + letters_[i] + "'");
  }
}

int Alphabet::index(const Letter& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) throw WordError("letter '" + a + "' not in alphabet");
  return it->second;
}

Alphabet Alphabet::extended(const std::vector<Letter>& extra) const {
  std::vector<Letter> all = letters_;
  for (const Letter& a : extra) all.push_back(a);
  return Alphabet(all);
}

Alphabet Alphabet::product(const Alphabet& a, const Alphabet& b) {
  std::vector<Letter> letters;
  letters.reserve(a.size() * b.size());
  for (const Letter& x : a.letters())
    for (const Letter& y : b.letters()) letters.push_back(pair_letter(x, y));
  return Alphabet(letters);
}

Letter Alphabet::pair_letter(const Letter& x, const Letter& y) {
  for (char c : x + y)
    if (c == '[' || c == ']' || c == ',')
      throw WordError("nested product letters are not supported");
  return "[" + x + "," + y + "]";
}

std::pair<Letter, Letter> Alphabet::split_pair(const Letter& p) {
  if (p.size() < 5 || p.front() != '[' || p.back() != ']')
    throw WordError("'" + p + "' is not a product letter");
  auto comma = p.find(',');
  if (comma == std::string::npos)
    throw WordError("'" + p + "' is not a product letter");
  Letter x = p.substr(1, comma - 1);
  Letter y = p.substr(comma + 1, p.size() - comma - 2);
  if (x.empty() || y.empty())
    throw WordError("'" + p + "' is not a product letter");
  return {x, y};
}

// --------------------------------------------------------------------------
// LassoWord

LassoWord::LassoWord(Alphabet alphabet, FiniteWord stem, FiniteWord period)
    : alphabet_(std::move(alphabet)),
      stem_(std::move(stem)),
      period_(std::move(period)) {
  if (period_.empty()) throw WordError("lasso: empty period");
  for (const Letter& a : stem_)
    if (!alphabet_.contains(a))
      throw WordError("lasso stem letter '" + a + "' not in alphabet");
  for (const Letter& a : period_)
    if (!alphabet_.contains(a))
      throw WordError("lasso period letter '" + a + "' not in alphabet");
}

const Letter& LassoWord::letter_at(std::uint64_t n) const {
  if (n == 0) throw WordError("letter_at: positions are 1-based");
  if (n <= stem_.size()) return stem_[n - 1];
  return period_[(n - stem_.size() - 1) % period_.size()];
}

FiniteWord LassoWord::prefix(std::size_t n) const {
  FiniteWord out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(letter_at(i));
  return out;
}

bool LassoWord::operator==(const LassoWord& o) const {
  return alphabet_ == o.alphabet_ && stem_ == o.stem_ && period_ == o.period_;
}

LassoWord normalize_lasso(const LassoWord& w) {
  // Minimal period first: smallest divisor d of |p| with p = r^(|p|/d).
  FiniteWord period = w.period();
  std::size_t plen = period.size();
  for (std::size_t d = 1; d <= plen; ++d) {
    if (plen % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < plen && ok; ++i)
      if (period[i] != period[i % d]) ok = false;
    if (ok) {
      period.resize(d);
      break;
    }
  }
  // Minimal stem: absorb trailing stem letters equal to the period's last
  // letter, rotating the period.
  FiniteWord stem = w.stem();
  while (!stem.empty() && stem.back() == period.back()) {
    stem.pop_back();
    period.insert(period.begin(), period.back());
    period.pop_back();
  }
  return LassoWord(w.alphabet(), std::move(stem), std::move(period));
}

LassoWord interleave(const LassoWord& x, const LassoWord& xp) {
  std::vector<Letter> merged = x.alphabet().letters();
  for (const Letter& a : xp.alphabet().letters())
    if (!x.alphabet().contains(a)) merged.push_back(a);
  std::sort(merged.begin(), merged.end());
  Alphabet ab(merged);
  std::size_t stem_half = std::max(x.stem().size(), xp.stem().size());
  std::size_t period_half = std::lcm(x.period().size(), xp.period().size());
  FiniteWord stem, period;
  for (std::size_t i = 1; i <= stem_half; ++i) {
    stem.push_back(x.letter_at(i));
    stem.push_back(xp.letter_at(i));
  }
  for (std::size_t i = stem_half + 1; i <= stem_half + period_half; ++i) {
    period.push_back(x.letter_at(i));
    period.push_back(xp.letter_at(i));
  }
  return LassoWord(ab, std::move(stem), std::move(period));
}

// --------------------------------------------------------------------------
// PatternWord

PatternWord::PatternWord(PatternKind k, LassoWord base, std::uint64_t s)
    : kind_(k), base_(std::move(base)), s_(s) {
  switch (kind_) {
    case PatternKind::HCode:
      if (base_.alphabet().contains("0") || base_.alphabet().contains("A"))
        throw WordError("h code: base alphabet must not contain '0' or 'A'");
      alphabet_ = base_.alphabet().extended({"0", "A"});
      break;
    case PatternKind::AlphaWord:
      alphabet_ = Alphabet({"0", "A"});
      break;
    case PatternKind::PhiCode: {
      for (const Letter& a : base_.stem()) (void)a;
      auto check_int = [](const Letter& a) {
        if (a.empty()) throw WordError("phi code: empty letter");
        for (char c : a)
          if (!std::isdigit(static_cast<unsigned char>(c)))
            throw WordError("phi code: base letters must be nonnegative integers");
      };
      for (const Letter& a : base_.stem()) check_int(a);
      for (const Letter& a : base_.period()) check_int(a);
      alphabet_ = Alphabet({"0", "1"});
      break;
    }
    case PatternKind::ThetaCode:
      if (s_ < 2) throw WordError("theta code: S must be >= 2");
      if (base_.alphabet().contains("E"))
        throw WordError("theta code: base alphabet must not contain 'E'");
      alphabet_ = base_.alphabet().extended({"E"});
      break;
  }
}

PatternWord PatternWord::h_code(LassoWord base) {
  return PatternWord(PatternKind::HCode, std::move(base), 0);
}

PatternWord PatternWord::alpha_word() {
  LassoWord dummy(Alphabet({"0"}), {}, {"0"});
  return PatternWord(PatternKind::AlphaWord, dummy, 0);
}

PatternWord PatternWord::phi_code(LassoWord int_base) {
  return PatternWord(PatternKind::PhiCode, std::move(int_base), 0);
}

PatternWord PatternWord::theta_code(LassoWord base, std::uint64_t s) {
  return PatternWord(PatternKind::ThetaCode, std::move(base), s);
}

namespace {

/// Shared block schedule of the h and alpha codings: block i carries a 0-run
/// of length i plus markers; blocks of odd index are 2 letters longer than
/// their run, blocks of even index 1 letter longer, so block i has length
/// i + 1 + [i odd] and the cumulative length through block i is
/// sum_{k<=i} (k + 1 + [k odd]) = i(i+1)/2 + i + ceil(i/2).
std::uint64_t coded_cum_len(std::uint64_t i) {
  return i * (i + 1) / 2 + i + (i + 1) / 2;
}

/// Smallest block index i with coded_cum_len(i) >= n.
std::uint64_t coded_block_of(std::uint64_t n) {
  std::uint64_t lo = 1, hi = 1;
  while (coded_cum_len(hi) < n) hi *= 2;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (coded_cum_len(mid) >= n)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

Letter PatternWord::letter_at(std::uint64_t n) const {
  if (n == 0) throw WordError("letter_at: positions are 1-based");
  switch (kind_) {
    case PatternKind::HCode: {
      std::uint64_t i = coded_block_of(n);
      std::uint64_t off = n - coded_cum_len(i - 1);  // 1-based within block
      if (off <= i) return "0";
      if (i % 2 == 1) {
        if (off == i + 1) return "A";
        return base_.letter_at(i);
      }
      return base_.letter_at(i);
    }
    case PatternKind::AlphaWord: {
      std::uint64_t i = coded_block_of(n);
      std::uint64_t off = n - coded_cum_len(i - 1);
      if (off <= i) return "0";
      return "A";
    }
    case PatternKind::PhiCode: {
      auto block_len = [&](std::uint64_t i) {
        std::uint64_t v = std::stoull(base_.letter_at(i));
        return 2 * (v + 1) + 1;
      };
      std::uint64_t stem_blocks = base_.stem().size();
      std::uint64_t stem_total = 0;
      for (std::uint64_t i = 1; i <= stem_blocks; ++i)
        stem_total += block_len(i);
      std::uint64_t period_blocks = base_.period().size();
      std::uint64_t period_total = 0;
      for (std::uint64_t i = stem_blocks + 1; i <= stem_blocks + period_blocks;
           ++i)
        period_total += block_len(i);
      std::uint64_t pos = n;
      std::uint64_t i = 1;
      if (pos > stem_total) {
        pos -= stem_total;
        std::uint64_t skip = (pos - 1) / period_total;
        pos -= skip * period_total;
        i = stem_blocks + 1;
      }
      for (;; ++i) {
        std::uint64_t len = block_len(i);
        if (pos <= len) return pos == len ? "0" : "1";
        pos -= len;
      }
    }
    case PatternKind::ThetaCode: {
      // block i = x(i) followed by E^{S^i}; positions beyond the 62-bit
      // saturation point are deep inside a gap and read "E".
      if (n >= kFar) return "E";
      std::uint64_t cum = 0, power = 1;
      for (std::uint64_t i = 1;; ++i) {
        power = sat_mul(power, s_);
        std::uint64_t len = sat_add(1, power);
        if (n <= sat_add(cum, len)) {
          std::uint64_t off = n - cum;
          return off == 1 ? base_.letter_at(i) : Letter("E");
        }
        cum = sat_add(cum, len);
      }
    }
  }
  throw WordError("unreachable");
}

FiniteWord PatternWord::prefix(std::size_t n) const {
  FiniteWord out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(letter_at(i));
  return out;
}

bool PatternWord::operator==(const PatternWord& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == PatternKind::AlphaWord) return true;
  if (kind_ == PatternKind::ThetaCode && s_ != o.s_) return false;
  return base_ == o.base_;
}

// --------------------------------------------------------------------------
// OmegaWord helpers

Letter letter_at(const OmegaWord& w, std::uint64_t n) {
  if (const auto* l = std::get_if<LassoWord>(&w)) return l->letter_at(n);
  return std::get<PatternWord>(w).letter_at(n);
}

FiniteWord word_prefix(const OmegaWord& w, std::size_t n) {
  if (const auto* l = std::get_if<LassoWord>(&w)) return l->prefix(n);
  return std::get<PatternWord>(w).prefix(n);
}

const Alphabet& word_alphabet(const OmegaWord& w) {
  if (const auto* l = std::get_if<LassoWord>(&w)) return l->alphabet();
  return std::get<PatternWord>(w).alphabet();
}

bool is_lasso_class(const OmegaWord& w) {
  if (std::holds_alternative<LassoWord>(w)) return true;
  return std::get<PatternWord>(w).kind() == PatternKind::PhiCode;
}

LassoWord as_lasso(const OmegaWord& w) {
  if (const auto* l = std::get_if<LassoWord>(&w)) return *l;
  const PatternWord& p = std::get<PatternWord>(w);
  if (p.kind() != PatternKind::PhiCode)
    throw WordError("word is not ultimately periodic");
  Alphabet ab({"0", "1"});
  auto emit = [](FiniteWord& out, const Letter& count_letter) {
    std::uint64_t v = std::stoull(count_letter);
    for (std::uint64_t k = 0; k < 2 * (v + 1); ++k) out.push_back("1");
    out.push_back("0");
  };
  FiniteWord stem, period;
  for (const Letter& a : p.base().stem()) emit(stem, a);
  for (const Letter& a : p.base().period()) emit(period, a);
  return LassoWord(ab, std::move(stem), std::move(period));
}

// --------------------------------------------------------------------------
// Printing

std::string to_string(const Letter& a) {
  if (a.size() == 1 && is_plain_char(a[0])) return a;
  if (a.front() == '[' && a.back() == ']') return a;
  return "[" + a + "]";
}

std::string to_string(const FiniteWord& w) {
  std::string out;
  for (const Letter& a : w) out += to_string(a);
  return out;
}

std::string to_string(const LassoWord& w) {
  return to_string(w.stem()) + "(" + to_string(w.period()) + ")^w";
}

std::string to_string(const PatternWord& w) {
  switch (w.kind()) {
    case PatternKind::HCode:
      return "h{" + to_string(w.base()) + "}";
    case PatternKind::AlphaWord:
      return "alpha";
    case PatternKind::PhiCode:
      return "phi{" + to_string(w.base()) + "}";
    case PatternKind::ThetaCode:
      return "theta{S=" + std::to_string(w.theta_s()) + ";" +
             to_string(w.base()) + "}";
  }
  return "";
}

std::string to_string(const OmegaWord& w) {
  if (const auto* l = std::get_if<LassoWord>(&w)) return to_string(*l);
  return to_string(std::get<PatternWord>(w));
}

// --------------------------------------------------------------------------
// Parsing

namespace {

struct Scanner {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    if (pos >= text.size()) throw WordError("unexpected end of word expression");
    return text[pos];
  }
  void expect(char c) {
    if (peek() != c)
      throw WordError(std::string("expected '") + c + "' in word expression");
    ++pos;
  }
  bool try_consume(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) == 0) {
      pos += s.size();
      return true;
    }
    return false;
  }

  Letter letter() {
    char c = peek();
    if (c == '[') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && text[pos] != ']') ++pos;
      if (pos >= text.size()) throw WordError("unterminated '[' in word");
      std::string inner = text.substr(start, pos - start);
      ++pos;
      if (inner.empty()) throw WordError("empty '[]' letter");
      if (inner.find(',') != std::string::npos) return "[" + inner + "]";
      return inner;
    }
    if (!is_plain_char(c)) throw WordError(std::string("bad letter '") + c + "'");
    ++pos;
    return std::string(1, c);
  }
};

LassoWord parse_lasso_scanner(Scanner& sc) {
  FiniteWord stem;
  while (sc.peek() != '(') stem.push_back(sc.letter());
  sc.expect('(');
  FiniteWord period;
  while (sc.peek() != ')') period.push_back(sc.letter());
  sc.expect(')');
  sc.expect('^');
  sc.expect('w');
  std::vector<Letter> seen;
  for (const Letter& a : stem)
    if (std::find(seen.begin(), seen.end(), a) == seen.end()) seen.push_back(a);
  for (const Letter& a : period)
    if (std::find(seen.begin(), seen.end(), a) == seen.end()) seen.push_back(a);
  std::sort(seen.begin(), seen.end());
  return LassoWord(Alphabet(seen), std::move(stem), std::move(period));
}

}  // namespace

LassoWord parse_lasso(const std::string& text) {
  Scanner sc{text};
  LassoWord w = parse_lasso_scanner(sc);
  if (!sc.eof()) throw WordError("trailing input after lasso");
  return w;
}

OmegaWord parse_word(const std::string& text) {
  Scanner sc{text};
  if (sc.try_consume("alpha")) {
    if (!sc.eof()) throw WordError("trailing input after 'alpha'");
    return PatternWord::alpha_word();
  }
  if (sc.try_consume("h{")) {
    LassoWord base = parse_lasso_scanner(sc);
    sc.expect('}');
    if (!sc.eof()) throw WordError("trailing input after pattern word");
    return PatternWord::h_code(std::move(base));
  }
  if (sc.try_consume("phi{")) {
    LassoWord base = parse_lasso_scanner(sc);
    sc.expect('}');
    if (!sc.eof()) throw WordError("trailing input after pattern word");
    return PatternWord::phi_code(std::move(base));
  }
  if (sc.try_consume("theta{")) {
    if (!sc.try_consume("S=")) throw WordError("theta{...} needs S=<int>;");
    std::string digits;
    while (!sc.eof() && std::isdigit(static_cast<unsigned char>(sc.peek())))
      digits += sc.text[sc.pos++];
    if (digits.empty()) throw WordError("theta{...}: missing S value");
    sc.expect(';');
    LassoWord base = parse_lasso_scanner(sc);
    sc.expect('}');
    if (!sc.eof()) throw WordError("trailing input after pattern word");
    return PatternWord::theta_code(std::move(base), std::stoull(digits));
  }
  LassoWord w = parse_lasso_scanner(sc);
  if (!sc.eof()) throw WordError("trailing input after lasso");
  return w;
}

FiniteWord parse_letters(const std::string& text) {
  Scanner sc{text};
  FiniteWord out;
  while (!sc.eof()) out.push_back(sc.letter());
  return out;
}

PairWord parse_pair(const std::string& text) {
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '{' || c == '[' || c == '(') ++depth;
    if (c == '}' || c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0)
      return PairWord{parse_word(text.substr(0, i)),
                      parse_word(text.substr(i + 1))};
  }
  throw WordError("pair expression needs a top-level ','");
}

}  // namespace ratgame
