#include "ratgame/codings.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace ratgame {

namespace {

bool is_base_letter(const Letter& a) { return a != "0" && a != "A"; }

// ---------------------------------------------------------------------------
// Token streams.
//
// Both tape schedules alternate maximal 0-runs with maximal non-0 segments,
// so classification works on a tokenized view: token k carries the k-th
// 0-run length and the non-0 segment that follows it.  For lassos the stream
// is computed exactly (it is ultimately periodic in the position classes);
// for non-periodic pattern words a finite probe window is tokenized and the
// final, possibly cut-off token is marked incomplete.

constexpr std::size_t kWordCap = 4;

struct Token {
  std::uint64_t zeros = 0;
  FiniteWord word;             // first kWordCap letters of the non-0 segment
  bool word_truncated = false; // segment longer than kWordCap
  bool zeros_infinite = false; // the 0-run never ends
  bool word_infinite = false;  // the non-0 segment never ends
  bool incomplete = false;     // cut off by the probe window

  bool terminal() const { return zeros_infinite || word_infinite; }
};

struct TokenStream {
  std::vector<Token> pre;
  std::vector<Token> cyc;  // nonempty only for exactly tokenized lassos
  bool cut = false;        // true when produced from a finite probe window

  // 1-based access; nullptr when the stream has no k-th token.
  const Token* token(std::uint64_t k) const {
    if (k == 0) return nullptr;
    if (k <= pre.size()) return &pre[k - 1];
    if (!cyc.empty()) return &cyc[(k - pre.size() - 1) % cyc.size()];
    return nullptr;
  }

  // Index past which token() is nullptr (0 = never, the stream is infinite).
  std::uint64_t end_index() const {
    return cyc.empty() ? pre.size() + 1 : 0;
  }
};

TokenStream tokenize_lasso(const LassoWord& w) {
  // Token starting at a position class is a function of that class alone, so
  // the stream is the orbit of class 1 under "scan one token".
  struct Scan {
    Token token;
    std::uint64_t next_class = 0;  // 0 when the token is terminal
  };
  auto scan_from = [&](std::uint64_t c) {
    Scan s;
    std::set<std::uint64_t> seen;
    while (lasso_class_letter(w, c) == "0") {
      if (!seen.insert(c).second) {
        s.token.zeros_infinite = true;
        return s;
      }
      ++s.token.zeros;
      c = lasso_class_next(w, c);
    }
    seen.clear();
    while (lasso_class_letter(w, c) != "0") {
      if (!seen.insert(c).second) {
        s.token.word_infinite = true;
        s.token.word_truncated = true;
        return s;
      }
      if (s.token.word.size() < kWordCap) {
        s.token.word.push_back(lasso_class_letter(w, c));
      } else {
        s.token.word_truncated = true;
      }
      c = lasso_class_next(w, c);
    }
    s.next_class = c;
    return s;
  };

  TokenStream out;
  std::map<std::uint64_t, std::size_t> first_seen;
  std::vector<Token> toks;
  std::uint64_t c = 1;
  for (;;) {
    auto it = first_seen.find(c);
    if (it != first_seen.end()) {
      out.pre.assign(toks.begin(), toks.begin() + it->second);
      out.cyc.assign(toks.begin() + it->second, toks.end());
      return out;
    }
    first_seen[c] = toks.size();
    Scan s = scan_from(c);
    toks.push_back(s.token);
    if (s.next_class == 0) {  // terminal token ends the stream
      out.pre = std::move(toks);
      return out;
    }
    c = s.next_class;
  }
}

TokenStream tokenize_prefix(const FiniteWord& p) {
  TokenStream out;
  out.cut = true;
  Token cur;
  bool in_word = false;
  for (const Letter& a : p) {
    if (a == "0") {
      if (in_word) {
        out.pre.push_back(cur);
        cur = Token{};
        in_word = false;
      }
      ++cur.zeros;
    } else {
      in_word = true;
      if (cur.word.size() < kWordCap) {
        cur.word.push_back(a);
      } else {
        cur.word_truncated = true;
      }
    }
  }
  cur.incomplete = true;
  out.pre.push_back(cur);
  return out;
}

TokenStream tokenize_word(const OmegaWord& w, std::size_t probe_letters) {
  if (is_lasso_class(w)) return tokenize_lasso(as_lasso(w));
  return tokenize_prefix(word_prefix(w, probe_letters));
}

// ---------------------------------------------------------------------------
// Three-valued checks on tokens.  Incomplete tokens may still grow, so some
// of their fields are not final; checks return Unknown in that case and the
// classifier never claims a match through an Unknown.

enum class Tri { False, Unknown, True };

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

// The 0-run length is final once a word letter follows it.
bool zeros_final(const Token& t) {
  if (t.zeros_infinite) return false;
  return !t.incomplete || !t.word.empty();
}

enum class Slot { Marker, Base };  // 'A' vs. a base letter

bool slot_matches(const Letter& a, Slot s) {
  return s == Slot::Marker ? a == "A" : is_base_letter(a);
}

// Does the token's non-0 segment equal the slot pattern exactly?
Tri word_is_exactly(const Token& t, const std::vector<Slot>& pat) {
  const std::size_t m = std::min(t.word.size(), pat.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (!slot_matches(t.word[i], pat[i])) return Tri::False;
  }
  if (t.word.size() > pat.size() || t.word_truncated) return Tri::False;
  if (t.incomplete) return Tri::Unknown;  // the segment may still grow
  if (t.word_infinite) return Tri::False;
  return t.word.size() == pat.size() ? Tri::True : Tri::False;
}

// Does the token's non-0 segment start with the given slot?
Tri word_starts_with(const Token& t, Slot s) {
  if (!t.word.empty()) return slot_matches(t.word[0], s) ? Tri::True : Tri::False;
  if (t.zeros_infinite) return Tri::False;  // there is no segment at all
  if (t.incomplete) return Tri::Unknown;
  return Tri::False;
}

// Is the 0-run length at least one?
Tri zeros_positive(const Token& t) {
  if (t.zeros >= 1) return Tri::True;          // counts only grow
  if (t.zeros_infinite) return Tri::True;
  return zeros_final(t) ? Tri::False : Tri::Unknown;
}

// A schedule unit: 0-run then "A b" / "b" (tape 1) or "AA" / "A" (tape 2),
// with the marker variant at odd unit indices.
Tri unit_valid(const Token& t, std::uint64_t k, bool tape2) {
  std::vector<Slot> pat;
  if (tape2) {
    pat = (k % 2 == 1) ? std::vector<Slot>{Slot::Marker, Slot::Marker}
                       : std::vector<Slot>{Slot::Marker};
  } else {
    pat = (k % 2 == 1) ? std::vector<Slot>{Slot::Marker, Slot::Base}
                       : std::vector<Slot>{Slot::Base};
  }
  if (t.terminal()) return Tri::False;
  return tri_and(zeros_positive(t), word_is_exactly(t, pat));
}

// ---------------------------------------------------------------------------
// Per-tape evaluation context: tokens plus a prefix-validity table.

struct TapeView {
  TokenStream stream;
  bool tape2 = false;
  std::vector<Tri> valid_prefix;  // valid_prefix[k] = units 1..k all valid

  void build(std::uint64_t max_units) {
    valid_prefix.assign(max_units + 1, Tri::True);
    for (std::uint64_t k = 1; k <= max_units; ++k) {
      Tri vk;
      const Token* t = stream.token(k);
      if (t == nullptr) {
        vk = stream.cut ? Tri::Unknown : Tri::False;
      } else {
        vk = unit_valid(*t, k, tape2);
      }
      valid_prefix[k] = tri_and(valid_prefix[k - 1], vk);
      if (valid_prefix[k] == Tri::False) {
        // everything beyond stays False
        for (std::uint64_t j = k + 1; j <= max_units; ++j) {
          valid_prefix[j] = Tri::False;
        }
        break;
      }
    }
  }

  Tri all_valid(std::uint64_t k) const {
    if (k >= valid_prefix.size()) return Tri::False;
    return valid_prefix[k];
  }

  // Exact 0-run length of unit k, when final.
  std::optional<std::uint64_t> run_length(std::uint64_t k) const {
    const Token* t = stream.token(k);
    if (t == nullptr || !zeros_final(*t)) return std::nullopt;
    return t->zeros;
  }

  Tri starts(std::uint64_t k, Slot s) const {
    const Token* t = stream.token(k);
    if (t == nullptr) return stream.cut ? Tri::Unknown : Tri::False;
    return word_starts_with(*t, s);
  }

  Tri unit_at(std::uint64_t k) const {
    const Token* t = stream.token(k);
    if (t == nullptr) return stream.cut ? Tri::Unknown : Tri::False;
    return unit_valid(*t, k, tape2);
  }
};

std::string join_letters(const FiniteWord& w) {
  std::string s;
  for (const Letter& a : w) s += to_string(a);
  return s;
}

// ---------------------------------------------------------------------------
// Opening-window check (class C1).  The first eleven letters of a coded pair
// are forced exactly; a base-letter slot accepts any non-marker letter.

struct WindowSlot {
  char kind;  // '0', 'A', or 'B' for a base letter
};

const std::vector<WindowSlot>& window_tape1() {
  static const std::vector<WindowSlot> w = {{'0'}, {'A'}, {'B'}, {'0'}, {'0'},
                                            {'B'}, {'0'}, {'0'}, {'0'}, {'A'},
                                            {'B'}};
  return w;
}

const std::vector<WindowSlot>& window_tape2() {
  static const std::vector<WindowSlot> w = {{'0'}, {'A'}, {'A'}, {'0'}, {'0'},
                                            {'A'}, {'0'}, {'0'}, {'0'}, {'A'},
                                            {'A'}};
  return w;
}

std::optional<std::string> window_violation(const OmegaWord& w,
                                            const std::vector<WindowSlot>& win,
                                            int tape) {
  for (std::size_t i = 0; i < win.size(); ++i) {
    const Letter a = letter_at(w, i + 1);
    bool ok = false;
    switch (win[i].kind) {
      case '0': ok = (a == "0"); break;
      case 'A': ok = (a == "A"); break;
      default: ok = is_base_letter(a); break;
    }
    if (!ok) {
      std::ostringstream os;
      os << "tape " << tape << " position " << (i + 1) << ": expected "
         << (win[i].kind == 'B' ? std::string("a base letter")
                                : "'" + std::string(1, win[i].kind) + "'")
         << " in the opening window, found '" << to_string(a) << "'";
      return os.str();
    }
  }
  return std::nullopt;
}

// First unit that definitely breaks the schedule shape, scanning k = 1..limit.
std::optional<std::pair<std::uint64_t, std::string>> first_invalid_unit(
    const TapeView& tv, std::uint64_t limit, int tape) {
  for (std::uint64_t k = 1; k <= limit; ++k) {
    const Token* t = tv.stream.token(k);
    if (t == nullptr) {
      if (tv.stream.cut) return std::nullopt;  // ran out of probe window
      std::ostringstream os;
      os << "tape " << tape << " unit " << k
         << ": the run/segment alternation ends here";
      return std::make_pair(k, os.str());
    }
    if (unit_valid(*t, k, tv.tape2) == Tri::False) {
      std::ostringstream os;
      os << "tape " << tape << " unit " << k << ": ";
      if (t->zeros_infinite) {
        os << "the 0-run never ends";
      } else if (t->word_infinite) {
        os << "the non-0 segment never ends";
      } else if (zeros_final(*t) && t->zeros == 0) {
        os << "missing 0-run";
      } else {
        os << "segment \"" << join_letters(t->word)
           << (t->word_truncated ? "..." : "") << "\" does not fit the shape";
      }
      return std::make_pair(k, os.str());
    }
  }
  return std::nullopt;
}

std::uint64_t letters_for_blocks(std::uint64_t m) {
  // Total coded length of m blocks on the denser (tape-1) schedule.
  return m * (m + 1) / 2 + m + (m + 1) / 2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Alphabets and codings

CodingAlphabets::CodingAlphabets(const Alphabet& base)
    : sigma(base),
      sigma1(base.extended({"0", "A"})),
      gamma(Alphabet({"0", "A"})) {
  // extended() already rejects duplicate letters, so base words cannot use
  // the markers; nothing more to check.
}

PatternWord encode_h(const LassoWord& x) { return PatternWord::h_code(x); }

DecodedPrefix decode_h(const FiniteWord& prefix) {
  DecodedPrefix out;
  std::size_t idx = 0;
  std::uint64_t block = 1;
  while (idx < prefix.size()) {
    for (std::uint64_t z = 0; z < block && idx < prefix.size(); ++z, ++idx) {
      if (prefix[idx] != "0") {
        out.error_position = idx + 1;
        return out;
      }
    }
    if (idx >= prefix.size()) break;
    if (block % 2 == 1) {
      if (prefix[idx] != "A") {
        out.error_position = idx + 1;
        return out;
      }
      ++idx;
      if (idx >= prefix.size()) break;
    }
    if (!is_base_letter(prefix[idx])) {
      out.error_position = idx + 1;
      return out;
    }
    out.letters.push_back(prefix[idx]);
    ++idx;
    ++block;
  }
  return out;
}

bool is_pref_of_coding(const FiniteWord& u, const FiniteWord& v) {
  if (!decode_h(u).ok()) return false;
  const PatternWord alpha = PatternWord::alpha_word();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != alpha.letter_at(i + 1)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Guard automata

namespace {

struct BuchiBuilder {
  BuchiAutomaton m;

  BuchiBuilder(std::string name, Alphabet al, std::vector<std::string> names,
               int initial, std::vector<int> accepting)
      : m(std::move(al)) {
    m.name = std::move(name);
    m.num_states = static_cast<int>(names.size());
    m.state_names = std::move(names);
    m.initial = initial;
    m.accepting.assign(m.num_states, false);
    for (int q : accepting) m.accepting[q] = true;
  }

  void move(int from, const Letter& a, int to) {
    m.transitions.push_back(Transition{from, a, {}, {}, to});
  }

  BuchiAutomaton take() {
    m.validate();
    return std::move(m);
  }
};

// The tape-1 schedule shape [(00)*0.A.b.(00)+.b]^w over sigma1.
BuchiAutomaton build_H(const Alphabet& sigma, const Alphabet& sigma1) {
  BuchiBuilder b("guard-H", sigma1,
                 {"start", "z1odd", "z1even", "marked", "mid", "z2odd",
                  "z2even", "done"},
                 0, {7});
  b.move(0, "0", 1);
  b.move(1, "0", 2);
  b.move(2, "0", 1);
  b.move(1, "A", 3);
  for (const Letter& a : sigma.letters()) b.move(3, a, 4);
  b.move(4, "0", 5);
  b.move(5, "0", 6);
  b.move(6, "0", 5);
  for (const Letter& a : sigma.letters()) b.move(6, a, 7);
  b.move(7, "0", 1);
  return b.take();
}

// The tape-2 schedule shape [(00)*0.AA.(00)+.A]^w over {0, A}.
BuchiAutomaton build_Hp(const Alphabet& gamma) {
  BuchiBuilder b("guard-Hp", gamma,
                 {"start", "z1odd", "z1even", "mark1", "mark2", "z2odd",
                  "z2even", "done"},
                 0, {7});
  b.move(0, "0", 1);
  b.move(1, "0", 2);
  b.move(2, "0", 1);
  b.move(1, "A", 3);
  b.move(3, "A", 4);
  b.move(4, "0", 5);
  b.move(5, "0", 6);
  b.move(6, "0", 5);
  b.move(6, "A", 7);
  b.move(7, "0", 1);
  return b.take();
}

// Prefixes of the language, filtered down to those ending in 0.
FiniteAutomaton ends_in_zero_filter(const FiniteAutomaton& pref) {
  FiniteAutomaton out(pref.alphabet);
  // state (q, b): b = last letter read was 0.  epsilon has b = false.
  out.num_states = pref.num_states * 2;
  out.initial = pref.initial * 2;
  out.final_states.assign(out.num_states, false);
  for (int q = 0; q < pref.num_states; ++q) {
    if (pref.final_states[q]) out.final_states[q * 2 + 1] = true;
  }
  for (const auto& [from, a, to] : pref.transitions) {
    const int bit = (a == "0") ? 1 : 0;
    out.transitions.emplace_back(from * 2, a, to * 2 + bit);
    out.transitions.emplace_back(from * 2 + 1, a, to * 2 + bit);
  }
  out.validate();
  return out;
}

// Buchi automaton for V.0^w where V = Pref(L(h)) restricted to words ending
// in 0: the guard machine plus an all-0 accepting tail that can be entered
// in place of any 0-move.
BuchiAutomaton zero_tail_automaton(const BuchiAutomaton& h, std::string name) {
  BuchiAutomaton out = h;
  out.name = std::move(name);
  const int tail = out.num_states;
  ++out.num_states;
  out.state_names.push_back("tail");
  out.accepting.assign(out.num_states, false);
  out.accepting[tail] = true;
  const std::size_t original = out.transitions.size();
  for (std::size_t i = 0; i < original; ++i) {
    const Transition t = out.transitions[i];
    if (t.letter == "0") {
      out.transitions.push_back(Transition{t.from, "0", {}, {}, tail});
    }
  }
  out.transitions.push_back(Transition{tail, "0", {}, {}, tail});
  out.validate();
  return out;
}

// Deterministic transition table with an explicit dead state appended.
struct DetTable {
  int states = 0;  // including the dead state (the last index)
  int dead = 0;
  std::vector<int> next;  // state * |alphabet| + letter -> state

  DetTable(const BuchiAutomaton& m) {
    const int n = m.num_states;
    const int letters = static_cast<int>(m.alphabet.size());
    states = n + 1;
    dead = n;
    next.assign(states * letters, dead);
    for (const Transition& t : m.transitions) {
      next[t.from * letters + m.alphabet.index(t.letter)] = t.to;
    }
  }

  int step(int q, int letter_index, int letters) const {
    return next[q * letters + letter_index];
  }
};

// U: even-length words over the product alphabet, alive componentwise up to
// the penultimate letter, dead at the last one.
FiniteAutomaton build_U(const BuchiAutomaton& h, const BuchiAutomaton& hp,
                        const Alphabet& product) {
  const DetTable d1(h);
  const DetTable d2(hp);
  const int l1 = static_cast<int>(h.alphabet.size());
  const int l2 = static_cast<int>(hp.alphabet.size());

  struct Key {
    int q1, q2;
    bool parity_odd, alive_prev;
    auto operator<=>(const Key&) const = default;
  };
  auto alive = [&](int q1, int q2) { return q1 != d1.dead && q2 != d2.dead; };

  std::map<Key, int> id;
  std::vector<Key> todo;
  auto intern = [&](const Key& k) {
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    const int v = static_cast<int>(id.size());
    id.emplace(k, v);
    todo.push_back(k);
    return v;
  };

  FiniteAutomaton out(product);
  const Key start{h.initial, hp.initial, false, true};
  out.initial = intern(start);
  std::vector<std::tuple<int, Letter, int>> moves;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const Key k = todo[i];
    const int from = id.at(k);
    for (const Letter& x : product.letters()) {
      const auto [a, bLetter] = Alphabet::split_pair(x);
      const Key nk{d1.step(k.q1, h.alphabet.index(a), l1),
                   d2.step(k.q2, hp.alphabet.index(bLetter), l2),
                   !k.parity_odd, alive(k.q1, k.q2)};
      moves.emplace_back(from, x, intern(nk));
    }
  }
  out.num_states = static_cast<int>(id.size());
  out.final_states.assign(out.num_states, false);
  for (const auto& [k, v] : id) {
    if (!k.parity_odd && k.alive_prev && !alive(k.q1, k.q2)) {
      out.final_states[v] = true;
    }
  }
  out.transitions = std::move(moves);
  out.validate();
  return out;
}

}  // namespace

GuardAutomata build_guard_automata(const Alphabet& sigma) {
  const CodingAlphabets al(sigma);
  GuardAutomata g{BuchiAutomaton(al.sigma1), BuchiAutomaton(al.gamma),
                  BuchiAutomaton(al.sigma1), BuchiAutomaton(al.gamma),
                  FiniteAutomaton(al.sigma1), FiniteAutomaton(al.gamma),
                  BuchiAutomaton(al.sigma1), BuchiAutomaton(al.gamma),
                  FiniteAutomaton(al.sigma1),
                  Alphabet::product(al.sigma1, al.gamma)};
  g.H = build_H(al.sigma, al.sigma1);
  g.Hp = build_Hp(al.gamma);
  g.ClH = closure_automaton(g.H);
  g.ClH.name = "closure-H";
  g.ClHp = closure_automaton(g.Hp);
  g.ClHp.name = "closure-Hp";
  g.V = ends_in_zero_filter(prefix_automaton(g.H));
  g.Vp = ends_in_zero_filter(prefix_automaton(g.Hp));
  g.V0 = zero_tail_automaton(g.H, "guard-V0");
  g.Vp0 = zero_tail_automaton(g.Hp, "guard-Vp0");
  g.U = build_U(g.H, g.Hp, g.product_alphabet);
  return g;
}

// ---------------------------------------------------------------------------
// Complement classification

std::string to_string(ComplementTag tag) {
  switch (tag) {
    case ComplementTag::C1: return "C1";
    case ComplementTag::C2: return "C2";
    case ComplementTag::C3: return "C3";
    case ComplementTag::C4: return "C4";
    case ComplementTag::C5: return "C5";
    case ComplementTag::C6: return "C6";
  }
  return "?";
}

namespace {

struct RunPair {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

// One comparison family: structural requirements on both tapes around block
// boundary 2n, then an inequality between two specific 0-run lengths.
struct FamilySpec {
  // units that must be fully schedule-valid on each tape (relative to 2n)
  std::uint64_t valid1 = 0, valid2 = 0;   // 2n + valid1, 2n + valid2
  std::uint64_t run1 = 0, run2 = 0;       // compared units (relative to 2n)
  Slot start1 = Slot::Marker;             // segment start at the run1 unit
  Slot start2 = Slot::Marker;             // segment start at the run2 unit
  std::uint64_t offset = 0;               // match when r1 != r2 + offset
  const char* label1 = "";
  const char* label2 = "";
};

std::optional<ComplementClass> match_family(const TapeView& t1,
                                            const TapeView& t2,
                                            ComplementTag tag,
                                            const FamilySpec& f,
                                            std::uint64_t n_max) {
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    Tri ok = tri_and(t1.all_valid(2 * n + f.valid1),
                     t2.all_valid(2 * n + f.valid2));
    if (ok == Tri::False) {
      // validity is monotone: larger n cannot match either
      if (t1.all_valid(2 * n) == Tri::False ||
          t2.all_valid(2 * n) == Tri::False) {
        return std::nullopt;
      }
      continue;
    }
    ok = tri_and(ok, t1.starts(2 * n + f.run1, f.start1));
    ok = tri_and(ok, t2.starts(2 * n + f.run2, f.start2));
    if (ok != Tri::True) continue;
    const auto r1 = t1.run_length(2 * n + f.run1);
    const auto r2 = t2.run_length(2 * n + f.run2);
    if (!r1 || !r2 || *r1 < 1 || *r2 < 1) continue;
    if (*r1 != *r2 + f.offset) {
      std::ostringstream os;
      os << "n=" << n << ": " << f.label1 << " (unit " << (2 * n + f.run1)
         << ") has length " << *r1 << ", " << f.label2 << " (unit "
         << (2 * n + f.run2) << ") has length " << *r2;
      if (f.offset != 0) os << " (+" << f.offset << " expected)";
      return ComplementClass{tag, os.str()};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<ComplementClass> classify_complement(const PairWord& p,
                                                 const SearchBounds& probe) {
  const std::uint64_t blocks = probe.max_blocks + 2;
  const std::size_t probe_letters = static_cast<std::size_t>(std::min<std::uint64_t>(
      std::max(letters_for_blocks(blocks) + 16, probe.max_depth), 1u << 20));

  TapeView t1{tokenize_word(p.first, probe_letters), false, {}};
  TapeView t2{tokenize_word(p.second, probe_letters), true, {}};

  // Horizon: joint token content is periodic past the preambles with period
  // lcm of the cycle lengths, and validity is monotone, so any match beyond
  // the horizon reduces to one inside it.
  auto cyc_of = [](const TapeView& tv) -> std::uint64_t {
    return tv.stream.cyc.empty() ? 0 : tv.stream.cyc.size();
  };
  const std::uint64_t c1 = cyc_of(t1), c2 = cyc_of(t2);
  std::uint64_t joint = std::max<std::uint64_t>(1, std::max(c1, c2));
  if (c1 != 0 && c2 != 0) joint = std::lcm(c1, c2);
  joint = std::min<std::uint64_t>(joint, 10000);
  const std::uint64_t pre =
      std::max(t1.stream.pre.size(), t2.stream.pre.size());
  std::uint64_t n_max = pre + 2 * joint + 8;
  if (t1.stream.cut || t2.stream.cut) {
    n_max = std::max<std::uint64_t>(
        n_max, std::max(t1.stream.pre.size(), t2.stream.pre.size()) + 4);
  }
  n_max = std::min<std::uint64_t>(n_max, 200000);

  const std::uint64_t max_units = 2 * n_max + 3;
  t1.build(max_units);
  t2.build(max_units);

  std::vector<ComplementClass> out;

  // C1: the eleven-letter opening windows.
  if (auto w = window_violation(p.first, window_tape1(), 1)) {
    out.push_back({ComplementTag::C1, *w});
  } else if (auto w2 = window_violation(p.second, window_tape2(), 2)) {
    out.push_back({ComplementTag::C1, *w2});
  }

  // C2: a tape leaves its schedule shape altogether.
  {
    auto limit = [&](const TapeView& tv) -> std::uint64_t {
      if (!tv.stream.cyc.empty()) {
        return tv.stream.pre.size() + 2 * tv.stream.cyc.size();
      }
      return tv.stream.pre.size() + 1;
    };
    auto bad2 = first_invalid_unit(t2, limit(t2), 2);
    auto bad1 = first_invalid_unit(t1, limit(t1), 1);
    if (bad2) {
      out.push_back({ComplementTag::C2, bad2->second});
    } else if (bad1) {
      out.push_back({ComplementTag::C2, bad1->second});
    }
  }

  // C3: the odd 0-runs at the same index differ.
  if (auto m = match_family(t1, t2, ComplementTag::C3,
                            {0, 0, 1, 1, Slot::Marker, Slot::Marker, 0,
                             "tape-1 0-run", "tape-2 0-run"},
                            n_max)) {
    out.push_back(*m);
  }
  // C4: the even 0-runs at the same index differ.
  if (auto m = match_family(t1, t2, ComplementTag::C4,
                            {1, 1, 2, 2, Slot::Base, Slot::Marker, 0,
                             "tape-1 0-run", "tape-2 0-run"},
                            n_max)) {
    out.push_back(*m);
  }
  // C5: tape-1's even 0-run is not one longer than tape-2's previous odd run.
  if (auto m = match_family(t1, t2, ComplementTag::C5,
                            {1, 0, 2, 1, Slot::Base, Slot::Marker, 1,
                             "tape-1 0-run", "tape-2 0-run"},
                            n_max)) {
    out.push_back(*m);
  }
  // C6: tape-1's odd 0-run is not one longer than tape-2's previous even run.
  if (auto m = match_family(t1, t2, ComplementTag::C6,
                            {2, 1, 3, 2, Slot::Marker, Slot::Marker, 1,
                             "tape-1 0-run", "tape-2 0-run"},
                            n_max)) {
    out.push_back(*m);
  }

  return out;
}

// ---------------------------------------------------------------------------
// Integer-sequence coding and its guards

PatternWord encode_phi(const LassoWord& counts) {
  return PatternWord::phi_code(counts);
}

PhiDecoded decode_phi(const FiniteWord& prefix) {
  PhiDecoded out;
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const Letter& a = prefix[i];
    if (a == "1") {
      ++run;
    } else if (a == "0") {
      if (run < 2 || run % 2 != 0) {
        out.error_position = i + 1;
        return out;
      }
      out.values.push_back(run / 2 - 1);
      run = 0;
    } else {
      out.error_position = i + 1;
      return out;
    }
  }
  return out;
}

std::string to_string(PhiGuardTag tag) {
  switch (tag) {
    case PhiGuardTag::D2: return "D2";
    case PhiGuardTag::D3: return "D3";
    case PhiGuardTag::D4: return "D4";
  }
  return "?";
}

PhiGuards build_phi_guards() {
  const Alphabet bits({"0", "1"});
  PhiGuards g{BuchiAutomaton(bits), BuchiAutomaton(bits), BuchiAutomaton(bits),
              BuchiAutomaton(bits)};

  // Shared block-tracking core: count completed (11)+0 blocks mod 2 and the
  // parity of the current 1-run.  States: at a boundary with an even (E) or
  // odd (O) number of complete blocks, or inside a run.
  //   E0 boundary/even   Eo odd run   Ee even run (>= 2)
  //   O0 boundary/odd    Oo odd run   Oe even run (>= 2)
  auto core = [&](BuchiBuilder& b) {
    b.move(0, "1", 1);  // E0 -> Eo
    b.move(1, "1", 2);  // Eo -> Ee
    b.move(2, "1", 1);  // Ee -> Eo
    b.move(2, "0", 3);  // Ee -0-> O0: block closed
    b.move(3, "1", 4);  // O0 -> Oo
    b.move(4, "1", 5);  // Oo -> Oe
    b.move(5, "1", 4);  // Oe -> Oo
    b.move(5, "0", 0);  // Oe -0-> E0: block closed
  };
  auto sink = [&](BuchiBuilder& b, int q) {
    b.move(q, "0", q);
    b.move(q, "1", q);
  };

  {
    // D2: an odd run closed by 0 at an even block count; open condition, so
    // the match falls into an accepting universal sink.
    BuchiBuilder b("phi-D2", bits, {"E0", "Eo", "Ee", "O0", "Oo", "Oe", "hit", "dead"},
                   0, {6});
    core(b);
    b.move(1, "0", 6);  // Eo -0-> hit
    b.move(0, "0", 7);
    b.move(3, "0", 7);
    b.move(4, "0", 7);
    sink(b, 6);
    sink(b, 7);
    g.d2 = b.take();
  }
  {
    // D3: an odd block count followed by 1 forever; the tail is guessed.
    BuchiBuilder b("phi-D3", bits,
                   {"E0", "Eo", "Ee", "O0", "Oo", "Oe", "dead", "G1", "G2"}, 0,
                   {7, 8});
    core(b);
    b.move(0, "0", 6);
    b.move(1, "0", 6);
    b.move(3, "0", 6);
    b.move(4, "0", 6);
    sink(b, 6);
    b.move(3, "1", 7);  // guess: this 1-run never ends
    b.move(7, "1", 8);
    b.move(8, "1", 7);
    g.d3 = b.take();
  }
  {
    // D4: a 0 immediately after an odd block count.
    BuchiBuilder b("phi-D4", bits, {"E0", "Eo", "Ee", "O0", "Oo", "Oe", "hit", "dead"},
                   0, {6});
    core(b);
    b.move(3, "0", 6);  // O0 -0-> hit
    b.move(0, "0", 7);
    b.move(1, "0", 7);
    b.move(4, "0", 7);
    sink(b, 6);
    sink(b, 7);
    g.d4 = b.take();
  }
  {
    // The image [(11)+0]^w of the coding.
    BuchiBuilder b("phi-image", bits, {"start", "odd", "even", "closed"}, 0,
                   {3});
    b.move(0, "1", 1);
    b.move(1, "1", 2);
    b.move(2, "1", 1);
    b.move(2, "0", 3);
    b.move(3, "1", 1);
    g.image = b.take();
  }
  return g;
}

std::optional<PhiGuardClass> detect_phi_deviation(const FiniteWord& prefix) {
  std::uint64_t run = 0;
  bool odd_blocks = false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const Letter& a = prefix[i];
    if (a == "1") {
      ++run;
    } else if (a == "0") {
      if (run == 0) {
        if (odd_blocks) return PhiGuardClass{PhiGuardTag::D4, i + 1};
        return std::nullopt;  // deviation outside the guarded families
      }
      if (run % 2 == 1) {
        if (!odd_blocks) return PhiGuardClass{PhiGuardTag::D2, i + 1};
        return std::nullopt;
      }
      odd_blocks = !odd_blocks;
      run = 0;
    } else {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Gap coding

PatternWord encode_theta(const LassoWord& x, std::uint64_t s) {
  return PatternWord::theta_code(x, s);
}

DecodedPrefix decode_theta(const FiniteWord& prefix, std::uint64_t s) {
  if (s < 2) throw WordError("theta decode: S must be >= 2");
  DecodedPrefix out;
  constexpr std::uint64_t kFar = std::numeric_limits<std::uint64_t>::max() / 4;
  std::uint64_t gap = s;
  std::size_t idx = 0;
  while (idx < prefix.size()) {
    if (prefix[idx] == "E") {
      out.error_position = idx + 1;
      return out;
    }
    out.letters.push_back(prefix[idx]);
    ++idx;
    for (std::uint64_t g = 0; g < gap && idx < prefix.size(); ++g, ++idx) {
      if (prefix[idx] != "E") {
        out.error_position = idx + 1;
        return out;
      }
    }
    if (gap > kFar / s) {
      gap = kFar;
    } else {
      gap *= s;
    }
  }
  return out;
}

}  // namespace ratgame
