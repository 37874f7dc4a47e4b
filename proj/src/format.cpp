#include "ratgame/format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace ratgame {

namespace {

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  return out.empty() ? "_" : out;
}

std::vector<std::string> names_of(int n, const std::vector<std::string>& given) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i)
    names[i] = (i < static_cast<int>(given.size()) && !given[i].empty())
                   ? sanitize(given[i])
                   : std::to_string(i);
  // Disambiguate duplicates so the format stays parseable.
  std::map<std::string, int> seen;
  for (int i = 0; i < n; ++i) {
    int k = seen[names[i]]++;
    if (k > 0) names[i] += "#" + std::to_string(k);
  }
  // A lone digit-only name would read back as a state count; qualify it.
  if (n == 1 && names[0] != "0" &&
      std::all_of(names[0].begin(), names[0].end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    names[0] = "q" + names[0];
  return names;
}

/// True when names are exactly the default "0", "1", ..., n-1 labels, in
/// which case the compact count form of the states header is used.
bool default_named(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] != std::to_string(i)) return false;
  return true;
}

void print_states_line(std::ostringstream& os,
                       const std::vector<std::string>& names) {
  if (default_named(names)) {
    os << "states: " << names.size() << "\n";
    return;
  }
  os << "states:";
  for (const auto& n : names) os << ' ' << n;
  os << "\n";
}

void print_alphabet_line(std::ostringstream& os, const Alphabet& ab) {
  bool first = true;
  for (const Letter& a : ab.letters()) {
    if (!first) os << ' ';
    os << to_string(a);
    first = false;
  }
}

std::string quote_word(const FiniteWord& w) { return "\"" + to_string(w) + "\""; }

// Annotation values may hold arbitrary text (including newlines and '#'),
// so they are carried as single percent-encoded tokens.
bool plain_annotation_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
         c == '_' || c == '~' || c == ':' || c == '-';
}

std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    if (plain_annotation_char(c)) {
      out += c;
    } else {
      const auto b = static_cast<unsigned char>(c);
      out += '%';
      out += hex[b >> 4];
      out += hex[b & 0xF];
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string percent_decode(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%') {
      if (i + 2 >= s.size())
        throw FormatError("truncated percent escape in annotation value");
      const int hi = hex_value(s[i + 1]);
      const int lo = hex_value(s[i + 2]);
      if (hi < 0 || lo < 0)
        throw FormatError("bad percent escape in annotation value");
      out += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

std::string print_automaton(const BuchiAutomaton& a) {
  std::ostringstream os;
  os << "kind: " << (a.num_counters > 0 ? "counter-buchi" : "buchi") << "\n";
  if (!a.name.empty()) os << "name: " << sanitize(a.name) << "\n";
  os << "alphabet: ";
  print_alphabet_line(os, a.alphabet);
  os << "\n";
  auto names = names_of(a.num_states, a.state_names);
  print_states_line(os, names);
  os << "initial: " << names[a.initial] << "\n";
  os << "accepting:";
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) os << ' ' << names[q];
  os << "\n";
  if (a.num_counters > 0) {
    os << "counters: " << a.num_counters << "\n";
    os << "realtime: " << (a.is_realtime() ? "true" : "false") << "\n";
  }
  os << "transitions:\n";
  for (const Transition& t : a.transitions) {
    os << names[t.from] << ' '
       << (t.letter.empty() ? std::string("~") : to_string(t.letter));
    for (int m = 0; m < a.num_counters; ++m)
      os << ' ' << t.zero_tests[m] << ' ' << t.deltas[m];
    os << ' ' << names[t.to] << "\n";
  }
  return os.str();
}

std::string print_automaton(const TwoTapeAutomaton& a) {
  std::ostringstream os;
  os << "kind: 2tape-buchi\n";
  if (!a.name.empty()) os << "name: " << sanitize(a.name) << "\n";
  os << "alphabet: ";
  print_alphabet_line(os, a.alphabet1);
  os << " | ";
  print_alphabet_line(os, a.alphabet2);
  os << "\n";
  auto names = names_of(a.num_states, a.state_names);
  print_states_line(os, names);
  os << "initial: " << names[a.initial] << "\n";
  os << "accepting:";
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) os << ' ' << names[q];
  os << "\n";
  for (const auto& [key, value] : a.annotations)
    os << "annotation." << key << ": " << percent_encode(value) << "\n";
  os << "transitions:\n";
  for (const Transition2& t : a.transitions)
    os << names[t.from] << ' ' << quote_word(t.first) << ' '
       << quote_word(t.second) << ' ' << names[t.to] << "\n";
  return os.str();
}

std::string print_automaton(const FiniteAutomaton& a) {
  std::ostringstream os;
  os << "kind: nfa\n";
  os << "alphabet: ";
  print_alphabet_line(os, a.alphabet);
  os << "\n";
  std::vector<std::string> names(a.num_states);
  for (int i = 0; i < a.num_states; ++i) names[i] = std::to_string(i);
  print_states_line(os, names);
  os << "initial: " << names[a.initial] << "\n";
  os << "final:";
  for (int q = 0; q < a.num_states; ++q)
    if (a.final_states[q]) os << ' ' << names[q];
  os << "\n";
  os << "transitions:\n";
  for (const auto& [from, letter, to] : a.transitions)
    os << names[from] << ' ' << to_string(letter) << ' ' << names[to] << "\n";
  return os.str();
}

std::string print_automaton(const AnyAutomaton& a) {
  return std::visit([](const auto& m) { return print_automaton(m); }, a);
}

namespace {

struct RawAutomaton {
  std::map<std::string, std::string> headers;
  std::vector<std::vector<std::string>> transition_lines;
};

/// Splits a transition line into tokens; quoted segments (for 2-tape labels)
/// become single tokens with the quotes kept.
std::vector<std::string> tokenize_line(const std::string& line, int lineno) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '"') {
      std::size_t j = line.find('"', i + 1);
      if (j == std::string::npos)
        throw FormatError("line " + std::to_string(lineno) +
                          ": unterminated quote");
      tokens.push_back(line.substr(i, j - i + 1));
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[j])))
        ++j;
      tokens.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return tokens;
}

RawAutomaton scan_raw(const std::string& text) {
  RawAutomaton raw;
  std::istringstream is(text);
  std::string line;
  bool in_transitions = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
    if (blank) continue;
    if (!in_transitions) {
      auto colon = line.find(':');
      if (colon == std::string::npos)
        throw FormatError("line " + std::to_string(lineno) +
                          ": expected 'key: value' header");
      std::string key = line.substr(0, colon);
      key.erase(std::remove_if(key.begin(), key.end(),
                               [](char c) {
                                 return std::isspace(
                                     static_cast<unsigned char>(c));
                               }),
                key.end());
      std::string value = line.substr(colon + 1);
      if (key == "transitions") {
        in_transitions = true;
        continue;
      }
      if (raw.headers.count(key))
        throw FormatError("line " + std::to_string(lineno) +
                          ": duplicate header '" + key + "'");
      raw.headers[key] = value;
    } else {
      raw.transition_lines.push_back(tokenize_line(line, lineno));
    }
  }
  if (!raw.headers.count("kind")) throw FormatError("missing 'kind:' header");
  return raw;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Alphabet parse_alphabet_tokens(const std::vector<std::string>& tokens) {
  std::vector<Letter> letters;
  for (const std::string& tok : tokens) {
    FiniteWord w = parse_letters(tok);
    if (w.size() != 1)
      throw FormatError("alphabet token '" + tok + "' is not a single letter");
    letters.push_back(w[0]);
  }
  return Alphabet(letters);
}

struct StateTable {
  std::vector<std::string> names;
  std::map<std::string, int> index;

  int lookup(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end())
      throw FormatError("unknown state '" + name + "'");
    return it->second;
  }
};

StateTable parse_states(const RawAutomaton& raw) {
  auto it = raw.headers.find("states");
  if (it == raw.headers.end()) throw FormatError("missing 'states:' header");
  std::vector<std::string> tokens = split_tokens(it->second);
  StateTable table;
  if (tokens.size() == 1 &&
      std::all_of(tokens[0].begin(), tokens[0].end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    int n = std::stoi(tokens[0]);
    for (int i = 0; i < n; ++i) table.names.push_back(std::to_string(i));
  } else {
    table.names = tokens;
  }
  for (std::size_t i = 0; i < table.names.size(); ++i)
    if (!table.index.emplace(table.names[i], static_cast<int>(i)).second)
      throw FormatError("duplicate state name '" + table.names[i] + "'");
  return table;
}

std::vector<bool> parse_state_set(const RawAutomaton& raw,
                                  const StateTable& table,
                                  const std::string& key) {
  std::vector<bool> mask(table.names.size(), false);
  auto it = raw.headers.find(key);
  if (it == raw.headers.end()) return mask;
  for (const std::string& tok : split_tokens(it->second))
    mask[table.lookup(tok)] = true;
  return mask;
}

Letter parse_letter_token(const std::string& tok) {
  FiniteWord w = parse_letters(tok);
  if (w.size() != 1)
    throw FormatError("'" + tok + "' is not a single letter");
  return w[0];
}

BuchiAutomaton parse_buchi(const RawAutomaton& raw, bool counters) {
  auto ab_it = raw.headers.find("alphabet");
  if (ab_it == raw.headers.end())
    throw FormatError("missing 'alphabet:' header");
  BuchiAutomaton a(parse_alphabet_tokens(split_tokens(ab_it->second)));
  if (raw.headers.count("name")) a.name = trimmed(raw.headers.at("name"));
  StateTable table = parse_states(raw);
  a.num_states = static_cast<int>(table.names.size());
  a.state_names = table.names;
  auto init_it = raw.headers.find("initial");
  if (init_it == raw.headers.end())
    throw FormatError("missing 'initial:' header");
  a.initial = table.lookup(trimmed(init_it->second));
  a.accepting = parse_state_set(raw, table, "accepting");
  if (counters) {
    auto c_it = raw.headers.find("counters");
    a.num_counters = c_it == raw.headers.end() ? 1 : std::stoi(c_it->second);
    if (a.num_counters < 1)
      throw FormatError("counter-buchi needs 'counters:' >= 1");
  }
  for (const auto& tokens : raw.transition_lines) {
    std::size_t expected = 3 + 2 * static_cast<std::size_t>(a.num_counters);
    if (tokens.size() != expected)
      throw FormatError("transition line has " +
                        std::to_string(tokens.size()) + " tokens, expected " +
                        std::to_string(expected));
    Transition t;
    t.from = table.lookup(tokens[0]);
    t.letter = tokens[1] == "~" ? Letter("") : parse_letter_token(tokens[1]);
    for (int m = 0; m < a.num_counters; ++m) {
      t.zero_tests.push_back(std::stoi(tokens[2 + 2 * m]));
      t.deltas.push_back(std::stoi(tokens[3 + 2 * m]));
    }
    t.to = table.lookup(tokens.back());
    a.transitions.push_back(std::move(t));
  }
  a.validate();
  return a;
}

TwoTapeAutomaton parse_2tape(const RawAutomaton& raw) {
  auto ab_it = raw.headers.find("alphabet");
  if (ab_it == raw.headers.end())
    throw FormatError("missing 'alphabet:' header");
  std::vector<std::string> tokens = split_tokens(ab_it->second);
  auto bar = std::find(tokens.begin(), tokens.end(), "|");
  if (bar == tokens.end())
    throw FormatError("2tape alphabet needs 'tape1 letters | tape2 letters'");
  TwoTapeAutomaton a(
      parse_alphabet_tokens({tokens.begin(), bar}),
      parse_alphabet_tokens({bar + 1, tokens.end()}));
  if (raw.headers.count("name")) a.name = trimmed(raw.headers.at("name"));
  StateTable table = parse_states(raw);
  a.num_states = static_cast<int>(table.names.size());
  a.state_names = table.names;
  auto init_it = raw.headers.find("initial");
  if (init_it == raw.headers.end())
    throw FormatError("missing 'initial:' header");
  a.initial = table.lookup(trimmed(init_it->second));
  a.accepting = parse_state_set(raw, table, "accepting");
  for (const auto& [key, value] : raw.headers)
    if (key.rfind("annotation.", 0) == 0)
      a.annotations[key.substr(11)] = percent_decode(trimmed(value));
  for (const auto& toks : raw.transition_lines) {
    if (toks.size() != 4)
      throw FormatError("2tape transition needs: from \"u\" \"v\" to");
    auto unquote = [](const std::string& t) -> FiniteWord {
      if (t.size() < 2 || t.front() != '"' || t.back() != '"')
        throw FormatError("2tape label '" + t + "' must be quoted");
      return parse_letters(t.substr(1, t.size() - 2));
    };
    a.transitions.push_back({table.lookup(toks[0]), unquote(toks[1]),
                             unquote(toks[2]), table.lookup(toks[3])});
  }
  a.validate();
  return a;
}

FiniteAutomaton parse_nfa(const RawAutomaton& raw) {
  auto ab_it = raw.headers.find("alphabet");
  if (ab_it == raw.headers.end())
    throw FormatError("missing 'alphabet:' header");
  FiniteAutomaton a(parse_alphabet_tokens(split_tokens(ab_it->second)));
  StateTable table = parse_states(raw);
  a.num_states = static_cast<int>(table.names.size());
  auto init_it = raw.headers.find("initial");
  if (init_it == raw.headers.end())
    throw FormatError("missing 'initial:' header");
  a.initial = table.lookup(trimmed(init_it->second));
  a.final_states = parse_state_set(raw, table, "final");
  for (const auto& tokens : raw.transition_lines) {
    if (tokens.size() != 3)
      throw FormatError("nfa transition needs: from letter to");
    a.transitions.emplace_back(table.lookup(tokens[0]),
                               parse_letter_token(tokens[1]),
                               table.lookup(tokens[2]));
  }
  a.validate();
  return a;
}

}  // namespace

AnyAutomaton parse_automaton(const std::string& text) {
  RawAutomaton raw = scan_raw(text);
  std::string kind = trimmed(raw.headers.at("kind"));
  if (kind == "buchi") return parse_buchi(raw, false);
  if (kind == "counter-buchi") return parse_buchi(raw, true);
  if (kind == "2tape-buchi") return parse_2tape(raw);
  if (kind == "nfa") return parse_nfa(raw);
  throw FormatError("unknown kind '" + kind + "'");
}

}  // namespace ratgame
