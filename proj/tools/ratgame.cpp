// Command-line front end: machine construction, membership, codings, play
// simulation, strategy transfer, universality solving, interchange files and
// the seeded self-check suites.
//
// Exit codes: 0 success / accepted / Player 1 wins / all checks pass;
//             1 rejected / Player 2 wins / any check fails;
//             2 unknown verdict / checks dominated by unknowns;
//             3 usage or data errors.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratgame/automata.hpp"
#include "ratgame/codings.hpp"
#include "ratgame/constructions.hpp"
#include "ratgame/format.hpp"
#include "ratgame/games.hpp"
#include "ratgame/membership.hpp"
#include "ratgame/suites.hpp"
#include "ratgame/words.hpp"

using namespace ratgame;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string bounds_text;
  int horizon = 400;
  std::string format = "text";

  SearchBounds bounds() const {
    SearchBounds b;
    if (bounds_text.empty()) return b;
    std::stringstream ss(bounds_text);
    std::string tok;
    std::vector<std::uint64_t> v;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoull(tok));
    if (v.empty() || v.size() > 3)
      throw WordError("--bounds expects depth[,counter[,blocks]]");
    b.max_depth = v[0];
    if (v.size() > 1) b.max_counter = v[1];
    if (v.size() > 2) b.max_blocks = v[2];
    return b;
  }
  bool json_mode() const { return format == "json"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WordError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw WordError("cannot write file: " + path);
  out << text;
}

// A machine argument is either the name of a bundled example machine or a
// path to an interchange file.
bool is_example(const std::string& spec) {
  for (const auto& name : example_machine_names())
    if (name == spec) return true;
  return false;
}

AnyAutomaton load_any(const std::string& spec) {
  if (is_example(spec)) return example_machine(spec);
  return parse_automaton(read_file(spec));
}

BuchiAutomaton load_one_tape(const std::string& spec, const std::string& why) {
  AnyAutomaton a = load_any(spec);
  if (auto* b = std::get_if<BuchiAutomaton>(&a)) return std::move(*b);
  throw WordError(why + " needs a one-tape machine, but " + spec +
                  " holds a different kind");
}

TwoTapeAutomaton load_two_tape(const std::string& spec,
                               const std::string& why) {
  AnyAutomaton a = load_any(spec);
  if (auto* t = std::get_if<TwoTapeAutomaton>(&a)) return std::move(*t);
  throw WordError(why + " needs a two-tape machine, but " + spec +
                  " holds a different kind");
}

std::string kind_of(const AnyAutomaton& a) {
  if (const auto* b = std::get_if<BuchiAutomaton>(&a))
    return b->num_counters > 0 ? "counter-buchi" : "buchi";
  if (std::holds_alternative<TwoTapeAutomaton>(a)) return "2tape-buchi";
  return "nfa";
}

Alphabet parse_alphabet_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string tok;
  std::vector<Letter> letters;
  while (std::getline(ss, tok, ',')) {
    const FiniteWord w = parse_letters(tok);
    if (w.size() != 1)
      throw WordError("--alphabet entries must be single letters, got '" +
                      tok + "'");
    letters.push_back(w[0]);
  }
  if (letters.empty()) throw WordError("--alphabet must list letters");
  return Alphabet(letters);
}

// --------------------------------------------------------------------------
// Strategy specifications.
//
//   const{<letter>}     always that letter; const{} plays the skip token
//   witness{<lasso>}    plays the lasso's letters at its own turns
//   mealy{states=N; init=I; emit=l1 l2 ... lN; m,l>m2; ...}
//                       finite-memory transducer; memory advances on every
//                       play letter via the m,l>m2 rules (missing: stay)
//   counter{init=m0; move:<mem>,<z|n|*>,<letter>;
//           obs:<mem>,<z|n|*>,<letter|*>,<own|opp|*>,<mem2|*>,<delta>; ...}
//                       memory string plus one counter; first matching rule
//                       wins; missing obs rules keep the state; delta is
//                       -1, 0 or +1 (never dropping below zero)

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

Letter one_letter(const std::string& text) {
  const FiniteWord w = parse_letters(trim(text));
  if (w.size() != 1)
    throw WordError("expected exactly one letter, got '" + text + "'");
  return w[0];
}

Strategy parse_mealy(const std::string& body, Player owner) {
  FiniteMemoryStrategy fm;
  fm.num_memories = 0;
  bool saw_emit = false;
  for (const std::string& raw : split(body, ';')) {
    const std::string item = trim(raw);
    if (item.empty()) continue;
    if (item.rfind("states=", 0) == 0) {
      fm.num_memories = std::stoi(item.substr(7));
    } else if (item.rfind("init=", 0) == 0) {
      fm.initial = std::stoi(item.substr(5));
    } else if (item.rfind("emit=", 0) == 0) {
      saw_emit = true;
      std::stringstream ss(item.substr(5));
      std::string tok;
      while (ss >> tok) fm.emit.push_back(one_letter(tok));
    } else {
      const std::size_t arrow = item.find('>');
      const std::size_t comma = item.find(',');
      if (arrow == std::string::npos || comma == std::string::npos ||
          comma > arrow)
        throw WordError("mealy rule must look like m,letter>m2: '" + item +
                        "'");
      const int m = std::stoi(trim(item.substr(0, comma)));
      const Letter l = one_letter(item.substr(comma + 1, arrow - comma - 1));
      const int m2 = std::stoi(trim(item.substr(arrow + 1)));
      fm.update[{m, l}] = m2;
    }
  }
  if (fm.num_memories == 0)
    fm.num_memories = static_cast<int>(fm.emit.size());
  if (!saw_emit)
    throw WordError("mealy strategies need emit=...");
  return Strategy{owner, std::move(fm)};
}

Strategy parse_counter_strategy(const std::string& body, Player owner) {
  struct MoveRule {
    std::string mem;  // "*" = any
    char zero;        // 'z', 'n' or '*'
    Letter letter;
  };
  struct ObsRule {
    std::string mem;
    char zero;
    Letter letter;  // empty = any
    char who;       // 'o' own, 'p' opponent, '*'
    std::string mem2;  // "*" = keep
    int delta;
  };
  auto zero_flag = [](const std::string& t) -> char {
    if (t == "z") return 'z';
    if (t == "n") return 'n';
    if (t == "*") return '*';
    throw WordError("counter rule expects z, n or * for the counter test, "
                    "got '" + t + "'");
  };
  std::vector<MoveRule> moves;
  std::vector<ObsRule> obs;
  std::string init = "start";
  for (const std::string& raw : split(body, ';')) {
    const std::string item = trim(raw);
    if (item.empty()) continue;
    if (item.rfind("init=", 0) == 0) {
      init = trim(item.substr(5));
    } else if (item.rfind("move:", 0) == 0) {
      const auto parts = split(item.substr(5), ',');
      if (parts.size() != 3)
        throw WordError("move rule must be move:<mem>,<z|n|*>,<letter>: '" +
                        item + "'");
      moves.push_back(
          {trim(parts[0]), zero_flag(trim(parts[1])), one_letter(parts[2])});
    } else if (item.rfind("obs:", 0) == 0) {
      const auto parts = split(item.substr(4), ',');
      if (parts.size() != 6)
        throw WordError(
            "obs rule must be "
            "obs:<mem>,<z|n|*>,<letter|*>,<own|opp|*>,<mem2|*>,<delta>: '" +
            item + "'");
      const std::string who = trim(parts[3]);
      if (who != "own" && who != "opp" && who != "*")
        throw WordError("obs rule expects own, opp or *, got '" + who + "'");
      const std::string lt = trim(parts[2]);
      obs.push_back({trim(parts[0]), zero_flag(trim(parts[1])),
                     lt == "*" ? Letter{} : one_letter(lt), who[0] == '*'
                                                                ? '*'
                                                            : who == "own"
                                                                ? 'o'
                                                                : 'p',
                     trim(parts[4]), std::stoi(trim(parts[5]))});
    } else {
      throw WordError("unknown counter strategy item: '" + item + "'");
    }
  }
  CounterAugmentedStrategy ca;
  ca.initial_memory = init;
  ca.initial_counter = 0;
  ca.move = [moves](const std::string& mem, std::uint64_t counter) -> Letter {
    for (const auto& r : moves) {
      if (r.mem != "*" && r.mem != mem) continue;
      if (r.zero == 'z' && counter != 0) continue;
      if (r.zero == 'n' && counter == 0) continue;
      return r.letter;
    }
    throw WordError("no move rule matches memory '" + mem + "' with counter " +
                    std::to_string(counter));
  };
  ca.observe = [obs](const std::string& mem, std::uint64_t counter,
                     const Letter& letter, bool own) {
    for (const auto& r : obs) {
      if (r.mem != "*" && r.mem != mem) continue;
      if (r.zero == 'z' && counter != 0) continue;
      if (r.zero == 'n' && counter == 0) continue;
      if (!r.letter.empty() && r.letter != letter) continue;
      if (r.who == 'o' && !own) continue;
      if (r.who == 'p' && own) continue;
      const std::string next = r.mem2 == "*" ? mem : r.mem2;
      std::uint64_t c = counter;
      if (r.delta > 0) c += static_cast<std::uint64_t>(r.delta);
      if (r.delta < 0) c = c >= static_cast<std::uint64_t>(-r.delta)
                                ? c - static_cast<std::uint64_t>(-r.delta)
                                : 0;
      return std::make_pair(next, c);
    }
    return std::make_pair(mem, counter);
  };
  return Strategy{owner, std::move(ca)};
}

Strategy parse_strategy(const std::string& spec, Player owner) {
  const std::string s = trim(spec);
  const std::size_t open = s.find('{');
  if (open == std::string::npos || s.empty() || s.back() != '}')
    throw WordError(
        "strategy spec must look like const{...}, witness{...}, mealy{...} "
        "or counter{...}: '" + spec + "'");
  const std::string kind = trim(s.substr(0, open));
  const std::string body = s.substr(open + 1, s.size() - open - 2);
  if (kind == "const") {
    const std::string b = trim(body);
    return constant_strategy(owner, b.empty() ? kSkipLetter : one_letter(b));
  }
  if (kind == "witness")
    return lasso_playing_strategy(owner, parse_lasso(trim(body)));
  if (kind == "mealy") return parse_mealy(body, owner);
  if (kind == "counter") return parse_counter_strategy(body, owner);
  throw WordError("unknown strategy kind '" + kind + "'");
}

// --------------------------------------------------------------------------
// Arena specifications for `play gs`:
//   coded:<machine>         coded winning-set game of a one-counter machine
//   universality:<machine>  interleaved universality game
//   buchi:<machine>         plain game with the machine's language (default)

GSArena parse_gs_arena(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind =
      colon == std::string::npos ? "buchi" : spec.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? spec : spec.substr(colon + 1);
  if (kind == "coded")
    return coded_arena(load_one_tape(rest, "a coded arena"));
  if (kind == "universality")
    return universality_arena(load_one_tape(rest, "a universality arena"));
  if (kind == "buchi")
    return buchi_arena(load_one_tape(rest, "a plain arena"));
  // No recognized prefix: treat the whole spec as a machine argument.
  return buchi_arena(load_one_tape(spec, "a plain arena"));
}

std::string render_moves(const FiniteWord& moves, std::size_t limit) {
  std::ostringstream os;
  const std::size_t n = std::min(limit, moves.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i) os << " ";
    os << (moves[i].empty() ? std::string("(skip)") : to_string(moves[i]));
  }
  if (moves.size() > n) os << " ...";
  return os.str();
}

json play_to_json(const PlayRecord& rec) {
  json j;
  j["verdict"] = to_string(rec.verdict);
  j["evidence"] = rec.evidence;
  j["moves"] = json::array();
  for (const auto& m : rec.moves) j["moves"].push_back(m);
  if (rec.exit_event)
    j["exit"] = {{"player", to_string(rec.exit_event->first)},
                 {"position", rec.exit_event->second}};
  if (rec.settled_play) j["settled"] = to_string(*rec.settled_play);
  return j;
}

int verdict_exit(GameVerdict v) {
  switch (v) {
    case GameVerdict::P1Wins: return 0;
    case GameVerdict::P2Wins: return 1;
    case GameVerdict::Undetermined: return 2;
  }
  return 2;
}

void print_play_text(const PlayRecord& rec) {
  std::cout << "play: " << render_moves(rec.moves, 48) << "\n";
  std::cout << "      (Player 1 authors the odd letters, Player 2 the even "
               "ones)\n";
  if (rec.exit_event)
    std::cout << "exit: " << to_string(rec.exit_event->first)
              << " left the coded prefixes at letter "
              << rec.exit_event->second << "\n";
  if (rec.settled_play)
    std::cout << "settled: " << to_string(*rec.settled_play) << "\n";
  std::cout << "verdict: " << to_string(rec.verdict) << "\n";
  if (!rec.evidence.empty()) std::cout << "evidence: " << rec.evidence << "\n";
}

// --------------------------------------------------------------------------
// Subcommand bodies.

int cmd_member(const GlobalOpts& g, const std::string& machine_spec,
               const std::string& word_expr) {
  const AnyAutomaton any = load_any(machine_spec);
  const SearchBounds bounds = g.bounds();
  Outcome outcome = Outcome::Unknown;
  std::string evidence;
  std::string certificate_note;
  if (const auto* nfa = std::get_if<FiniteAutomaton>(&any)) {
    const FiniteWord w = parse_letters(word_expr);
    outcome = nfa->accepts(w) ? Outcome::Accept : Outcome::Reject;
    evidence = "finite-word membership in the nfa";
  } else if (const auto* two = std::get_if<TwoTapeAutomaton>(&any)) {
    const PairWord p = parse_pair(word_expr);
    if (is_lasso_class(p.first) && is_lasso_class(p.second)) {
      outcome = lassopair_in_2tape(*two, as_lasso(p.first), as_lasso(p.second))
                    ? Outcome::Accept
                    : Outcome::Reject;
      evidence = "exact engine on the pair of ultimately periodic words";
    } else {
      const Verdict v = bounded_run_search(*two, p, bounds);
      outcome = v.outcome;
      evidence = v.evidence;
      if (v.certificate) {
        const bool ok = validate_certificate(*two, *v.certificate, 12);
        certificate_note =
            std::string("run certificate (prefix ") +
            std::to_string(v.certificate->prefix.size()) + ", loop " +
            std::to_string(v.certificate->loop.size()) + " segments) " +
            (ok ? "validated by a depth-12 replay" : "FAILED validation");
      }
    }
  } else {
    const BuchiAutomaton& b = std::get<BuchiAutomaton>(any);
    const OmegaWord w = parse_word(word_expr);
    if (is_lasso_class(w) && b.num_counters == 0 && b.is_realtime()) {
      outcome = lasso_in_buchi(b, as_lasso(w)) ? Outcome::Accept
                                               : Outcome::Reject;
      evidence = "exact engine on the ultimately periodic word";
    } else if (is_lasso_class(w) && b.num_counters > 0) {
      const Verdict v = lasso_in_counter(b, as_lasso(w), bounds);
      outcome = v.outcome;
      evidence = v.evidence;
    } else {
      const Verdict v = bounded_run_search(b, w, bounds);
      outcome = v.outcome;
      evidence = v.evidence;
    }
  }
  if (g.json_mode()) {
    json j;
    j["machine"] = machine_spec;
    j["kind"] = kind_of(any);
    j["word"] = word_expr;
    j["outcome"] = to_string(outcome);
    j["evidence"] = evidence;
    if (!certificate_note.empty()) j["certificate"] = certificate_note;
    j["bounds"] = bounds.to_string();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "machine: " << machine_spec << " (" << kind_of(any) << ")\n";
    std::cout << "word: " << word_expr << "\n";
    std::cout << "outcome: " << to_string(outcome) << "\n";
    if (!evidence.empty()) std::cout << "evidence: " << evidence << "\n";
    if (!certificate_note.empty())
      std::cout << "certificate: " << certificate_note << "\n";
  }
  switch (outcome) {
    case Outcome::Accept: return 0;
    case Outcome::Reject: return 1;
    case Outcome::Unknown: return 2;
  }
  return 2;
}

int cmd_code_prefix(const GlobalOpts& g, const std::string& coding,
                    const std::string& word_expr, std::uint64_t prefix_len,
                    std::uint64_t theta_s) {
  OmegaWord coded = PatternWord::alpha_word();
  if (coding == "h") {
    coded = OmegaWord(encode_h(parse_lasso(word_expr)));
  } else if (coding == "phi") {
    coded = OmegaWord(encode_phi(parse_lasso(word_expr)));
  } else if (coding == "theta") {
    coded = OmegaWord(encode_theta(parse_lasso(word_expr), theta_s));
  } else if (coding != "alpha") {
    throw WordError("unknown coding '" + coding + "'");
  }
  const FiniteWord prefix = word_prefix(coded, prefix_len);
  if (g.json_mode()) {
    json j;
    j["coding"] = coding;
    if (coding != "alpha") j["word"] = word_expr;
    j["prefix_length"] = prefix_len;
    j["prefix"] = to_string(prefix);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(prefix) << "\n";
  }
  return 0;
}

int cmd_code_classify(const GlobalOpts& g, const std::string& pair_expr,
                      const std::string& word_expr,
                      std::uint64_t prefix_len) {
  const SearchBounds bounds = g.bounds();
  if (!pair_expr.empty()) {
    const PairWord p = parse_pair(pair_expr);
    const auto classes = classify_complement(p, bounds);
    if (g.json_mode()) {
      json j;
      j["pair"] = pair_expr;
      j["classes"] = json::array();
      for (const auto& c : classes)
        j["classes"].push_back(
            {{"tag", to_string(c.tag)}, {"witness", c.witness}});
      std::cout << j.dump(2) << "\n";
    } else if (classes.empty()) {
      std::cout << "no complement family matches inside the probed region; "
                   "the pair looks coded\n";
    } else {
      for (const auto& c : classes)
        std::cout << to_string(c.tag) << ": " << c.witness << "\n";
    }
    return 0;
  }
  if (word_expr.empty())
    throw WordError("code classify needs --pair or --word");
  const OmegaWord w = parse_word(word_expr);
  const FiniteWord prefix = word_prefix(w, prefix_len);
  const auto hit = detect_phi_deviation(prefix);
  if (g.json_mode()) {
    json j;
    j["word"] = word_expr;
    j["prefix_length"] = prefix_len;
    if (hit)
      j["deviation"] = {{"tag", to_string(hit->tag)},
                        {"position", hit->position}};
    else
      j["deviation"] = nullptr;
    std::cout << j.dump(2) << "\n";
  } else if (hit) {
    std::cout << to_string(hit->tag) << " completed at letter "
              << hit->position << "\n";
  } else {
    std::cout << "no deviation completed in the first " << prefix_len
              << " letters\n";
  }
  return 0;
}

void write_machine(const std::string& path, const std::string& provenance,
                   const std::string& printed, const std::string& summary) {
  write_file(path, "# " + provenance + "\n" + printed);
  std::cout << "wrote " << path << " (" << summary << ")\n";
}

std::string buchi_summary(const BuchiAutomaton& a) {
  return (a.num_counters > 0 ? std::string("counter-buchi, ")
                             : std::string("buchi, ")) +
         std::to_string(a.num_states) + " states, " +
         std::to_string(a.transitions.size()) + " transitions";
}

std::string two_tape_summary(const TwoTapeAutomaton& a) {
  return "2tape-buchi, " + std::to_string(a.num_states) + " states, " +
         std::to_string(a.transitions.size()) + " transitions";
}

std::string nfa_summary(const FiniteAutomaton& a) {
  return "nfa, " + std::to_string(a.num_states) + " states, " +
         std::to_string(a.transitions.size()) + " transitions";
}

int cmd_build(const std::string& what, const std::string& in_spec,
              const std::string& out_path, const std::string& alphabet_csv,
              const std::string& part) {
  const auto alphabet = [&]() -> Alphabet {
    if (!alphabet_csv.empty()) return parse_alphabet_csv(alphabet_csv);
    if (!in_spec.empty())
      return load_one_tape(in_spec, "taking the alphabet").alphabet;
    return Alphabet({"a", "b"});
  };
  if (what == "r1") {
    const BuchiAutomaton a = load_one_tape(in_spec, "build r1");
    const TwoTapeAutomaton r1 = build_R1(a);
    write_machine(out_path,
                  "two-tape simulation of " + a.name +
                      " over coded pairs (ratgame build r1)",
                  print_automaton(r1), two_tape_summary(r1));
    return 0;
  }
  if (what == "r2") {
    const TwoTapeAutomaton r2 = build_R2(alphabet());
    write_machine(out_path,
                  "union of the six complement families (ratgame build r2)",
                  print_automaton(r2), two_tape_summary(r2));
    return 0;
  }
  if (what == "winning-set") {
    const BuchiAutomaton a = load_one_tape(in_spec, "build winning-set");
    const WinningSetBundle ws = build_winning_set(a);
    const TwoTapeAutomaton& chosen =
        part == "bprime" ? ws.bprime
        : part == "c"    ? ws.c
        : part == "cprime" ? ws.cprime
                           : ws.d;
    write_machine(out_path,
                  "winning-set machine (" + (part.empty() ? "d" : part) +
                      ") for " + a.name + " (ratgame build winning-set)",
                  print_automaton(chosen), two_tape_summary(chosen));
    return 0;
  }
  if (what == "interleave") {
    const BuchiAutomaton t = load_one_tape(in_spec, "build interleave");
    const BuchiAutomaton inter = build_interleaved_game(t);
    write_machine(out_path,
                  "interleaved-play game machine of " + t.name +
                      " (ratgame build interleave)",
                  print_automaton(inter), buchi_summary(inter));
    return 0;
  }
  if (what == "guards") {
    const GuardAutomata gd = build_guard_automata(alphabet());
    const std::string base =
        out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".aut"
            ? out_path.substr(0, out_path.size() - 4)
            : out_path;
    const auto put_buchi = [&](const std::string& tag,
                               const BuchiAutomaton& m) {
      write_machine(base + "." + tag + ".aut",
                    "schedule guard " + tag + " (ratgame build guards)",
                    print_automaton(m), buchi_summary(m));
    };
    const auto put_nfa = [&](const std::string& tag,
                             const FiniteAutomaton& m) {
      write_machine(base + "." + tag + ".aut",
                    "schedule guard " + tag + " (ratgame build guards)",
                    print_automaton(m), nfa_summary(m));
    };
    put_buchi("H", gd.H);
    put_buchi("Hp", gd.Hp);
    put_buchi("ClH", gd.ClH);
    put_buchi("ClHp", gd.ClHp);
    put_buchi("V0", gd.V0);
    put_buchi("Vp0", gd.Vp0);
    put_nfa("V", gd.V);
    put_nfa("Vp", gd.Vp);
    put_nfa("U", gd.U);
    return 0;
  }
  throw WordError("unknown build target '" + what + "'");
}

int cmd_play_gs(const GlobalOpts& g, const std::string& arena_spec,
                const std::string& s1_spec, const std::string& s2_spec) {
  const GSArena arena = parse_gs_arena(arena_spec);
  const Strategy s1 = parse_strategy(s1_spec, Player::P1);
  const Strategy s2 = parse_strategy(s2_spec, Player::P2);
  const PlayRecord rec = play_gs(arena, s1, s2, g.horizon);
  if (g.json_mode()) {
    json j = play_to_json(rec);
    j["arena"] = arena.name;
    j["horizon"] = g.horizon;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "arena: " << arena.name << "\n";
    print_play_text(rec);
  }
  return verdict_exit(rec.verdict);
}

int cmd_play_wadge(const GlobalOpts& g, const std::string& arena_spec,
                   const std::string& s1_spec, const std::string& s2_spec) {
  const auto comma = arena_spec.find(',');
  if (comma == std::string::npos)
    throw WordError(
        "a comparison arena is two machine arguments separated by a comma, "
        "e.g. inf-ones,inf-zeros");
  const BuchiAutomaton first =
      load_one_tape(trim(arena_spec.substr(0, comma)), "the first board");
  const BuchiAutomaton second =
      load_one_tape(trim(arena_spec.substr(comma + 1)), "the second board");
  if (first.num_counters > 0 || second.num_counters > 0)
    throw AutomatonError("comparison boards must be counterless machines");
  WadgeArena arena;
  arena.name = first.name + " vs " + second.name;
  arena.x = first.alphabet;
  arena.y = second.alphabet;
  arena.in_l = [first](const LassoWord& w) {
    return lasso_in_buchi(first, w);
  };
  arena.in_lp = [second](const LassoWord& w) {
    return lasso_in_buchi(second, w);
  };
  const Strategy s1 = parse_strategy(s1_spec, Player::P1);
  const Strategy s2 = parse_strategy(s2_spec, Player::P2);
  const PlayRecord rec = play_wadge(arena, s1, s2, g.horizon);
  if (g.json_mode()) {
    json j = play_to_json(rec);
    j["arena"] = arena.name;
    j["horizon"] = g.horizon;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "arena: " << arena.name << "\n";
    print_play_text(rec);
  }
  return verdict_exit(rec.verdict);
}

// Demonstration play for a transferred strategy against a conforming
// constant opponent; prints what was played and what it decodes to.
void demo_coded_play(const GlobalOpts& g, const BuchiAutomaton& a,
                     const Strategy& mine, Player owner, json* out) {
  const Strategy partner_base =
      constant_strategy(other_player(owner), a.alphabet.at(0));
  const Strategy partner =
      transfer_strategy_to_coded(a, partner_base, other_player(owner));
  const GSArena arena = coded_arena(a);
  const int horizon = std::min(g.horizon, 24);
  const PlayRecord rec =
      owner == Player::P1 ? play_gs(arena, mine, partner, horizon)
                          : play_gs(arena, partner, mine, horizon);
  FiniteWord tape1;
  for (const auto& m : rec.moves) tape1.push_back(Alphabet::split_pair(m).first);
  const DecodedPrefix dec = decode_h(tape1);
  if (out) {
    (*out)["demo"] = play_to_json(rec);
    (*out)["demo"]["recovered_base_letters"] = to_string(dec.letters);
  } else {
    std::cout << "demonstration against a conforming constant opponent:\n";
    print_play_text(rec);
    std::cout << "recovered base letters: " << to_string(dec.letters) << "\n";
  }
}

void demo_plain_play(const GlobalOpts& g, const BuchiAutomaton& a,
                     const Strategy& mine, Player owner, json* out) {
  GSArena arena;
  arena.name = "plain:" + a.name;
  arena.alphabet = a.alphabet;
  const SearchBounds bounds = g.bounds();
  arena.win_oracle = [a, bounds](const LassoWord& w) {
    return lasso_in_counter(a, w, bounds).outcome == Outcome::Accept;
  };
  const Strategy partner =
      constant_strategy(other_player(owner), a.alphabet.at(0));
  const int horizon = std::min(g.horizon, 24);
  const PlayRecord rec = owner == Player::P1
                             ? play_gs(arena, mine, partner, horizon)
                             : play_gs(arena, partner, mine, horizon);
  if (out) {
    (*out)["demo"] = play_to_json(rec);
  } else {
    std::cout << "demonstration against a constant opponent:\n";
    print_play_text(rec);
  }
}

void demo_phi_play(const GlobalOpts& g, const Strategy& mine, Player owner,
                   bool binary_side, json* out) {
  GSArena arena;
  arena.name = binary_side ? "binary demonstration" : "integer demonstration";
  arena.alphabet = binary_side
                       ? Alphabet({"0", "1"})
                       : Alphabet({"0", "1", "2", "3", "4", "5"});
  arena.win_oracle = [](const LassoWord&) { return false; };
  Strategy partner = constant_strategy(other_player(owner), "0");
  if (binary_side)
    partner = transfer_phi_strategy(partner, other_player(owner),
                                    PhiDirection::BaireToCantor);
  const int horizon = std::min(g.horizon, 24);
  try {
    const PlayRecord rec = owner == Player::P1
                               ? play_gs(arena, mine, partner, horizon)
                               : play_gs(arena, partner, mine, horizon);
    std::string decoded_note;
    if (binary_side) {
      const PhiDecoded dec = decode_phi(rec.moves);
      std::ostringstream os;
      for (std::size_t i = 0; i < dec.values.size(); ++i)
        os << (i ? " " : "") << dec.values[i];
      decoded_note = os.str();
    }
    if (out) {
      (*out)["demo"] = play_to_json(rec);
      if (binary_side) (*out)["demo"]["recovered_integers"] = decoded_note;
    } else {
      std::cout << "demonstration against a conforming constant opponent:\n";
      std::cout << "play: " << render_moves(rec.moves, 48) << "\n";
      if (binary_side)
        std::cout << "recovered integers: " << decoded_note << "\n";
      std::cout << "(no winning set attached: verdict not evaluated)\n";
    }
  } catch (const WordError& e) {
    if (out)
      (*out)["demo"] = {{"aborted", e.what()}};
    else
      std::cout << "demonstration stopped: " << e.what() << "\n";
  }
}

int cmd_transfer(const GlobalOpts& g, const std::string& machine_spec,
                 const std::string& strategy_spec, int owner_num,
                 const std::string& direction) {
  const Player owner = owner_num == 1 ? Player::P1 : Player::P2;
  json j;
  j["direction"] = direction;
  j["owner"] = to_string(owner);
  json* out = g.json_mode() ? &j : nullptr;
  if (!g.json_mode())
    std::cout << "carrying a " << to_string(owner) << " strategy ("
              << direction << ")\n";
  if (direction == "code" || direction == "decode") {
    if (machine_spec.empty())
      throw WordError("transfer --direction " + direction +
                      " needs --automaton");
    const BuchiAutomaton a = load_one_tape(machine_spec, "transfer");
    if (direction == "code") {
      const Strategy base = parse_strategy(strategy_spec, owner);
      const Strategy carried = transfer_strategy_to_coded(a, base, owner);
      demo_coded_play(g, a, carried, owner, out);
    } else {
      const Strategy coded = parse_strategy(strategy_spec, owner);
      const Strategy carried = extract_strategy_from_coded(a, coded, owner);
      demo_plain_play(g, a, carried, owner, out);
    }
  } else if (direction == "phi") {
    const Strategy base = parse_strategy(strategy_spec, owner);
    const Strategy carried =
        transfer_phi_strategy(base, owner, PhiDirection::BaireToCantor);
    demo_phi_play(g, carried, owner, true, out);
  } else if (direction == "phi-decode") {
    const Strategy coded = parse_strategy(strategy_spec, owner);
    const Strategy carried =
        transfer_phi_strategy(coded, owner, PhiDirection::CantorToBaire);
    demo_phi_play(g, carried, owner, false, out);
  } else {
    throw WordError("unknown direction '" + direction +
                    "' (expected code, decode, phi or phi-decode)");
  }
  if (g.json_mode()) std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_solve_universality(const GlobalOpts& g,
                           const std::string& machine_spec) {
  const BuchiAutomaton t = load_one_tape(machine_spec, "solve-universality");
  const UniversalitySolution sol = solve_universality_game(t);
  if (g.json_mode()) {
    json j;
    j["machine"] = machine_spec;
    j["winner"] = to_string(sol.winner);
    if (sol.rejected_witness)
      j["rejected_witness"] = to_string(*sol.rejected_witness);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "winner: " << to_string(sol.winner) << "\n";
    if (sol.winner == Player::P1) {
      std::cout << "the machine accepts every word; any constant strategy "
                   "wins the interleaved game\n";
    } else {
      std::cout << "rejected witness: " << to_string(*sol.rejected_witness)
                << "\n";
      std::cout << "Player 2 wins by playing the witness's letters at its "
                   "own turns\n";
    }
  }
  return 0;
}

int cmd_check(const GlobalOpts& g, const std::string& suite, int cases,
              std::uint64_t only_case) {
  SuiteConfig cfg;
  cfg.seed = g.seed;
  cfg.cases = cases;
  cfg.bounds = g.bounds();
  cfg.horizon = g.horizon;
  cfg.only_case = only_case;
  std::vector<std::string> names;
  if (suite == "all")
    names = registered_suites();
  else
    names.push_back(suite);
  bool any_failed = false;
  bool any_unknown_dominated = false;
  json all = json::array();
  for (const auto& name : names) {
    const SuiteReport r = run_suite(name, cfg);
    any_failed = any_failed || !r.ok();
    any_unknown_dominated = any_unknown_dominated || r.unknown_dominated();
    if (g.json_mode())
      all.push_back(json::parse(report_to_json(r)));
    else
      std::cout << report_to_text(r) << "\n";
  }
  if (g.json_mode())
    std::cout << (names.size() == 1 ? all[0].dump(2) : all.dump(2)) << "\n";
  if (any_failed) return 1;
  if (any_unknown_dominated) return 2;
  return 0;
}

int cmd_import(const GlobalOpts& g, const std::string& path) {
  const AnyAutomaton any = parse_automaton(read_file(path));
  std::visit([](const auto& m) { m.validate(); }, any);
  const std::string printed = print_automaton(any);
  const AnyAutomaton again = parse_automaton(printed);
  const bool stable = print_automaton(again) == printed;
  std::string name;
  std::string summary;
  if (const auto* b = std::get_if<BuchiAutomaton>(&any)) {
    name = b->name;
    summary = buchi_summary(*b);
  } else if (const auto* t = std::get_if<TwoTapeAutomaton>(&any)) {
    name = t->name;
    summary = two_tape_summary(*t);
  } else {
    summary = nfa_summary(std::get<FiniteAutomaton>(any));
  }
  if (g.json_mode()) {
    json j;
    j["file"] = path;
    j["kind"] = kind_of(any);
    j["name"] = name;
    j["summary"] = summary;
    j["round_trip_stable"] = stable;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "parsed " << path << ": " << summary
              << (name.empty() ? "" : ", name " + name) << "\n";
    std::cout << "round-trip: " << (stable ? "stable" : "NOT stable") << "\n";
  }
  return stable ? 0 : 1;
}

int cmd_export(const std::string& in_spec, const std::string& out_path) {
  const AnyAutomaton any = load_any(in_spec);
  std::visit([](const auto& m) { m.validate(); }, any);
  write_file(out_path, print_automaton(any));
  std::string summary;
  if (const auto* b = std::get_if<BuchiAutomaton>(&any))
    summary = buchi_summary(*b);
  else if (const auto* t = std::get_if<TwoTapeAutomaton>(&any))
    summary = two_tape_summary(*t);
  else
    summary = nfa_summary(std::get<FiniteAutomaton>(any));
  std::cout << "wrote " << out_path << " (" << summary << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "games over two-tape machines: block codings, membership engines, "
      "strategy transfer and seeded self-checks"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for randomized commands");
  app.add_option("--bounds", g.bounds_text,
                 "search bounds as depth[,counter[,blocks]]");
  app.add_option("--horizon", g.horizon, "rounds for play-based commands");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  int rc = 0;

  // member
  std::string member_machine, member_word;
  auto* member = app.add_subcommand(
      "member", "decide whether a word lies in a machine's language");
  member->fallthrough();
  member->add_option("--machine", member_machine,
                     "machine file or example name")->required();
  member->add_option("--word", member_word,
                     "word expression (a pair for two-tape machines)")
      ->required();
  member->callback([&] { rc = cmd_member(g, member_machine, member_word); });

  // code
  auto* code = app.add_subcommand("code", "letter codings and classifiers");
  code->require_subcommand(1);
  code->fallthrough();
  std::string code_word, code_pair;
  std::uint64_t code_prefix = 32, code_s = 2;
  for (const std::string kind : {"h", "alpha", "phi", "theta"}) {
    auto* sub = code->add_subcommand(
        kind, kind == "h"       ? "block coding of a base word"
              : kind == "alpha" ? "the fixed marked schedule word"
              : kind == "phi"   ? "run-length coding of an integer sequence"
                                : "gap coding with geometric spacers");
    sub->fallthrough();
    if (kind != "alpha")
      sub->add_option("--word", code_word, "base word (a lasso expression)")
          ->required();
    sub->add_option("--prefix", code_prefix, "letters to print");
    if (kind == "theta") sub->add_option("--s", code_s, "gap base (>= 2)");
    sub->callback([&, kind] {
      rc = cmd_code_prefix(g, kind, code_word, code_prefix, code_s);
    });
  }
  auto* classify = code->add_subcommand(
      "classify",
      "match a pair against the complement families, or scan a binary word "
      "for coding deviations");
  classify->fallthrough();
  classify->add_option("--pair", code_pair, "pair expression expr,expr");
  classify->add_option("--word", code_word, "binary word expression");
  classify->add_option("--prefix", code_prefix, "letters to scan (--word)");
  classify->callback(
      [&] { rc = cmd_code_classify(g, code_pair, code_word, code_prefix); });

  // build
  auto* build = app.add_subcommand("build", "construct machines");
  build->require_subcommand(1);
  build->fallthrough();
  std::string build_in, build_out, build_alphabet, build_part;
  for (const std::string what :
       {"r1", "r2", "winning-set", "interleave", "guards"}) {
    auto* sub = build->add_subcommand(
        what,
        what == "r1" ? "two-tape simulation of a one-counter machine"
        : what == "r2"
            ? "union of the six complement families"
        : what == "winning-set"
            ? "winning-set machine of a one-counter machine"
        : what == "interleave"
            ? "interleaved-play game machine"
            : "schedule guard machines (writes one file per guard)");
    sub->fallthrough();
    if (what == "r1" || what == "winning-set" || what == "interleave")
      sub->add_option("--in", build_in, "machine file or example name")
          ->required();
    else
      sub->add_option("--in", build_in,
                      "machine file or example name (alphabet source)");
    sub->add_option("--out", build_out, "output path")->required();
    if (what == "r2" || what == "guards")
      sub->add_option("--alphabet", build_alphabet,
                      "base letters, comma separated (default a,b)");
    if (what == "winning-set")
      sub->add_option("--part", build_part,
                      "which machine to write: bprime, c, cprime or d "
                      "(default d)")
          ->check(CLI::IsMember({"bprime", "c", "cprime", "d"}));
    sub->callback([&, what] {
      rc = cmd_build(what, build_in, build_out, build_alphabet, build_part);
    });
  }

  // play
  auto* play = app.add_subcommand("play", "simulate strategy plays");
  play->require_subcommand(1);
  play->fallthrough();
  std::string play_arena, play_s1, play_s2;
  auto* gs = play->add_subcommand(
      "gs", "alternating single-letter play against a winning set");
  gs->fallthrough();
  gs->add_option("--arena", play_arena,
                 "coded:<machine>, universality:<machine>, buchi:<machine> "
                 "or a machine argument")
      ->required();
  gs->add_option("--s1", play_s1, "Player 1 strategy spec")->required();
  gs->add_option("--s2", play_s2, "Player 2 strategy spec")->required();
  gs->callback([&] { rc = cmd_play_gs(g, play_arena, play_s1, play_s2); });
  auto* wadge = play->add_subcommand(
      "wadge", "two-board comparison play (Player 2 may skip)");
  wadge->fallthrough();
  wadge->add_option("--arena", play_arena,
                    "two machine arguments separated by a comma")
      ->required();
  wadge->add_option("--s1", play_s1, "Player 1 strategy spec")->required();
  wadge->add_option("--s2", play_s2, "Player 2 strategy spec")->required();
  wadge->callback(
      [&] { rc = cmd_play_wadge(g, play_arena, play_s1, play_s2); });

  // transfer
  auto* transfer = app.add_subcommand(
      "transfer", "carry a strategy through a coding and demonstrate it");
  transfer->fallthrough();
  std::string tr_machine, tr_strategy, tr_direction = "code";
  int tr_owner = 1;
  transfer->add_option("--automaton", tr_machine,
                       "one-counter machine (code/decode directions)");
  transfer->add_option("--strategy", tr_strategy, "strategy spec")
      ->required();
  transfer->add_option("--owner", tr_owner, "seat of the strategy: 1 or 2")
      ->check(CLI::IsMember({1, 2}));
  transfer->add_option("--direction", tr_direction,
                       "code, decode, phi or phi-decode");
  transfer->callback([&] {
    rc = cmd_transfer(g, tr_machine, tr_strategy, tr_owner, tr_direction);
  });

  // solve-universality
  auto* solve = app.add_subcommand(
      "solve-universality",
      "decide the interleaved game of a deterministic complete machine");
  solve->fallthrough();
  std::string solve_machine;
  solve->add_option("--automaton", solve_machine,
                    "machine file or example name")->required();
  solve->callback([&] { rc = cmd_solve_universality(g, solve_machine); });

  // check
  auto* check = app.add_subcommand("check", "run a seeded self-check suite");
  check->fallthrough();
  std::string check_suite;
  int check_cases = 0;
  std::uint64_t check_only = 0;
  check->add_option("suite", check_suite,
                    "suite name or 'all' (see --list)")->required();
  check->add_option("--cases", check_cases, "number of cases (0 = default)");
  check->add_option("--only", check_only, "run a single case by index");
  check->callback([&] {
    if (check_suite == "list") {
      for (const auto& s : registered_suites()) std::cout << s << "\n";
      rc = 0;
      return;
    }
    rc = cmd_check(g, check_suite, check_cases, check_only);
  });

  // import / export
  auto* import_cmd = app.add_subcommand(
      "import", "parse, validate and summarize an interchange file");
  import_cmd->fallthrough();
  std::string import_in;
  import_cmd->add_option("--in", import_in, "interchange file")->required();
  import_cmd->callback([&] { rc = cmd_import(g, import_in); });

  auto* export_cmd = app.add_subcommand(
      "export", "write a machine (bundled example or file) canonically");
  export_cmd->fallthrough();
  std::string export_in, export_out;
  export_cmd->add_option("--in", export_in, "machine file or example name")
      ->required();
  export_cmd->add_option("--out", export_out, "output path")->required();
  export_cmd->callback([&] { rc = cmd_export(export_in, export_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
