#include "ratgame/games.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <utility>

namespace ratgame {

std::string to_string(Player p) {
  return p == Player::P1 ? "Player 1" : "Player 2";
}

Player other_player(Player p) {
  return p == Player::P1 ? Player::P2 : Player::P1;
}

std::string to_string(GameVerdict v) {
  switch (v) {
    case GameVerdict::P1Wins: return "Player 1 wins";
    case GameVerdict::P2Wins: return "Player 2 wins";
    case GameVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

Strategy constant_strategy(Player owner, const Letter& a) {
  FiniteMemoryStrategy fm;
  fm.num_memories = 1;
  fm.initial = 0;
  fm.emit = {a};
  return Strategy{owner, std::move(fm)};
}

Strategy lasso_playing_strategy(Player owner, const LassoWord& w) {
  const LassoWord word = normalize_lasso(w);
  CounterAugmentedStrategy ca;
  ca.initial_memory = "1";
  ca.initial_counter = 0;
  ca.move = [word](const std::string& mem, std::uint64_t) {
    return lasso_class_letter(word, std::stoull(mem));
  };
  ca.observe = [word](const std::string& mem, std::uint64_t counter,
                      const Letter&, bool own) {
    if (!own) return std::make_pair(mem, counter);
    return std::make_pair(
        std::to_string(lasso_class_next(word, std::stoull(mem))), counter);
  };
  return Strategy{owner, std::move(ca)};
}

// ---------------------------------------------------------------------------
// StrategyRuntime

StrategyRuntime::StrategyRuntime(const Strategy& s) : strategy_(&s) {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&s.body)) {
    if (fm->num_memories <= 0 ||
        fm->emit.size() != static_cast<std::size_t>(fm->num_memories)) {
      throw WordError("finite-memory strategy needs one move per memory");
    }
    if (fm->initial < 0 || fm->initial >= fm->num_memories) {
      throw WordError("finite-memory strategy initial memory out of range");
    }
    memory_int_ = fm->initial;
  } else if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&s.body)) {
    if (!ca->move || !ca->observe) {
      throw WordError("counter-augmented strategy needs move and observe");
    }
    memory_ = ca->initial_memory;
    counter_ = ca->initial_counter;
  }
}

Letter StrategyRuntime::own_move() const {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&strategy_->body)) {
    return fm->emit.at(static_cast<std::size_t>(memory_int_));
  }
  if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&strategy_->body)) {
    return ca->move(memory_, counter_);
  }
  return std::get<CallbackStrategy>(strategy_->body)(history_);
}

void StrategyRuntime::observe(const Letter& a, bool own) {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&strategy_->body)) {
    auto it = fm->update.find({memory_int_, a});
    if (it != fm->update.end()) {
      if (it->second < 0 || it->second >= fm->num_memories) {
        throw WordError("finite-memory strategy update target out of range");
      }
      memory_int_ = it->second;
    }
    return;
  }
  if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&strategy_->body)) {
    auto next = ca->observe(memory_, counter_, a, own);
    memory_ = std::move(next.first);
    counter_ = next.second;
    return;
  }
  history_.push_back(a);
}

std::optional<std::string> StrategyRuntime::state_key() const {
  if (std::holds_alternative<FiniteMemoryStrategy>(strategy_->body)) {
    return "m" + std::to_string(memory_int_);
  }
  if (std::holds_alternative<CounterAugmentedStrategy>(strategy_->body)) {
    return memory_ + "#" + std::to_string(counter_);
  }
  return std::nullopt;
}

bool StrategyRuntime::finite_state() const {
  return std::holds_alternative<FiniteMemoryStrategy>(strategy_->body);
}

std::uint64_t StrategyRuntime::state_space() const {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&strategy_->body)) {
    return static_cast<std::uint64_t>(fm->num_memories);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Memory-string serialization helpers

namespace {

void put_blob(std::string& out, const std::string& blob) {
  out += std::to_string(blob.size());
  out += ':';
  out += blob;
}

std::uint64_t parse_u64(const std::string& text) {
  if (text.empty()) throw WordError("expected a number, got an empty field");
  std::uint64_t value = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw WordError("expected a number, got '" + text + "'");
    }
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

/// Reader over the serialized memory strings produced below.
struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  explicit Cursor(const std::string& text, std::size_t start = 0)
      : s(text), pos(start) {}

  std::string blob() {
    std::size_t colon = s.find(':', pos);
    if (colon == std::string::npos) {
      throw WordError("corrupt strategy memory: missing blob length");
    }
    std::uint64_t len = parse_u64(s.substr(pos, colon - pos));
    if (colon + 1 + len > s.size()) {
      throw WordError("corrupt strategy memory: blob overruns");
    }
    std::string out = s.substr(colon + 1, len);
    pos = colon + 1 + len;
    return out;
  }
};

std::string memory_mode(const std::string& memory) {
  std::size_t bar = memory.find('|');
  return bar == std::string::npos ? memory : memory.substr(0, bar);
}

std::size_t mode_end(const std::string& memory) {
  std::size_t bar = memory.find('|');
  return bar == std::string::npos ? memory.size() : bar + 1;
}

std::string joined_subset(const std::vector<int>& states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(states[i]);
  }
  return out;
}

std::vector<int> parse_subset(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(
        static_cast<int>(parse_u64(text.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return out;
}

using NfaSteps = std::map<std::pair<int, Letter>, std::vector<int>>;

NfaSteps nfa_steps(const FiniteAutomaton& a) {
  NfaSteps steps;
  for (const auto& [from, letter, to] : a.transitions) {
    steps[{from, letter}].push_back(to);
  }
  return steps;
}

std::vector<int> step_subset(const NfaSteps& steps,
                             const std::vector<int>& states, const Letter& a) {
  std::set<int> out;
  for (int q : states) {
    auto it = steps.find({q, a});
    if (it == steps.end()) continue;
    out.insert(it->second.begin(), it->second.end());
  }
  return std::vector<int>(out.begin(), out.end());
}

// ---------------------------------------------------------------------------
// Coded-pair position arithmetic.  Unit i of the coded tapes is an i-letter
// zero run, a marker letter when i is odd, and one payload letter; payload i
// sits at position units_total(i), whose parity equals the parity of i.

enum class SlotKind { Zero, Marker, Payload };

struct SlotInfo {
  SlotKind kind = SlotKind::Zero;
  std::uint64_t unit = 1;
};

std::uint64_t units_total(std::uint64_t i) {
  return i * (i + 1) / 2 + i + (i + 1) / 2;
}

SlotInfo classify_position(std::uint64_t p) {
  std::uint64_t i = 1;
  while (units_total(i) < p) ++i;
  const std::uint64_t off = p - units_total(i - 1);
  if (off <= i) return {SlotKind::Zero, i};
  if (i % 2 == 1 && off == i + 1) return {SlotKind::Marker, i};
  return {SlotKind::Payload, i};
}

Letter tape2_letter(const SlotInfo& slot) {
  return slot.kind == SlotKind::Zero ? "0" : "A";
}

Player position_author(std::uint64_t p) {
  return p % 2 == 1 ? Player::P1 : Player::P2;
}

// ---------------------------------------------------------------------------
// Pure-functional view of an embedded strategy.  The embedding is a string:
//   F<memory>                  finite-memory body
//   C<len>:<memory><counter>   counter-augmented body
//   B<len>:<history>           callback body (history in letter syntax)

std::string embed_initial(const Strategy& s) {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&s.body)) {
    return "F" + std::to_string(fm->initial);
  }
  if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&s.body)) {
    std::string out = "C";
    put_blob(out, ca->initial_memory);
    out += std::to_string(ca->initial_counter);
    return out;
  }
  std::string out = "B";
  put_blob(out, "");
  return out;
}

Letter embed_move(const Strategy& s, const std::string& state) {
  if (state.empty()) throw WordError("corrupt embedded strategy state");
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&s.body)) {
    if (state[0] != 'F') throw WordError("corrupt embedded strategy state");
    const auto m = parse_u64(state.substr(1));
    return fm->emit.at(static_cast<std::size_t>(m));
  }
  if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&s.body)) {
    if (state[0] != 'C') throw WordError("corrupt embedded strategy state");
    Cursor c(state, 1);
    const std::string memory = c.blob();
    const std::uint64_t counter = parse_u64(state.substr(c.pos));
    return ca->move(memory, counter);
  }
  if (state[0] != 'B') throw WordError("corrupt embedded strategy state");
  Cursor c(state, 1);
  return std::get<CallbackStrategy>(s.body)(parse_letters(c.blob()));
}

std::string embed_observe(const Strategy& s, const std::string& state,
                          const Letter& a, bool own) {
  if (state.empty()) throw WordError("corrupt embedded strategy state");
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&s.body)) {
    auto m = static_cast<int>(parse_u64(state.substr(1)));
    auto it = fm->update.find({m, a});
    if (it != fm->update.end()) m = it->second;
    return "F" + std::to_string(m);
  }
  if (const auto* ca = std::get_if<CounterAugmentedStrategy>(&s.body)) {
    Cursor c(state, 1);
    const std::string memory = c.blob();
    const std::uint64_t counter = parse_u64(state.substr(c.pos));
    auto next = ca->observe(memory, counter, a, own);
    std::string out = "C";
    put_blob(out, next.first);
    out += std::to_string(next.second);
    return out;
  }
  Cursor c(state, 1);
  std::string history = c.blob();
  history += to_string(a);
  std::string out = "B";
  put_blob(out, history);
  return out;
}

// ---------------------------------------------------------------------------
// Winning-set evaluation on settled plays

std::pair<LassoWord, LassoWord> split_product_lasso(
    const TwoTapeAutomaton& t, const LassoWord& play) {
  FiniteWord s1, s2, p1, p2;
  for (const Letter& l : play.stem()) {
    auto [x, y] = Alphabet::split_pair(l);
    s1.push_back(std::move(x));
    s2.push_back(std::move(y));
  }
  for (const Letter& l : play.period()) {
    auto [x, y] = Alphabet::split_pair(l);
    p1.push_back(std::move(x));
    p2.push_back(std::move(y));
  }
  return {LassoWord(t.alphabet1, std::move(s1), std::move(p1)),
          LassoWord(t.alphabet2, std::move(s2), std::move(p2))};
}

bool play_in_winning_set(const GSArena& arena, const LassoWord& play) {
  if (arena.win_2tape.has_value()) {
    auto [w1, w2] = split_product_lasso(*arena.win_2tape, play);
    return lassopair_in_2tape(*arena.win_2tape, w1, w2);
  }
  if (arena.win_buchi.has_value()) {
    return lasso_in_buchi(*arena.win_buchi, play);
  }
  if (arena.win_oracle) return arena.win_oracle(play);
  throw WordError("arena '" + arena.name + "' has no winning set");
}

void require_seats(const Strategy& s1, const Strategy& s2,
                   const char* engine) {
  if (s1.owner != Player::P1 || s2.owner != Player::P2) {
    throw WordError(std::string(engine) +
                    ": the first strategy must belong to Player 1 and the "
                    "second to Player 2");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Gale-Stewart plays

PlayRecord play_gs(const GSArena& arena, const Strategy& s1,
                   const Strategy& s2, int horizon) {
  require_seats(s1, s2, "play_gs");
  if (horizon < 0) throw WordError("play_gs: negative horizon");
  StrategyRuntime r1(s1);
  StrategyRuntime r2(s2);

  std::uint64_t max_rounds = static_cast<std::uint64_t>(horizon);
  if (r1.finite_state() && r2.finite_state()) {
    max_rounds =
        std::max(max_rounds, r1.state_space() * r2.state_space() + 2);
  }

  PlayRecord rec;
  FiniteWord all_moves;
  std::vector<Player> all_authors;
  FiniteWord tape1, tape2;
  std::map<std::string, std::uint64_t> seen;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> repeat;

  auto step = [&](const Letter& a, Player who) {
    if (!arena.alphabet.contains(a)) {
      throw WordError("play_gs: " + to_string(who) +
                      " emitted a letter outside the arena alphabet: '" + a +
                      "'");
    }
    all_moves.push_back(a);
    all_authors.push_back(who);
    r1.observe(a, who == Player::P1);
    r2.observe(a, who == Player::P2);
    if (arena.monitor_coding && !rec.exit_event.has_value()) {
      auto [x, y] = Alphabet::split_pair(a);
      tape1.push_back(std::move(x));
      tape2.push_back(std::move(y));
      if (!is_pref_of_coding(tape1, tape2)) {
        rec.exit_event = {who, all_moves.size()};
      }
    }
  };

  for (std::uint64_t round = 1; round <= max_rounds; ++round) {
    const auto k1 = r1.state_key();
    const auto k2 = r2.state_key();
    if (k1.has_value() && k2.has_value()) {
      std::string key = *k1;
      key += '\x1f';
      key += *k2;
      auto [it, inserted] = seen.try_emplace(std::move(key), round);
      if (!inserted) {
        repeat = {{it->second, round}};
        break;
      }
    }
    step(r1.own_move(), Player::P1);
    step(r2.own_move(), Player::P2);
  }

  const std::size_t keep =
      std::min<std::size_t>(all_moves.size(), 2 * static_cast<std::size_t>(horizon));
  rec.moves.assign(all_moves.begin(), all_moves.begin() + keep);
  rec.authors.assign(all_authors.begin(), all_authors.begin() + keep);

  if (repeat.has_value()) {
    const auto [first, again] = *repeat;
    FiniteWord stem(all_moves.begin(), all_moves.begin() + 2 * (first - 1));
    FiniteWord period(all_moves.begin() + 2 * (first - 1),
                      all_moves.begin() + 2 * (again - 1));
    LassoWord play(arena.alphabet, std::move(stem), std::move(period));
    const bool inside = play_in_winning_set(arena, play);
    rec.verdict = inside ? GameVerdict::P1Wins : GameVerdict::P2Wins;
    std::ostringstream os;
    os << "the joint strategy state repeats at rounds " << first << " and "
       << again << "; the play settles into " << to_string(play)
       << ", which lies " << (inside ? "inside" : "outside")
       << " the winning set";
    rec.evidence = os.str();
    rec.settled_play = std::move(play);
  } else {
    rec.verdict = GameVerdict::Undetermined;
    rec.evidence = "no joint strategy state repeat within the horizon";
  }
  return rec;
}

GSArena buchi_arena(const BuchiAutomaton& win, const std::string& name) {
  win.validate();
  if (win.num_counters != 0) {
    throw AutomatonError("buchi_arena: the winning automaton must be "
                         "counterless for exact lasso verdicts");
  }
  GSArena arena;
  arena.name = name.empty() ? (win.name.empty() ? "buchi-arena" : win.name)
                            : name;
  arena.alphabet = win.alphabet;
  arena.win_buchi = win;
  return arena;
}

GSArena coded_arena(const BuchiAutomaton& a) {
  WinningSetBundle bundle = build_winning_set(a);
  GSArena arena;
  arena.name = "coded:" + (a.name.empty() ? "machine" : a.name);
  arena.alphabet =
      Alphabet::product(bundle.d.alphabet1, bundle.d.alphabet2);
  arena.win_2tape = std::move(bundle.d);
  arena.monitor_coding = true;
  return arena;
}

// ---------------------------------------------------------------------------
// Transfer into the coded game

namespace {

struct CodedTransferContext {
  Strategy sigma;
  Player owner;
  CodingAlphabets coding;
  Alphabet product;
  FiniteAutomaton pref1;  // prefixes of the tape-1 guard language
  FiniteAutomaton pref2;  // prefixes of the tape-2 guard language
  NfaSteps steps1;
  NfaSteps steps2;

  CodedTransferContext(const BuchiAutomaton& a, Strategy s, Player who)
      : sigma(std::move(s)),
        owner(who),
        coding(a.alphabet),
        product(Alphabet::product(coding.sigma1, coding.gamma)) {
    GuardAutomata guards = build_guard_automata(coding.sigma);
    pref1 = prefix_automaton(guards.H);
    pref2 = prefix_automaton(guards.Hp);
    steps1 = nfa_steps(pref1);
    steps2 = nfa_steps(pref2);
  }
};

std::string follow_memory(std::uint64_t p, const std::vector<int>& s1,
                          const std::vector<int>& s2,
                          const std::string& embed) {
  std::string out = "follow|";
  put_blob(out, std::to_string(p));
  put_blob(out, joined_subset(s1));
  put_blob(out, joined_subset(s2));
  put_blob(out, embed);
  return out;
}

std::string safe_memory(const std::vector<int>& s1,
                        const std::vector<int>& s2) {
  std::string out = "safe|";
  put_blob(out, joined_subset(s1));
  put_blob(out, joined_subset(s2));
  return out;
}

void require_transferable(const BuchiAutomaton& a, const char* op) {
  a.validate();
  if (a.num_counters != 1 || !a.is_realtime()) {
    throw AutomatonError(std::string(op) +
                         ": the base machine must be a real-time one-counter "
                         "automaton");
  }
}

}  // namespace

Strategy transfer_strategy_to_coded(const BuchiAutomaton& a,
                                    const Strategy& sigma, Player owner) {
  require_transferable(a, "transfer_strategy_to_coded");
  if (sigma.owner != owner) {
    throw WordError("transfer_strategy_to_coded: the strategy's owner must "
                    "match the requested seat");
  }
  auto ctx = std::make_shared<const CodedTransferContext>(a, sigma, owner);

  CounterAugmentedStrategy body;
  body.initial_memory = follow_memory(1, {ctx->pref1.initial},
                                      {ctx->pref2.initial},
                                      embed_initial(ctx->sigma));
  body.initial_counter = 0;

  body.move = [ctx](const std::string& memory, std::uint64_t) -> Letter {
    const std::string mode = memory_mode(memory);
    if (mode == "absorb") return Alphabet::pair_letter("0", "0");
    if (mode == "p2punish") return Alphabet::pair_letter("A", "0");
    if (mode == "safe") {
      Cursor c(memory, mode_end(memory));
      const auto s1 = parse_subset(c.blob());
      const auto s2 = parse_subset(c.blob());
      for (const Letter& pl : ctx->product.letters()) {
        auto [x, y] = Alphabet::split_pair(pl);
        if (!step_subset(ctx->steps1, s1, x).empty() &&
            !step_subset(ctx->steps2, s2, y).empty()) {
          return pl;
        }
      }
      throw AutomatonError("no guard-preserving letter exists");
    }
    if (mode != "follow") throw WordError("corrupt transfer memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t p = parse_u64(c.blob());
    c.blob();
    c.blob();
    const std::string embed = c.blob();
    if (position_author(p) != ctx->owner) {
      throw WordError("transferred strategy asked to move at the opponent's "
                      "position");
    }
    const SlotInfo slot = classify_position(p);
    switch (slot.kind) {
      case SlotKind::Zero: return Alphabet::pair_letter("0", "0");
      case SlotKind::Marker: return Alphabet::pair_letter("A", "A");
      case SlotKind::Payload: break;
    }
    const Letter base = embed_move(ctx->sigma, embed);
    if (!ctx->coding.sigma.contains(base)) {
      throw WordError("embedded strategy emitted a letter outside the base "
                      "alphabet: '" + base + "'");
    }
    return Alphabet::pair_letter(base, "A");
  };

  body.observe = [ctx](const std::string& memory, std::uint64_t counter,
                       const Letter& letter, bool own)
      -> std::pair<std::string, std::uint64_t> {
    const std::string mode = memory_mode(memory);
    if (mode == "absorb" || mode == "p2punish") return {memory, 0};
    auto [x, y] = Alphabet::split_pair(letter);
    if (mode == "safe") {
      Cursor c(memory, mode_end(memory));
      const auto s1 = parse_subset(c.blob());
      const auto s2 = parse_subset(c.blob());
      const auto n1 = step_subset(ctx->steps1, s1, x);
      const auto n2 = step_subset(ctx->steps2, s2, y);
      // Only an opponent letter can kill the guards here, and opponent
      // letters sit at even positions, completing the even-length exit.
      if (n1.empty() || n2.empty()) return {"absorb", 0};
      return {safe_memory(n1, n2), 0};
    }
    if (mode != "follow") throw WordError("corrupt transfer memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t p = parse_u64(c.blob());
    const auto s1 = parse_subset(c.blob());
    const auto s2 = parse_subset(c.blob());
    std::string embed = c.blob();
    const SlotInfo slot = classify_position(p);
    const Player at = position_author(p);
    const bool conform =
        y == tape2_letter(slot) &&
        (slot.kind == SlotKind::Zero
             ? x == "0"
             : slot.kind == SlotKind::Marker
                   ? x == "A"
                   : ctx->coding.sigma.contains(x));
    if (own && (at != ctx->owner || !conform)) {
      throw WordError("transfer runtime corrupted: own move off schedule");
    }
    if (conform) {
      const auto n1 = step_subset(ctx->steps1, s1, x);
      const auto n2 = step_subset(ctx->steps2, s2, y);
      if (slot.kind == SlotKind::Payload) {
        embed = embed_observe(ctx->sigma, embed, x,
                              (slot.unit % 2 == 1) ==
                                  (ctx->owner == Player::P1));
      }
      return {follow_memory(p + 1, n1, n2, embed),
              x == "0" ? counter + 1 : 0};
    }
    // The opponent left the coding at position p.
    if (ctx->owner == Player::P2) return {"p2punish", 0};
    const auto n1 = step_subset(ctx->steps1, s1, x);
    const auto n2 = step_subset(ctx->steps2, s2, y);
    if (n1.empty() || n2.empty()) return {"absorb", 0};
    return {safe_memory(n1, n2), 0};
  };

  return Strategy{owner, std::move(body)};
}

// ---------------------------------------------------------------------------
// Extraction from the coded game

namespace {

struct ExtractContext {
  Strategy sigma_prime;
  Player owner;
  CodingAlphabets coding;
  Alphabet product;

  ExtractContext(const BuchiAutomaton& a, Strategy s, Player who)
      : sigma_prime(std::move(s)),
        owner(who),
        coding(a.alphabet),
        product(Alphabet::product(coding.sigma1, coding.gamma)) {}
};

struct ExtractAdvance {
  bool exited = false;
  std::uint64_t exit_position = 0;
  Letter out;
  std::uint64_t p = 1;
  std::string embed;
  FiniteWord queue;
};

/// Replays the coded play forward: forced letters and queued opponent
/// payloads feed sigma_prime as opponent moves, sigma_prime's own moves are
/// checked against the schedule, and the advance stops when an own payload
/// yields the next extracted base letter.
ExtractAdvance extract_advance(const ExtractContext& ctx, std::uint64_t p,
                               std::string embed, FiniteWord queue) {
  ExtractAdvance result;
  while (true) {
    const SlotInfo slot = classify_position(p);
    const Player at = position_author(p);
    if (at != ctx.owner) {
      Letter x;
      switch (slot.kind) {
        case SlotKind::Zero: x = "0"; break;
        case SlotKind::Marker: x = "A"; break;
        case SlotKind::Payload:
          if (queue.empty()) {
            throw WordError("extraction advanced past the available "
                            "opponent letters");
          }
          x = queue.front();
          queue.erase(queue.begin());
          break;
      }
      embed = embed_observe(ctx.sigma_prime, embed,
                            Alphabet::pair_letter(x, tape2_letter(slot)),
                            false);
      ++p;
      continue;
    }
    const Letter move = embed_move(ctx.sigma_prime, embed);
    bool conform = ctx.product.contains(move);
    Letter x, y;
    if (conform) {
      std::tie(x, y) = Alphabet::split_pair(move);
      conform = y == tape2_letter(slot) &&
                (slot.kind == SlotKind::Zero
                     ? x == "0"
                     : slot.kind == SlotKind::Marker
                           ? x == "A"
                           : ctx.coding.sigma.contains(x));
    }
    if (!conform) {
      result.exited = true;
      result.exit_position = p;
      return result;
    }
    embed = embed_observe(ctx.sigma_prime, embed, move, true);
    ++p;
    if (slot.kind == SlotKind::Payload) {
      result.out = x;
      result.p = p;
      result.embed = std::move(embed);
      result.queue = std::move(queue);
      return result;
    }
  }
}

std::string extract_memory(std::uint64_t p, const std::string& embed,
                           const FiniteWord& queue) {
  std::string out = "x|";
  put_blob(out, std::to_string(p));
  put_blob(out, embed);
  put_blob(out, to_string(queue));
  return out;
}

}  // namespace

Strategy extract_strategy_from_coded(const BuchiAutomaton& a,
                                     const Strategy& sigma_prime,
                                     Player owner) {
  require_transferable(a, "extract_strategy_from_coded");
  if (sigma_prime.owner != owner) {
    throw WordError("extract_strategy_from_coded: the strategy's owner must "
                    "match the requested seat");
  }
  auto ctx = std::make_shared<const ExtractContext>(a, sigma_prime, owner);

  CounterAugmentedStrategy body;
  body.initial_memory =
      extract_memory(1, embed_initial(ctx->sigma_prime), {});
  body.initial_counter = 0;

  body.move = [ctx](const std::string& memory, std::uint64_t) -> Letter {
    const std::string mode = memory_mode(memory);
    if (mode == "exit") return ctx->coding.sigma.at(0);
    if (mode != "x") throw WordError("corrupt extraction memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t p = parse_u64(c.blob());
    std::string embed = c.blob();
    FiniteWord queue = parse_letters(c.blob());
    auto advance =
        extract_advance(*ctx, p, std::move(embed), std::move(queue));
    if (advance.exited) return ctx->coding.sigma.at(0);
    return advance.out;
  };

  body.observe = [ctx](const std::string& memory, std::uint64_t,
                       const Letter& letter, bool own)
      -> std::pair<std::string, std::uint64_t> {
    const std::string mode = memory_mode(memory);
    if (mode == "exit") return {memory, 0};
    if (mode != "x") throw WordError("corrupt extraction memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t p = parse_u64(c.blob());
    std::string embed = c.blob();
    FiniteWord queue = parse_letters(c.blob());
    if (!own) {
      if (!ctx->coding.sigma.contains(letter)) {
        throw WordError("opponent letter outside the base alphabet: '" +
                        letter + "'");
      }
      queue.push_back(letter);
      return {extract_memory(p, embed, queue), 0};
    }
    auto advance =
        extract_advance(*ctx, p, std::move(embed), std::move(queue));
    if (advance.exited) {
      std::string out = "exit|";
      put_blob(out, std::to_string(advance.exit_position));
      return {std::move(out), 0};
    }
    return {extract_memory(advance.p, advance.embed, advance.queue), 0};
  };

  return Strategy{owner, std::move(body)};
}

// ---------------------------------------------------------------------------
// Transfer through the run-length coding

namespace {

struct PhiContext {
  Strategy sigma;
  Player owner;
};

std::string phi_follow_memory(std::uint64_t block, std::uint64_t run,
                              const std::string& embed) {
  std::string out = "phif|";
  put_blob(out, std::to_string(block));
  put_blob(out, std::to_string(run));
  put_blob(out, embed);
  return out;
}

std::uint64_t integer_letter(const Letter& a) {
  return parse_u64(a);
}

Player phi_block_owner(std::uint64_t block) {
  return block % 2 == 1 ? Player::P1 : Player::P2;
}

Strategy phi_to_cantor(const Strategy& sigma, Player owner) {
  if (const auto* fm = std::get_if<FiniteMemoryStrategy>(&sigma.body)) {
    for (const Letter& a : fm->emit) integer_letter(a);
  }
  auto ctx = std::make_shared<const PhiContext>(PhiContext{sigma, owner});

  CounterAugmentedStrategy body;
  body.initial_memory = phi_follow_memory(1, 0, embed_initial(sigma));
  body.initial_counter = 0;

  body.move = [ctx](const std::string& memory, std::uint64_t) -> Letter {
    const std::string mode = memory_mode(memory);
    if (mode == "phip") return "1";
    if (mode != "phif") throw WordError("corrupt phi-transfer memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t block = parse_u64(c.blob());
    const std::uint64_t run = parse_u64(c.blob());
    const std::string embed = c.blob();
    if (phi_block_owner(block) != ctx->owner) return "1";
    const std::uint64_t n =
        integer_letter(embed_move(ctx->sigma, embed));
    const std::uint64_t target = 2 * (n + 1);
    return run < target ? "1" : "0";
  };

  body.observe = [ctx](const std::string& memory, std::uint64_t,
                       const Letter& letter, bool own)
      -> std::pair<std::string, std::uint64_t> {
    const std::string mode = memory_mode(memory);
    if (mode == "phip") return {memory, 0};
    if (mode != "phif") throw WordError("corrupt phi-transfer memory");
    Cursor c(memory, mode_end(memory));
    const std::uint64_t block = parse_u64(c.blob());
    const std::uint64_t run = parse_u64(c.blob());
    std::string embed = c.blob();
    if (letter == "1") {
      return {phi_follow_memory(block, run + 1, embed), run + 1};
    }
    if (letter != "0") {
      throw WordError("phi play letter must be 0 or 1: '" + letter + "'");
    }
    if (run >= 2 && run % 2 == 0) {
      // A block closes; by the parity of the slots its author is the block
      // owner.
      const std::uint64_t n = run / 2 - 1;
      embed = embed_observe(ctx->sigma, embed, std::to_string(n),
                            phi_block_owner(block) == ctx->owner);
      return {phi_follow_memory(block + 1, 0, embed), 0};
    }
    if (own) {
      throw WordError("phi transfer runtime corrupted: own zero off "
                      "schedule");
    }
    return {"phip", 0};
  };

  return Strategy{owner, std::move(body)};
}

struct PhiExtractContext {
  Strategy sigma_prime;
  Player owner;
};

struct PhiAdvance {
  bool exited = false;
  std::uint64_t exit_block = 0;
  std::uint64_t out = 0;
  std::uint64_t block = 1;
  std::uint64_t position = 1;
  std::string embed;
  std::vector<std::uint64_t> queue;
};

/// Replays the {0,1} play forward: sigma_prime's own letters are checked
/// against the block schedule, the other letters are forced (ones, and the
/// terminators of the opponent's blocks, whose lengths come off the queue).
/// Stops when sigma_prime closes one of its own blocks, decoding the answer.
PhiAdvance phi_advance(const PhiExtractContext& ctx, std::uint64_t block,
                       std::string embed, std::vector<std::uint64_t> queue,
                       std::uint64_t position) {
  PhiAdvance result;
  std::uint64_t run = 0;
  std::uint64_t target = 0;
  constexpr std::uint64_t kMaxSteps = 1 << 20;
  for (std::uint64_t steps = 0; steps < kMaxSteps; ++steps, ++position) {
    const bool own_block = phi_block_owner(block) == ctx.owner;
    const bool own_position = position_author(position) == ctx.owner;
    Letter letter;
    if (own_position) {
      letter = embed_move(ctx.sigma_prime, embed);
      const bool valid_zero = own_block && run >= 2 && run % 2 == 0;
      if (letter != "1" && !(letter == "0" && valid_zero)) {
        result.exited = true;
        result.exit_block = block;
        return result;
      }
    } else {
      if (own_block) {
        letter = "1";
      } else {
        if (target == 0) {
          if (queue.empty()) {
            throw WordError("phi extraction advanced past the available "
                            "opponent letters");
          }
          target = 2 * (queue.front() + 1);
          queue.erase(queue.begin());
        }
        letter = run < target ? "1" : "0";
      }
    }
    embed = embed_observe(ctx.sigma_prime, embed, letter, own_position);
    if (letter == "1") {
      ++run;
      continue;
    }
    const std::uint64_t value = run / 2 - 1;
    const bool was_own = own_block;
    ++block;
    run = 0;
    target = 0;
    if (was_own) {
      result.out = value;
      result.block = block;
      result.position = position + 1;
      result.embed = std::move(embed);
      result.queue = std::move(queue);
      return result;
    }
  }
  result.exited = true;
  result.exit_block = block;
  return result;
}

std::string phi_extract_memory(std::uint64_t block, std::uint64_t position,
                               const std::string& embed,
                               const std::vector<std::uint64_t>& queue) {
  std::string out = "px|";
  put_blob(out, std::to_string(block));
  put_blob(out, std::to_string(position));
  put_blob(out, embed);
  std::string q;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (i) q += ',';
    q += std::to_string(queue[i]);
  }
  put_blob(out, q);
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(parse_u64(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

Strategy phi_to_baire(const Strategy& sigma_prime, Player owner) {
  auto ctx = std::make_shared<const PhiExtractContext>(
      PhiExtractContext{sigma_prime, owner});

  CounterAugmentedStrategy body;
  body.initial_memory =
      phi_extract_memory(1, 1, embed_initial(sigma_prime), {});
  body.initial_counter = 0;

  auto parse_state = [](const std::string& memory) {
    Cursor c(memory, mode_end(memory));
    const std::uint64_t block = parse_u64(c.blob());
    const std::uint64_t position = parse_u64(c.blob());
    const std::string embed = c.blob();
    const auto queue = parse_u64_list(c.blob());
    return std::make_tuple(block, position, embed, queue);
  };

  body.move = [ctx, parse_state](const std::string& memory,
                                 std::uint64_t) -> Letter {
    const std::string mode = memory_mode(memory);
    if (mode == "exit") return "0";
    if (mode != "px") throw WordError("corrupt phi-extraction memory");
    auto [block, position, embed, queue] = parse_state(memory);
    auto advance =
        phi_advance(*ctx, block, std::move(embed), std::move(queue), position);
    if (advance.exited) return "0";
    return std::to_string(advance.out);
  };

  body.observe = [ctx, parse_state](const std::string& memory, std::uint64_t,
                                    const Letter& letter, bool own)
      -> std::pair<std::string, std::uint64_t> {
    const std::string mode = memory_mode(memory);
    if (mode == "exit") return {memory, 0};
    if (mode != "px") throw WordError("corrupt phi-extraction memory");
    auto [block, position, embed, queue] = parse_state(memory);
    if (!own) {
      queue.push_back(integer_letter(letter));
      return {phi_extract_memory(block, position, embed, queue), 0};
    }
    // Recompute the advance that produced this own move and commit it.
    auto advance =
        phi_advance(*ctx, block, std::move(embed), std::move(queue), position);
    if (advance.exited) {
      std::string out = "exit|";
      put_blob(out, std::to_string(advance.exit_block));
      return {std::move(out), 0};
    }
    return {phi_extract_memory(advance.block, advance.position, advance.embed,
                               advance.queue),
            0};
  };

  return Strategy{owner, std::move(body)};
}

}  // namespace

Strategy transfer_phi_strategy(const Strategy& sigma, Player owner,
                               PhiDirection direction) {
  if (sigma.owner != owner) {
    throw WordError("transfer_phi_strategy: the strategy's owner must match "
                    "the requested seat");
  }
  return direction == PhiDirection::BaireToCantor
             ? phi_to_cantor(sigma, owner)
             : phi_to_baire(sigma, owner);
}

// ---------------------------------------------------------------------------
// Universality games

namespace {

void require_det_complete(const BuchiAutomaton& t, const char* op) {
  t.validate();
  if (t.num_counters != 0) {
    throw AutomatonError(std::string(op) +
                         ": the target machine must be counterless");
  }
  std::map<std::pair<int, Letter>, int> seen;
  for (const auto& tr : t.transitions) {
    if (tr.letter.empty()) {
      throw AutomatonError(std::string(op) +
                           ": the target machine must be real-time");
    }
    ++seen[{tr.from, tr.letter}];
  }
  for (int q = 0; q < t.num_states; ++q) {
    for (const Letter& a : t.alphabet.letters()) {
      auto it = seen.find({q, a});
      const int count = it == seen.end() ? 0 : it->second;
      if (count != 1) {
        throw AutomatonError(std::string(op) +
                             ": the target machine must be deterministic and "
                             "complete");
      }
    }
  }
}

}  // namespace

UniversalitySolution solve_universality_game(const BuchiAutomaton& t) {
  require_det_complete(t, "solve_universality_game");
  UniversalitySolution solution;
  auto witness = universal_det_buchi(t);
  if (!witness.has_value()) {
    solution.winner = Player::P1;
    solution.strategy = constant_strategy(Player::P1, t.alphabet.at(0));
    return solution;
  }
  solution.winner = Player::P2;
  solution.rejected_witness = normalize_lasso(*witness);
  solution.strategy =
      lasso_playing_strategy(Player::P2, *solution.rejected_witness);
  return solution;
}

GSArena universality_arena(const BuchiAutomaton& t) {
  require_det_complete(t, "universality_arena");
  GSArena arena;
  arena.name = "universality:" + (t.name.empty() ? "machine" : t.name);
  arena.alphabet = t.alphabet;
  arena.win_buchi = build_interleaved_game(t);
  return arena;
}

// ---------------------------------------------------------------------------
// Wadge plays

PlayRecord play_wadge(const WadgeArena& arena, const Strategy& s1,
                      const Strategy& s2, int horizon) {
  require_seats(s1, s2, "play_wadge");
  if (horizon < 0) throw WordError("play_wadge: negative horizon");
  StrategyRuntime r1(s1);
  StrategyRuntime r2(s2);

  std::uint64_t max_rounds = static_cast<std::uint64_t>(horizon);
  if (r1.finite_state() && r2.finite_state()) {
    max_rounds =
        std::max(max_rounds, r1.state_space() * r2.state_space() + 2);
  }

  PlayRecord rec;
  FiniteWord all_moves;
  std::vector<Player> all_authors;
  std::map<std::string, std::uint64_t> seen;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> repeat;

  auto step = [&](const Letter& a, Player who) {
    all_moves.push_back(a);
    all_authors.push_back(who);
    r1.observe(a, who == Player::P1);
    r2.observe(a, who == Player::P2);
  };

  for (std::uint64_t round = 1; round <= max_rounds; ++round) {
    const auto k1 = r1.state_key();
    const auto k2 = r2.state_key();
    if (k1.has_value() && k2.has_value()) {
      std::string key = *k1;
      key += '\x1f';
      key += *k2;
      auto [it, inserted] = seen.try_emplace(std::move(key), round);
      if (!inserted) {
        repeat = {{it->second, round}};
        break;
      }
    }
    const Letter a = r1.own_move();
    if (!arena.x.contains(a)) {
      throw WordError("play_wadge: Player 1 emitted a letter outside the "
                      "first board's alphabet: '" + a + "'");
    }
    step(a, Player::P1);
    const Letter b = r2.own_move();
    if (!b.empty() && !arena.y.contains(b)) {
      throw WordError("play_wadge: Player 2 emitted a letter outside the "
                      "second board's alphabet: '" + b + "'");
    }
    step(b, Player::P2);
  }

  const std::size_t keep = std::min<std::size_t>(
      all_moves.size(), 2 * static_cast<std::size_t>(horizon));
  rec.moves.assign(all_moves.begin(), all_moves.begin() + keep);
  rec.authors.assign(all_authors.begin(), all_authors.begin() + keep);

  if (!repeat.has_value()) {
    rec.verdict = GameVerdict::Undetermined;
    rec.evidence = "no joint strategy state repeat within the horizon";
    return rec;
  }

  const auto [first, again] = *repeat;
  FiniteWord a_stem, a_period, b_stem, b_period;
  for (std::size_t idx = 0; idx < 2 * (again - 1); ++idx) {
    const bool in_stem = idx < 2 * (first - 1);
    if (idx % 2 == 0) {
      (in_stem ? a_stem : a_period).push_back(all_moves[idx]);
    } else if (!all_moves[idx].empty()) {
      (in_stem ? b_stem : b_period).push_back(all_moves[idx]);
    }
  }
  LassoWord a_word(arena.x, std::move(a_stem), std::move(a_period));
  std::ostringstream os;
  os << "the joint strategy state repeats at rounds " << first << " and "
     << again << "; ";
  if (b_period.empty()) {
    rec.verdict = GameVerdict::P1Wins;
    os << "Player 2's settled cycle is all skips, so the second board's "
          "word stays finite";
    rec.evidence = os.str();
    return rec;
  }
  LassoWord b_word(arena.y, std::move(b_stem), std::move(b_period));
  const bool in_l = arena.in_l ? arena.in_l(a_word)
                               : throw WordError("wadge arena has no first "
                                                 "board oracle");
  const bool in_lp = arena.in_lp ? arena.in_lp(b_word)
                                 : throw WordError("wadge arena has no "
                                                   "second board oracle");
  os << "the first board settles into " << to_string(a_word) << " ("
     << (in_l ? "inside" : "outside") << " its set) and the second into "
     << to_string(b_word) << " (" << (in_lp ? "inside" : "outside")
     << " its set)";
  rec.verdict =
      in_l == in_lp ? GameVerdict::P2Wins : GameVerdict::P1Wins;
  rec.evidence = os.str();
  return rec;
}

Strategy reduction_to_wadge_strategy(const SequentialTransducer& f) {
  if (f.num_states <= 0 || f.initial < 0 || f.initial >= f.num_states) {
    throw WordError("reduction transducer has no valid initial state");
  }
  for (const auto& [key, value] : f.step) {
    if (key.first < 0 || key.first >= f.num_states || value.second < 0 ||
        value.second >= f.num_states) {
      throw WordError("reduction transducer step out of range");
    }
  }
  auto ctx = std::make_shared<const SequentialTransducer>(f);

  CounterAugmentedStrategy body;
  {
    std::string memory = "w|";
    put_blob(memory, std::to_string(f.initial));
    put_blob(memory, "");
    body.initial_memory = std::move(memory);
  }
  body.initial_counter = 0;

  body.move = [](const std::string& memory, std::uint64_t) -> Letter {
    Cursor c(memory, mode_end(memory));
    c.blob();
    FiniteWord buffer = parse_letters(c.blob());
    return buffer.empty() ? kSkipLetter : buffer.front();
  };

  body.observe = [ctx](const std::string& memory, std::uint64_t,
                       const Letter& letter, bool own)
      -> std::pair<std::string, std::uint64_t> {
    Cursor c(memory, mode_end(memory));
    int state = static_cast<int>(parse_u64(c.blob()));
    FiniteWord buffer = parse_letters(c.blob());
    if (own) {
      if (!letter.empty()) buffer.erase(buffer.begin());
    } else {
      auto it = ctx->step.find({state, letter});
      if (it != ctx->step.end()) {
        buffer.insert(buffer.end(), it->second.first.begin(),
                      it->second.first.end());
        state = it->second.second;
      }
    }
    std::string out = "w|";
    put_blob(out, std::to_string(state));
    put_blob(out, to_string(buffer));
    return {std::move(out), buffer.size()};
  };

  return Strategy{Player::P2, std::move(body)};
}

}  // namespace ratgame
