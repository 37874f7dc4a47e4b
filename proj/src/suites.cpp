#include "ratgame/suites.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ratgame/codings.hpp"
#include "ratgame/constructions.hpp"
#include "ratgame/games.hpp"
#include "ratgame/words.hpp"

namespace ratgame {
namespace {

// --------------------------------------------------------------------------
// Deterministic per-case randomness: the stream for case k depends only on
// (seed, k), so replaying one case reproduces it exactly.

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index)));
}

// --------------------------------------------------------------------------
// Generators shared by the suites.

LassoWord make_lasso(const FiniteWord& stem, const FiniteWord& period) {
  std::set<Letter> used(stem.begin(), stem.end());
  used.insert(period.begin(), period.end());
  return LassoWord(Alphabet(std::vector<Letter>(used.begin(), used.end())),
                   stem, period);
}

LassoWord random_lasso(std::mt19937_64& rng, const std::vector<Letter>& pool,
                       std::size_t max_stem, std::size_t max_period) {
  std::uniform_int_distribution<std::size_t> stem_len(0, max_stem);
  std::uniform_int_distribution<std::size_t> period_len(1, max_period);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  FiniteWord stem, period;
  const std::size_t s = stem_len(rng);
  const std::size_t p = period_len(rng);
  for (std::size_t i = 0; i < s; ++i) stem.push_back(pool[pick(rng)]);
  for (std::size_t i = 0; i < p; ++i) period.push_back(pool[pick(rng)]);
  return make_lasso(stem, period);
}

// One schedule unit with the run parities the guard languages demand: an odd
// zero run, the marked part, an even zero run (length >= 2), the plain part.
FiniteWord schedule_unit(std::mt19937_64& rng, bool tape2,
                         const std::vector<Letter>& payload) {
  std::uniform_int_distribution<int> odd_pick(0, 2), even_pick(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, payload.size() - 1);
  FiniteWord out;
  const int z1 = 2 * odd_pick(rng) + 1;
  const int z2 = 2 * even_pick(rng);
  for (int i = 0; i < z1; ++i) out.push_back("0");
  out.push_back("A");
  out.push_back(tape2 ? Letter("A") : payload[pick(rng)]);
  for (int i = 0; i < z2; ++i) out.push_back("0");
  out.push_back(tape2 ? Letter("A") : payload[pick(rng)]);
  return out;
}

LassoWord valid_schedule_lasso(std::mt19937_64& rng, bool tape2,
                               const std::vector<Letter>& payload) {
  std::uniform_int_distribution<int> stem_units(0, 2), period_units(1, 2);
  FiniteWord stem, period;
  for (int i = stem_units(rng); i > 0; --i) {
    const FiniteWord u = schedule_unit(rng, tape2, payload);
    stem.insert(stem.end(), u.begin(), u.end());
  }
  for (int i = period_units(rng); i > 0; --i) {
    const FiniteWord u = schedule_unit(rng, tape2, payload);
    period.insert(period.end(), u.begin(), u.end());
  }
  return make_lasso(stem, period);
}

// A word that follows a schedule for a while, then drops to zeros forever
// (cut right after one of the schedule's zeros, so the prefix stays live).
LassoWord zero_tail_lasso(std::mt19937_64& rng, bool tape2,
                          const std::vector<Letter>& payload) {
  const LassoWord base = valid_schedule_lasso(rng, tape2, payload);
  FiniteWord full = base.stem();
  full.insert(full.end(), base.period().begin(), base.period().end());
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < full.size(); ++i)
    if (full[i] == "0") zeros.push_back(i);
  std::uniform_int_distribution<std::size_t> pick(0, zeros.size() - 1);
  const std::size_t cut = zeros[pick(rng)];
  FiniteWord stem(full.begin(), full.begin() + cut + 1);
  return make_lasso(stem, FiniteWord{"0"});
}

BuchiAutomaton random_counter_machine(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nstates(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> ntrans(1, 2);
  std::uniform_int_distribution<int> dpick(0, 2);
  BuchiAutomaton a(Alphabet({"a", "b"}));
  a.name = "random";
  a.num_states = nstates(rng);
  a.initial = 0;
  a.num_counters = 1;
  a.accepting.assign(a.num_states, false);
  for (int q = 0; q < a.num_states; ++q) a.accepting[q] = coin(rng) == 1;
  std::uniform_int_distribution<int> spick(0, a.num_states - 1);
  for (int q = 0; q < a.num_states; ++q)
    for (const Letter& l : {Letter("a"), Letter("b")})
      for (int k = ntrans(rng); k > 0; --k) {
        const int t = coin(rng);
        int delta = dpick(rng) - 1;
        if (t == 0 && delta < 0) delta = 0;
        a.transitions.push_back({q, l, {t}, {delta}, spick(rng)});
      }
  a.validate();
  return a;
}

BuchiAutomaton random_det_complete(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nstates(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  BuchiAutomaton a(Alphabet({"0", "1"}));
  a.name = "random-det";
  a.num_states = nstates(rng);
  a.initial = 0;
  a.accepting.assign(a.num_states, false);
  for (int q = 0; q < a.num_states; ++q) a.accepting[q] = coin(rng) == 1;
  std::uniform_int_distribution<int> spick(0, a.num_states - 1);
  for (int q = 0; q < a.num_states; ++q)
    for (const Letter& l : {Letter("0"), Letter("1")})
      a.transitions.push_back({q, l, {}, {}, spick(rng)});
  a.validate();
  return a;
}

Strategy random_fm(Player owner, const Alphabet& alphabet,
                   std::mt19937_64& rng) {
  FiniteMemoryStrategy fm;
  std::uniform_int_distribution<int> nmem(1, 4);
  fm.num_memories = nmem(rng);
  std::uniform_int_distribution<int> mpick(0, fm.num_memories - 1);
  std::uniform_int_distribution<std::size_t> lpick(0, alphabet.size() - 1);
  fm.initial = mpick(rng);
  for (int m = 0; m < fm.num_memories; ++m)
    fm.emit.push_back(alphabet.at(lpick(rng)));
  for (int m = 0; m < fm.num_memories; ++m)
    for (const Letter& l : alphabet.letters()) fm.update[{m, l}] = mpick(rng);
  return Strategy{owner, fm};
}

// --------------------------------------------------------------------------
// Case plumbing.

enum class CaseStatus { Pass, Fail, Unknown };

struct CaseOutcome {
  CaseStatus status = CaseStatus::Pass;
  std::string description;
};

CaseOutcome pass_case() { return {}; }
CaseOutcome fail_case(std::string why) {
  return {CaseStatus::Fail, std::move(why)};
}
CaseOutcome unknown_case() { return {CaseStatus::Unknown, ""}; }

using Coverage = std::map<std::string, std::uint64_t>;
using CaseFn =
    std::function<CaseOutcome(std::uint64_t, std::mt19937_64&, Coverage&)>;

SuiteReport drive(const std::string& name, const std::string& property,
                  int default_cases, bool uses_horizon,
                  const SuiteConfig& cfg, const CaseFn& one) {
  SuiteReport r;
  r.suite = name;
  r.property = property;
  r.seed = cfg.seed;
  r.bounds = cfg.bounds;
  r.horizon = uses_horizon ? cfg.horizon : 0;
  const std::uint64_t total =
      cfg.cases > 0 ? static_cast<std::uint64_t>(cfg.cases)
                    : static_cast<std::uint64_t>(default_cases);
  for (std::uint64_t i = 1; i <= total; ++i) {
    if (cfg.only_case != 0 && i != cfg.only_case) continue;
    std::mt19937_64 rng = case_rng(cfg.seed, i);
    CaseOutcome out;
    try {
      out = one(i, rng, r.coverage);
    } catch (const std::exception& e) {
      out = fail_case(std::string("unexpected error: ") + e.what());
    }
    ++r.cases;
    switch (out.status) {
      case CaseStatus::Pass:
        ++r.passed;
        break;
      case CaseStatus::Unknown:
        ++r.unknown;
        break;
      case CaseStatus::Fail:
        ++r.failed;
        r.failures.push_back({i, out.description, replay_command(name, cfg, i)});
        break;
    }
  }
  std::sort(r.failures.begin(), r.failures.end(),
            [](const SuiteFailure& a, const SuiteFailure& b) {
              return a.case_index < b.case_index;
            });
  return r;
}

// --------------------------------------------------------------------------
// Suite: r1-equivalence

SuiteReport suite_r1_equivalence(const SuiteConfig& cfg) {
  const std::string property =
      "on coded pairs the two-tape simulation of a one-counter machine "
      "accepts exactly when the machine accepts the base word; accepting "
      "runs replay as validated schedule certificates and the per-block "
      "configuration sets match the source machine";
  return drive(
      "r1-equivalence", property, 60, false, cfg,
      [&](std::uint64_t, std::mt19937_64& rng, Coverage& cov) -> CaseOutcome {
        const BuchiAutomaton a = random_counter_machine(rng);
        const LassoWord x = random_lasso(rng, {"a", "b"}, 3, 3);
        CounterLassoRun run;
        const Verdict direct = lasso_in_counter(a, x, cfg.bounds, &run);
        const TwoTapeAutomaton r1 = build_R1(a);
        const PairWord coded{OmegaWord(encode_h(x)),
                             OmegaWord(PatternWord::alpha_word())};
        const Verdict sim = bounded_run_search(r1, coded, cfg.bounds);
        if (direct.outcome == Outcome::Unknown ||
            sim.outcome == Outcome::Unknown) {
          ++cov["unknown"];
          return unknown_case();
        }
        if (direct.outcome != sim.outcome)
          return fail_case("verdicts disagree on x = " + to_string(x) +
                           ": the machine says " + to_string(direct.outcome) +
                           ", its simulation says " + to_string(sim.outcome));
        const int blocks = 6;
        const auto source = counter_configurations(a, x, blocks);
        const auto recovered = r1_block_configurations(r1, x, blocks);
        for (int i = 1; i <= blocks; ++i)
          if (source[i] != recovered[i])
            return fail_case("configuration sets differ after " +
                             std::to_string(i) + " letters of " +
                             to_string(x));
        if (direct.outcome == Outcome::Accept) {
          ++cov["accept"];
          const RunCertificate cert = run_builder_R1(a, x, run);
          if (!validate_certificate(r1, cert, 12))
            return fail_case("certificate replay failed on x = " +
                             to_string(x));
        } else {
          ++cov["reject"];
        }
        return pass_case();
      });
}

// --------------------------------------------------------------------------
// Suite: r2-complement

SuiteReport suite_r2_complement(const SuiteConfig& cfg) {
  const std::string property =
      "every pair of ultimately periodic words outside the coded family is "
      "accepted by at least one of the six complement machines, the "
      "accepting machines are exactly the families the classifier reports, "
      "and the union machine agrees";
  const Alphabet base({"a", "b"});
  const std::vector<TwoTapeAutomaton> comps = build_R2_components(base);
  const TwoTapeAutomaton r2 = build_R2(base);
  const std::vector<ComplementTag> tag_order = {
      ComplementTag::C1, ComplementTag::C2, ComplementTag::C3,
      ComplementTag::C4, ComplementTag::C5, ComplementTag::C6};
  // Six fixed openers, one isolating each family; later cases are random.
  const std::vector<std::pair<const char*, const char*>> crafted = {
      {"(0a)^w", "0AA00A000AA0000A(00000AA0000A)^w"},
      {"0Aa00b000Aa0000b00000b(00b)^w", "0AA00A000AA0000A(00000AA0000A)^w"},
      {"0Aa00b000Aa0000b00000AA(000AA)^w",
       "0AA00A000AA0000A0000000AA(0000A00000AA)^w"},
      {"0Aa00b000Aa0000b00000b(00b)^w", "0AA00A000AA000000A(00000AA0000A)^w"},
      {"0Aa00b000Aa000000b00000b(00b)^w",
       "0AA00A000AA000000A(00000AA0000A)^w"},
      {"0Aa00b000Aa0000b0000000AA(000AA)^w", "0AA00A000AA0000AA(0A)^w"},
  };
  SuiteReport r = drive(
      "r2-complement", property, 500, false, cfg,
      [&](std::uint64_t index, std::mt19937_64& rng,
          Coverage& cov) -> CaseOutcome {
        LassoWord w1, w2;
        if (index <= crafted.size()) {
          w1 = parse_lasso(crafted[index - 1].first);
          w2 = parse_lasso(crafted[index - 1].second);
        } else {
          const std::vector<Letter> pool1 = {"0", "A", "a", "b"};
          const std::vector<Letter> pool2 = {"0", "A"};
          const std::vector<Letter> payload = {"a", "b"};
          w1 = index % 4 == 0 ? valid_schedule_lasso(rng, false, payload)
                              : random_lasso(rng, pool1, 6, 6);
          w2 = index % 4 == 2 ? valid_schedule_lasso(rng, true, payload)
                              : random_lasso(rng, pool2, 6, 6);
        }
        const PairWord p{OmegaWord(w1), OmegaWord(w2)};
        const auto classes = classify_complement(p, cfg.bounds);
        if (classes.empty())
          return fail_case("no complement family matched the pair " +
                           to_string(w1) + " , " + to_string(w2));
        for (const auto& c : classes)
          if (c.witness.empty())
            return fail_case("family " + to_string(c.tag) +
                             " matched without a witness on " + to_string(w1) +
                             " , " + to_string(w2));
        std::set<ComplementTag> tags;
        for (const auto& c : classes) tags.insert(c.tag);
        for (std::size_t j = 0; j < comps.size(); ++j) {
          const bool got = lassopair_in_2tape(comps[j], w1, w2);
          const bool want = tags.count(tag_order[j]) == 1;
          if (got != want)
            return fail_case(
                "machine " + comps[j].name + (got ? " accepts " : " rejects ") +
                to_string(w1) + " , " + to_string(w2) +
                " but the classifier says the family " +
                (want ? "matches" : "does not match"));
        }
        if (!lassopair_in_2tape(r2, w1, w2))
          return fail_case("the union machine rejects " + to_string(w1) +
                           " , " + to_string(w2) +
                           " although a component accepts it");
        for (const auto& t : tags) ++cov[to_string(t)];
        return pass_case();
      });
  for (const auto& t : tag_order) r.coverage.try_emplace(to_string(t), 0);
  return r;
}

// --------------------------------------------------------------------------
// Suite: closure-identity

SuiteReport suite_closure_identity(const SuiteConfig& cfg) {
  const std::string property =
      "for each schedule guard the closure machine accepts exactly the words "
      "that are in the guard language or follow a live guard prefix with "
      "zeros forever";
  const GuardAutomata g = build_guard_automata(Alphabet({"a", "b"}));
  const BuchiAutomaton cl_h = closure_automaton(g.H);
  const BuchiAutomaton cl_hp = closure_automaton(g.Hp);
  return drive(
      "closure-identity", property, 500, false, cfg,
      [&](std::uint64_t index, std::mt19937_64& rng,
          Coverage& cov) -> CaseOutcome {
        const bool hp_side = index % 2 == 0;
        const std::vector<Letter> payload = {"a", "b"};
        const std::vector<Letter> pool =
            hp_side ? std::vector<Letter>{"0", "A"}
                    : std::vector<Letter>{"0", "A", "a", "b"};
        LassoWord w;
        switch (rng() % 3) {
          case 0:
            w = valid_schedule_lasso(rng, hp_side, payload);
            break;
          case 1:
            w = zero_tail_lasso(rng, hp_side, payload);
            break;
          default:
            w = random_lasso(rng, pool, 6, 6);
            break;
        }
        const BuchiAutomaton& guard = hp_side ? g.Hp : g.H;
        const BuchiAutomaton& tails = hp_side ? g.Vp0 : g.V0;
        const BuchiAutomaton& fresh = hp_side ? cl_hp : cl_h;
        const BuchiAutomaton& bundled = hp_side ? g.ClHp : g.ClH;
        const bool in_guard = lasso_in_buchi(guard, w);
        const bool in_tails = lasso_in_buchi(tails, w);
        const bool in_closure = lasso_in_buchi(fresh, w);
        const char* side = hp_side ? "marked-schedule" : "schedule";
        if (in_closure != (in_guard || in_tails))
          return fail_case(std::string("the ") + side +
                           " closure disagrees with guard-or-zero-tail on " +
                           to_string(w));
        if (lasso_in_buchi(bundled, w) != in_closure)
          return fail_case(std::string("the prebuilt ") + side +
                           " closure machine disagrees with a fresh closure "
                           "of the guard on " +
                           to_string(w));
        ++cov[std::string(side) + (in_guard     ? ":member"
                                   : in_tails   ? ":tail-only"
                                                : ":outside")];
        return pass_case();
      });
}

// --------------------------------------------------------------------------
// Suite: winning-set-decomposition

SuiteReport suite_winning_set(const SuiteConfig& cfg) {
  const std::string property =
      "the winning-set machine accepts exactly the pairs accepted by one of "
      "its three parts: coded acceptance or in-guard complement, a tape "
      "settling to zeros inside the closures, or an even-length exit from "
      "the guard region";
  std::map<std::string, WinningSetBundle> cache;
  const std::vector<std::string> zoo = {"universal", "rejector", "inf-a",
                                        "b-at-zero"};
  const GuardAutomata guards = build_guard_automata(Alphabet({"a", "b"}));
  const FiniteAutomaton live1 = prefix_automaton(guards.H);
  const FiniteAutomaton live2 = prefix_automaton(guards.Hp);
  // A pair that follows the coding for an odd number of steps and then plays
  // a letter killing a guard: the joint exit has even length.
  const auto exit_pair = [&](std::mt19937_64& rng, LassoWord& w1,
                             LassoWord& w2) -> bool {
    const LassoWord x = random_lasso(rng, {"a", "b"}, 2, 2);
    const PatternWord hx = PatternWord::h_code(x);
    const PatternWord al = PatternWord::alpha_word();
    std::uniform_int_distribution<std::uint64_t> start(0, 6);
    for (std::uint64_t m = 2 * start(rng) + 1; m <= 41; m += 2) {
      FiniteWord u = hx.prefix(m);
      FiniteWord v = al.prefix(m);
      std::vector<std::pair<Letter, Letter>> killers;
      for (const Letter& l1 : {Letter("0"), Letter("A"), Letter("a"),
                               Letter("b")})
        for (const Letter& l2 : {Letter("0"), Letter("A")}) {
          FiniteWord uu = u, vv = v;
          uu.push_back(l1);
          vv.push_back(l2);
          if (!live1.accepts(uu) || !live2.accepts(vv)) {
            killers.push_back({l1, l2});
          }
        }
      if (killers.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, killers.size() - 1);
      const auto [l1, l2] = killers[pick(rng)];
      FiniteWord s1 = u, s2 = v;
      s1.push_back(l1);
      s2.push_back(l2);
      const LassoWord t1 = random_lasso(rng, {"0", "A", "a", "b"}, 2, 3);
      const LassoWord t2 = random_lasso(rng, {"0", "A"}, 2, 3);
      s1.insert(s1.end(), t1.stem().begin(), t1.stem().end());
      s2.insert(s2.end(), t2.stem().begin(), t2.stem().end());
      w1 = make_lasso(s1, t1.period());
      w2 = make_lasso(s2, t2.period());
      return true;
    }
    return false;
  };
  return drive(
      "winning-set-decomposition", property, 240, false, cfg,
      [&, cache = std::move(cache)](std::uint64_t index, std::mt19937_64& rng,
                                    Coverage& cov) mutable -> CaseOutcome {
        const std::string name = zoo[rng() % zoo.size()];
        auto it = cache.find(name);
        if (it == cache.end())
          it = cache.emplace(name, build_winning_set(example_machine(name)))
                   .first;
        const WinningSetBundle& ws = it->second;
        const std::vector<Letter> payload = {"a", "b"};
        LassoWord w1, w2;
        if (index == 1) {
          // Landmark: the all-zero pair settles inside both closures.
          w1 = parse_lasso("(0)^w");
          w2 = parse_lasso("(0)^w");
        } else {
          switch (rng() % 6) {
            case 0:
              w1 = valid_schedule_lasso(rng, false, payload);
              w2 = valid_schedule_lasso(rng, true, payload);
              break;
            case 1:
              w1 = zero_tail_lasso(rng, false, payload);
              w2 = rng() % 2 == 0 ? valid_schedule_lasso(rng, true, payload)
                                  : zero_tail_lasso(rng, true, payload);
              break;
            case 2:
              w1 = valid_schedule_lasso(rng, false, payload);
              w2 = zero_tail_lasso(rng, true, payload);
              break;
            case 3:
              if (exit_pair(rng, w1, w2)) break;
              [[fallthrough]];
            default:
              w1 = random_lasso(rng, {"0", "A", "a", "b"}, 6, 6);
              w2 = random_lasso(rng, {"0", "A"}, 6, 6);
              break;
          }
        }
        const bool in_b = lassopair_in_2tape(ws.bprime, w1, w2);
        const bool in_c = lassopair_in_2tape(ws.c, w1, w2);
        const bool in_cp = lassopair_in_2tape(ws.cprime, w1, w2);
        const bool in_d = lassopair_in_2tape(ws.d, w1, w2);
        if (in_d != (in_b || in_c || in_cp))
          return fail_case("the union machine of " + name +
                           " disagrees with its parts on " + to_string(w1) +
                           " , " + to_string(w2));
        if (index == 1 && !in_c)
          return fail_case(
              "the all-zero pair is not accepted by the settling part");
        if (in_b) ++cov["part:main"];
        if (in_c) ++cov["part:settle"];
        if (in_cp) ++cov["part:exit"];
        if (!in_d) ++cov["part:none"];
        ++cov["machine:" + name];
        return pass_case();
      });
}

// --------------------------------------------------------------------------
// Suite: transfer-tournament

SuiteReport suite_transfer_tournament(const SuiteConfig& cfg) {
  const std::string property =
      "strategies carried through the block coding keep winning: on each "
      "example machine the winning seat's transferred strategy never loses a "
      "settled play against randomized opponents";
  struct Entry {
    std::string machine;
    Player seat;
  };
  const std::vector<Entry> entries = {{"rejector", Player::P2},
                                      {"universal", Player::P1},
                                      {"inf-a", Player::P1}};
  struct Prepared {
    GSArena arena;
    Strategy mine;
  };
  std::map<std::string, Prepared> cache;
  return drive(
      "transfer-tournament", property, 150, true, cfg,
      [&, cache = std::move(cache)](std::uint64_t index, std::mt19937_64& rng,
                                    Coverage& cov) mutable -> CaseOutcome {
        const Entry& e = entries[(index - 1) % entries.size()];
        auto it = cache.find(e.machine);
        if (it == cache.end()) {
          const BuchiAutomaton a = example_machine(e.machine);
          Prepared p{coded_arena(a),
                     transfer_strategy_to_coded(
                         a, constant_strategy(e.seat, "a"), e.seat)};
          it = cache.emplace(e.machine, std::move(p)).first;
        }
        const Prepared& p = it->second;
        const Strategy opponent =
            random_fm(other_player(e.seat), p.arena.alphabet, rng);
        const PlayRecord rec =
            e.seat == Player::P1
                ? play_gs(p.arena, p.mine, opponent, cfg.horizon)
                : play_gs(p.arena, opponent, p.mine, cfg.horizon);
        ++cov["machine:" + e.machine];
        if (rec.exit_event)
          ++cov[rec.exit_event->first == e.seat ? "exit:own"
                                                : "exit:opponent"];
        if (rec.verdict == GameVerdict::Undetermined) {
          ++cov["undetermined"];
          return unknown_case();
        }
        ++cov["settled"];
        const GameVerdict wanted = e.seat == Player::P1
                                       ? GameVerdict::P1Wins
                                       : GameVerdict::P2Wins;
        if (rec.verdict != wanted)
          return fail_case("adverse play on " + e.machine + ": " +
                           rec.evidence);
        return pass_case();
      });
}

// --------------------------------------------------------------------------
// Suite: phi-coding

SuiteReport suite_phi_coding(const SuiteConfig& cfg) {
  const std::string property =
      "the run-length coding of integer sequences round-trips through its "
      "decoder, the image machine accepts exactly the whole-block words, and "
      "the deviation machines accept their by-construction pattern families "
      "at the positions the scanner reports";
  const PhiGuards pg = build_phi_guards();
  // (11)^{n+1} 0 per value n, appended whole.
  const auto append_block = [](FiniteWord& out, std::uint64_t n) {
    for (std::uint64_t i = 0; i < 2 * (n + 1); ++i) out.push_back("1");
    out.push_back("0");
  };
  const auto random_blocks = [&](std::mt19937_64& rng, int count) {
    FiniteWord out;
    for (int i = 0; i < count; ++i) append_block(out, rng() % 3);
    return out;
  };
  return drive(
      "phi-coding", property, 300, false, cfg,
      [&](std::uint64_t index, std::mt19937_64& rng,
          Coverage& cov) -> CaseOutcome {
        switch (index % 5) {
          case 0: {  // encode/decode round trip
            const int vals = 1 + static_cast<int>(rng() % 3);
            FiniteWord stem, period;
            for (int i = 0; i < static_cast<int>(rng() % 3); ++i)
              stem.push_back(std::to_string(rng() % 6));
            for (int i = 0; i < vals; ++i)
              period.push_back(std::to_string(rng() % 6));
            const LassoWord counts = make_lasso(stem, period);
            const PatternWord coded = encode_phi(counts);
            std::vector<std::uint64_t> expect;
            FiniteWord manual;
            for (std::uint64_t i = 1; i <= 8; ++i) {
              const std::uint64_t v = std::stoull(counts.letter_at(i));
              expect.push_back(v);
              append_block(manual, v);
            }
            const FiniteWord prefix =
                word_prefix(OmegaWord(coded), manual.size());
            if (prefix != manual)
              return fail_case("the coded word of " + to_string(counts) +
                               " deviates from its direct expansion");
            const PhiDecoded d = decode_phi(prefix);
            if (!d.ok() || d.values != expect)
              return fail_case("decoding the coded word of " +
                               to_string(counts) +
                               " does not return the original values");
            ++cov["round-trip"];
            return pass_case();
          }
          case 1: {  // image membership and deviation disjointness
            const FiniteWord stem = random_blocks(rng, rng() % 3);
            const FiniteWord period = random_blocks(rng, 1 + rng() % 2);
            const LassoWord w = make_lasso(stem, period);
            if (!lasso_in_buchi(pg.image, w))
              return fail_case("a whole-block word is rejected by the image "
                               "machine: " +
                               to_string(w));
            if (lasso_in_buchi(pg.d2, w) || lasso_in_buchi(pg.d3, w) ||
                lasso_in_buchi(pg.d4, w))
              return fail_case("a whole-block word matches a deviation "
                               "machine: " +
                               to_string(w));
            FiniteWord probe = stem;
            probe.insert(probe.end(), period.begin(), period.end());
            if (detect_phi_deviation(probe))
              return fail_case("the scanner flags a clean whole-block "
                               "prefix: " +
                               to_string(w));
            ++cov["image"];
            return pass_case();
          }
          case 2: {  // an odd run closed by zero after whole blocks
            FiniteWord bad = random_blocks(rng, 2 * (rng() % 2));
            const std::uint64_t ones = 2 * (rng() % 3) + 1;
            for (std::uint64_t i = 0; i < ones; ++i) bad.push_back("1");
            bad.push_back("0");
            const auto hit = detect_phi_deviation(bad);
            if (!hit || hit->tag != PhiGuardTag::D2 ||
                hit->position != bad.size())
              return fail_case(
                  "the scanner misses an odd run closed by zero at position " +
                  std::to_string(bad.size()));
            const LassoWord tail = random_lasso(rng, {"0", "1"}, 2, 3);
            FiniteWord stem = bad;
            stem.insert(stem.end(), tail.stem().begin(), tail.stem().end());
            const LassoWord w = make_lasso(stem, tail.period());
            if (!lasso_in_buchi(pg.d2, w))
              return fail_case("the odd-run deviation machine rejects " +
                               to_string(w));
            if (lasso_in_buchi(pg.image, w))
              return fail_case("the image machine accepts the deviating "
                               "word " +
                               to_string(w));
            ++cov["odd-run"];
            return pass_case();
          }
          case 3: {  // whole blocks then ones forever
            const FiniteWord stem = random_blocks(rng, 2 * (rng() % 2) + 1);
            const LassoWord w = make_lasso(stem, FiniteWord{"1"});
            if (!lasso_in_buchi(pg.d3, w))
              return fail_case("the stall machine rejects " + to_string(w));
            if (lasso_in_buchi(pg.image, w) || lasso_in_buchi(pg.d2, w) ||
                lasso_in_buchi(pg.d4, w))
              return fail_case("a stalling word matches the wrong machine: " +
                               to_string(w));
            ++cov["stall"];
            return pass_case();
          }
          default: {  // a zero right after an odd number of whole blocks
            FiniteWord bad = random_blocks(rng, 2 * (rng() % 2) + 1);
            bad.push_back("0");
            const auto hit = detect_phi_deviation(bad);
            if (!hit || hit->tag != PhiGuardTag::D4 ||
                hit->position != bad.size())
              return fail_case(
                  "the scanner misses a zero at a block start at position " +
                  std::to_string(bad.size()));
            const LassoWord tail = random_lasso(rng, {"0", "1"}, 2, 3);
            FiniteWord stem = bad;
            stem.insert(stem.end(), tail.stem().begin(), tail.stem().end());
            const LassoWord w = make_lasso(stem, tail.period());
            if (!lasso_in_buchi(pg.d4, w))
              return fail_case("the empty-block deviation machine rejects " +
                               to_string(w));
            if (lasso_in_buchi(pg.image, w))
              return fail_case("the image machine accepts the deviating "
                               "word " +
                               to_string(w));
            ++cov["empty-block"];
            return pass_case();
          }
        }
      });
}

// --------------------------------------------------------------------------
// Suite: interleave-universality

SuiteReport suite_interleave_universality(const SuiteConfig& cfg) {
  const std::string property =
      "the interleaved game is decided exactly by universality: the solver's "
      "winner matches the direct check, non-universal machines yield a "
      "rejected witness, the winner's strategy wins every settled randomized "
      "play, and the interleaved machine accepts an interleaving exactly "
      "when its even-position word is accepted";
  return drive(
      "interleave-universality", property, 50, true, cfg,
      [&](std::uint64_t, std::mt19937_64& rng, Coverage& cov) -> CaseOutcome {
        const BuchiAutomaton t = random_det_complete(rng);
        const UniversalitySolution sol = solve_universality_game(t);
        const std::optional<LassoWord> direct = universal_det_buchi(t);
        if ((sol.winner == Player::P1) != !direct.has_value())
          return fail_case("the solver's winner disagrees with the direct "
                           "universality check");
        if (sol.winner == Player::P2) {
          if (!sol.rejected_witness)
            return fail_case("a losing machine came without a witness");
          if (lasso_in_buchi(t, *sol.rejected_witness))
            return fail_case("the machine accepts the claimed witness " +
                             to_string(*sol.rejected_witness));
          ++cov["non-universal"];
        } else {
          ++cov["universal"];
        }
        const GSArena arena = universality_arena(t);
        for (int round = 0; round < 3; ++round) {
          const Strategy opp =
              random_fm(other_player(sol.winner), arena.alphabet, rng);
          const PlayRecord rec =
              sol.winner == Player::P1
                  ? play_gs(arena, sol.strategy, opp, cfg.horizon)
                  : play_gs(arena, opp, sol.strategy, cfg.horizon);
          const GameVerdict wanted = sol.winner == Player::P1
                                         ? GameVerdict::P1Wins
                                         : GameVerdict::P2Wins;
          if (rec.verdict != wanted)
            return fail_case("the solver's strategy lost an interleaved "
                             "play: " +
                             rec.evidence);
        }
        const BuchiAutomaton inter = build_interleaved_game(t);
        for (int round = 0; round < 2; ++round) {
          const LassoWord x = random_lasso(rng, {"0", "1"}, 3, 3);
          const LassoWord xp = random_lasso(rng, {"0", "1"}, 3, 3);
          if (lasso_in_buchi(inter, interleave(x, xp)) !=
              lasso_in_buchi(t, xp))
            return fail_case("interleaved membership of (" + to_string(x) +
                             " , " + to_string(xp) +
                             ") disagrees with the even-position word's "
                             "membership");
        }
        return pass_case();
      });
}

// --------------------------------------------------------------------------
// Suite: wadge-basics

SuiteReport suite_wadge_basics(const SuiteConfig& cfg) {
  const std::string property =
      "in the two-board comparison game a copying second player wins the "
      "identity comparison, an always-skipping second player loses, a "
      "letter-swapping reduction wins across complementary languages, and a "
      "constant second player wins exactly when the boards' memberships "
      "agree";
  const Alphabet bits({"0", "1"});
  const BuchiAutomaton ones = example_machine("inf-ones");
  const BuchiAutomaton zeros = example_machine("inf-zeros");
  const LanguageOracle in_ones = [ones](const LassoWord& w) {
    return lasso_in_buchi(ones, w);
  };
  const LanguageOracle in_zeros = [zeros](const LassoWord& w) {
    return lasso_in_buchi(zeros, w);
  };
  SequentialTransducer ident;
  ident.step[{0, "0"}] = {{"0"}, 0};
  ident.step[{0, "1"}] = {{"1"}, 0};
  SequentialTransducer flip;
  flip.step[{0, "0"}] = {{"1"}, 0};
  flip.step[{0, "1"}] = {{"0"}, 0};
  const auto arena_for = [&](const std::string& name, const LanguageOracle& l,
                             const LanguageOracle& lp) {
    WadgeArena arena;
    arena.name = name;
    arena.x = bits;
    arena.y = bits;
    arena.in_l = l;
    arena.in_lp = lp;
    return arena;
  };
  return drive(
      "wadge-basics", property, 60, true, cfg,
      [&](std::uint64_t index, std::mt19937_64& rng,
          Coverage& cov) -> CaseOutcome {
        switch (index % 4) {
          case 0: {  // copycat on the identity comparison
            const BuchiAutomaton m = random_det_complete(rng);
            const LanguageOracle in_m = [m](const LassoWord& w) {
              return lasso_in_buchi(m, w);
            };
            const WadgeArena arena = arena_for("identity", in_m, in_m);
            const Strategy s1 = random_fm(Player::P1, bits, rng);
            const Strategy s2 = reduction_to_wadge_strategy(ident);
            const PlayRecord rec = play_wadge(arena, s1, s2, cfg.horizon);
            if (rec.verdict == GameVerdict::Undetermined) {
              ++cov["undetermined"];
              return unknown_case();
            }
            if (rec.verdict != GameVerdict::P2Wins)
              return fail_case("the copying player lost an identity "
                               "comparison: " +
                               rec.evidence);
            ++cov["copycat"];
            return pass_case();
          }
          case 1: {  // skipping forever loses
            const WadgeArena arena = arena_for("skips", in_ones, in_ones);
            const Strategy s1 = random_fm(Player::P1, bits, rng);
            const Strategy s2 = constant_strategy(Player::P2, kSkipLetter);
            const PlayRecord rec = play_wadge(arena, s1, s2, cfg.horizon);
            if (rec.verdict != GameVerdict::P1Wins)
              return fail_case("an always-skipping player did not lose: " +
                               rec.evidence);
            ++cov["skip"];
            return pass_case();
          }
          case 2: {  // bit-swap reduction between complementary languages
            const WadgeArena arena = arena_for("swap", in_ones, in_zeros);
            const Strategy s1 = random_fm(Player::P1, bits, rng);
            const Strategy s2 = reduction_to_wadge_strategy(flip);
            const PlayRecord rec = play_wadge(arena, s1, s2, cfg.horizon);
            if (rec.verdict == GameVerdict::Undetermined) {
              ++cov["undetermined"];
              return unknown_case();
            }
            if (rec.verdict != GameVerdict::P2Wins)
              return fail_case("the swapping player lost: " + rec.evidence);
            ++cov["swap"];
            return pass_case();
          }
          default: {  // constant second player: verdict tracks agreement
            const WadgeArena arena = arena_for("constant", in_ones, in_ones);
            const bool agree = rng() % 2 == 0;
            const Strategy s1 =
                constant_strategy(Player::P1, agree ? "0" : "1");
            const Strategy s2 = constant_strategy(Player::P2, "0");
            const PlayRecord rec = play_wadge(arena, s1, s2, cfg.horizon);
            const GameVerdict wanted =
                agree ? GameVerdict::P2Wins : GameVerdict::P1Wins;
            if (rec.verdict != wanted)
              return fail_case("a constant comparison settled the wrong "
                               "way: " +
                               rec.evidence);
            ++cov["constant"];
            return pass_case();
          }
        }
      });
}

}  // namespace

// --------------------------------------------------------------------------
// Registry and rendering.

std::vector<std::string> registered_suites() {
  return {"r1-equivalence",      "r2-complement",
          "closure-identity",   "winning-set-decomposition",
          "transfer-tournament", "phi-coding",
          "interleave-universality", "wadge-basics"};
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  if (name == "r1-equivalence") return suite_r1_equivalence(config);
  if (name == "r2-complement") return suite_r2_complement(config);
  if (name == "closure-identity") return suite_closure_identity(config);
  if (name == "winning-set-decomposition") return suite_winning_set(config);
  if (name == "transfer-tournament") return suite_transfer_tournament(config);
  if (name == "phi-coding") return suite_phi_coding(config);
  if (name == "interleave-universality")
    return suite_interleave_universality(config);
  if (name == "wadge-basics") return suite_wadge_basics(config);
  std::string known;
  for (const auto& s : registered_suites()) known += " " + s;
  throw WordError("unknown suite '" + name + "'; registered suites:" + known);
}

std::string replay_command(const std::string& suite, const SuiteConfig& config,
                           std::uint64_t case_index) {
  const SuiteConfig defaults;
  std::ostringstream os;
  os << config.program << " check " << suite << " --seed " << config.seed;
  if (config.cases > 0) os << " --cases " << config.cases;
  if (config.bounds.max_depth != defaults.bounds.max_depth ||
      config.bounds.max_counter != defaults.bounds.max_counter ||
      config.bounds.max_blocks != defaults.bounds.max_blocks)
    os << " --bounds " << config.bounds.max_depth << ","
       << config.bounds.max_counter << "," << config.bounds.max_blocks;
  if (config.horizon != defaults.horizon) os << " --horizon " << config.horizon;
  os << " --only " << case_index;
  return os.str();
}

std::string report_to_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite: " << r.suite << "\n";
  os << "property: " << r.property << "\n";
  os << "seed: " << r.seed << "  cases: " << r.cases << "  passed: "
     << r.passed << "  failed: " << r.failed << "  unknown: " << r.unknown
     << "\n";
  os << "bounds: " << r.bounds.to_string() << "\n";
  if (r.horizon != 0) os << "horizon: " << r.horizon << "\n";
  if (!r.coverage.empty()) {
    os << "coverage:";
    for (const auto& [key, count] : r.coverage)
      os << " " << key << "=" << count;
    os << "\n";
  }
  if (r.failures.empty()) {
    os << "result: " << r.passed << "/" << r.cases << " passed\n";
  } else {
    os << "result: " << r.failed << " failure(s)\n";
    for (const auto& f : r.failures) {
      os << "  case " << f.case_index << ": " << f.description << "\n";
      os << "    replay: " << f.replay << "\n";
    }
  }
  return os.str();
}

std::string report_to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["schema"] = "report/1";
  j["suite"] = r.suite;
  j["property"] = r.property;
  j["seed"] = r.seed;
  j["cases"] = r.cases;
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["unknown"] = r.unknown;
  j["coverage"] = r.coverage;
  j["bounds"] = {{"max_depth", r.bounds.max_depth},
                 {"max_counter", r.bounds.max_counter},
                 {"max_blocks", r.bounds.max_blocks}};
  j["horizon"] = r.horizon;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({{"case", f.case_index},
                             {"description", f.description},
                             {"replay", f.replay}});
  return j.dump(2);
}

// --------------------------------------------------------------------------
// Example machines.

std::vector<std::string> example_machine_names() {
  return {"universal",   "rejector", "inf-a",    "b-at-zero",
          "universal01", "inf-ones", "inf-zeros"};
}

BuchiAutomaton example_machine(const std::string& name) {
  if (name == "universal" || name == "rejector") {
    BuchiAutomaton a(Alphabet({"a", "b"}));
    a.name = name;
    a.num_states = 1;
    a.initial = 0;
    a.accepting = {name == "universal"};
    a.num_counters = 1;
    for (const Letter& l : {Letter("a"), Letter("b")}) {
      a.transitions.push_back({0, l, {0}, {0}, 0});
      a.transitions.push_back({0, l, {1}, {0}, 0});
    }
    return a;
  }
  if (name == "inf-a") {
    BuchiAutomaton a(Alphabet({"a", "b"}));
    a.name = name;
    a.num_states = 2;
    a.initial = 0;
    a.accepting = {false, true};
    a.num_counters = 1;
    for (int q : {0, 1}) {
      a.transitions.push_back({q, "a", {0}, {0}, 1});
      a.transitions.push_back({q, "a", {1}, {0}, 1});
      a.transitions.push_back({q, "b", {0}, {0}, 0});
      a.transitions.push_back({q, "b", {1}, {0}, 0});
    }
    return a;
  }
  if (name == "b-at-zero") {
    // a pushes; b pops when the counter is positive and accepts when it is
    // already zero: accepted words bring the a-minus-b balance back to zero
    // with an excess b infinitely often.
    BuchiAutomaton a(Alphabet({"a", "b"}));
    a.name = name;
    a.num_states = 2;
    a.initial = 0;
    a.accepting = {false, true};
    a.num_counters = 1;
    for (int q : {0, 1}) {
      a.transitions.push_back({q, "a", {0}, {1}, 0});
      a.transitions.push_back({q, "a", {1}, {1}, 0});
      a.transitions.push_back({q, "b", {1}, {-1}, 0});
      a.transitions.push_back({q, "b", {0}, {0}, 1});
    }
    return a;
  }
  if (name == "universal01") {
    BuchiAutomaton a(Alphabet({"0", "1"}));
    a.name = name;
    a.num_states = 1;
    a.initial = 0;
    a.accepting = {true};
    a.transitions.push_back({0, "0", {}, {}, 0});
    a.transitions.push_back({0, "1", {}, {}, 0});
    return a;
  }
  if (name == "inf-ones" || name == "inf-zeros") {
    const Letter hot = name == "inf-ones" ? "1" : "0";
    const Letter cold = name == "inf-ones" ? "0" : "1";
    BuchiAutomaton a(Alphabet({"0", "1"}));
    a.name = name;
    a.num_states = 2;
    a.initial = 0;
    a.accepting = {false, true};
    for (int q : {0, 1}) {
      a.transitions.push_back({q, hot, {}, {}, 1});
      a.transitions.push_back({q, cold, {}, {}, 0});
    }
    return a;
  }
  std::string known;
  for (const auto& s : example_machine_names()) known += " " + s;
  throw WordError("unknown example machine '" + name +
                  "'; available machines:" + known);
}

}  // namespace ratgame
