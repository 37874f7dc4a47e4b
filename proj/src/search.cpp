#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "ratgame/constructions.hpp"
#include "ratgame/format.hpp"
#include "ratgame/membership.hpp"

// Bounded run search: one membership front door for machines on words that
// need not be lassos.  Lasso-class inputs go to the exact product engines;
// coded pattern pairs on an annotated simulation machine are decided through
// the source machine (with a replayable certificate on Accept); everything
// else falls back to a breadth-first exploration that can Reject (when the
// reachable configuration space is exhausted) but never Accept.

namespace ratgame {

namespace {

Verdict make_verdict(Outcome o, std::string ev, const SearchBounds& b) {
  Verdict v;
  v.outcome = o;
  v.evidence = std::move(ev);
  v.bounds_used = b;
  return v;
}

// Generic engine for a two-tape machine on arbitrary positional words.
Verdict positional_pair_search(const TwoTapeAutomaton& m, const PairWord& input,
                               const SearchBounds& bounds) {
  const auto og = m.outgoing();
  using Node = std::tuple<int, std::uint64_t, std::uint64_t>;
  std::set<Node> seen;
  std::vector<Node> frontier{{m.initial, 1, 1}};
  seen.insert(frontier.front());
  const std::size_t node_budget = std::size_t{1} << 21;
  for (std::uint64_t depth = 1; depth <= bounds.max_depth; ++depth) {
    std::vector<Node> next;
    for (const auto& [s, p1, p2] : frontier) {
      for (int ti : og[s]) {
        const Transition2& t = m.transitions[ti];
        bool ok = true;
        for (std::size_t k = 0; ok && k < t.first.size(); ++k)
          ok = letter_at(input.first, p1 + k) == t.first[k];
        for (std::size_t k = 0; ok && k < t.second.size(); ++k)
          ok = letter_at(input.second, p2 + k) == t.second[k];
        if (!ok) continue;
        Node node{t.to, p1 + t.first.size(), p2 + t.second.size()};
        if (seen.insert(node).second) next.push_back(node);
      }
    }
    if (next.empty())
      return make_verdict(
          Outcome::Reject,
          "the reachable configuration set is exhausted after " +
              std::to_string(depth) + " steps, no accepting run exists",
          bounds);
    if (seen.size() > node_budget)
      return make_verdict(Outcome::Unknown,
                          "configuration budget exhausted before the depth "
                          "bound",
                          bounds);
    frontier = std::move(next);
  }
  return make_verdict(Outcome::Unknown,
                      "no conclusion within the depth bound", bounds);
}

// Generic engine for a counter machine on an arbitrary positional word.
Verdict positional_word_search(const BuchiAutomaton& m, const OmegaWord& input,
                               const SearchBounds& bounds) {
  const auto og = m.outgoing();
  using Node = std::tuple<int, std::uint64_t, std::vector<std::uint64_t>>;
  std::set<Node> seen;
  std::vector<Node> frontier{
      {m.initial, 1, std::vector<std::uint64_t>(m.num_counters, 0)}};
  seen.insert(frontier.front());
  bool clipped = false;
  const std::size_t node_budget = std::size_t{1} << 21;
  for (std::uint64_t depth = 1; depth <= bounds.max_depth; ++depth) {
    std::vector<Node> next;
    for (const auto& [s, pos, cnt] : frontier) {
      for (int ti : og[s]) {
        const Transition& t = m.transitions[ti];
        if (!t.letter.empty() && t.letter != letter_at(input, pos)) continue;
        bool ok = true;
        std::vector<std::uint64_t> nc = cnt;
        for (int j = 0; ok && j < m.num_counters; ++j) {
          if ((t.zero_tests[j] == 0) != (cnt[j] == 0)) {
            ok = false;
            break;
          }
          const std::int64_t v =
              static_cast<std::int64_t>(cnt[j]) + t.deltas[j];
          if (v < 0) {
            ok = false;
            break;
          }
          if (static_cast<std::uint64_t>(v) > bounds.max_counter) {
            ok = false;
            clipped = true;
            break;
          }
          nc[j] = static_cast<std::uint64_t>(v);
        }
        if (!ok) continue;
        Node node{t.to, pos + (t.letter.empty() ? 0 : 1), std::move(nc)};
        if (seen.insert(node).second) next.push_back(node);
      }
    }
    if (next.empty()) {
      if (clipped)
        return make_verdict(Outcome::Unknown,
                            "exploration was clipped at the counter bound",
                            bounds);
      return make_verdict(
          Outcome::Reject,
          "the reachable configuration set is exhausted after " +
              std::to_string(depth) + " steps, no accepting run exists",
          bounds);
    }
    if (seen.size() > node_budget)
      return make_verdict(Outcome::Unknown,
                          "configuration budget exhausted before the depth "
                          "bound",
                          bounds);
    frontier = std::move(next);
  }
  return make_verdict(Outcome::Unknown,
                      "no conclusion within the depth bound", bounds);
}

// Decides the coded pair (h(x), alpha) on a simulation machine through its
// annotated source, after cross-checking that the machine really simulates
// that source block by block.
Verdict coded_simulation_search(const TwoTapeAutomaton& m,
                                const std::string& printed, const LassoWord& x,
                                const SearchBounds& bounds) {
  AnyAutomaton any = parse_automaton(printed);
  const BuchiAutomaton& src = std::get<BuchiAutomaton>(any);

  const int blocks =
      static_cast<int>(std::min<std::uint64_t>(10, bounds.max_blocks));
  const auto mine = r1_block_configurations(m, x, blocks);
  const auto theirs = counter_configurations(src, x, blocks);
  for (int i = 1; i <= blocks; ++i)
    if (mine[static_cast<std::size_t>(i)] != theirs[static_cast<std::size_t>(i)])
      return make_verdict(Outcome::Unknown,
                          "the annotated source machine disagrees with the "
                          "simulation's block configurations",
                          bounds);

  CounterLassoRun run;
  const Verdict v = lasso_in_counter(src, x, bounds, &run);
  if (v.outcome == Outcome::Accept) {
    RunCertificate cert = run_builder_R1(src, x, run);
    if (!validate_certificate(m, cert, 30))
      return make_verdict(Outcome::Unknown,
                          "the schedule certificate failed validation",
                          bounds);
    Verdict out = make_verdict(
        Outcome::Accept,
        "the source machine accepts the base word; the schedule certificate "
        "replays for 30 rounds",
        bounds);
    out.certificate = std::move(cert);
    return out;
  }
  if (v.outcome == Outcome::Reject)
    return make_verdict(
        Outcome::Reject,
        "the source machine rejects the base word, and the simulation's "
        "block configurations track the source exactly",
        bounds);
  return make_verdict(Outcome::Unknown,
                      v.evidence.empty()
                          ? "source membership is undecided within the bounds"
                          : v.evidence,
                      bounds);
}

}  // namespace

Verdict bounded_run_search(const TwoTapeAutomaton& m, const PairWord& input,
                           const SearchBounds& bounds) {
  m.validate();
  if (bounds.max_depth == 0)
    return make_verdict(Outcome::Unknown, "no exploration budget", bounds);

  if (is_lasso_class(input.first) && is_lasso_class(input.second)) {
    const bool in =
        lassopair_in_2tape(m, as_lasso(input.first), as_lasso(input.second));
    return make_verdict(in ? Outcome::Accept : Outcome::Reject,
                        "exact decision on the lasso pair's product graph",
                        bounds);
  }

  const auto ann = m.annotations.find("r1.source");
  if (ann != m.annotations.end() &&
      std::holds_alternative<PatternWord>(input.first) &&
      std::holds_alternative<PatternWord>(input.second)) {
    const PatternWord& w1 = std::get<PatternWord>(input.first);
    const PatternWord& w2 = std::get<PatternWord>(input.second);
    if (w1.kind() == PatternKind::HCode &&
        w2.kind() == PatternKind::AlphaWord) {
      try {
        return coded_simulation_search(m, ann->second, w1.base(), bounds);
      } catch (const std::exception&) {
        // cannot be treated as a coded simulation; use the generic engine
      }
    }
  }
  return positional_pair_search(m, input, bounds);
}

Verdict bounded_run_search(const BuchiAutomaton& m, const OmegaWord& input,
                           const SearchBounds& bounds) {
  m.validate();
  if (bounds.max_depth == 0)
    return make_verdict(Outcome::Unknown, "no exploration budget", bounds);
  if (is_lasso_class(input)) return lasso_in_counter(m, as_lasso(input), bounds);
  return positional_word_search(m, input, bounds);
}

}  // namespace ratgame
