#include "ratgame/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace ratgame {

namespace {

Alphabet merge_alphabets(const Alphabet& a, const Alphabet& b) {
  std::vector<Letter> letters = a.letters();
  for (const Letter& x : b.letters())
    if (!a.contains(x)) letters.push_back(x);
  std::sort(letters.begin(), letters.end());
  return Alphabet(letters);
}

void check_state(int q, int n, const std::string& what) {
  if (q < 0 || q >= n)
    throw AutomatonError(what + ": state " + std::to_string(q) +
                         " out of range");
}

}  // namespace

// --------------------------------------------------------------------------
// BuchiAutomaton

bool BuchiAutomaton::is_realtime() const {
  for (const Transition& t : transitions)
    if (t.letter.empty()) return false;
  return true;
}

void BuchiAutomaton::validate() const {
  if (num_states <= 0) throw AutomatonError(name + ": no states");
  check_state(initial, num_states, name + " initial");
  if (static_cast<int>(accepting.size()) != num_states)
    throw AutomatonError(name + ": accepting mask size mismatch");
  if (!state_names.empty() &&
      static_cast<int>(state_names.size()) != num_states)
    throw AutomatonError(name + ": state name list size mismatch");
  for (const Transition& t : transitions) {
    check_state(t.from, num_states, name + " transition source");
    check_state(t.to, num_states, name + " transition target");
    if (!t.letter.empty() && !alphabet.contains(t.letter))
      throw AutomatonError(name + ": transition letter '" + t.letter +
                           "' not in alphabet");
    if (static_cast<int>(t.zero_tests.size()) != num_counters ||
        static_cast<int>(t.deltas.size()) != num_counters)
      throw AutomatonError(name + ": counter annotation size mismatch");
    for (int m = 0; m < num_counters; ++m) {
      if (t.zero_tests[m] != 0 && t.zero_tests[m] != 1)
        throw AutomatonError(name + ": zero test must be 0 or 1");
      if (t.deltas[m] < -1 || t.deltas[m] > 1)
        throw AutomatonError(name + ": counter delta must be in {-1,0,1}");
      if (t.zero_tests[m] == 0 && t.deltas[m] < 0)
        throw AutomatonError(name +
                             ": cannot decrement a counter tested at zero");
    }
  }
}

void BuchiAutomaton::default_names() {
  if (static_cast<int>(state_names.size()) == num_states) return;
  state_names.resize(num_states);
  for (int i = 0; i < num_states; ++i)
    if (state_names[i].empty()) state_names[i] = std::to_string(i);
}

std::vector<std::vector<int>> BuchiAutomaton::outgoing() const {
  std::vector<std::vector<int>> out(num_states);
  for (std::size_t i = 0; i < transitions.size(); ++i)
    out[transitions[i].from].push_back(static_cast<int>(i));
  return out;
}

BuchiAutomaton union_buchi(const BuchiAutomaton& a, const BuchiAutomaton& b) {
  if (a.num_counters != b.num_counters)
    throw AutomatonError("union: counter counts differ");
  BuchiAutomaton u(merge_alphabets(a.alphabet, b.alphabet));
  u.name = a.name + "+" + b.name;
  u.num_counters = a.num_counters;
  u.num_states = 1 + a.num_states + b.num_states;
  u.accepting.assign(u.num_states, false);
  u.state_names.assign(u.num_states, "");
  u.state_names[0] = "init";
  auto a_id = [&](int q) { return 1 + q; };
  auto b_id = [&](int q) { return 1 + a.num_states + q; };
  for (int q = 0; q < a.num_states; ++q) {
    u.accepting[a_id(q)] = a.accepting[q];
    u.state_names[a_id(q)] =
        "L." + (q < static_cast<int>(a.state_names.size()) ? a.state_names[q]
                                                           : std::to_string(q));
  }
  for (int q = 0; q < b.num_states; ++q) {
    u.accepting[b_id(q)] = b.accepting[q];
    u.state_names[b_id(q)] =
        "R." + (q < static_cast<int>(b.state_names.size()) ? b.state_names[q]
                                                           : std::to_string(q));
  }
  for (const Transition& t : a.transitions) {
    u.transitions.push_back(
        {a_id(t.from), t.letter, t.zero_tests, t.deltas, a_id(t.to)});
    if (t.from == a.initial)
      u.transitions.push_back({0, t.letter, t.zero_tests, t.deltas, a_id(t.to)});
  }
  for (const Transition& t : b.transitions) {
    u.transitions.push_back(
        {b_id(t.from), t.letter, t.zero_tests, t.deltas, b_id(t.to)});
    if (t.from == b.initial)
      u.transitions.push_back({0, t.letter, t.zero_tests, t.deltas, b_id(t.to)});
  }
  u.initial = 0;
  return u;
}

std::vector<bool> productive_states(const BuchiAutomaton& a) {
  // Counter annotations are ignored: this is the structural notion used for
  // guard machines, which carry no counters.
  Digraph g;
  g.n = a.num_states;
  g.adj.resize(g.n);
  std::vector<bool> self_loop(a.num_states, false);
  for (const Transition& t : a.transitions) {
    g.adj[t.from].push_back(t.to);
    if (t.from == t.to) self_loop[t.from] = true;
  }
  std::vector<bool> reach = reachable_from(g, a.initial);
  std::vector<int> comp = strongly_connected_components(g);
  int num_comp = 0;
  for (int c : comp) num_comp = std::max(num_comp, c + 1);
  std::vector<int> comp_size(num_comp, 0);
  for (int c : comp) ++comp_size[c];
  std::vector<bool> good_comp(num_comp, false);
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q] && (comp_size[comp[q]] > 1 || self_loop[q]))
      good_comp[comp[q]] = true;
  // Backward closure: states that can reach a good component.
  Digraph rg;
  rg.n = g.n;
  rg.adj.resize(g.n);
  for (int q = 0; q < g.n; ++q)
    for (int r : g.adj[q]) rg.adj[r].push_back(q);
  std::deque<int> work;
  std::vector<bool> can(g.n, false);
  for (int q = 0; q < g.n; ++q)
    if (good_comp[comp[q]]) {
      can[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int r : rg.adj[q])
      if (!can[r]) {
        can[r] = true;
        work.push_back(r);
      }
  }
  std::vector<bool> productive(a.num_states, false);
  for (int q = 0; q < a.num_states; ++q) productive[q] = reach[q] && can[q];
  return productive;
}

BuchiAutomaton closure_automaton(const BuchiAutomaton& a) {
  if (a.num_counters != 0)
    throw AutomatonError("closure: counter machines not supported");
  std::vector<bool> keep = productive_states(a);
  BuchiAutomaton c(a.alphabet);
  c.name = "Cl(" + a.name + ")";
  std::vector<int> remap(a.num_states, -1);
  for (int q = 0; q < a.num_states; ++q)
    if (keep[q]) {
      remap[q] = c.num_states++;
      c.state_names.push_back(q < static_cast<int>(a.state_names.size())
                                  ? a.state_names[q]
                                  : std::to_string(q));
    }
  if (remap[a.initial] < 0) {
    // Empty language: closure is empty too.
    c.num_states = 1;
    c.state_names = {"dead"};
    c.initial = 0;
    c.accepting = {false};
    return c;
  }
  c.initial = remap[a.initial];
  c.accepting.assign(c.num_states, true);
  for (const Transition& t : a.transitions)
    if (remap[t.from] >= 0 && remap[t.to] >= 0)
      c.transitions.push_back(
          {remap[t.from], t.letter, t.zero_tests, t.deltas, remap[t.to]});
  return c;
}

std::optional<LassoWord> universal_det_buchi(const BuchiAutomaton& a) {
  if (a.num_counters != 0 || !a.is_realtime())
    throw AutomatonError("universality: need a real-time counterless machine");
  // Determinism + completeness.
  std::vector<int> table(
      static_cast<std::size_t>(a.num_states) * a.alphabet.size(), -1);
  auto cell = [&](int q, int x) -> int& {
    return table[static_cast<std::size_t>(q) * a.alphabet.size() + x];
  };
  for (const Transition& t : a.transitions) {
    int x = a.alphabet.index(t.letter);
    if (cell(t.from, x) != -1)
      throw AutomatonError("universality: machine is not deterministic");
    cell(t.from, x) = t.to;
  }
  for (int q = 0; q < a.num_states; ++q)
    for (int x = 0; x < static_cast<int>(a.alphabet.size()); ++x)
      if (cell(q, x) == -1)
        throw AutomatonError("universality: machine is not complete");

  // A word is rejected iff its run tail avoids accepting states forever, so
  // non-universality = a reachable cycle within the non-accepting part.
  Digraph g;
  g.n = a.num_states;
  g.adj.resize(g.n);
  for (int q = 0; q < a.num_states; ++q)
    for (int x = 0; x < static_cast<int>(a.alphabet.size()); ++x)
      g.adj[q].push_back(cell(q, x));
  std::vector<bool> reach = reachable_from(g, a.initial);

  Digraph h;  // restricted to non-accepting states
  h.n = a.num_states;
  h.adj.resize(h.n);
  std::vector<std::vector<Letter>> h_lab(a.num_states);
  for (int q = 0; q < a.num_states; ++q) {
    if (a.accepting[q]) continue;
    for (int x = 0; x < static_cast<int>(a.alphabet.size()); ++x) {
      int r = cell(q, x);
      if (!a.accepting[r]) {
        h.adj[q].push_back(r);
        h_lab[q].push_back(a.alphabet.at(x));
      }
    }
  }
  std::vector<int> comp = strongly_connected_components(h);
  auto on_bad_cycle = [&](int q) {
    if (a.accepting[q]) return false;
    for (std::size_t i = 0; i < h.adj[q].size(); ++i)
      if (h.adj[q][i] == q) return true;
    for (int r = 0; r < h.n; ++r)
      if (r != q && comp[r] == comp[q]) return true;
    return false;
  };
  int target = -1;
  // BFS from the initial state over the full graph to find the closest
  // reachable state sitting on an accepting-free cycle.
  std::vector<int> par(a.num_states, -2), par_letter(a.num_states, -1);
  std::deque<int> bfs{a.initial};
  par[a.initial] = -1;
  while (!bfs.empty() && target == -1) {
    int q = bfs.front();
    bfs.pop_front();
    if (reach[q] && on_bad_cycle(q)) {
      target = q;
      break;
    }
    for (int x = 0; x < static_cast<int>(a.alphabet.size()); ++x) {
      int r = cell(q, x);
      if (par[r] == -2) {
        par[r] = q;
        par_letter[r] = x;
        bfs.push_back(r);
      }
    }
  }
  if (target == -1) return std::nullopt;

  FiniteWord stem;
  for (int q = target; par[q] != -1; q = par[q])
    stem.push_back(a.alphabet.at(par_letter[q]));
  std::reverse(stem.begin(), stem.end());

  // Cycle through `target` within the non-accepting subgraph.
  FiniteWord period;
  std::vector<int> cpar(a.num_states, -2), cpar_idx(a.num_states, -1);
  std::deque<int> cb;
  for (std::size_t i = 0; i < h.adj[target].size(); ++i) {
    int r = h.adj[target][i];
    if (r == target) {
      period = {h_lab[target][i]};
      break;
    }
    if (cpar[r] == -2) {
      cpar[r] = target;
      cpar_idx[r] = static_cast<int>(i);
      cb.push_back(r);
    }
  }
  while (period.empty()) {
    if (cb.empty())
      throw AutomatonError("universality: internal cycle extraction failure");
    int q = cb.front();
    cb.pop_front();
    bool closed = false;
    for (std::size_t i = 0; i < h.adj[q].size() && !closed; ++i) {
      int r = h.adj[q][i];
      if (r == target) {
        period.push_back(h_lab[q][i]);
        for (int s = q; s != target; s = cpar[s])
          period.push_back(h_lab[cpar[s]][cpar_idx[s]]);
        std::reverse(period.begin(), period.end());
        closed = true;
      } else if (cpar[r] == -2) {
        cpar[r] = q;
        cpar_idx[r] = static_cast<int>(i);
        cb.push_back(r);
      }
    }
  }
  return LassoWord(a.alphabet, std::move(stem), std::move(period));
}

// --------------------------------------------------------------------------
// TwoTapeAutomaton

void TwoTapeAutomaton::validate() const {
  if (num_states <= 0) throw AutomatonError(name + ": no states");
  check_state(initial, num_states, name + " initial");
  if (static_cast<int>(accepting.size()) != num_states)
    throw AutomatonError(name + ": accepting mask size mismatch");
  for (const Transition2& t : transitions) {
    check_state(t.from, num_states, name + " transition source");
    check_state(t.to, num_states, name + " transition target");
    for (const Letter& x : t.first)
      if (!alphabet1.contains(x))
        throw AutomatonError(name + ": tape-1 letter '" + x +
                             "' not in alphabet");
    for (const Letter& x : t.second)
      if (!alphabet2.contains(x))
        throw AutomatonError(name + ": tape-2 letter '" + x +
                             "' not in alphabet");
  }
}

void TwoTapeAutomaton::default_names() {
  if (static_cast<int>(state_names.size()) == num_states) return;
  state_names.resize(num_states);
  for (int i = 0; i < num_states; ++i)
    if (state_names[i].empty()) state_names[i] = std::to_string(i);
}

std::vector<std::vector<int>> TwoTapeAutomaton::outgoing() const {
  std::vector<std::vector<int>> out(num_states);
  for (std::size_t i = 0; i < transitions.size(); ++i)
    out[transitions[i].from].push_back(static_cast<int>(i));
  return out;
}

TwoTapeAutomaton union_2tape(const TwoTapeAutomaton& a,
                             const TwoTapeAutomaton& b) {
  TwoTapeAutomaton u(merge_alphabets(a.alphabet1, b.alphabet1),
                     merge_alphabets(a.alphabet2, b.alphabet2));
  u.name = a.name + "+" + b.name;
  u.num_states = 1 + a.num_states + b.num_states;
  u.accepting.assign(u.num_states, false);
  u.state_names.assign(u.num_states, "");
  u.state_names[0] = "init";
  auto a_id = [&](int q) { return 1 + q; };
  auto b_id = [&](int q) { return 1 + a.num_states + q; };
  for (int q = 0; q < a.num_states; ++q) {
    u.accepting[a_id(q)] = a.accepting[q];
    u.state_names[a_id(q)] =
        "L." + (q < static_cast<int>(a.state_names.size()) ? a.state_names[q]
                                                           : std::to_string(q));
  }
  for (int q = 0; q < b.num_states; ++q) {
    u.accepting[b_id(q)] = b.accepting[q];
    u.state_names[b_id(q)] =
        "R." + (q < static_cast<int>(b.state_names.size()) ? b.state_names[q]
                                                           : std::to_string(q));
  }
  for (const Transition2& t : a.transitions) {
    u.transitions.push_back({a_id(t.from), t.first, t.second, a_id(t.to)});
    if (t.from == a.initial)
      u.transitions.push_back({0, t.first, t.second, a_id(t.to)});
  }
  for (const Transition2& t : b.transitions) {
    u.transitions.push_back({b_id(t.from), t.first, t.second, b_id(t.to)});
    if (t.from == b.initial)
      u.transitions.push_back({0, t.first, t.second, b_id(t.to)});
  }
  u.initial = 0;
  return u;
}

TwoTapeAutomaton product_2tape(const BuchiAutomaton& a1,
                               const BuchiAutomaton& a2) {
  if (a1.num_counters != 0 || a2.num_counters != 0 || !a1.is_realtime() ||
      !a2.is_realtime())
    throw AutomatonError("product: need real-time counterless components");
  TwoTapeAutomaton p(a1.alphabet, a2.alphabet);
  p.name = a1.name + "x" + a2.name;
  // Phase 0: waiting for a tape-1 move into an accepting a1 state.
  // Phase 1: waiting for a tape-2 move into an accepting a2 state.
  // Phase 2: both just seen (accepting); behaves like phase 0.
  auto id = [&](int q1, int q2, int ph) {
    return (q1 * a2.num_states + q2) * 3 + ph;
  };
  p.num_states = a1.num_states * a2.num_states * 3;
  p.accepting.assign(p.num_states, false);
  p.state_names.assign(p.num_states, "");
  for (int q1 = 0; q1 < a1.num_states; ++q1)
    for (int q2 = 0; q2 < a2.num_states; ++q2)
      for (int ph = 0; ph < 3; ++ph) {
        p.accepting[id(q1, q2, ph)] = (ph == 2);
        p.state_names[id(q1, q2, ph)] = "(" + std::to_string(q1) + "," +
                                        std::to_string(q2) + ";" +
                                        std::to_string(ph) + ")";
      }
  p.initial = id(a1.initial, a2.initial, 0);
  for (const Transition& t : a1.transitions)
    for (int q2 = 0; q2 < a2.num_states; ++q2)
      for (int ph = 0; ph < 3; ++ph) {
        int nph = (ph == 1) ? 1 : (a1.accepting[t.to] ? 1 : 0);
        p.transitions.push_back(
            {id(t.from, q2, ph), {t.letter}, {}, id(t.to, q2, nph)});
      }
  for (const Transition& t : a2.transitions)
    for (int q1 = 0; q1 < a1.num_states; ++q1)
      for (int ph = 0; ph < 3; ++ph) {
        int nph = (ph == 1) ? (a2.accepting[t.to] ? 2 : 1) : 0;
        p.transitions.push_back(
            {id(q1, t.from, ph), {}, {t.letter}, id(q1, t.to, nph)});
      }
  return p;
}

namespace {

/// All (end state, visited-an-accepting-state) pairs of g-paths reading w
/// from `from`.  The start state itself does not count as visited.
std::vector<std::pair<int, bool>> nfa_word_paths(
    const BuchiAutomaton& g, const std::vector<std::vector<int>>& out, int from,
    const FiniteWord& w) {
  std::set<std::pair<int, bool>> cur{{from, false}};
  for (const Letter& x : w) {
    std::set<std::pair<int, bool>> next;
    for (auto [q, seen] : cur)
      for (int ti : out[q]) {
        const Transition& t = g.transitions[ti];
        if (t.letter == x)
          next.insert({t.to, seen || g.accepting[t.to]});
      }
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return {cur.begin(), cur.end()};
}

}  // namespace

TwoTapeAutomaton constrained_product_2tape(const TwoTapeAutomaton& a,
                                           const BuchiAutomaton& g1,
                                           const BuchiAutomaton& g2) {
  if (g1.num_counters != 0 || g2.num_counters != 0 || !g1.is_realtime() ||
      !g2.is_realtime())
    throw AutomatonError("constrained product: guards must be real-time NFAs");
  TwoTapeAutomaton p(a.alphabet1, a.alphabet2);
  p.name = a.name + "&" + g1.name + "&" + g2.name;
  auto a_out = a.outgoing();
  auto g1_out = g1.outgoing();
  auto g2_out = g2.outgoing();

  // Reachable construction over (a state, g1 state, g2 state, index) where
  // index counts the generalized-Büchi sets satisfied so far, in the order
  // [destination accepting in a, guard-1 passed accepting, guard-2 passed
  // accepting]; index 3 marks an accepting flush and restarts at 0.
  std::map<std::tuple<int, int, int, int>, int> ids;
  std::vector<std::tuple<int, int, int, int>> todo;
  auto intern = [&](int q, int s1, int s2, int idx) {
    auto key = std::make_tuple(q, s1, s2, idx);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(ids.size());
    ids.emplace(key, id);
    todo.push_back(key);
    return id;
  };
  p.initial = intern(a.initial, g1.initial, g2.initial, 0);
  while (!todo.empty()) {
    auto [q, s1, s2, idx] = todo.back();
    todo.pop_back();
    int from = ids.at({q, s1, s2, idx});
    for (int ti : a_out[q]) {
      const Transition2& t = a.transitions[ti];
      auto ends1 = nfa_word_paths(g1, g1_out, s1, t.first);
      auto ends2 = nfa_word_paths(g2, g2_out, s2, t.second);
      for (auto [n1, pass1] : ends1)
        for (auto [n2, pass2] : ends2) {
          int k = (idx == 3) ? 0 : idx;
          if (k == 0 && a.accepting[t.to]) k = 1;
          if (k == 1 && pass1) k = 2;
          if (k == 2 && pass2) k = 3;
          int to = intern(t.to, n1, n2, k);
          p.transitions.push_back({from, t.first, t.second, to});
        }
    }
  }
  p.num_states = static_cast<int>(ids.size());
  p.accepting.assign(p.num_states, false);
  p.state_names.assign(p.num_states, "");
  for (const auto& [key, id] : ids) {
    auto [q, s1, s2, idx] = key;
    p.accepting[id] = (idx == 3);
    p.state_names[id] = "(" + std::to_string(q) + ";" + std::to_string(s1) +
                        "," + std::to_string(s2) + ";" + std::to_string(idx) +
                        ")";
  }
  return p;
}

// --------------------------------------------------------------------------
// FiniteAutomaton

void FiniteAutomaton::validate() const {
  if (num_states <= 0) throw AutomatonError("finite automaton: no states");
  check_state(initial, num_states, "finite automaton initial");
  if (static_cast<int>(final_states.size()) != num_states)
    throw AutomatonError("finite automaton: final mask size mismatch");
  for (const auto& [from, letter, to] : transitions) {
    check_state(from, num_states, "finite automaton source");
    check_state(to, num_states, "finite automaton target");
    if (!alphabet.contains(letter))
      throw AutomatonError("finite automaton letter '" + letter +
                           "' not in alphabet");
  }
}

bool FiniteAutomaton::accepts(const FiniteWord& w) const {
  std::set<int> cur{initial};
  for (const Letter& x : w) {
    std::set<int> next;
    for (const auto& [from, letter, to] : transitions)
      if (letter == x && cur.count(from)) next.insert(to);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  for (int q : cur)
    if (final_states[q]) return true;
  return false;
}

FiniteAutomaton prefix_automaton(const BuchiAutomaton& a) {
  if (a.num_counters != 0 || !a.is_realtime())
    throw AutomatonError("prefix automaton: need a real-time counterless NFA");
  std::vector<bool> keep = productive_states(a);
  FiniteAutomaton f(a.alphabet);
  std::vector<int> remap(a.num_states, -1);
  for (int q = 0; q < a.num_states; ++q)
    if (keep[q]) remap[q] = f.num_states++;
  if (remap[a.initial] < 0) {
    f.num_states = 1;
    f.initial = 0;
    f.final_states = {false};
    return f;
  }
  f.initial = remap[a.initial];
  f.final_states.assign(f.num_states, true);
  for (const Transition& t : a.transitions)
    if (remap[t.from] >= 0 && remap[t.to] >= 0)
      f.transitions.emplace_back(remap[t.from], t.letter, remap[t.to]);
  return f;
}

FiniteAutomaton determinize(const FiniteAutomaton& a) {
  FiniteAutomaton d(a.alphabet);
  std::map<std::set<int>, int> ids;
  std::vector<std::set<int>> todo;
  auto intern = [&](const std::set<int>& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(ids.size());
    ids.emplace(s, id);
    todo.push_back(s);
    return id;
  };
  d.initial = intern({a.initial});
  std::vector<std::vector<std::pair<Letter, int>>> out(a.num_states);
  for (const auto& [from, letter, to] : a.transitions)
    out[from].push_back({letter, to});
  while (!todo.empty()) {
    std::set<int> s = todo.back();
    todo.pop_back();
    int from = ids.at(s);
    for (const Letter& x : a.alphabet.letters()) {
      std::set<int> next;
      for (int q : s)
        for (const auto& [letter, to] : out[q])
          if (letter == x) next.insert(to);
      int id = intern(next);
      d.transitions.emplace_back(from, x, id);
    }
  }
  d.num_states = static_cast<int>(ids.size());
  d.final_states.assign(d.num_states, false);
  for (const auto& [s, id] : ids)
    for (int q : s)
      if (a.final_states[q]) d.final_states[id] = true;
  return d;
}

// --------------------------------------------------------------------------
// Graph utilities

std::vector<int> strongly_connected_components(const Digraph& g) {
  std::vector<int> comp(g.n, -1), low(g.n, 0), idx(g.n, -1), stack;
  std::vector<bool> on_stack(g.n, false);
  int next_index = 0, next_comp = 0;
  // Iterative Tarjan.
  struct Frame {
    int node;
    std::size_t child;
  };
  for (int root = 0; root < g.n; ++root) {
    if (idx[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    idx[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < g.adj[f.node].size()) {
        int w = g.adj[f.node][f.child++];
        if (idx[w] == -1) {
          idx[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], idx[w]);
        }
      } else {
        if (low[f.node] == idx[f.node]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == f.node) break;
          }
          ++next_comp;
        }
        int done = f.node;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().node] = std::min(low[frames.back().node], low[done]);
      }
    }
  }
  return comp;
}

std::vector<bool> reachable_from(const Digraph& g, int start) {
  std::vector<bool> seen(g.n, false);
  if (start < 0 || start >= g.n) return seen;
  std::deque<int> work{start};
  seen[start] = true;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int r : g.adj[q])
      if (!seen[r]) {
        seen[r] = true;
        work.push_back(r);
      }
  }
  return seen;
}

}  // namespace ratgame
