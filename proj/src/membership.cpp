#include "ratgame/membership.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace ratgame {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Accept: return "Accept";
    case Outcome::Reject: return "Reject";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

std::string SearchBounds::to_string() const {
  std::ostringstream os;
  os << "depth=" << max_depth << ",counter=" << max_counter
     << ",blocks=" << max_blocks;
  return os.str();
}

// --------------------------------------------------------------------------
// Lasso position classes

std::uint64_t lasso_position_class(const LassoWord& w, std::uint64_t n) {
  if (n == 0) throw WordError("positions are 1-based");
  std::uint64_t s = w.stem().size(), p = w.period().size();
  if (n <= s) return n;
  return s + ((n - s - 1) % p) + 1;
}

std::uint64_t lasso_class_next(const LassoWord& w, std::uint64_t c) {
  std::uint64_t s = w.stem().size(), p = w.period().size();
  if (c == s + p) return s + 1;
  return c + 1;
}

const Letter& lasso_class_letter(const LassoWord& w, std::uint64_t c) {
  std::uint64_t s = w.stem().size();
  if (c <= s) return w.stem()[c - 1];
  return w.period()[c - s - 1];
}

// --------------------------------------------------------------------------
// lasso_in_buchi

bool lasso_in_buchi(const BuchiAutomaton& b, const LassoWord& w) {
  if (b.num_counters != 0)
    throw AutomatonError("lasso_in_buchi: machine has counters");
  const std::uint64_t P = w.stem().size() + w.period().size();
  auto id = [&](int q, std::uint64_t pc) {
    return static_cast<int>(q * P + (pc - 1));
  };
  Digraph g;
  g.n = static_cast<int>(b.num_states * P);
  g.adj.resize(g.n);
  std::vector<std::vector<bool>> letter_edge(g.n);
  for (const Transition& t : b.transitions)
    for (std::uint64_t pc = 1; pc <= P; ++pc) {
      if (t.letter.empty()) {
        g.adj[id(t.from, pc)].push_back(id(t.to, pc));
        letter_edge[id(t.from, pc)].push_back(false);
      } else if (t.letter == lasso_class_letter(w, pc)) {
        g.adj[id(t.from, pc)].push_back(id(t.to, lasso_class_next(w, pc)));
        letter_edge[id(t.from, pc)].push_back(true);
      }
    }
  std::vector<bool> reach = reachable_from(g, id(b.initial, 1));
  std::vector<int> comp = strongly_connected_components(g);
  int nc = 0;
  for (int c : comp) nc = std::max(nc, c + 1);
  std::vector<bool> has_acc(nc, false), has_letter(nc, false),
      has_edge(nc, false), reach_comp(nc, false);
  for (int v = 0; v < g.n; ++v) {
    if (reach[v]) reach_comp[comp[v]] = true;
    if (b.accepting[v / static_cast<int>(P)]) has_acc[comp[v]] = true;
    for (std::size_t e = 0; e < g.adj[v].size(); ++e) {
      int u = g.adj[v][e];
      if (comp[u] == comp[v]) {
        has_edge[comp[v]] = true;
        if (letter_edge[v][e]) has_letter[comp[v]] = true;
      }
    }
  }
  for (int c = 0; c < nc; ++c)
    if (reach_comp[c] && has_acc[c] && has_edge[c] && has_letter[c])
      return true;
  return false;
}

// --------------------------------------------------------------------------
// lassopair_in_2tape

bool lassopair_in_2tape(const TwoTapeAutomaton& t, const LassoWord& w1,
                        const LassoWord& w2) {
  const std::uint64_t P1 = w1.stem().size() + w1.period().size();
  const std::uint64_t P2 = w2.stem().size() + w2.period().size();
  auto id = [&](int q, std::uint64_t c1, std::uint64_t c2) {
    return static_cast<int>((q * P1 + (c1 - 1)) * P2 + (c2 - 1));
  };
  // A label (u, v) matches at (c1, c2) if its letters agree with the lasso
  // letters along the advancing classes.
  auto advance = [](const LassoWord& w, std::uint64_t c, const FiniteWord& u,
                    std::uint64_t* out) {
    for (const Letter& a : u) {
      if (a != lasso_class_letter(w, c)) return false;
      c = lasso_class_next(w, c);
    }
    *out = c;
    return true;
  };
  Digraph g;
  g.n = static_cast<int>(t.num_states * P1 * P2);
  g.adj.resize(g.n);
  std::vector<std::vector<std::pair<bool, bool>>> progress(g.n);
  for (const Transition2& tr : t.transitions)
    for (std::uint64_t c1 = 1; c1 <= P1; ++c1)
      for (std::uint64_t c2 = 1; c2 <= P2; ++c2) {
        std::uint64_t n1, n2;
        if (!advance(w1, c1, tr.first, &n1)) continue;
        if (!advance(w2, c2, tr.second, &n2)) continue;
        g.adj[id(tr.from, c1, c2)].push_back(id(tr.to, n1, n2));
        progress[id(tr.from, c1, c2)].push_back(
            {!tr.first.empty(), !tr.second.empty()});
      }
  std::vector<bool> reach = reachable_from(g, id(t.initial, 1, 1));
  std::vector<int> comp = strongly_connected_components(g);
  int nc = 0;
  for (int c : comp) nc = std::max(nc, c + 1);
  std::vector<bool> has_acc(nc, false), has_p1(nc, false), has_p2(nc, false),
      reach_comp(nc, false), has_edge(nc, false);
  for (int v = 0; v < g.n; ++v) {
    if (reach[v]) reach_comp[comp[v]] = true;
    int q = v / static_cast<int>(P1 * P2);
    if (t.accepting[q]) has_acc[comp[v]] = true;
    for (std::size_t e = 0; e < g.adj[v].size(); ++e) {
      int u = g.adj[v][e];
      if (comp[u] == comp[v]) {
        has_edge[comp[v]] = true;
        if (progress[v][e].first) has_p1[comp[v]] = true;
        if (progress[v][e].second) has_p2[comp[v]] = true;
      }
    }
  }
  for (int c = 0; c < nc; ++c)
    if (reach_comp[c] && has_acc[c] && has_edge[c] && has_p1[c] && has_p2[c])
      return true;
  return false;
}

// --------------------------------------------------------------------------
// lasso_in_counter

namespace {

struct CounterGraph {
  const BuchiAutomaton& a;
  const LassoWord& w;
  std::uint64_t P;    // position classes
  std::uint64_t cap;  // counter ceiling (inclusive)

  int node(int q, std::uint64_t pc, std::uint64_t c) const {
    return static_cast<int>((q * P + (pc - 1)) * (cap + 1) + c);
  }
  int total() const {
    return static_cast<int>(a.num_states * P * (cap + 1));
  }
  int q_of(int v) const { return v / static_cast<int>(P * (cap + 1)); }
  std::uint64_t pc_of(int v) const {
    return (v / (cap + 1)) % P + 1;
  }
  std::uint64_t c_of(int v) const { return v % (cap + 1); }

  struct Edge {
    int to;
    int trans;     // transition id
    bool letter;   // consumes a letter
    bool zerotest; // uses a zero test
  };

  /// Edges from node v, optionally excluding zero-test edges and allowing a
  /// different counter ceiling (for the pump search headroom).
  std::vector<Edge> edges(int v, std::uint64_t ceiling,
                          bool exclude_zerotests) const {
    std::vector<Edge> out;
    int q = q_of(v);
    std::uint64_t pc = pc_of(v), c = c_of(v);
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
      const Transition& t = a.transitions[i];
      if (t.from != q) continue;
      bool zt = t.zero_tests[0] == 0;
      if (zt && c != 0) continue;
      if (!zt && c == 0) continue;
      if (exclude_zerotests && zt) continue;
      std::uint64_t pc2 = pc;
      bool letter = !t.letter.empty();
      if (letter) {
        if (t.letter != lasso_class_letter(w, pc)) continue;
        pc2 = lasso_class_next(w, pc);
      }
      std::int64_t c2 = static_cast<std::int64_t>(c) + t.deltas[0];
      if (c2 < 0 || c2 > static_cast<std::int64_t>(ceiling)) continue;
      out.push_back({node(t.to, pc2, static_cast<std::uint64_t>(c2)),
                     static_cast<int>(i), letter, zt});
    }
    return out;
  }
};

/// BFS parent chain -> transition id list from `from` to `to`.
std::vector<int> path_between(const CounterGraph& cg, int from, int to,
                              std::uint64_t ceiling) {
  std::map<int, std::pair<int, int>> parent;  // node -> (prev, trans)
  std::deque<int> work{from};
  parent[from] = {-1, -1};
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    if (v == to) break;
    for (const auto& e : cg.edges(v, ceiling, false))
      if (!parent.count(e.to)) {
        parent[e.to] = {v, e.trans};
        work.push_back(e.to);
      }
  }
  if (!parent.count(to)) throw AutomatonError("internal: path extraction");
  std::vector<int> path;
  for (int v = to; parent.at(v).first != -1; v = parent.at(v).first)
    path.push_back(parent.at(v).second);
  std::reverse(path.begin(), path.end());
  return path;
}

Verdict counter_verdict(Outcome o, std::string ev, const SearchBounds& b) {
  Verdict v;
  v.outcome = o;
  v.evidence = std::move(ev);
  v.bounds_used = b;
  return v;
}

/// Bounded engine for k >= 2 counters: explores exact configurations with
/// every counter capped; Accept on an exactly repeating accepting cycle,
/// Reject only when the exploration closed without dropping any edge.
Verdict multi_counter_bounded(const BuchiAutomaton& a, const LassoWord& w,
                              const SearchBounds& bounds) {
  const std::int64_t cap = static_cast<std::int64_t>(bounds.max_counter);
  using Config = std::tuple<int, std::uint64_t, std::vector<std::int64_t>>;
  std::map<Config, int> ids;
  std::vector<Config> confs;
  auto intern = [&](const Config& c) {
    auto it = ids.find(c);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(ids.size());
    ids.emplace(c, id);
    confs.push_back(c);
    return id;
  };
  std::vector<std::int64_t> zero(a.num_counters, 0);
  intern({a.initial, 1, zero});
  bool clipped = false;
  std::vector<std::vector<int>> adj;
  std::vector<std::vector<bool>> letter_edges;
  for (std::size_t v = 0; v < confs.size(); ++v) {
    if (confs.size() > bounds.max_depth * 64) {
      clipped = true;
      break;
    }
    auto [q, pc, cs] = confs[v];
    adj.resize(confs.size());
    letter_edges.resize(confs.size());
    for (const Transition& t : a.transitions) {
      if (t.from != q) continue;
      bool ok = true;
      std::vector<std::int64_t> cs2 = cs;
      for (int m = 0; m < a.num_counters && ok; ++m) {
        if (t.zero_tests[m] == 0 && cs[m] != 0) ok = false;
        if (t.zero_tests[m] == 1 && cs[m] == 0) ok = false;
        cs2[m] = cs[m] + t.deltas[m];
        if (cs2[m] < 0) ok = false;
        if (cs2[m] > cap) {
          ok = false;
          clipped = true;
        }
      }
      if (!ok) continue;
      std::uint64_t pc2 = pc;
      bool letter = !t.letter.empty();
      if (letter) {
        if (t.letter != lasso_class_letter(w, pc)) continue;
        pc2 = lasso_class_next(w, pc);
      }
      int u = intern({t.to, pc2, cs2});
      adj[v].push_back(u);
      letter_edges[v].push_back(letter);
    }
  }
  adj.resize(confs.size());
  letter_edges.resize(confs.size());
  Digraph g;
  g.n = static_cast<int>(confs.size());
  g.adj = adj;
  std::vector<int> comp = strongly_connected_components(g);
  int nc = 0;
  for (int c : comp) nc = std::max(nc, c + 1);
  std::vector<bool> has_acc(nc, false), has_letter(nc, false),
      has_edge(nc, false);
  for (int v = 0; v < g.n; ++v) {
    if (a.accepting[std::get<0>(confs[v])]) has_acc[comp[v]] = true;
    for (std::size_t e = 0; e < adj[v].size(); ++e)
      if (comp[adj[v][e]] == comp[v]) {
        has_edge[comp[v]] = true;
        if (letter_edges[v][e]) has_letter[comp[v]] = true;
      }
  }
  for (int c = 0; c < nc; ++c)
    if (has_acc[c] && has_edge[c] && has_letter[c])
      return counter_verdict(Outcome::Accept,
                             "repeating accepting configuration cycle",
                             bounds);
  if (!clipped)
    return counter_verdict(Outcome::Reject,
                           "configuration space closed without an accepting "
                           "cycle",
                           bounds);
  return counter_verdict(Outcome::Unknown,
                         "counter ceiling clipped the exploration", bounds);
}

}  // namespace

Verdict lasso_in_counter(const BuchiAutomaton& a, const LassoWord& w,
                         const SearchBounds& bounds, CounterLassoRun* witness,
                         std::uint64_t cutoff_override) {
  a.validate();
  if (a.num_counters == 0) {
    bool acc = lasso_in_buchi(a, w);
    return counter_verdict(acc ? Outcome::Accept : Outcome::Reject,
                           "counterless product cycle search", bounds);
  }
  if (a.num_counters >= 2) return multi_counter_bounded(a, w, bounds);

  const std::uint64_t P = w.stem().size() + w.period().size();
  std::uint64_t cutoff =
      static_cast<std::uint64_t>(a.num_states) * P + 2;
  cutoff = std::max(cutoff, bounds.max_counter);
  if (cutoff_override != 0) cutoff = cutoff_override;
  CounterGraph cg{a, w, P, cutoff};

  // Reachability (with parents for witness extraction).
  int start = cg.node(a.initial, 1, 0);
  std::vector<bool> reach(cg.total(), false);
  std::deque<int> work{start};
  reach[start] = true;
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    for (const auto& e : cg.edges(v, cutoff, false))
      if (!reach[e.to]) {
        reach[e.to] = true;
        work.push_back(e.to);
      }
  }

  std::string cutoff_tag = " (counter cutoff " + std::to_string(cutoff) + ")";

  // Case 1: accepting cycle entirely below the cutoff.
  {
    Digraph g;
    g.n = cg.total();
    g.adj.resize(g.n);
    std::vector<std::vector<bool>> letter_edge(g.n);
    for (int v = 0; v < g.n; ++v) {
      if (!reach[v]) continue;
      for (const auto& e : cg.edges(v, cutoff, false)) {
        g.adj[v].push_back(e.to);
        letter_edge[v].push_back(e.letter);
      }
    }
    std::vector<int> comp = strongly_connected_components(g);
    int nc = 0;
    for (int c : comp) nc = std::max(nc, c + 1);
    std::vector<bool> has_acc(nc, false), has_letter(nc, false),
        has_edge(nc, false), reach_comp(nc, false);
    std::vector<int> acc_node(nc, -1);
    for (int v = 0; v < g.n; ++v) {
      if (!reach[v]) continue;
      reach_comp[comp[v]] = true;
      if (a.accepting[cg.q_of(v)]) {
        has_acc[comp[v]] = true;
        acc_node[comp[v]] = v;
      }
      for (std::size_t e = 0; e < g.adj[v].size(); ++e)
        if (comp[g.adj[v][e]] == comp[v]) {
          has_edge[comp[v]] = true;
          if (letter_edge[v][e]) has_letter[comp[v]] = true;
        }
    }
    for (int c = 0; c < nc; ++c) {
      if (!(reach_comp[c] && has_acc[c] && has_edge[c] && has_letter[c]))
        continue;
      if (witness) {
        int n0 = acc_node[c];
        witness->prefix = path_between(cg, start, n0, cutoff);
        // Cycle n0 -> n0 within the component that consumes a letter:
        // BFS over (node, letter_seen) restricted to the component.
        using CState = std::pair<int, bool>;
        std::map<CState, std::pair<CState, int>> par;
        std::deque<CState> bf;
        CState root{n0, false};
        par[root] = {root, -1};
        bf.push_back(root);
        CState goal{-1, true};
        while (!bf.empty()) {
          CState s = bf.front();
          bf.pop_front();
          if (s.first == n0 && s.second) {
            goal = s;
            break;
          }
          for (const auto& e : cg.edges(s.first, cutoff, false)) {
            if (comp[e.to] != c) continue;
            CState nxt{e.to, s.second || e.letter};
            if (!par.count(nxt)) {
              par[nxt] = {s, e.trans};
              bf.push_back(nxt);
            }
          }
        }
        if (goal.first == -1)
          throw AutomatonError("internal: cycle extraction");
        std::vector<int> loop;
        for (CState cur = goal;;) {
          auto [from, tr] = par.at(cur);
          if (tr == -1) break;
          loop.push_back(tr);
          cur = from;
        }
        std::reverse(loop.begin(), loop.end());
        witness->loop = loop;
        witness->start_counter = cg.c_of(n0);
        witness->net_delta = 0;
        std::uint64_t pos = 1;
        for (int tr : witness->prefix)
          if (!a.transitions[tr].letter.empty()) ++pos;
        witness->loop_start_position = pos;
      }
      return counter_verdict(Outcome::Accept,
                             "accepting configuration cycle" + cutoff_tag,
                             bounds);
    }
  }

  // Case 2: counter-raising pump — from the highest reachable counter at
  // each (state, position class), look for a return with a strictly larger
  // counter, an accepting visit, a consumed letter, and no zero test.
  std::map<std::pair<int, std::uint64_t>, std::uint64_t> top;
  for (int v = 0; v < cg.total(); ++v)
    if (reach[v]) {
      auto key = std::make_pair(cg.q_of(v), cg.pc_of(v));
      auto it = top.find(key);
      if (it == top.end() || it->second < cg.c_of(v)) top[key] = cg.c_of(v);
    }
  const std::uint64_t head = 2 * cutoff + 2;  // pump search headroom
  CounterGraph pg{a, w, P, head};
  for (const auto& [key, c1] : top) {
    auto [q, pc] = key;
    int nu = pg.node(q, pc, c1);
    // BFS over (node, f_seen, letter_seen) in the zero-test-free subgraph.
    struct S {
      int v;
      bool f, l;
      bool operator<(const S& o) const {
        return std::tie(v, f, l) < std::tie(o.v, o.f, o.l);
      }
    };
    std::map<S, std::pair<S, int>> par;
    std::deque<S> bf;
    S s0{nu, a.accepting[q], false};
    par[s0] = {s0, -1};
    bf.push_back(s0);
    S goal{-1, false, false};
    while (!bf.empty()) {
      S s = bf.front();
      bf.pop_front();
      if (s.f && s.l && pg.q_of(s.v) == q && pg.pc_of(s.v) == pc &&
          pg.c_of(s.v) > c1) {
        goal = s;
        break;
      }
      for (const auto& e : pg.edges(s.v, head, true)) {
        S nxt{e.to, s.f || a.accepting[pg.q_of(e.to)], s.l || e.letter};
        if (!par.count(nxt)) {
          par[nxt] = {s, e.trans};
          bf.push_back(nxt);
        }
      }
    }
    if (goal.v == -1) continue;
    if (witness) {
      witness->prefix = path_between(cg, start, cg.node(q, pc, c1), cutoff);
      std::vector<int> loop;
      for (S cur = goal;;) {
        auto [from, tr] = par.at(cur);
        if (tr == -1) break;
        loop.push_back(tr);
        cur = from;
      }
      std::reverse(loop.begin(), loop.end());
      witness->loop = loop;
      witness->start_counter = c1;
      witness->net_delta =
          static_cast<std::int64_t>(pg.c_of(goal.v)) -
          static_cast<std::int64_t>(c1);
      std::uint64_t pos = 1;
      for (int tr : witness->prefix)
        if (!a.transitions[tr].letter.empty()) ++pos;
      witness->loop_start_position = pos;
    }
    return counter_verdict(
        Outcome::Accept,
        "counter-raising accepting loop without zero tests" + cutoff_tag,
        bounds);
  }

  return counter_verdict(
      Outcome::Reject,
      "configuration graph exhausted; no accepting cycle or pump" +
          cutoff_tag,
      bounds);
}

// --------------------------------------------------------------------------
// Certificates

std::string certificate_input_string(const PairWord& input) {
  return to_string(input.first) + "," + to_string(input.second);
}

bool validate_certificate(const TwoTapeAutomaton& m, const RunCertificate& c,
                          std::uint64_t probe_depth) {
  if (c.machine_name != m.name ||
      c.machine_states != static_cast<std::size_t>(m.num_states) ||
      c.machine_transitions != m.transitions.size())
    return false;
  PairWord input = parse_pair(c.input);

  int state = m.initial;
  std::uint64_t pos1 = 1, pos2 = 1;
  auto exec = [&](int tr) -> bool {
    if (tr < 0 || tr >= static_cast<int>(m.transitions.size())) return false;
    const Transition2& t = m.transitions[tr];
    if (t.from != state) return false;
    for (const Letter& x : t.first) {
      if (x != letter_at(input.first, pos1)) return false;
      ++pos1;
    }
    for (const Letter& x : t.second) {
      if (x != letter_at(input.second, pos2)) return false;
      ++pos2;
    }
    state = t.to;
    return true;
  };

  for (int tr : c.prefix)
    if (!exec(tr)) return false;

  for (std::uint64_t r = 1; r <= probe_depth; ++r) {
    bool round_accepting = false;
    std::uint64_t p1 = pos1, p2 = pos2;
    for (const ScheduleSegment& seg : c.loop) {
      std::int64_t count = static_cast<std::int64_t>(seg.repeat_base) +
                           seg.repeat_slope * static_cast<std::int64_t>(r - 1);
      if (count < 0)
        throw AutomatonError("certificate: negative schedule length");
      for (std::int64_t k = 0; k < count; ++k) {
        if (!exec(seg.transition)) return false;
        if (m.accepting[state]) round_accepting = true;
      }
    }
    if (!round_accepting) return false;
    if (pos1 == p1 || pos2 == p2) return false;
  }
  return true;
}

}  // namespace ratgame
