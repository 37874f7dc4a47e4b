#include "ratgame/constructions.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <tuple>

#include "ratgame/format.hpp"

namespace ratgame {

namespace {

// ---------------------------------------------------------------------------
// The coded simulation.
//
// On tape 1 the machine expects blocks  0^{u_i} 0^{v_i} [A] x(i); on tape 2
// blocks 0^{w_i} 0^{z_i} [AA or A].  It simulates one step of the source
// machine per block: the v-zeros are the counter value entering the step, the
// w-zeros the value leaving it, matched one against the other; the gap phase
// then pairs the z-zeros with the leading u-zeros of the next tape-1 run and
// requires u_{i+1} = z_i + 1.  On the coded pair (h(x), alpha) the run
// lengths are i and i+1, which pins u_i + v_i = i and w_i + z_i = i and
// forces v_{i+1} = w_i: the guessed counter values chain exactly, so the
// machine accepts the coded pair iff the source machine accepts x.
//
// States:
//   start       initial; consumes the free zeros before the first block
//   rs:q:p      round start, thread state q, block parity p (o = odd)
//   pair:d:p    matching v-zeros against w-zeros for source transition d
//   drop:d:p    one leftover v-zero consumed (decrementing transitions)
//   gap:q:p     matching z-zeros against next-run u-zeros
// Only rs (and possibly start) states are accepting, mirroring the source
// machine's accepting set, so runs parked forever in pair/gap loops on
// all-zero tails cannot accept.

struct R1Layout {
  TwoTapeAutomaton machine;

  int start = 0;
  std::vector<std::array<int, 2>> rs_state, b_state;  // per source state
  std::vector<std::array<int, 2>> p_state, d_state;   // per source transition

  int sloop = -1;               // start zero loop
  std::vector<int> sguess;      // first-step guesses (zero-test transitions)
  std::vector<std::array<int, 2>> rs_exit, rs_pair, rs_extra;  // per transition
  std::vector<std::array<int, 2>> p_self, p_exit, p_extra, d_exit;
  std::vector<std::array<int, 2>> b_self, b_exit;  // per source state
};

R1Layout make_r1_layout(const BuchiAutomaton& a) {
  if (a.num_counters != 1)
    throw AutomatonError(
        "coded simulation: source machine must have exactly one counter");
  if (!a.is_realtime())
    throw AutomatonError("coded simulation: source machine must be real-time");
  a.validate();

  const int nq = a.num_states;
  const int nd = static_cast<int>(a.transitions.size());
  const CodingAlphabets ca(a.alphabet);

  R1Layout lay;
  TwoTapeAutomaton& m = lay.machine;
  m = TwoTapeAutomaton(ca.sigma1, ca.gamma);
  m.name = "R1[" + (a.name.empty() ? "source" : a.name) + "]";

  auto new_state = [&](const std::string& nm, bool acc) {
    m.state_names.push_back(nm);
    m.accepting.push_back(acc);
    return m.num_states++;
  };
  static const char* par[2] = {"o", "e"};

  lay.start = new_state("start", a.accepting[a.initial]);
  lay.rs_state.assign(nq, {-1, -1});
  lay.b_state.assign(nq, {-1, -1});
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < 2; ++p) {
      lay.rs_state[q][p] =
          new_state("rs:" + std::to_string(q) + ":" + par[p], a.accepting[q]);
      lay.b_state[q][p] =
          new_state("gap:" + std::to_string(q) + ":" + par[p], false);
    }
  lay.p_state.assign(nd, {-1, -1});
  lay.d_state.assign(nd, {-1, -1});
  for (int d = 0; d < nd; ++d) {
    const Transition& t = a.transitions[d];
    if (t.zero_tests[0] == 1)
      for (int p = 0; p < 2; ++p)
        lay.p_state[d][p] =
            new_state("pair:" + std::to_string(d) + ":" + par[p], false);
    if (t.zero_tests[0] == 1 && t.deltas[0] < 0)
      for (int p = 0; p < 2; ++p)
        lay.d_state[d][p] =
            new_state("drop:" + std::to_string(d) + ":" + par[p], false);
  }
  m.initial = lay.start;

  auto add = [&](int from, FiniteWord f, FiniteWord s, int to) {
    m.transitions.push_back({from, std::move(f), std::move(s), to});
    return static_cast<int>(m.transitions.size()) - 1;
  };
  const Letter zero = "0", mark = "A";
  auto marker1 = [&](int p, const Letter& x) {
    return p == 0 ? FiniteWord{mark, x} : FiniteWord{x};
  };
  auto out_word = [&](int delta) {
    return delta > 0 ? FiniteWord{zero} : FiniteWord{};
  };

  lay.sloop = add(lay.start, {zero}, {}, lay.start);
  lay.sguess.assign(nd, -1);
  lay.rs_exit.assign(nd, {-1, -1});
  lay.rs_pair.assign(nd, {-1, -1});
  lay.rs_extra.assign(nd, {-1, -1});
  lay.p_self.assign(nd, {-1, -1});
  lay.p_exit.assign(nd, {-1, -1});
  lay.p_extra.assign(nd, {-1, -1});
  lay.d_exit.assign(nd, {-1, -1});

  for (int d = 0; d < nd; ++d) {
    const Transition& t = a.transitions[d];
    if (t.zero_tests[0] == 0 && t.from == a.initial)
      lay.sguess[d] = add(lay.start, marker1(0, t.letter),
                          out_word(t.deltas[0]), lay.b_state[t.to][0]);
  }
  for (int d = 0; d < nd; ++d) {
    const Transition& t = a.transitions[d];
    for (int p = 0; p < 2; ++p) {
      const int rs = lay.rs_state[t.from][p];
      if (t.zero_tests[0] == 0) {
        lay.rs_exit[d][p] = add(rs, marker1(p, t.letter),
                                out_word(t.deltas[0]), lay.b_state[t.to][p]);
      } else {
        const int ps = lay.p_state[d][p];
        lay.rs_pair[d][p] = add(rs, {zero}, {zero}, ps);
        lay.p_self[d][p] = add(ps, {zero}, {zero}, ps);
        if (t.deltas[0] >= 0) {
          lay.p_exit[d][p] = add(ps, marker1(p, t.letter),
                                 out_word(t.deltas[0]), lay.b_state[t.to][p]);
        } else {
          const int ds = lay.d_state[d][p];
          lay.rs_extra[d][p] = add(rs, {zero}, {}, ds);
          lay.p_extra[d][p] = add(ps, {zero}, {}, ds);
          lay.d_exit[d][p] =
              add(ds, marker1(p, t.letter), {}, lay.b_state[t.to][p]);
        }
      }
    }
  }
  lay.b_self.assign(nq, {-1, -1});
  lay.b_exit.assign(nq, {-1, -1});
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < 2; ++p) {
      const int bs = lay.b_state[q][p];
      lay.b_self[q][p] = add(bs, {zero}, {zero}, bs);
      // Tape-2 marker closing the current block (double at odd blocks) plus
      // the forced extra zero opening the next tape-1 run; parity flips.
      lay.b_exit[q][p] =
          add(bs, {zero}, p == 0 ? FiniteWord{mark, mark} : FiniteWord{mark},
              lay.rs_state[q][1 - p]);
    }

  m.annotations["r1.source"] = print_automaton(a);
  m.validate();
  return lay;
}

}  // namespace

TwoTapeAutomaton build_R1(const BuchiAutomaton& a) {
  return make_r1_layout(a).machine;
}

RunCertificate run_builder_R1(const BuchiAutomaton& a, const LassoWord& x,
                              const CounterLassoRun& run) {
  R1Layout lay = make_r1_layout(a);
  const std::uint64_t plen = run.loop.size();
  if (plen == 0) throw AutomatonError("run builder: loop is empty");
  const std::uint64_t head = run.prefix.size() + 1;
  if (run.loop_start_position != head)
    throw AutomatonError("run builder: loop start does not match the prefix");

  // Loop slots must repeat with the same block parity, so the schedule period
  // is the run period doubled when odd.
  const std::uint64_t pp = (plen % 2 == 0) ? plen : 2 * plen;
  const std::uint64_t max_shift = 3;
  const std::uint64_t need = head - 1 + (max_shift + 2) * pp;

  // Replay the run far enough to cover every block the certificate mentions,
  // validating each step against the source machine and the word.
  const int nd = static_cast<int>(a.transitions.size());
  std::vector<int> q(need + 1), tid(need + 1, -1);
  std::vector<std::uint64_t> c(need + 2, 0);
  q[0] = a.initial;
  for (std::uint64_t i = 1; i <= need; ++i) {
    const int id =
        (i < head) ? run.prefix[i - 1] : run.loop[(i - head) % plen];
    if (id < 0 || id >= nd)
      throw AutomatonError("run builder: transition id out of range");
    const Transition& t = a.transitions[id];
    if (t.from != q[i - 1])
      throw AutomatonError("run builder: run is not connected");
    if (t.letter != x.letter_at(i))
      throw AutomatonError("run builder: run does not read the word");
    if ((t.zero_tests[0] == 0) != (c[i] == 0))
      throw AutomatonError("run builder: zero test violated");
    if (t.deltas[0] < 0 && c[i] == 0)
      throw AutomatonError("run builder: counter underflow");
    c[i + 1] = c[i] + t.deltas[0];
    q[i] = t.to;
    tid[i] = id;
  }
  if (q[head - 1 + plen] != q[head - 1])
    throw AutomatonError("run builder: loop does not close on the state");
  if (lasso_position_class(x, head + plen) != lasso_position_class(x, head))
    throw AutomatonError("run builder: loop does not close on the position");
  if (c[head] != run.start_counter)
    throw AutomatonError("run builder: start counter mismatch");
  if (c[head + plen] < c[head])
    throw AutomatonError("run builder: counter decreases across the loop");
  const std::uint64_t net = c[head + plen] - c[head];
  if (run.net_delta < 0 || static_cast<std::uint64_t>(run.net_delta) != net)
    throw AutomatonError("run builder: net delta mismatch");
  if (net > 0)
    for (std::uint64_t i = head; i < head + plen; ++i)
      if (a.transitions[tid[i]].zero_tests[0] == 0)
        throw AutomatonError("run builder: zero test inside a pumping loop");
  bool has_accepting = false;
  for (std::uint64_t i = head - 1; i < head + plen; ++i)
    has_accepting = has_accepting || a.accepting[q[i]];
  if (!has_accepting)
    throw AutomatonError("run builder: loop visits no accepting state");

  // Counter drift per schedule round.
  const std::uint64_t drift = net * (pp / plen);

  // Decrementing steps taken at counter value 1 use a different transition
  // shape than at higher values.  When the counter drifts upward, unroll
  // whole rounds into the prefix until every loop slot's branch is stable.
  std::uint64_t shift = 0;
  if (drift > 0) {
    auto unstable = [&](std::uint64_t s) {
      for (std::uint64_t mslot = 1; mslot <= pp; ++mslot) {
        const std::uint64_t i = head - 1 + s * pp + mslot;
        const Transition& t = a.transitions[tid[i]];
        if (t.zero_tests[0] == 1 && t.deltas[0] < 0 && c[i] == 1) return true;
      }
      return false;
    };
    while (shift < max_shift && unstable(shift)) ++shift;
    if (unstable(shift))
      throw AutomatonError("run builder: schedule did not stabilise");
  }

  RunCertificate cert;
  cert.machine_name = lay.machine.name;
  cert.machine_states = static_cast<std::size_t>(lay.machine.num_states);
  cert.machine_transitions = lay.machine.transitions.size();
  cert.input = certificate_input_string(
      {PatternWord::h_code(x), PatternWord::alpha_word()});

  auto require = [](int tr) {
    if (tr < 0)
      throw AutomatonError("run builder: missing simulation transition");
    return tr;
  };

  // Emits the guess and gap phases of block i >= 2 through `push(tr, count,
  // grows_with_counter, grows_with_gap)`.
  auto emit_block = [&](std::uint64_t i, auto&& push) {
    const int d = tid[i];
    const Transition& t = a.transitions[d];
    const int p = (i % 2 == 1) ? 0 : 1;
    const std::uint64_t ci = c[i];
    if (t.zero_tests[0] == 0) {
      push(require(lay.rs_exit[d][p]), std::uint64_t{1}, false, false);
    } else if (t.deltas[0] >= 0) {
      push(require(lay.rs_pair[d][p]), std::uint64_t{1}, false, false);
      push(require(lay.p_self[d][p]), ci - 1, true, false);
      push(require(lay.p_exit[d][p]), std::uint64_t{1}, false, false);
    } else if (ci >= 2) {
      push(require(lay.rs_pair[d][p]), std::uint64_t{1}, false, false);
      push(require(lay.p_self[d][p]), ci - 2, true, false);
      push(require(lay.p_extra[d][p]), std::uint64_t{1}, false, false);
      push(require(lay.d_exit[d][p]), std::uint64_t{1}, false, false);
    } else {  // counter exactly 1, decrementing step
      push(require(lay.rs_extra[d][p]), std::uint64_t{1}, false, false);
      push(require(lay.d_exit[d][p]), std::uint64_t{1}, false, false);
    }
    push(require(lay.b_self[q[i]][p]), i - c[i + 1], false, true);
    push(require(lay.b_exit[q[i]][p]), std::uint64_t{1}, false, false);
  };

  auto push_concrete = [&](int tr, std::uint64_t count, bool, bool) {
    for (std::uint64_t k = 0; k < count; ++k) cert.prefix.push_back(tr);
  };
  // Block 1: one free zero, the initial guess, then its gap phase.
  cert.prefix.push_back(require(lay.sloop));
  cert.prefix.push_back(require(lay.sguess[tid[1]]));
  push_concrete(require(lay.b_self[q[1]][0]), 1 - c[2], false, false);
  cert.prefix.push_back(require(lay.b_exit[q[1]][0]));
  const std::uint64_t last_prefix_block = head - 1 + shift * pp;
  for (std::uint64_t i = 2; i <= last_prefix_block; ++i)
    emit_block(i, push_concrete);

  // One schedule round covers pp consecutive blocks; the pairing loops grow
  // by `drift` per round, the gap loops by pp - drift.
  auto push_segment = [&](int tr, std::uint64_t base, bool pair, bool gap) {
    const std::int64_t slope =
        pair ? static_cast<std::int64_t>(drift)
             : (gap ? static_cast<std::int64_t>(pp - drift) : 0);
    if (base == 0 && slope == 0) return;
    cert.loop.push_back({tr, base, slope});
  };
  for (std::uint64_t mslot = 1; mslot <= pp; ++mslot)
    emit_block(last_prefix_block + mslot, push_segment);

  return cert;
}

// ---------------------------------------------------------------------------
// Configuration sets

std::vector<ConfigSet> counter_configurations(const BuchiAutomaton& a,
                                              const LassoWord& x,
                                              int max_letters) {
  if (a.num_counters != 1 || !a.is_realtime())
    throw AutomatonError(
        "counter configurations: need a real-time one-counter machine");
  a.validate();
  if (max_letters < 0) max_letters = 0;
  std::vector<ConfigSet> out(static_cast<std::size_t>(max_letters) + 1);
  out[0].insert({a.initial, 0});
  const auto og = a.outgoing();
  for (int i = 1; i <= max_letters; ++i) {
    const Letter& ltr = x.letter_at(static_cast<std::uint64_t>(i));
    for (const auto& [qq, cc] : out[i - 1])
      for (int ti : og[qq]) {
        const Transition& t = a.transitions[ti];
        if (t.letter != ltr) continue;
        if ((t.zero_tests[0] == 0) != (cc == 0)) continue;
        const std::int64_t nc = static_cast<std::int64_t>(cc) + t.deltas[0];
        if (nc < 0) continue;
        out[i].insert({t.to, static_cast<std::uint64_t>(nc)});
      }
  }
  return out;
}

std::vector<ConfigSet> r1_block_configurations(const TwoTapeAutomaton& r1,
                                               const LassoWord& x,
                                               int max_blocks) {
  if (max_blocks < 0) max_blocks = 0;
  std::vector<ConfigSet> out(static_cast<std::size_t>(max_blocks) + 1);
  const PatternWord h = PatternWord::h_code(x);
  const PatternWord al = PatternWord::alpha_word();
  auto cum = [](std::uint64_t i) { return i * (i + 1) / 2 + i + (i + 1) / 2; };
  const std::uint64_t mb = static_cast<std::uint64_t>(max_blocks);
  const std::uint64_t limit = cum(mb + 1) + 2;

  // Round-start states carry the thread state in their name.
  std::vector<int> rs_thread(static_cast<std::size_t>(r1.num_states), -1);
  for (int s = 0; s < r1.num_states; ++s) {
    const std::string& nm =
        s < static_cast<int>(r1.state_names.size()) ? r1.state_names[s] : "";
    if (nm.rfind("rs:", 0) == 0) {
      const std::size_t colon = nm.find(':', 3);
      if (colon == std::string::npos) continue;
      try {
        rs_thread[s] = std::stoi(nm.substr(3, colon - 3));
      } catch (const std::exception&) {
        rs_thread[s] = -1;
      }
    }
  }
  // Consumed tape-2 letters at a round start determine the finished block.
  std::map<std::uint64_t, std::uint64_t> block_of;
  for (std::uint64_t i = 1; i <= mb; ++i) block_of[cum(i)] = i;

  const auto og = r1.outgoing();
  std::set<std::tuple<int, std::uint64_t, std::uint64_t>> seen;
  std::vector<std::tuple<int, std::uint64_t, std::uint64_t>> todo;
  auto visit = [&](int s, std::uint64_t p1, std::uint64_t p2) {
    if (p1 > limit || p2 > limit) return;
    if (!seen.insert({s, p1, p2}).second) return;
    todo.push_back({s, p1, p2});
    if (rs_thread[s] < 0) return;
    const auto it = block_of.find(p2 - 1);
    if (it == block_of.end()) return;
    const std::uint64_t i = it->second;
    const std::uint64_t consumed1 = p1 - 1;
    const std::uint64_t top = cum(i) + i + 1;
    if (consumed1 <= cum(i) || consumed1 > top) return;
    out[i].insert({rs_thread[s], top - consumed1});
  };
  visit(r1.initial, 1, 1);
  while (!todo.empty()) {
    auto [s, p1, p2] = todo.back();
    todo.pop_back();
    for (int ti : og[s]) {
      const Transition2& t = r1.transitions[ti];
      bool ok = true;
      for (std::size_t k = 0; ok && k < t.first.size(); ++k)
        ok = p1 + k <= limit && h.letter_at(p1 + k) == t.first[k];
      for (std::size_t k = 0; ok && k < t.second.size(); ++k)
        ok = p2 + k <= limit && al.letter_at(p2 + k) == t.second[k];
      if (!ok) continue;
      visit(t.to, p1 + t.first.size(), p2 + t.second.size());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complement components

namespace {

// Incremental two-tape machine builder.
class T2Builder {
 public:
  T2Builder(std::string name, const Alphabet& a1, const Alphabet& a2)
      : m_(a1, a2) {
    m_.name = std::move(name);
  }

  int state(const std::string& nm, bool acc = false) {
    m_.state_names.push_back(nm);
    m_.accepting.push_back(acc);
    return m_.num_states++;
  }

  void edge(int f, FiniteWord w1, FiniteWord w2, int t) {
    m_.transitions.push_back({f, std::move(w1), std::move(w2), t});
  }
  void t1(int f, const Letter& l, int t) { edge(f, {l}, {}, t); }
  void t2(int f, const Letter& l, int t) { edge(f, {}, {l}, t); }

  // Accepting sink that consumes the rest of both tapes freely.
  int sink() {
    const int s = state("free", true);
    for (const Letter& l : m_.alphabet1.letters()) t1(s, l, s);
    for (const Letter& g : m_.alphabet2.letters()) t2(s, g, s);
    return s;
  }

  const Alphabet& a1() const { return m_.alphabet1; }

  TwoTapeAutomaton finish(int initial) {
    m_.initial = initial;
    m_.validate();
    return m_;
  }

 private:
  TwoTapeAutomaton m_;
};

// Shared skeleton of the four comparison machines: a loop reading complete
// unit pairs (tape-1 0^+ A b 0^+ b, then tape-2 0^+ A A 0^+ A), plus tail
// consumers that, once the compared runs are known unequal, verify how the
// broken unit's segment starts and fall into the accepting sink.
struct Comparison {
  T2Builder b;
  int start = -1;  // initial state
  int round = -1;  // after n >= 1 complete unit pairs
  int all = -1;    // accepting sink

  Comparison(const std::string& name, const CodingAlphabets& ca)
      : b(name, ca.sigma1, ca.gamma) {
    const Letter zero = "0", mark = "A";
    const std::vector<Letter>& base = ca.sigma.letters();
    start = b.state("p0");
    all = b.sink();
    const int pu1 = b.state("p1"), pu2 = b.state("p2"), pu3 = b.state("p3");
    const int pu4 = b.state("p4"), pv0 = b.state("p5"), pv1 = b.state("p6");
    const int pv2 = b.state("p7"), pv3 = b.state("p8"), pv4 = b.state("p9");
    round = b.state("round");
    b.t1(start, zero, pu1);
    b.t1(pu1, zero, pu1);
    b.t1(pu1, mark, pu2);
    for (const Letter& l : base) b.t1(pu2, l, pu3);
    b.t1(pu3, zero, pu4);
    b.t1(pu4, zero, pu4);
    for (const Letter& l : base) b.t1(pu4, l, pv0);
    b.t2(pv0, zero, pv1);
    b.t2(pv1, zero, pv1);
    b.t2(pv1, mark, pv2);
    b.t2(pv2, mark, pv3);
    b.t2(pv3, zero, pv4);
    b.t2(pv4, zero, pv4);
    b.t2(pv4, mark, round);
    b.t1(round, zero, pu1);  // read another unit pair
  }

  // Tape-1 tail: remaining zeros, then a marker / base letter, then free.
  int t1_tail(bool marker_start) {
    const Letter zero = "0", mark = "A";
    const int t = b.state(marker_start ? "tail1A" : "tail1b");
    b.t1(t, zero, t);
    if (marker_start) {
      b.t1(t, mark, all);
    } else {
      for (const Letter& l : b.a1().letters())
        if (l != zero && l != mark) b.t1(t, l, all);
    }
    return t;
  }
  // Tape-2 tail: remaining zeros, then the marker, then free.
  int t2_tail() {
    const Letter zero = "0", mark = "A";
    const int t = b.state("tail2A");
    b.t2(t, zero, t);
    b.t2(t, mark, all);
    return t;
  }
  // Tape-1 half unit 0^+ A b read from `round`; returns the state after b.
  int t1_half() {
    const Letter zero = "0", mark = "A";
    const int g1 = b.state("g1"), g2 = b.state("g2"), g3 = b.state("g3");
    b.t1(round, zero, g1);
    b.t1(g1, zero, g1);
    b.t1(g1, mark, g2);
    for (const Letter& l : b.a1().letters())
      if (l != zero && l != mark) b.t1(g2, l, g3);
    return g3;
  }
};

}  // namespace

std::vector<TwoTapeAutomaton> build_R2_components(const Alphabet& sigma) {
  const CodingAlphabets ca(sigma);
  const Letter zero = "0", mark = "A";
  const std::vector<Letter>& base = ca.sigma.letters();
  std::vector<TwoTapeAutomaton> out;

  // --- C1: an opening-window violation on either tape. --------------------
  {
    T2Builder b("R2-C1", ca.sigma1, ca.gamma);
    const int pick = b.state("pick");
    const int all = b.sink();

    // Expected kinds per window position: '0', 'A', or 'B' (any base letter).
    static const char win1[12] = {' ', '0', 'A', 'B', '0', '0', 'B',
                                  '0', '0', '0', 'A', 'B'};
    static const char win2[12] = {' ', '0', 'A', 'A', '0', '0', 'A',
                                  '0', '0', '0', 'A', 'A'};
    auto fits = [&](char kind, const Letter& l) {
      if (kind == '0') return l == zero;
      if (kind == 'A') return l == mark;
      return l != zero && l != mark;
    };
    std::array<int, 13> chain1{}, chain2{};
    chain1[1] = pick;
    chain2[1] = pick;
    for (int k = 2; k <= 11; ++k) {
      chain1[k] = b.state("w1:" + std::to_string(k));
      chain2[k] = b.state("w2:" + std::to_string(k));
    }
    for (int k = 1; k <= 11; ++k) {
      for (const Letter& l : ca.sigma1.letters()) {
        if (!fits(win1[k], l))
          b.t1(chain1[k], l, all);
        else if (k < 11)
          b.t1(chain1[k], l, chain1[k + 1]);
      }
      for (const Letter& g : ca.gamma.letters()) {
        if (!fits(win2[k], g))
          b.t2(chain2[k], g, all);
        else if (k < 11)
          b.t2(chain2[k], g, chain2[k + 1]);
      }
    }
    out.push_back(b.finish(pick));
  }

  // --- C2: a tape leaves the schedule shape, or settles to zeros. ---------
  {
    T2Builder b("R2-C2", ca.sigma1, ca.gamma);
    const int pick = b.state("pick");
    const int all = b.sink();

    // Tape-1 scanner: units 0^+ A b (odd) / 0^+ b (even); any deviation is
    // routed to the sink, and an all-zero tail may be guessed inside a run.
    const int u0 = b.state("u0"), u1 = b.state("u1"), u2 = b.state("u2");
    const int u3 = b.state("u3"), u4 = b.state("u4");
    const int zf1 = b.state("z1", true);
    b.t1(u0, zero, u1);
    b.t1(u0, mark, all);
    for (const Letter& l : base) b.t1(u0, l, all);
    b.t1(u1, zero, u1);
    b.t1(u1, zero, zf1);
    b.t1(u1, mark, u2);
    for (const Letter& l : base) b.t1(u1, l, all);
    for (const Letter& l : base) b.t1(u2, l, u3);
    b.t1(u2, zero, all);
    b.t1(u2, mark, all);
    b.t1(u3, zero, u4);
    b.t1(u3, mark, all);
    for (const Letter& l : base) b.t1(u3, l, all);
    b.t1(u4, zero, u4);
    b.t1(u4, zero, zf1);
    b.t1(u4, mark, all);
    for (const Letter& l : base) b.t1(u4, l, u0);
    b.t1(zf1, zero, zf1);
    for (const Letter& g : ca.gamma.letters()) b.t2(zf1, g, zf1);

    // Tape-2 scanner: units 0^+ A A (odd) / 0^+ A (even).
    const int v0 = b.state("v0"), v1 = b.state("v1"), v2 = b.state("v2");
    const int v3 = b.state("v3"), v4 = b.state("v4");
    const int zf2 = b.state("z2", true);
    b.t2(v0, zero, v1);
    b.t2(v0, mark, all);
    b.t2(v1, zero, v1);
    b.t2(v1, zero, zf2);
    b.t2(v1, mark, v2);
    b.t2(v2, mark, v3);
    b.t2(v2, zero, all);
    b.t2(v3, zero, v4);
    b.t2(v3, mark, all);
    b.t2(v4, zero, v4);
    b.t2(v4, zero, zf2);
    b.t2(v4, mark, v0);
    b.t2(zf2, zero, zf2);
    for (const Letter& l : ca.sigma1.letters()) b.t1(zf2, l, zf2);

    // The initial state offers the first step of both scanners.
    b.t1(pick, zero, u1);
    b.t1(pick, mark, all);
    for (const Letter& l : base) b.t1(pick, l, all);
    b.t2(pick, zero, v1);
    b.t2(pick, mark, all);
    out.push_back(b.finish(pick));
  }

  // --- C3: the odd 0-runs at the same index differ. ------------------------
  {
    Comparison cm("R2-C3", ca);
    const int cmp = cm.b.state("cmp");
    const int tl1 = cm.t1_tail(true), tl2 = cm.t2_tail();
    cm.b.edge(cm.round, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {mark}, {zero}, tl2);  // tape-1 run ended first: shorter
    cm.b.edge(cmp, {zero}, {mark}, tl1);  // tape-2 run ended first: longer
    out.push_back(cm.b.finish(cm.start));
  }

  // --- C4: the even 0-runs at the same index differ. -----------------------
  {
    Comparison cm("R2-C4", ca);
    const int g3 = cm.t1_half();  // tape-1 unit 2n+1 read
    // tape-2 odd half-unit 0^+ A A
    const int k1 = cm.b.state("k1"), k2 = cm.b.state("k2");
    const int k3 = cm.b.state("k3");
    cm.b.t2(g3, zero, k1);
    cm.b.t2(k1, zero, k1);
    cm.b.t2(k1, mark, k2);
    cm.b.t2(k2, mark, k3);
    const int cmp = cm.b.state("cmp");
    const int tl1 = cm.t1_tail(false), tl2 = cm.t2_tail();
    cm.b.edge(k3, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {zero}, {zero}, cmp);
    for (const Letter& l : base) cm.b.edge(cmp, {l}, {zero}, tl2);
    cm.b.edge(cmp, {zero}, {mark}, tl1);
    out.push_back(cm.b.finish(cm.start));
  }

  // --- C5: tape-1's even 0-run vs tape-2's previous odd run + 1. -----------
  {
    Comparison cm("R2-C5", ca);
    const int g3 = cm.t1_half();  // tape-1 unit 2n+1 read
    const int cmp = cm.b.state("cmp");
    const int over = cm.b.state("over");
    const int tl1 = cm.t1_tail(false), tl2 = cm.t2_tail();
    cm.b.edge(g3, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {zero}, {zero}, cmp);
    for (const Letter& l : base) {
      cm.b.edge(cmp, {l}, {zero}, tl2);  // run1 <= run2 < run2 + 1
      cm.b.edge(cmp, {l}, {mark}, cm.all);  // run1 == run2 != run2 + 1
    }
    cm.b.edge(cmp, {zero}, {mark}, over);  // run1 >= run2 + 1: how much more?
    cm.b.t1(over, zero, tl1);              // run1 >= run2 + 2
    out.push_back(cm.b.finish(cm.start));
  }

  // --- C6: tape-1's odd 0-run vs tape-2's previous even run + 1. -----------
  {
    Comparison cm("R2-C6", ca);
    const int g3 = cm.t1_half();  // tape-1 unit 2n+1 read
    // tape-2 odd unit 0^+ A A
    const int k1 = cm.b.state("k1"), k2 = cm.b.state("k2");
    const int k3 = cm.b.state("k3");
    cm.b.t2(g3, zero, k1);
    cm.b.t2(k1, zero, k1);
    cm.b.t2(k1, mark, k2);
    cm.b.t2(k2, mark, k3);
    // tape-1 even unit 0^+ b
    const int e1 = cm.b.state("e1"), e2 = cm.b.state("e2");
    cm.b.t1(k3, zero, e1);
    cm.b.t1(e1, zero, e1);
    for (const Letter& l : base) cm.b.t1(e1, l, e2);
    const int cmp = cm.b.state("cmp");
    const int over = cm.b.state("over");
    const int tl1 = cm.t1_tail(true), tl2 = cm.t2_tail();
    cm.b.edge(e2, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {zero}, {zero}, cmp);
    cm.b.edge(cmp, {mark}, {zero}, tl2);   // run1 <= run2 < run2 + 1
    cm.b.edge(cmp, {mark}, {mark}, cm.all);  // run1 == run2
    cm.b.edge(cmp, {zero}, {mark}, over);  // run1 >= run2 + 1
    cm.b.t1(over, zero, tl1);              // run1 >= run2 + 2
    out.push_back(cm.b.finish(cm.start));
  }

  return out;
}

TwoTapeAutomaton build_R2(const Alphabet& sigma) {
  std::vector<TwoTapeAutomaton> parts = build_R2_components(sigma);
  TwoTapeAutomaton u = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) u = union_2tape(u, parts[i]);
  u.name = "R2";
  return u;
}

// ---------------------------------------------------------------------------
// Winning set

namespace {

// Lifts the exit detector (an NFA over synchronous letter pairs) to a
// two-tape machine: after a detected exit, both tapes run free forever.
TwoTapeAutomaton exit_tail_machine(const FiniteAutomaton& u,
                                   const CodingAlphabets& ca) {
  TwoTapeAutomaton m(ca.sigma1, ca.gamma);
  m.name = "guard-exit";
  m.num_states = u.num_states + 1;
  const int all = u.num_states;
  m.initial = u.initial;
  m.accepting.assign(m.num_states, false);
  m.accepting[all] = true;
  m.state_names.resize(m.num_states);
  for (int q = 0; q < u.num_states; ++q)
    m.state_names[q] = "x" + std::to_string(q);
  m.state_names[all] = "free";
  for (const auto& [from, letter, to] : u.transitions) {
    const auto [l1, l2] = Alphabet::split_pair(letter);
    m.transitions.push_back({from, {l1}, {l2}, to});
  }
  for (int q = 0; q < u.num_states; ++q) {
    if (!u.final_states[q]) continue;
    for (const Letter& l : ca.sigma1.letters())
      m.transitions.push_back({q, {l}, {}, all});
    for (const Letter& g : ca.gamma.letters())
      m.transitions.push_back({q, {}, {g}, all});
  }
  for (const Letter& l : ca.sigma1.letters())
    m.transitions.push_back({all, {l}, {}, all});
  for (const Letter& g : ca.gamma.letters())
    m.transitions.push_back({all, {}, {g}, all});
  m.validate();
  return m;
}

}  // namespace

WinningSetBundle build_winning_set(const BuchiAutomaton& a) {
  const CodingAlphabets ca(a.alphabet);
  const GuardAutomata g = build_guard_automata(a.alphabet);

  WinningSetBundle out;

  TwoTapeAutomaton r1 = build_R1(a);
  TwoTapeAutomaton guarded =
      constrained_product_2tape(build_R2(a.alphabet), g.H, g.Hp);
  out.bprime = union_2tape(r1, guarded);
  out.bprime.name = "B-prime";

  out.c = union_2tape(product_2tape(g.V0, g.ClHp), product_2tape(g.ClH, g.Vp0));
  out.c.name = "C";

  out.cprime = exit_tail_machine(g.U, ca);
  out.cprime.name = "C-prime";

  out.d = union_2tape(out.bprime, union_2tape(out.c, out.cprime));
  out.d.name = "winning-set";

  out.provenance["bprime"] =
      "coded simulation of the source machine, plus the complement patterns "
      "constrained to both schedule guards";
  out.provenance["c"] =
      "one tape settles to zeros while both words stay in the closed guards";
  out.provenance["cprime"] =
      "some even-length prefix pair exits the joint guard region, rest free";
  out.provenance["d"] = "union of bprime, c and cprime";
  return out;
}

// ---------------------------------------------------------------------------
// Interleaved game machine

BuchiAutomaton build_interleaved_game(const BuchiAutomaton& t) {
  if (!t.is_realtime())
    throw AutomatonError("interleaved game: machine must be real-time");
  t.validate();
  BuchiAutomaton g(t.alphabet);
  g.name = "interleave[" + (t.name.empty() ? "T" : t.name) + "]";
  g.num_counters = t.num_counters;
  g.num_states = 2 * t.num_states;
  auto id = [&](int q, int ph) { return 2 * q + ph; };  // ph 0: free move next
  g.initial = id(t.initial, 0);
  g.accepting.assign(g.num_states, false);
  g.state_names.assign(g.num_states, "");
  for (int q = 0; q < t.num_states; ++q) {
    g.accepting[id(q, 0)] = t.accepting[q];
    g.state_names[id(q, 0)] = "f" + std::to_string(q);
    g.state_names[id(q, 1)] = "s" + std::to_string(q);
  }
  // Free odd positions: any letter, no counter effect (all test outcomes).
  const int k = t.num_counters;
  for (int q = 0; q < t.num_states; ++q)
    for (const Letter& l : t.alphabet.letters())
      for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> tests(k), deltas(k, 0);
        for (int j = 0; j < k; ++j) tests[j] = (mask >> j) & 1;
        g.transitions.push_back({id(q, 0), l, tests, deltas, id(q, 1)});
      }
  // Even positions drive the original machine.
  for (const Transition& t2 : t.transitions)
    g.transitions.push_back(
        {id(t2.from, 1), t2.letter, t2.zero_tests, t2.deltas, id(t2.to, 0)});
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Language sum

namespace {

// The lasso presenting w(from), w(from+1), ...
LassoWord lasso_suffix(const LassoWord& w, std::uint64_t from) {
  const FiniteWord& st = w.stem();
  const FiniteWord& pe = w.period();
  if (from <= st.size()) {
    FiniteWord stem2(st.begin() + static_cast<std::ptrdiff_t>(from - 1),
                     st.end());
    return LassoWord(w.alphabet(), std::move(stem2), pe);
  }
  const std::uint64_t k = (from - st.size() - 1) % pe.size();
  FiniteWord period2(pe.begin() + static_cast<std::ptrdiff_t>(k), pe.end());
  period2.insert(period2.end(), pe.begin(),
                 pe.begin() + static_cast<std::ptrdiff_t>(k));
  return LassoWord(w.alphabet(), {}, std::move(period2));
}

}  // namespace

LanguageOracle wadge_sum_oracle(LanguageOracle lp, LanguageOracle l,
                                const std::set<Letter>& plus,
                                const std::set<Letter>& minus) {
  if (plus.empty() || minus.empty())
    throw WordError("language sum: plus and minus sets must be nonempty");
  for (const Letter& a : plus)
    if (minus.count(a))
      throw WordError("language sum: plus and minus sets must be disjoint");
  return [lp = std::move(lp), l = std::move(l), plus,
          minus](const LassoWord& w) -> bool {
    const std::uint64_t total = w.stem().size() + w.period().size();
    for (std::uint64_t n = 1; n <= total; ++n) {
      const Letter& a = w.letter_at(n);
      const bool in_plus = plus.count(a) != 0;
      if (!in_plus && minus.count(a) == 0) continue;
      const bool tail = lp(lasso_suffix(w, n + 1));
      return in_plus ? tail : !tail;
    }
    return l(w);
  };
}

}  // namespace ratgame
