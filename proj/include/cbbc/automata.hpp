#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cbbc/rational.hpp"

namespace cbbc {

enum class Semantics { NBA, UCA, KUCA };

/// Automaton over infinite words: alphabet, states, initial set, transition
/// relation, accepting set, and an acceptance-semantics tag.
struct OmegaAutomaton {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::vector<size_t> initial;
  std::vector<std::tuple<size_t, size_t, size_t>> transitions;  // (from, letter, to)
  std::vector<size_t> accepting;
  Semantics semantics = Semantics::NBA;
  unsigned k = 0;  // k-UCA bound

  size_t letter_index(const std::string& l) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), l);
    if (it == alphabet.end()) throw InputError("undeclared letter: " + l);
    return static_cast<size_t>(it - alphabet.begin());
  }
  size_t state_index(const std::string& s) const {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end()) throw InputError("undeclared state: " + s);
    return static_cast<size_t>(it - states.begin());
  }
  bool is_accepting(size_t q) const {
    return std::find(accepting.begin(), accepting.end(), q) != accepting.end();
  }
  bool is_initial(size_t q) const {
    return std::find(initial.begin(), initial.end(), q) != initial.end();
  }

  /// delta(q, letter) in declaration order.
  std::vector<size_t> successors(size_t q, size_t letter) const {
    std::vector<size_t> out;
    for (const auto& [f, l, t] : transitions)
      if (f == q && l == letter) out.push_back(t);
    return out;
  }

  /// Same structure read under different acceptance semantics.
  OmegaAutomaton with_semantics(Semantics sem, unsigned bound = 0) const {
    OmegaAutomaton a = *this;
    a.semantics = sem;
    a.k = bound;
    return a;
  }
};

/// Parses the [automaton] section body. Lines:
///   states: q0, q1
///   initial: q0
///   accepting: q1
///   semantics: nba | uca | kuca <k>
///   alphabet: a, b, c          (optional when every letter appears on an edge)
///   trans: q0 -a-> q1
inline OmegaAutomaton parse_automaton(const std::string& text) {
  OmegaAutomaton a;
  a.semantics = Semantics::UCA;
  bool seen_semantics = false;
  std::vector<std::string> alphabet_order;
  std::vector<std::tuple<std::string, std::string, std::string, int>> raw_trans;
  std::vector<std::string> initial_names, accepting_names;

  auto split_list = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',') {
        size_t b = cur.find_first_not_of(" \t");
        size_t e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return out;
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw InputError("automaton line " + std::to_string(lineno) +
                       ": expected 'key: value'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    if (key == "states") {
      for (const auto& s : split_list(value)) a.states.push_back(s);
    } else if (key == "initial") {
      initial_names = split_list(value);
    } else if (key == "accepting") {
      accepting_names = split_list(value);
    } else if (key == "alphabet") {
      alphabet_order = split_list(value);
    } else if (key == "semantics") {
      if (seen_semantics)
        throw InputError("automaton line " + std::to_string(lineno) +
                         ": duplicate semantics tag");
      seen_semantics = true;
      std::istringstream vs(value);
      std::string tag;
      vs >> tag;
      if (tag == "nba") {
        a.semantics = Semantics::NBA;
      } else if (tag == "uca") {
        a.semantics = Semantics::UCA;
      } else if (tag == "kuca") {
        a.semantics = Semantics::KUCA;
        long kk = -1;
        if (!(vs >> kk) || kk < 0)
          throw InputError("automaton line " + std::to_string(lineno) +
                           ": kuca needs a bound k >= 0");
        a.k = static_cast<unsigned>(kk);
      } else {
        throw InputError("automaton line " + std::to_string(lineno) +
                         ": unknown semantics '" + tag + "'");
      }
    } else if (key == "trans") {
      // q0 -a-> q1
      size_t dash = value.find('-');
      size_t arrow = value.find("->", dash == std::string::npos ? 0 : dash + 1);
      if (dash == std::string::npos || arrow == std::string::npos ||
          arrow <= dash)
        throw InputError("automaton line " + std::to_string(lineno) +
                         ": malformed transition (expected q -letter-> q')");
      auto trim = [](std::string s) {
        size_t b2 = s.find_first_not_of(" \t");
        if (b2 == std::string::npos) return std::string();
        size_t e2 = s.find_last_not_of(" \t");
        return s.substr(b2, e2 - b2 + 1);
      };
      std::string from = trim(value.substr(0, dash));
      std::string letter = trim(value.substr(dash + 1, arrow - dash - 1));
      std::string to = trim(value.substr(arrow + 2));
      if (from.empty() || letter.empty() || to.empty())
        throw InputError("automaton line " + std::to_string(lineno) +
                         ": malformed transition (expected q -letter-> q')");
      raw_trans.emplace_back(from, letter, to, lineno);
    } else {
      throw InputError("automaton line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }

  a.alphabet = alphabet_order;
  for (const auto& [f, l, t, ln] : raw_trans)
    if (alphabet_order.empty() &&
        std::find(a.alphabet.begin(), a.alphabet.end(), l) == a.alphabet.end())
      a.alphabet.push_back(l);
  for (const auto& n : initial_names) a.initial.push_back(a.state_index(n));
  for (const auto& n : accepting_names) a.accepting.push_back(a.state_index(n));
  for (const auto& [f, l, t, ln] : raw_trans) {
    try {
      a.transitions.emplace_back(a.state_index(f), a.letter_index(l),
                                 a.state_index(t));
    } catch (const InputError& err) {
      throw InputError("automaton line " + std::to_string(ln) + ": " +
                       err.what());
    }
  }
  return a;
}

/// Set of (state, visit-count) pairs reachable on some run over a word
/// prefix; per-state maximum count only, counts saturated at k+1. The
/// maximum is exact for universal semantics: a prefix violates the bound iff
/// some run's count exceeds k.
using RunFront = std::map<size_t, unsigned>;

inline RunFront initial_front(const OmegaAutomaton& a) {
  RunFront f;
  for (size_t q : a.initial) {
    unsigned c = a.is_accepting(q) ? 1u : 0u;
    auto it = f.find(q);
    if (it == f.end() || it->second < c) f[q] = c;
  }
  return f;
}

inline RunFront advance_front(const OmegaAutomaton& a, const RunFront& front,
                              size_t letter, unsigned k) {
  RunFront out;
  unsigned cap = k + 1;
  for (const auto& [q, c] : front) {
    for (size_t q2 : a.successors(q, letter)) {
      unsigned c2 = a.is_accepting(q2) ? std::min(cap, c + 1) : c;
      auto it = out.find(q2);
      if (it == out.end() || it->second < c2) out[q2] = c2;
    }
  }
  return out;
}

inline unsigned max_count(const RunFront& f) {
  unsigned m = 0;
  for (const auto& [q, c] : f) m = std::max(m, c);
  return m;
}

/// True iff no run on the prefix visits accepting states more than k times.
/// Runs that die impose no obligation (they are not runs on the prefix).
inline bool prefix_respects_k(const OmegaAutomaton& a,
                              const std::vector<size_t>& prefix, unsigned k) {
  RunFront f = initial_front(a);
  for (size_t letter : prefix) f = advance_front(a, f, letter, k);
  return max_count(f) <= k;
}

/// Buchi acceptance of the lasso word stem . loop^omega: some run reaches an
/// accepting cycle of the product with the loop's cyclic index structure.
inline bool lasso_accepts_buchi(const OmegaAutomaton& a,
                                const std::vector<size_t>& stem,
                                const std::vector<size_t>& loop) {
  if (loop.empty()) throw InputError("lasso loop must be nonempty");
  // states reachable on the stem
  std::set<size_t> cur(a.initial.begin(), a.initial.end());
  for (size_t letter : stem) {
    std::set<size_t> next;
    for (size_t q : cur)
      for (size_t q2 : a.successors(q, letter)) next.insert(q2);
    cur = next;
  }
  // product nodes (q, pos) with pos the loop index
  const size_t L = loop.size();
  auto node = [&](size_t q, size_t pos) { return q * L + pos; };
  std::vector<char> reach(a.states.size() * L, 0);
  std::vector<size_t> stack;
  for (size_t q : cur) {
    if (!reach[node(q, 0)]) {
      reach[node(q, 0)] = 1;
      stack.push_back(node(q, 0));
    }
  }
  while (!stack.empty()) {
    size_t n = stack.back();
    stack.pop_back();
    size_t q = n / L, pos = n % L;
    for (size_t q2 : a.successors(q, loop[pos])) {
      size_t m = node(q2, (pos + 1) % L);
      if (!reach[m]) {
        reach[m] = 1;
        stack.push_back(m);
      }
    }
  }
  // an accepting reachable node on a cycle
  for (size_t q = 0; q < a.states.size(); ++q) {
    if (!a.is_accepting(q)) continue;
    for (size_t pos = 0; pos < L; ++pos) {
      size_t start = node(q, pos);
      if (!reach[start]) continue;
      // nonempty path start -> start
      std::vector<char> seen(a.states.size() * L, 0);
      std::vector<size_t> st;
      for (size_t q2 : a.successors(q, loop[pos])) {
        size_t m = node(q2, (pos + 1) % L);
        if (!seen[m]) {
          seen[m] = 1;
          st.push_back(m);
        }
      }
      while (!st.empty()) {
        size_t n = st.back();
        st.pop_back();
        if (n == start) return true;
        size_t qq = n / L, pp = n % L;
        for (size_t q2 : a.successors(qq, loop[pp])) {
          size_t m = node(q2, (pp + 1) % L);
          if (!seen[m]) {
            seen[m] = 1;
            st.push_back(m);
          }
        }
      }
      if (seen[start]) return true;
    }
  }
  return false;
}

/// Universal co-Buchi acceptance of a lasso: every run on the word visits
/// accepting states only finitely often, i.e. no reachable product cycle
/// touches an accepting state. Decided independently of lasso_accepts_buchi
/// (SCC decomposition) so the duality can be tested, not assumed.
inline bool lasso_accepts_cobuchi(const OmegaAutomaton& a,
                                  const std::vector<size_t>& stem,
                                  const std::vector<size_t>& loop) {
  if (loop.empty()) throw InputError("lasso loop must be nonempty");
  std::set<size_t> cur(a.initial.begin(), a.initial.end());
  for (size_t letter : stem) {
    std::set<size_t> next;
    for (size_t q : cur)
      for (size_t q2 : a.successors(q, letter)) next.insert(q2);
    cur = next;
  }
  const size_t L = loop.size();
  const size_t N = a.states.size() * L;
  auto node = [&](size_t q, size_t pos) { return q * L + pos; };
  std::vector<char> reach(N, 0);
  std::vector<size_t> stack;
  for (size_t q : cur)
    if (!reach[node(q, 0)]) {
      reach[node(q, 0)] = 1;
      stack.push_back(node(q, 0));
    }
  while (!stack.empty()) {
    size_t n = stack.back();
    stack.pop_back();
    size_t q = n / L, pos = n % L;
    for (size_t q2 : a.successors(q, loop[pos])) {
      size_t m = node(q2, (pos + 1) % L);
      if (!reach[m]) {
        reach[m] = 1;
        stack.push_back(m);
      }
    }
  }
  // Tarjan SCC over the reachable product subgraph
  std::vector<int> index(N, -1), low(N, 0);
  std::vector<char> onstack(N, 0);
  std::vector<size_t> sccstack;
  int next_index = 0;
  bool accepting_cycle = false;
  std::function<void(size_t)> strongconnect = [&](size_t v) {
    index[v] = low[v] = next_index++;
    sccstack.push_back(v);
    onstack[v] = 1;
    size_t q = v / L, pos = v % L;
    std::vector<size_t> succs;
    for (size_t q2 : a.successors(q, loop[pos]))
      succs.push_back(node(q2, (pos + 1) % L));
    bool self_loop = false;
    for (size_t w : succs) {
      if (w == v) self_loop = true;
      if (!reach[w]) continue;
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onstack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<size_t> comp;
      for (;;) {
        size_t w = sccstack.back();
        sccstack.pop_back();
        onstack[w] = 0;
        comp.push_back(w);
        if (w == v) break;
      }
      bool cyclic = comp.size() > 1 || self_loop;
      if (cyclic)
        for (size_t w : comp)
          if (a.is_accepting(w / L)) accepting_cycle = true;
    }
  };
  for (size_t v = 0; v < N; ++v)
    if (reach[v] && index[v] < 0) strongconnect(v);
  return !accepting_cycle;
}

/// Unrolls the simple cycles that start from an accepting state: every state
/// reachable from an accepting state gains a primed copy (name + "'"),
/// transitions among reachable states are duplicated on the primed copies,
/// and edges leaving an accepting state are redirected to the primed targets.
/// Accepting states become the primed accepting copies; the language is
/// preserved. State order: originals first, then primed in original order.
inline OmegaAutomaton unroll(const OmegaAutomaton& a) {
  const size_t n = a.states.size();
  // states reachable from accepting states via >= 1 transition
  std::vector<char> reach(n, 0);
  std::vector<size_t> stack;
  for (size_t q : a.accepting)
    for (const auto& [f, l, t] : a.transitions)
      if (f == q && !reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
  while (!stack.empty()) {
    size_t q = stack.back();
    stack.pop_back();
    for (const auto& [f, l, t] : a.transitions)
      if (f == q && !reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
  }

  OmegaAutomaton out;
  out.alphabet = a.alphabet;
  out.semantics = a.semantics;
  out.k = a.k;
  out.states = a.states;
  std::vector<long> primed(n, -1);
  for (size_t q = 0; q < n; ++q)
    if (reach[q]) {
      primed[q] = static_cast<long>(out.states.size());
      out.states.push_back(a.states[q] + "'");
    }
  out.initial = a.initial;

  for (const auto& [f, l, t] : a.transitions) {
    if (a.is_accepting(f)) {
      // redirected: every edge leaving an accepting state moves to the copy
      out.transitions.emplace_back(f, l, static_cast<size_t>(primed[t]));
    } else {
      out.transitions.emplace_back(f, l, t);
    }
  }
  for (const auto& [f, l, t] : a.transitions)
    if (reach[f] && reach[t] && !a.is_accepting(f))
      out.transitions.emplace_back(static_cast<size_t>(primed[f]), l,
                                   static_cast<size_t>(primed[t]));
  // primed copies of accepting states behave like their redirected originals
  for (const auto& [f, l, t] : a.transitions)
    if (reach[f] && a.is_accepting(f))
      out.transitions.emplace_back(static_cast<size_t>(primed[f]), l,
                                   static_cast<size_t>(primed[t]));

  for (size_t q : a.accepting)
    if (reach[q]) out.accepting.push_back(static_cast<size_t>(primed[q]));
  return out;
}

/// Two consecutive transitions (q -entry-> mid -exit-> q2); parallel edges
/// between the same states merge their letters.
struct Triplet {
  size_t first = 0, mid = 0, last = 0;
  std::vector<size_t> entry_letters;
  std::vector<size_t> exit_letters;
};

struct SimplePath {
  std::vector<size_t> states;                   // initial ... accepting
  std::vector<std::vector<size_t>> hop_letters; // letters per consecutive pair
  std::vector<Triplet> triplets;                // consecutive edge pairs, in order
};

/// All simple paths from an initial to an accepting state of an unrolled
/// automaton, each with its ordered triplet list. Path explosion is cut off
/// at `cap` paths with a resource error.
inline std::vector<SimplePath> enumerate_triplets(const OmegaAutomaton& a,
                                                  size_t cap = 10000) {
  std::vector<SimplePath> out;
  std::vector<size_t> path;
  std::vector<char> onpath(a.states.size(), 0);

  auto letters_between = [&](size_t f, size_t t) {
    std::vector<size_t> ls;
    for (const auto& [ff, l, tt] : a.transitions)
      if (ff == f && tt == t &&
          std::find(ls.begin(), ls.end(), l) == ls.end())
        ls.push_back(l);
    return ls;
  };

  std::function<void(size_t)> dfs = [&](size_t q) {
    path.push_back(q);
    onpath[q] = 1;
    if (a.is_accepting(q)) {
      if (out.size() >= cap)
        throw ResourceError("simple-path enumeration exceeded cap of " +
                            std::to_string(cap));
      SimplePath sp;
      sp.states = path;
      for (size_t i = 0; i + 1 < path.size(); ++i)
        sp.hop_letters.push_back(letters_between(path[i], path[i + 1]));
      for (size_t i = 0; i + 2 < path.size(); ++i) {
        Triplet t;
        t.first = path[i];
        t.mid = path[i + 1];
        t.last = path[i + 2];
        t.entry_letters = sp.hop_letters[i];
        t.exit_letters = sp.hop_letters[i + 1];
        sp.triplets.push_back(t);
      }
      out.push_back(std::move(sp));
    }
    std::vector<size_t> succ;
    for (const auto& [f, l, t] : a.transitions)
      if (f == q && !onpath[t] &&
          std::find(succ.begin(), succ.end(), t) == succ.end())
        succ.push_back(t);
    std::sort(succ.begin(), succ.end());
    for (size_t t : succ) dfs(t);
    onpath[q] = 0;
    path.pop_back();
  };
  std::vector<size_t> inits = a.initial;
  std::sort(inits.begin(), inits.end());
  for (size_t q : inits) dfs(q);
  return out;
}

}  // namespace cbbc
