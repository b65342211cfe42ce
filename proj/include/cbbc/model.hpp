#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cbbc/semialgebraic.hpp"

namespace cbbc {

/// Explicit state->state map over an enumerated finite state list.
struct FiniteTable {
  std::vector<std::vector<Rat>> states;  // each aligned with the system vars
  std::vector<size_t> next;              // total function on states
  std::vector<size_t> initial;           // indices into states
};

using PolyMap = std::vector<Polynomial>;  // one update polynomial per variable

enum class DomainPolicy { Warn, Strict };

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Discrete-time dynamical system: state set X, initial set X0, and either a
/// polynomial update map or a finite transition table.
struct DynamicalSystem {
  std::vector<std::string> vars;
  SemialgebraicSet state_set;    // X
  SemialgebraicSet initial_set;  // X0
  std::variant<PolyMap, FiniteTable> dynamics;

  bool is_finite() const { return std::holds_alternative<FiniteTable>(dynamics); }
  const FiniteTable& table() const { return std::get<FiniteTable>(dynamics); }
  const PolyMap& poly_map() const { return std::get<PolyMap>(dynamics); }

  void validate() const {
    if (is_finite()) {
      const auto& t = table();
      if (t.next.size() != t.states.size())
        throw InputError("finite table must be total on the enumerated states");
      for (size_t s : t.next)
        if (s >= t.states.size()) throw InputError("table successor out of range");
      for (size_t s : t.initial)
        if (s >= t.states.size())
          throw InputError("initial states must be enumerated states");
      for (const auto& st : t.states)
        if (st.size() != vars.size())
          throw InputError("state dimension mismatch in finite table");
    } else {
      if (poly_map().size() != vars.size())
        throw InputError("polynomial dynamics needs one update per state variable");
    }
  }

  std::optional<size_t> state_index(const std::vector<Rat>& point) const {
    const auto& t = table();
    for (size_t i = 0; i < t.states.size(); ++i)
      if (t.states[i] == point) return i;
    return std::nullopt;
  }

  PointMap to_point_map(const std::vector<Rat>& values) const {
    PointMap m;
    for (size_t i = 0; i < vars.size(); ++i) m[vars[i]] = values[i];
    return m;
  }
};

/// The unique successor under f. Leaving X is an error in strict mode and a
/// recorded warning otherwise (f may map near the boundary of truncated
/// instances).
inline std::vector<Rat> step(const DynamicalSystem& sys, const std::vector<Rat>& state,
                             DomainPolicy policy = DomainPolicy::Warn,
                             std::vector<std::string>* warnings = nullptr) {
  if (sys.is_finite()) {
    auto idx = sys.state_index(state);
    if (!idx) throw DomainError("state is not one of the enumerated states");
    return sys.table().states[sys.table().next[*idx]];
  }
  if (!sys.state_set.contains_aligned(state)) {
    std::string msg = "state outside the state set";
    if (policy == DomainPolicy::Strict) throw DomainError(msg);
    if (warnings) warnings->push_back(msg);
  }
  std::vector<Rat> out;
  out.reserve(sys.vars.size());
  PointMap pm = sys.to_point_map(state);
  for (const auto& p : sys.poly_map()) out.push_back(p.eval(pm));
  return out;
}

/// Finite prefix of the state sequence from x0: length horizon+1.
inline std::vector<std::vector<Rat>> simulate(const DynamicalSystem& sys,
                                              const std::vector<Rat>& x0,
                                              size_t horizon,
                                              DomainPolicy policy = DomainPolicy::Warn,
                                              std::vector<std::string>* warnings = nullptr) {
  std::vector<std::vector<Rat>> seq;
  seq.reserve(horizon + 1);
  seq.push_back(x0);
  for (size_t t = 0; t < horizon; ++t)
    seq.push_back(step(sys, seq.back(), policy, warnings));
  return seq;
}

inline size_t count_visits(const std::vector<std::vector<Rat>>& seq,
                           const SemialgebraicSet& region) {
  size_t n = 0;
  for (const auto& s : seq)
    if (region.contains_aligned(s)) ++n;
  return n;
}

/// Maps letters to state regions (polynomial systems) or states to letters
/// (finite systems). Regions must partition X.
struct Labeling {
  std::vector<std::string> alphabet;
  std::map<std::string, SemialgebraicSet> regions;
  std::map<size_t, std::string> by_state;  // finite systems only

  std::string letter_of(const std::vector<Rat>& point,
                        const DynamicalSystem& sys) const {
    if (!by_state.empty()) {
      auto idx = sys.state_index(point);
      if (!idx) throw InputError("unlabeled state (not enumerated)");
      auto it = by_state.find(*idx);
      if (it == by_state.end()) throw InputError("state has no label");
      return it->second;
    }
    std::string found;
    for (const auto& [letter, region] : regions) {
      if (region.contains_aligned(point)) {
        if (!found.empty())
          throw InputError("labeling regions overlap at a sampled point (letters '" +
                           found + "' and '" + letter + "')");
        found = letter;
      }
    }
    if (found.empty()) throw InputError("point carried by no labeling region");
    return found;
  }
};

inline std::vector<std::string> label_trace(const std::vector<std::vector<Rat>>& seq,
                                            const Labeling& lab,
                                            const DynamicalSystem& sys) {
  std::vector<std::string> word;
  word.reserve(seq.size());
  for (const auto& s : seq) word.push_back(lab.letter_of(s, sys));
  return word;
}

/// System plus a region whose visits are counted and a bound k.
struct CounterSystem {
  DynamicalSystem base;
  SemialgebraicSet visit_set;  // X_VF
  unsigned bound = 0;          // k
};

/// Explicit counter extension for finite-table systems. Counter values are
/// materialized over {0..k+1} with saturation at k+1; the result is again a
/// finite-table system over (vars..., "i"). Initial states follow the split
/// of X0 by membership in X_VF.
inline DynamicalSystem extend_with_counter(const CounterSystem& cs) {
  if (!cs.base.is_finite())
    throw InputError("explicit counter extension is only supported for finite tables");
  const auto& t = cs.base.table();
  const unsigned cap = cs.bound + 1;

  DynamicalSystem out;
  out.vars = cs.base.vars;
  out.vars.push_back("i");
  out.state_set = SemialgebraicSet::whole(out.vars);
  out.initial_set = SemialgebraicSet::whole(out.vars);

  FiniteTable ext;
  auto key = [&](size_t s, unsigned c) { return s * (cap + 1) + c; };
  for (size_t s = 0; s < t.states.size(); ++s)
    for (unsigned c = 0; c <= cap; ++c) {
      std::vector<Rat> st = t.states[s];
      st.push_back(Rat(c));
      ext.states.push_back(std::move(st));
    }
  ext.next.resize(ext.states.size());
  for (size_t s = 0; s < t.states.size(); ++s) {
    size_t succ = t.next[s];
    bool visits = cs.visit_set.contains_aligned(t.states[succ]);
    for (unsigned c = 0; c <= cap; ++c) {
      unsigned nc = visits ? std::min(cap, c + 1) : c;
      ext.next[key(s, c)] = key(succ, nc);
    }
  }
  for (size_t s : t.initial) {
    bool in_vf = cs.visit_set.contains_aligned(t.states[s]);
    ext.initial.push_back(key(s, in_vf ? 1u : 0u));
  }
  out.dynamics = std::move(ext);
  return out;
}

}  // namespace cbbc
