#pragma once

#include <algorithm>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbbc/automata.hpp"
#include "cbbc/certificate.hpp"
#include "cbbc/model.hpp"
#include "cbbc/parallel.hpp"
#include "cbbc/sampling.hpp"
#include "cbbc/semialgebraic.hpp"

namespace cbbc {

enum class Rel { LeqZero, GtZero };

/// One signed application of the candidate: sign * B(arg(x), aut, counter),
/// where arg gives the image polynomial per state variable (identity or f).
struct BApp {
  Rat sign;
  std::vector<Polynomial> arg;
  long aut = -1;
  long counter = -1;
};

/// One condition family: an affine-in-B expression constrained on a union of
/// semialgebraic pieces. The finite indices (counter, automaton state) are
/// expanded into separate families, never symbolic.
struct Condition {
  std::string tag;
  std::map<std::string, long> indices;
  Rel rel = Rel::LeqZero;
  std::vector<BApp> apps;
  std::vector<SemialgebraicSet> pieces;
  // single-conjunction domain used by document emission, when derivable
  std::optional<SemialgebraicSet> sos_domain;
};

struct ConditionSystem {
  Signature sig = Signature::StateOnly;
  std::vector<std::string> state_vars;
  std::vector<Condition> conditions;
};

namespace detail {

/// Candidate-independent coefficient columns of one condition: with the
/// template B = sum_m c_m p_m, the condition expression at a state point x
/// is sum_m c_m * coeff_basis[m](x).
inline std::vector<Polynomial> condition_coeff_basis(
    const Condition& c, const std::vector<Polynomial>& basis, Signature sig,
    const std::vector<std::string>& state_vars) {
  std::vector<Polynomial> out;
  out.reserve(basis.size());
  for (const auto& mono : basis) {
    Polynomial acc(state_vars);
    for (const auto& app : c.apps) {
      PointMap fixed;
      if (sig == Signature::StateCounter) {
        fixed["i"] = Rat(app.counter);
      } else if (sig == Signature::StateAutCounter) {
        fixed["i"] = Rat(app.aut);
        fixed["l"] = Rat(app.counter);
      }
      Polynomial inst = mono.substitute(fixed).on_vars(state_vars);
      std::map<std::string, Polynomial> subst;
      for (size_t i = 0; i < state_vars.size(); ++i)
        subst[state_vars[i]] = app.arg[i];
      acc += app.sign * inst.compose(subst).on_vars(state_vars);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

inline std::vector<Polynomial> identity_args(const std::vector<std::string>& vars) {
  std::vector<Polynomial> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(Polynomial::variable(v).on_vars(vars));
  return out;
}

inline SemialgebraicSet substitute_set(const SemialgebraicSet& s,
                                       const std::vector<std::string>& vars,
                                       const std::vector<Polynomial>& images) {
  std::map<std::string, Polynomial> subst;
  for (size_t i = 0; i < vars.size(); ++i) subst[vars[i]] = images[i];
  SemialgebraicSet out;
  out.vars = vars;
  for (const auto& iq : s.inequalities)
    out.inequalities.push_back({iq.poly.compose(subst).on_vars(vars), iq.strict});
  return out;
}

}  // namespace detail

/// Closed complement pieces of a conjunction: one piece {-g_j >= 0} per
/// inequality. Their union is the closure of the true complement (sound for
/// universally quantified conditions; a superset only at the boundary).
inline std::vector<SemialgebraicSet> complement_pieces(const SemialgebraicSet& s) {
  std::vector<SemialgebraicSet> out;
  for (const auto& iq : s.inequalities) {
    SemialgebraicSet piece;
    piece.vars = s.vars;
    piece.inequalities.push_back({-iq.poly, false});
    out.push_back(std::move(piece));
  }
  return out;
}

/// Single-conjunction description of the closed complement, when derivable:
/// one inequality negates directly; a univariate interval {x-a>=0, b-x>=0}
/// becomes {(x-a)*(x-b) >= 0}.
inline std::optional<SemialgebraicSet> canonical_complement(const SemialgebraicSet& s) {
  if (s.inequalities.empty()) return std::nullopt;  // whole space: empty complement
  if (s.inequalities.size() == 1) {
    SemialgebraicSet out;
    out.vars = s.vars;
    out.inequalities.push_back({-s.inequalities[0].poly, false});
    return out;
  }
  if (s.inequalities.size() == 2) {
    auto box = s.box();
    if (box) {
      // exactly one variable bounded on both sides
      int idx = -1;
      bool ok = true;
      for (size_t i = 0; i < box->size(); ++i) {
        const auto& iv = (*box)[i];
        if (iv.lo || iv.hi) {
          if (idx != -1 || !iv.bounded()) {
            ok = false;
            break;
          }
          idx = static_cast<int>(i);
        }
      }
      if (ok && idx >= 0) {
        Polynomial x = Polynomial::variable(s.vars[idx]).on_vars(s.vars);
        Polynomial lo = Polynomial::constant(*(*box)[idx].lo, s.vars);
        Polynomial hi = Polynomial::constant(*(*box)[idx].hi, s.vars);
        SemialgebraicSet out;
        out.vars = s.vars;
        out.inequalities.push_back({(x - lo) * (x - hi), false});
        return out;
      }
    }
  }
  return std::nullopt;
}

/// Def. of the classic barrier certificate, with the initial region made
/// explicit so triplet barriers can reuse it: B <= 0 on X_init, B > 0 on
/// X_u, and B(f(x)) - B(x) <= 0 on X.
inline ConditionSystem classic_conditions_over(const DynamicalSystem& sys,
                                               const SemialgebraicSet& init,
                                               const SemialgebraicSet& unsafe) {
  if (sys.is_finite())
    throw InputError("classic conditions need polynomial dynamics (finite "
                     "tables are checked pointwise)");
  ConditionSystem cs;
  cs.sig = Signature::StateOnly;
  cs.state_vars = sys.vars;
  auto id = detail::identity_args(sys.vars);
  std::vector<Polynomial> f;
  for (const auto& p : sys.poly_map()) f.push_back(p.on_vars(sys.vars));

  Condition c_init{"init", {}, Rel::LeqZero, {{Rat(1), id, -1, -1}}, {init}, init};
  Condition c_unsafe{"unsafe", {}, Rel::GtZero, {{Rat(1), id, -1, -1}}, {unsafe}, unsafe};
  Condition c_dec{"decrease",
                  {},
                  Rel::LeqZero,
                  {{Rat(1), f, -1, -1}, {Rat(-1), id, -1, -1}},
                  {sys.state_set},
                  sys.state_set};
  cs.conditions = {c_init, c_unsafe, c_dec};
  return cs;
}

inline ConditionSystem classic_conditions(const DynamicalSystem& sys,
                                          const SemialgebraicSet& unsafe) {
  return classic_conditions_over(sys, sys.initial_set, unsafe);
}

/// Conditions of the co-Buchi barrier certificate over (x, i): initial
/// conditions at counters 0/1 split by visit-set membership, positivity at
/// k+1, and the two decrease families for each i in {0..k} with the
/// f-preimage domains expressed by substituting f into the visit-set
/// inequalities. `user_complement`, when given, is a single-conjunction
/// description of the complement of X_VF supplied by the problem file.
inline ConditionSystem cbbc_conditions(
    const CounterSystem& cs,
    const std::optional<SemialgebraicSet>& user_complement = std::nullopt) {
  const DynamicalSystem& sys = cs.base;
  if (sys.is_finite())
    throw InputError("use finite_cbbc_conditions for finite-table systems");
  ConditionSystem out;
  out.sig = Signature::StateCounter;
  out.state_vars = sys.vars;
  auto id = detail::identity_args(sys.vars);
  std::vector<Polynomial> f;
  for (const auto& p : sys.poly_map()) f.push_back(p.on_vars(sys.vars));
  const long k = cs.bound;

  std::optional<SemialgebraicSet> comp = user_complement;
  if (!comp) comp = canonical_complement(cs.visit_set);

  // initial states outside the visit set, counter 0
  {
    Condition c;
    c.tag = "init-outside";
    c.rel = Rel::LeqZero;
    c.apps = {{Rat(1), id, -1, 0}};
    for (const auto& piece : complement_pieces(cs.visit_set))
      c.pieces.push_back(sys.initial_set.intersect(piece));
    if (comp) c.sos_domain = sys.initial_set.intersect(*comp);
    out.conditions.push_back(std::move(c));
  }
  // initial states inside the visit set, counter 1
  {
    Condition c;
    c.tag = "init-inside";
    c.rel = Rel::LeqZero;
    c.apps = {{Rat(1), id, -1, 1}};
    c.pieces = {sys.initial_set.intersect(cs.visit_set)};
    c.sos_domain = c.pieces[0];
    out.conditions.push_back(std::move(c));
  }
  // positivity over the visit set at counter k+1
  {
    Condition c;
    c.tag = "positivity";
    c.rel = Rel::GtZero;
    c.apps = {{Rat(1), id, -1, k + 1}};
    c.pieces = {cs.visit_set};
    c.sos_domain = cs.visit_set;
    out.conditions.push_back(std::move(c));
  }
  // decrease families per counter value
  for (long i = 0; i <= k; ++i) {
    Condition stay;
    stay.tag = "decrease-stay";
    stay.indices["i"] = i;
    stay.rel = Rel::LeqZero;
    stay.apps = {{Rat(1), f, -1, i}, {Rat(-1), id, -1, i}};
    for (const auto& piece : complement_pieces(cs.visit_set))
      stay.pieces.push_back(
          sys.state_set.intersect(detail::substitute_set(piece, sys.vars, f)));
    if (comp)
      stay.sos_domain =
          sys.state_set.intersect(detail::substitute_set(*comp, sys.vars, f));
    out.conditions.push_back(std::move(stay));

    Condition visit;
    visit.tag = "decrease-visit";
    visit.indices["i"] = i;
    visit.rel = Rel::LeqZero;
    visit.apps = {{Rat(1), f, -1, i + 1}, {Rat(-1), id, -1, i}};
    visit.pieces = {
        sys.state_set.intersect(detail::substitute_set(cs.visit_set, sys.vars, f))};
    visit.sos_domain = visit.pieces[0];
    out.conditions.push_back(std::move(visit));
  }
  return out;
}

/// Conditions of the product co-Buchi barrier certificate over
/// (x, automaton state, counter) against a k-UCA: initial conditions per
/// initial automaton state, positivity for accepting states over all of X at
/// counter k+1, and one decrease condition per transition (q -s-> q') and
/// counter level, with x restricted to the letter region X_s and the counter
/// incremented exactly when the successor is accepting. The per-successor
/// expansion realizes the max-form conditions (max <= c iff each <= c).
inline ConditionSystem product_cbbc_conditions(const DynamicalSystem& sys,
                                               const Labeling& lab,
                                               const OmegaAutomaton& aut,
                                               unsigned k) {
  if (sys.is_finite())
    throw InputError("use finite_product_conditions for finite-table systems");
  ConditionSystem out;
  out.sig = Signature::StateAutCounter;
  out.state_vars = sys.vars;
  auto id = detail::identity_args(sys.vars);
  std::vector<Polynomial> f;
  for (const auto& p : sys.poly_map()) f.push_back(p.on_vars(sys.vars));

  for (size_t q : aut.initial) {
    if (aut.is_accepting(q)) continue;
    Condition c;
    c.tag = "init[" + aut.states[q] + "]";
    c.indices["q"] = static_cast<long>(q);
    c.rel = Rel::LeqZero;
    c.apps = {{Rat(1), id, static_cast<long>(q), 0}};
    c.pieces = {sys.initial_set};
    c.sos_domain = sys.initial_set;
    out.conditions.push_back(std::move(c));
  }
  for (size_t q : aut.initial) {
    if (!aut.is_accepting(q)) continue;
    Condition c;
    c.tag = "init-accepting[" + aut.states[q] + "]";
    c.indices["q"] = static_cast<long>(q);
    c.rel = Rel::LeqZero;
    c.apps = {{Rat(1), id, static_cast<long>(q), 1}};
    c.pieces = {sys.initial_set};
    c.sos_domain = sys.initial_set;
    out.conditions.push_back(std::move(c));
  }
  for (size_t q : aut.accepting) {
    Condition c;
    c.tag = "positivity[" + aut.states[q] + "]";
    c.indices["q"] = static_cast<long>(q);
    c.indices["l"] = static_cast<long>(k) + 1;
    c.rel = Rel::GtZero;
    c.apps = {{Rat(1), id, static_cast<long>(q), static_cast<long>(k) + 1}};
    c.pieces = {sys.state_set};
    c.sos_domain = sys.state_set;
    out.conditions.push_back(std::move(c));
  }

  // transitions ordered by (source, letter, target) for stable output
  auto trans = aut.transitions;
  std::sort(trans.begin(), trans.end());
  for (const auto& [src, letter, dst] : trans) {
    auto it = lab.regions.find(aut.alphabet[letter]);
    if (it == lab.regions.end())
      throw InputError("no labeled region for letter '" + aut.alphabet[letter] +
                       "' used by the automaton");
    SemialgebraicSet dom = sys.state_set.intersect(it->second);
    bool acc = aut.is_accepting(dst);
    for (long l = 0; l <= static_cast<long>(k); ++l) {
      Condition c;
      c.tag = "decrease[" + aut.states[src] + "-" + aut.alphabet[letter] + "->" +
              aut.states[dst] + "]";
      c.indices["q"] = static_cast<long>(src);
      c.indices["l"] = l;
      c.rel = Rel::LeqZero;
      c.apps = {{Rat(1), f, static_cast<long>(dst), acc ? l + 1 : l},
                {Rat(-1), id, static_cast<long>(src), l}};
      c.pieces = {dom};
      c.sos_domain = dom;
      out.conditions.push_back(std::move(c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise conditions over finite-table systems.

struct FiniteTerm {
  Rat sign;
  size_t state;  // index into the table's enumeration
  long aut = -1;
  long counter = -1;
};

struct FiniteCondition {
  std::string tag;
  std::string where;  // human-readable point description
  Rel rel = Rel::LeqZero;
  std::vector<FiniteTerm> terms;
};

inline std::string point_str(const std::vector<Rat>& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += rat_string(p[i]);
  }
  return s + ")";
}

/// Pointwise expansion of the CBBC conditions over an enumerated state set.
inline std::vector<FiniteCondition> finite_cbbc_conditions(const CounterSystem& cs) {
  if (!cs.base.is_finite())
    throw InputError("finite_cbbc_conditions needs a finite-table system");
  const auto& t = cs.base.table();
  const long k = cs.bound;
  std::vector<FiniteCondition> out;
  auto in_vf = [&](size_t s) { return cs.visit_set.contains_aligned(t.states[s]); };

  for (size_t s : t.initial) {
    FiniteCondition c;
    c.where = point_str(t.states[s]);
    c.rel = Rel::LeqZero;
    if (in_vf(s)) {
      c.tag = "init-inside";
      c.terms = {{Rat(1), s, -1, 1}};
    } else {
      c.tag = "init-outside";
      c.terms = {{Rat(1), s, -1, 0}};
    }
    out.push_back(std::move(c));
  }
  for (size_t s = 0; s < t.states.size(); ++s) {
    if (!in_vf(s)) continue;
    FiniteCondition c;
    c.tag = "positivity";
    c.where = point_str(t.states[s]);
    c.rel = Rel::GtZero;
    c.terms = {{Rat(1), s, -1, k + 1}};
    out.push_back(std::move(c));
  }
  for (size_t s = 0; s < t.states.size(); ++s) {
    size_t succ = t.next[s];
    bool visits = in_vf(succ);
    for (long i = 0; i <= k; ++i) {
      FiniteCondition c;
      c.tag = visits ? "decrease-visit" : "decrease-stay";
      c.where = point_str(t.states[s]) + " i=" + std::to_string(i);
      c.rel = Rel::LeqZero;
      c.terms = {{Rat(1), succ, -1, visits ? i + 1 : i}, {Rat(-1), s, -1, i}};
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// Pointwise expansion of the product conditions over a finite-table system.
inline std::vector<FiniteCondition> finite_product_conditions(
    const DynamicalSystem& sys, const Labeling& lab, const OmegaAutomaton& aut,
    unsigned k) {
  if (!sys.is_finite())
    throw InputError("finite_product_conditions needs a finite-table system");
  const auto& t = sys.table();
  std::vector<FiniteCondition> out;

  auto letter_of = [&](size_t s) {
    return aut.letter_index(lab.letter_of(t.states[s], sys));
  };

  for (size_t s : t.initial) {
    for (size_t q : aut.initial) {
      FiniteCondition c;
      c.rel = Rel::LeqZero;
      c.where = point_str(t.states[s]) + " q=" + aut.states[q];
      if (aut.is_accepting(q)) {
        c.tag = "init-accepting[" + aut.states[q] + "]";
        c.terms = {{Rat(1), s, static_cast<long>(q), 1}};
      } else {
        c.tag = "init[" + aut.states[q] + "]";
        c.terms = {{Rat(1), s, static_cast<long>(q), 0}};
      }
      out.push_back(std::move(c));
    }
  }
  for (size_t q : aut.accepting)
    for (size_t s = 0; s < t.states.size(); ++s) {
      FiniteCondition c;
      c.tag = "positivity[" + aut.states[q] + "]";
      c.where = point_str(t.states[s]);
      c.rel = Rel::GtZero;
      c.terms = {{Rat(1), s, static_cast<long>(q), static_cast<long>(k) + 1}};
      out.push_back(std::move(c));
    }
  for (size_t s = 0; s < t.states.size(); ++s) {
    size_t succ = t.next[s];
    size_t letter = letter_of(s);
    for (size_t q = 0; q < aut.states.size(); ++q) {
      for (size_t j : aut.successors(q, letter)) {
        bool acc = aut.is_accepting(j);
        for (long l = 0; l <= static_cast<long>(k); ++l) {
          FiniteCondition c;
          c.tag = "decrease[" + aut.states[q] + "-" + aut.alphabet[letter] +
                  "->" + aut.states[j] + "]";
          c.where = point_str(t.states[s]) + " l=" + std::to_string(l);
          c.rel = Rel::LeqZero;
          c.terms = {{Rat(1), succ, static_cast<long>(j), acc ? l + 1 : l},
                     {Rat(-1), s, static_cast<long>(q), l}};
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace cbbc
