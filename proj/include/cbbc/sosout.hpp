#pragma once

#include <sstream>

#include "cbbc/certify.hpp"

namespace cbbc {

/// Emitted sum-of-squares program: a solver-agnostic text document. Every
/// constraint requires
///     base - sum_j multiplier_j * domain_j
/// to be a sum of squares, with each multiplier an SOS polynomial of the
/// declared degree over the multiplier variables. `base` is written over the
/// state variables and the symbolic template coefficients c1..cz. Finite
/// instances enumerate states pointwise ("point:" lines, no multipliers).
struct SosProgram {
  std::string text;
};

namespace sos_detail {

inline bool trivially_empty(const SemialgebraicSet& s) {
  for (const auto& iq : s.inequalities)
    if (iq.poly.is_constant() &&
        (iq.poly.constant_value() < 0 ||
         (iq.strict && iq.poly.constant_value() == 0)))
      return true;
  auto b = s.box();
  if (b)
    for (const auto& iv : *b)
      if (!iv.valid()) return true;
  return false;
}

/// base polynomial over (state vars, c1..cz): -expr for <=0 conditions,
/// expr - eps for >0 conditions.
inline Polynomial base_polynomial(const Condition& c,
                                  const std::vector<Polynomial>& basis,
                                  Signature sig,
                                  const std::vector<std::string>& state_vars,
                                  const Rat& eps) {
  auto cols = detail::condition_coeff_basis(c, basis, sig, state_vars);
  std::vector<std::string> all_vars = state_vars;
  for (size_t m = 0; m < basis.size(); ++m)
    all_vars.push_back("c" + std::to_string(m + 1));
  Polynomial acc(all_vars);
  for (size_t m = 0; m < basis.size(); ++m) {
    Polynomial cvar = Polynomial::variable("c" + std::to_string(m + 1));
    acc += cvar.on_vars(all_vars) * cols[m].on_vars(all_vars);
  }
  if (c.rel == Rel::GtZero) return acc - Polynomial::constant(eps, all_vars);
  return -acc;
}

inline std::string condition_name(const Condition& c) {
  std::string name = c.tag;
  for (const auto& [k, v] : c.indices) name += " " + k + "=" + std::to_string(v);
  return name;
}

inline void emit_header(std::ostringstream& os, const std::string& problem,
                        const std::string& kind, unsigned k, const Rat& eps,
                        const std::vector<std::string>& state_vars,
                        const std::vector<std::string>& template_vars,
                        unsigned degree, const std::vector<Polynomial>& basis,
                        unsigned mult_degree) {
  os << "sosp 1\n";
  os << "problem " << problem << "\n";
  os << "kind " << kind << "\n";
  os << "k " << k << "\n";
  os << "epsilon " << rat_string(eps) << "\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += v[i];
    }
    return s;
  };
  os << "state-vars " << join(state_vars) << "\n";
  os << "template-vars " << join(template_vars) << "\n";
  os << "template-degree " << degree << "\n";
  os << "template-monomials ";
  for (size_t m = 0; m < basis.size(); ++m) {
    if (m) os << ", ";
    os << basis[m].str();
  }
  os << "\n";
  os << "decision ";
  for (size_t m = 0; m < basis.size(); ++m) {
    if (m) os << ", ";
    os << "c" << (m + 1);
  }
  os << "\n";
  os << "multiplier-degree " << mult_degree << "\n";
  os << "multiplier-vars " << join(template_vars) << "\n";
}

inline void emit_constraints(std::ostringstream& os, const ConditionSystem& cs,
                             const std::vector<Polynomial>& basis,
                             const Rat& eps) {
  size_t cidx = 0;
  for (const auto& c : cs.conditions) {
    if (!c.sos_domain)
      throw InputError(
          "condition '" + condition_name(c) +
          "' has no single-conjunction domain description; supply the set "
          "difference in the problem file");
    if (trivially_empty(*c.sos_domain)) continue;  // vacuous constraint omitted
    ++cidx;
    os << "\nconstraint " << condition_name(c) << "\n";
    os << "base: "
       << base_polynomial(c, basis, cs.sig, cs.state_vars, eps).str() << "\n";
    os << "domain:";
    const auto& ineqs = c.sos_domain->inequalities;
    if (ineqs.empty()) {
      os << " (whole space)";
    } else {
      for (size_t j = 0; j < ineqs.size(); ++j) {
        if (j) os << ";";
        os << " " << ineqs[j].poly.str();
      }
    }
    os << "\n";
    os << "multipliers:";
    for (size_t j = 0; j < std::max<size_t>(ineqs.size(), 0); ++j)
      os << (j ? ", " : " ") << "lam" << cidx << "_" << (j + 1);
    if (ineqs.empty()) os << " (none)";
    os << "\n";
  }
}

}  // namespace sos_detail

/// SOS program for the CBBC conditions of a counter system with polynomial
/// dynamics: exact mirror of the condition families, one SOS constraint per
/// family, multipliers one per domain inequality.
inline SosProgram emit_sos_cbbc(
    const CounterSystem& cs, unsigned degree, unsigned mult_degree,
    const std::string& problem_name,
    const std::optional<SemialgebraicSet>& user_complement = std::nullopt,
    const Rat& eps = Rat(1, 1000000)) {
  ConditionSystem conds = cbbc_conditions(cs, user_complement);
  std::vector<std::string> tvars = cs.base.vars;
  tvars.push_back("i");
  auto basis = monomial_basis(tvars, degree);
  std::ostringstream os;
  sos_detail::emit_header(os, problem_name, "cbbc", cs.bound, eps, cs.base.vars,
                          tvars, degree, basis, mult_degree);
  sos_detail::emit_constraints(os, conds, basis, eps);
  SosProgram p;
  p.text = os.str();
  return p;
}

/// SOS program for the product conditions against a k-UCA.
inline SosProgram emit_sos_product(const DynamicalSystem& sys, const Labeling& lab,
                                   const OmegaAutomaton& aut, unsigned k,
                                   unsigned degree, unsigned mult_degree,
                                   const std::string& problem_name,
                                   const Rat& eps = Rat(1, 1000000)) {
  std::vector<std::string> tvars = sys.vars;
  tvars.push_back("i");
  tvars.push_back("l");
  auto basis = monomial_basis(tvars, degree);
  std::ostringstream os;

  if (sys.is_finite()) {
    // pointwise enumeration: the dynamics is a table, not a polynomial
    auto conds = finite_product_conditions(sys, lab, aut, k);
    sos_detail::emit_header(os, problem_name, "product-finite", k, eps, sys.vars,
                            tvars, degree, basis, mult_degree);
    const auto& t = sys.table();
    size_t cidx = 0;
    for (const auto& c : conds) {
      ++cidx;
      (void)cidx;
      std::vector<std::string> cvars;
      for (size_t m = 0; m < basis.size(); ++m)
        cvars.push_back("c" + std::to_string(m + 1));
      Polynomial acc(cvars);
      for (const auto& term : c.terms) {
        PointMap fixed;
        for (size_t i = 0; i < sys.vars.size(); ++i)
          fixed[sys.vars[i]] = t.states[term.state][i];
        fixed["i"] = Rat(term.aut);
        fixed["l"] = Rat(term.counter);
        for (size_t m = 0; m < basis.size(); ++m) {
          Rat phi = basis[m].substitute(fixed).constant_value();
          if (phi == 0) continue;
          acc += (term.sign * phi) *
                 Polynomial::variable("c" + std::to_string(m + 1)).on_vars(cvars);
        }
      }
      Polynomial base =
          c.rel == Rel::GtZero ? acc - Polynomial::constant(eps, cvars) : -acc;
      os << "\nconstraint " << c.tag << "\n";
      os << "point: " << c.where << "\n";
      os << "base: " << base.str() << "\n";
      os << "multipliers: (none)\n";
    }
    SosProgram p;
    p.text = os.str();
    return p;
  }

  ConditionSystem conds = product_cbbc_conditions(sys, lab, aut, k);
  sos_detail::emit_header(os, problem_name, "product", k, eps, sys.vars, tvars,
                          degree, basis, mult_degree);
  sos_detail::emit_constraints(os, conds, basis, eps);
  SosProgram p;
  p.text = os.str();
  return p;
}

}  // namespace cbbc
