#pragma once

#include <sstream>

#include "cbbc/lift.hpp"
#include "cbbc/problem.hpp"
#include "cbbc/sosout.hpp"

namespace cbbc {

// Exit-code contract shared by the command-line tool and the tests:
//   synthesize: 0 success, 2 inconclusive, 1 input error
//   check:      0 pass, 3 fail, 4 unknown, 1 input error
//   simulate:   0 ok, 1 input error
//   lift:       0 lifted, 2 uncut path, 1 input error
//   emit-sos:   0 ok, 1 input error

struct SynthesizeOutcome {
  int exit_code = 2;
  std::optional<CertificateCandidate> certificate;
  std::optional<unsigned> k_used;
  SynthesisResult result;
  std::string mode;  // "visit", "kuca", "uca", "nba"
};

inline std::vector<Polynomial> problem_basis(const Problem& p, Signature sig,
                                             unsigned degree) {
  std::vector<std::string> tvars = p.system.vars;
  for (const auto& v : index_vars(sig)) tvars.push_back(v);
  return monomial_basis(tvars, degree);
}

/// Synthesis entry point: visit-mode problems run one CEGIS instance at the
/// file's k; UCA/NBA problems escalate k from 0 to k_max (an exhausted
/// escalation is inconclusive, never a refutation).
inline SynthesizeOutcome run_synthesize(const Problem& p, unsigned degree,
                                        const CegisConfig& cfg) {
  SynthesizeOutcome out;
  if (p.has_visit()) {
    out.mode = "visit";
    CounterSystem cs = p.counter_system();
    if (!p.visit_k)
      throw InputError("[visit] synthesis needs an explicit k");
    if (p.system.is_finite()) {
      auto conds = finite_cbbc_conditions(cs);
      out.result = synthesize_finite(conds, p.system, Signature::StateCounter, 1,
                                     static_cast<long>(*p.visit_k) + 2, cfg);
    } else {
      auto conds = cbbc_conditions(cs, p.visit_complement);
      out.result =
          cegis_loop(conds, problem_basis(p, Signature::StateCounter, degree), cfg);
    }
    out.k_used = *p.visit_k;
  } else if (p.has_automaton()) {
    const OmegaAutomaton& aut = *p.automaton;
    auto run_at_k = [&](unsigned k) {
      if (p.system.is_finite()) {
        auto conds = finite_product_conditions(p.system, *p.labeling, aut, k);
        return synthesize_finite(conds, p.system, Signature::StateAutCounter,
                                 static_cast<long>(aut.states.size()),
                                 static_cast<long>(k) + 2, cfg);
      }
      auto conds = product_cbbc_conditions(p.system, *p.labeling, aut, k);
      return cegis_loop(conds, problem_basis(p, Signature::StateAutCounter, degree),
                        cfg);
    };
    if (aut.semantics == Semantics::KUCA) {
      out.mode = "kuca";
      out.result = run_at_k(aut.k);
      out.k_used = aut.k;
    } else {
      out.mode = aut.semantics == Semantics::NBA ? "nba" : "uca";
      for (unsigned k = 0; k <= cfg.k_max; ++k) {
        out.result = run_at_k(k);
        if (out.result.ok()) {
          out.k_used = k;
          break;
        }
      }
      if (!out.result.ok())
        out.result.detail = "k escalation exhausted (k_max=" +
                            std::to_string(cfg.k_max) + "); inconclusive" +
                            (out.result.detail.empty() ? "" : ": " + out.result.detail);
    }
  } else {
    throw InputError("problem has neither [visit] nor [automaton]");
  }
  if (out.result.ok()) {
    out.certificate = out.result.certificate;
    out.exit_code = 0;
  } else {
    out.exit_code = 2;
  }
  return out;
}

/// Conditions a certificate for this problem must satisfy, for the checkers.
inline ConditionSystem problem_conditions(const Problem& p, unsigned k_override,
                                          bool use_override) {
  if (p.has_visit()) {
    CounterSystem cs = p.counter_system();
    if (use_override) cs.bound = k_override;
    return cbbc_conditions(cs, p.visit_complement);
  }
  if (p.has_automaton()) {
    unsigned k = use_override ? k_override
                              : (p.automaton->semantics == Semantics::KUCA
                                     ? p.automaton->k
                                     : p.cegis.k_max);
    return product_cbbc_conditions(p.system, *p.labeling, *p.automaton, k);
  }
  throw InputError("problem has neither [visit] nor [automaton]");
}

inline std::vector<FiniteCondition> problem_finite_conditions(const Problem& p,
                                                              unsigned k_override,
                                                              bool use_override) {
  if (p.has_visit()) {
    CounterSystem cs = p.counter_system();
    if (use_override) cs.bound = k_override;
    return finite_cbbc_conditions(cs);
  }
  unsigned k = use_override ? k_override
                            : (p.automaton->semantics == Semantics::KUCA
                                   ? p.automaton->k
                                   : p.cegis.k_max);
  return finite_product_conditions(p.system, *p.labeling, *p.automaton, k);
}

struct CheckOutcome {
  int exit_code = 1;
  CheckReport report;
};

inline CheckOutcome run_check(const Problem& p, const CertificateCandidate& cand,
                              CheckMode mode, const Rat& tolerance,
                              const CheckOptions& opt) {
  Signature expected =
      p.has_visit() ? Signature::StateCounter : Signature::StateAutCounter;
  if (cand.sig != expected)
    throw InputError("certificate signature '" + signature_name(cand.sig) +
                     "' does not match the problem (expected '" +
                     signature_name(expected) + "')");
  CheckOutcome out;
  if (p.system.is_finite()) {
    out.report = check_finite(cand, problem_finite_conditions(p, 0, false),
                              p.system, tolerance, opt.eps_pos);
  } else {
    out.report = check_certificate(cand, problem_conditions(p, 0, false), mode,
                                   tolerance, opt);
  }
  switch (out.report.verdict) {
    case Verdict::Pass: out.exit_code = 0; break;
    case Verdict::Fail: out.exit_code = 3; break;
    case Verdict::Unknown: out.exit_code = 4; break;
  }
  return out;
}

struct SimulateOutcome {
  int exit_code = 0;
  std::string report;
  std::vector<std::vector<Rat>> trace;
  size_t visits = 0;
  unsigned accepting_count = 0;
  std::optional<bool> respects_k;
};

inline SimulateOutcome run_simulate(const Problem& p, const std::vector<Rat>& x0,
                                    size_t horizon, bool anywhere,
                                    DomainPolicy policy = DomainPolicy::Warn) {
  SimulateOutcome out;
  if (!anywhere) {
    if (p.system.is_finite()) {
      auto idx = p.system.state_index(x0);
      bool initial = false;
      if (idx)
        for (size_t s : p.system.table().initial)
          if (s == *idx) initial = true;
      if (!initial)
        throw InputError("x0 is not an initial state (use --anywhere to override)");
    } else if (!p.system.initial_set.contains_aligned(x0)) {
      throw InputError("x0 is outside the initial set (use --anywhere to override)");
    }
  }
  std::vector<std::string> warnings;
  out.trace = simulate(p.system, x0, horizon, policy, &warnings);

  std::ostringstream os;
  os << "simulate-report\n";
  RunFront front;
  const OmegaAutomaton* aut = p.has_automaton() ? &*p.automaton : nullptr;
  unsigned k_for_front = 0;
  if (aut) {
    k_for_front = aut->semantics == Semantics::KUCA ? aut->k : p.cegis.k_max;
    front = initial_front(*aut);
  }
  size_t visits = 0;
  for (size_t t = 0; t < out.trace.size(); ++t) {
    os << "step " << t << ": " << point_str(out.trace[t]);
    if (p.labeling) {
      std::string letter = p.labeling->letter_of(out.trace[t], p.system);
      os << " label " << letter;
      if (aut && t + 1 < out.trace.size())
        front = advance_front(*aut, front, aut->letter_index(letter), k_for_front);
    }
    if (p.has_visit()) {
      if (p.visit_region->contains_aligned(out.trace[t])) ++visits;
      os << " visits " << visits;
    }
    if (aut) os << " accepting-count " << max_count(front);
    os << "\n";
  }
  out.visits = visits;
  if (aut) {
    out.accepting_count = max_count(front);
    out.respects_k = out.accepting_count <= k_for_front;
    os << "accepting-count: " << out.accepting_count << "\n";
    os << "prefix-respects-k: " << (*out.respects_k ? "yes" : "no") << " (k="
       << k_for_front << ")\n";
  }
  if (p.has_visit()) os << "visits: " << visits << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  out.report = os.str();
  return out;
}

struct LiftOutcome {
  int exit_code = 2;
  LiftReport report;
};

inline LiftOutcome run_lift(const Problem& p, unsigned degree,
                            const CegisConfig& cfg) {
  if (!p.has_automaton())
    throw InputError("lift needs an [automaton] section with NBA semantics");
  LiftOutcome out;
  out.report = lift_to_cbbc(p.system, *p.labeling, *p.automaton, degree, cfg);
  out.exit_code = (out.report.status == LiftStatus::Lifted ||
                   out.report.status == LiftStatus::TrivialNoAccepting)
                      ? 0
                      : 2;
  return out;
}

inline SosProgram run_emit_sos(const Problem& p, unsigned degree,
                               unsigned mult_degree) {
  if (p.has_visit()) {
    std::optional<SemialgebraicSet> comp =
        p.visit_region_empty ? std::nullopt : p.visit_complement;
    return emit_sos_cbbc(p.counter_system(), degree, mult_degree, p.name, comp,
                         Rat(1, 1000000));
  }
  if (p.has_automaton()) {
    unsigned k = p.automaton->semantics == Semantics::KUCA ? p.automaton->k
                                                           : p.cegis.k_max;
    return emit_sos_product(p.system, *p.labeling, *p.automaton, k, degree,
                            mult_degree, p.name);
  }
  throw InputError("problem has neither [visit] nor [automaton]");
}

}  // namespace cbbc
