#pragma once

#include <optional>
#include <set>
#include <sstream>

#include "cbbc/check.hpp"
#include "cbbc/linprog.hpp"

namespace cbbc {

/// Tunables of the synthesis loop. The seed fixes all randomness; every
/// finite index (counter, automaton state) is always expanded exhaustively,
/// only state-space points are sampled.
struct CegisConfig {
  size_t initial_samples = 64;
  size_t grid = 201;             // falsifier grid per state dimension
  size_t random_points = 10000;  // falsifier random points per condition
  size_t refine_iters = 50;
  size_t max_counterexamples = 32;
  size_t max_rounds = 50;
  uint64_t seed = 1;
  unsigned k_max = 4;
  unsigned threads = 1;
  Rat eps_pos = Rat(1, 1000000);
  double coeff_bound = 1000.0;

  CheckOptions check_options(uint64_t round_seed) const {
    CheckOptions o;
    o.grid = grid;
    o.random = random_points;
    o.refine_iters = refine_iters;
    o.seed = round_seed;
    o.threads = threads;
    o.eps_pos = eps_pos;
    o.max_counterexamples = max_counterexamples;
    return o;
  }
};

/// State-space sample points; exact duplicates are dropped.
class SampleSet {
 public:
  bool insert(const std::vector<Rat>& p) {
    if (seen_.count(p)) return false;
    seen_.insert(p);
    points_.push_back(p);
    return true;
  }
  const std::vector<std::vector<Rat>>& points() const { return points_; }
  size_t size() const { return points_.size(); }

 private:
  std::set<std::vector<Rat>> seen_;
  std::vector<std::vector<Rat>> points_;
};

/// Linear constraint system over the template coefficients: one row per
/// (condition, in-domain sample). Strict conditions enter as >= eps_pos.
struct LinearSystem {
  size_t nvars = 0;
  std::vector<LinearRow> rows;
  std::vector<std::pair<size_t, std::vector<Rat>>> origin;  // (condition, point)
};

inline LinearSystem assemble_linear_constraints(const ConditionSystem& cs,
                                                const std::vector<Polynomial>& basis,
                                                const SampleSet& samples,
                                                const Rat& eps_pos) {
  LinearSystem sys;
  sys.nvars = basis.size();
  for (size_t ci = 0; ci < cs.conditions.size(); ++ci) {
    const Condition& c = cs.conditions[ci];
    auto cols = detail::condition_coeff_basis(c, basis, cs.sig, cs.state_vars);
    for (const auto& p : samples.points()) {
      bool inside = false;
      for (const auto& piece : c.pieces)
        if (piece.contains_aligned(p)) {
          inside = true;
          break;
        }
      if (!inside) continue;
      LinearRow row;
      row.a.resize(basis.size());
      for (size_t m = 0; m < basis.size(); ++m)
        row.a[m] = rat_double(cols[m].eval_aligned(p));
      if (c.rel == Rel::GtZero) {
        for (double& v : row.a) v = -v;
        row.b = -rat_double(eps_pos);
      } else {
        row.b = 0;
      }
      sys.rows.push_back(std::move(row));
      sys.origin.emplace_back(ci, p);
    }
  }
  return sys;
}

/// Pointwise rows over the table cells of a finite instance.
inline LinearSystem assemble_finite_constraints(
    const std::vector<FiniteCondition>& conds,
    const std::vector<TableKey>& cells, const DynamicalSystem& sys_model,
    const Rat& eps_pos) {
  std::map<TableKey, size_t> index;
  for (size_t i = 0; i < cells.size(); ++i) index[cells[i]] = i;
  LinearSystem sys;
  sys.nvars = cells.size();
  const auto& t = sys_model.table();
  for (size_t ci = 0; ci < conds.size(); ++ci) {
    const auto& c = conds[ci];
    LinearRow row;
    row.a.assign(cells.size(), 0.0);
    for (const auto& term : c.terms) {
      TableKey key{t.states[term.state], term.aut, term.counter};
      auto it = index.find(key);
      if (it == index.end()) throw SolverError("finite cell missing from template");
      row.a[it->second] += rat_double(term.sign);
    }
    if (c.rel == Rel::GtZero) {
      for (double& v : row.a) v = -v;
      row.b = -rat_double(eps_pos);
    } else {
      row.b = 0;
    }
    sys.rows.push_back(std::move(row));
    sys.origin.emplace_back(ci, std::vector<Rat>{});
  }
  return sys;
}

inline LpResult solve_coefficients(const LinearSystem& sys, double coeff_bound) {
  MaxMarginLp lp(sys.nvars, coeff_bound);
  for (const auto& r : sys.rows) lp.add(r.a, r.b);
  return lp.solve();
}

/// Grid + seeded-random + local-descent search for condition violations.
/// Deterministic under a fixed seed; at most cfg.max_counterexamples points,
/// ordered by violation severity.
inline std::vector<Counterexample> falsify(const CertificateCandidate& cand,
                                           const ConditionSystem& cs,
                                           const CegisConfig& cfg, uint64_t seed) {
  CheckOptions opt = cfg.check_options(seed);
  CheckReport rep = check_certificate(cand, cs, CheckMode::Sampled, Rat(0), opt);
  return rep.counterexamples;
}

enum class SynthesisStatus { Success, Infeasible, BudgetExhausted, SolverFailed };

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::SolverFailed;
  std::optional<CertificateCandidate> certificate;
  size_t rounds = 0;
  size_t samples = 0;
  size_t counterexamples = 0;
  std::string detail;
  std::vector<std::string> log;

  bool ok() const { return status == SynthesisStatus::Success; }

  std::string str() const {
    std::ostringstream os;
    os << "synthesis-report\n";
    os << "status: ";
    switch (status) {
      case SynthesisStatus::Success: os << "success"; break;
      case SynthesisStatus::Infeasible: os << "infeasible"; break;
      case SynthesisStatus::BudgetExhausted: os << "budget-exhausted"; break;
      case SynthesisStatus::SolverFailed: os << "solver-failed"; break;
    }
    os << "\n";
    os << "rounds: " << rounds << "\n";
    os << "samples: " << samples << "\n";
    os << "counterexamples: " << counterexamples << "\n";
    if (!detail.empty()) os << "detail: " << detail << "\n";
    for (const auto& l : log) os << "  " << l << "\n";
    return os.str();
  }
};

/// The synthesis loop: sample, solve the linear coefficient system with a
/// max-min-slack objective, falsify the candidate, inject counterexamples,
/// repeat. A returned candidate has already been re-validated by the checker
/// at tolerance 0 under a fresh falsifier seed.
inline SynthesisResult cegis_loop(const ConditionSystem& cs,
                                  const std::vector<Polynomial>& basis,
                                  const CegisConfig& cfg) {
  SynthesisResult result;
  // sampling box: hull of all condition pieces
  Box host;
  bool have_host = false;
  for (const auto& c : cs.conditions)
    for (const auto& piece : c.pieces) {
      auto b = piece.bounded_box();
      if (!b) continue;
      bool empty = false;
      for (const auto& iv : *b)
        if (!iv.valid()) empty = true;
      if (empty) continue;
      if (!have_host) {
        host = *b;
        have_host = true;
      } else {
        for (size_t i = 0; i < host.size(); ++i) {
          if (*b->at(i).lo < *host[i].lo) host[i].lo = b->at(i).lo;
          if (*b->at(i).hi > *host[i].hi) host[i].hi = b->at(i).hi;
        }
      }
    }
  if (!have_host) {
    result.status = SynthesisStatus::SolverFailed;
    result.detail = "no bounded condition domain to sample";
    return result;
  }

  SampleSet samples;
  for (const auto& p : halton_points(host, cfg.initial_samples * 4)) {
    if (samples.size() >= cfg.initial_samples) break;
    samples.insert(p);
  }
  // domain corners anchor the box
  for (const auto& p : grid_points(host, 2)) samples.insert(p);

  std::optional<CertificateCandidate> previous;
  for (size_t round = 1; round <= cfg.max_rounds; ++round) {
    result.rounds = round;
    result.samples = samples.size();
    LinearSystem lin = assemble_linear_constraints(cs, basis, samples, cfg.eps_pos);
    LpResult lp = solve_coefficients(lin, cfg.coeff_bound);
    if (lp.status == LpStatus::Error) {
      result.status = SynthesisStatus::SolverFailed;
      result.detail = lp.detail;
      return result;
    }
    if (lp.status == LpStatus::Infeasible) {
      result.status = SynthesisStatus::Infeasible;
      result.detail = "sampled constraint system infeasible (best slack " +
                      std::to_string(lp.slack) + ")";
      return result;
    }
    CertificateCandidate cand;
    cand.sig = cs.sig;
    cand.state_vars = cs.state_vars;
    cand.basis = basis;
    cand.coeffs.reserve(lp.x.size());
    for (double v : lp.x) cand.coeffs.push_back(rat_from_double(v));
    previous = cand;

    uint64_t round_seed = cfg.seed * 0x100000001b3ull + round;
    auto cexs = falsify(cand, cs, cfg, round_seed);
    result.log.push_back("round " + std::to_string(round) + ": slack " +
                         std::to_string(lp.slack) + ", " +
                         std::to_string(cexs.size()) + " counterexamples");
    if (cexs.empty()) {
      // independent re-validation with a fresh seed before reporting success
      CheckOptions vopt = cfg.check_options(cfg.seed ^ 0x9e3779b97f4a7c15ull);
      CheckReport rep = check_certificate(cand, cs, CheckMode::Sampled, Rat(0), vopt);
      if (rep.verdict == Verdict::Pass) {
        result.status = SynthesisStatus::Success;
        result.certificate = cand;
        return result;
      }
      cexs = rep.counterexamples;
      result.log.push_back("round " + std::to_string(round) +
                           ": validation found " + std::to_string(cexs.size()) +
                           " counterexamples");
    }
    size_t injected = 0;
    for (const auto& cex : cexs)
      if (!cex.point.empty() && samples.insert(cex.point)) ++injected;
    result.counterexamples += injected;
    if (injected == 0) {
      result.status = SynthesisStatus::BudgetExhausted;
      result.detail = "falsifier produced no new sample points";
      return result;
    }
  }
  result.status = SynthesisStatus::BudgetExhausted;
  result.detail = "round budget exhausted";
  return result;
}

/// Exhaustive-table synthesis over a finite instance: the LP decides every
/// table cell directly, so one solve settles feasibility exactly.
inline SynthesisResult synthesize_finite(const std::vector<FiniteCondition>& conds,
                                         const DynamicalSystem& sys,
                                         Signature sig, long aut_count,
                                         long counter_count,
                                         const CegisConfig& cfg) {
  const auto& t = sys.table();
  std::vector<TableKey> cells;
  for (size_t s = 0; s < t.states.size(); ++s) {
    if (sig == Signature::StateCounter) {
      for (long c = 0; c < counter_count; ++c)
        cells.push_back(TableKey{t.states[s], -1, c});
    } else {
      for (long q = 0; q < aut_count; ++q)
        for (long c = 0; c < counter_count; ++c)
          cells.push_back(TableKey{t.states[s], q, c});
    }
  }
  SynthesisResult result;
  result.rounds = 1;
  result.samples = cells.size();
  LinearSystem lin = assemble_finite_constraints(conds, cells, sys, cfg.eps_pos);
  LpResult lp = solve_coefficients(lin, cfg.coeff_bound);
  if (lp.status == LpStatus::Error) {
    result.status = SynthesisStatus::SolverFailed;
    result.detail = lp.detail;
    return result;
  }
  if (lp.status == LpStatus::Infeasible) {
    result.status = SynthesisStatus::Infeasible;
    return result;
  }
  CertificateCandidate cand;
  cand.sig = sig;
  cand.state_vars = sys.vars;
  for (size_t i = 0; i < cells.size(); ++i)
    cand.table[cells[i]] = rat_from_double(lp.x[i]);
  CheckReport rep = check_finite(cand, conds, sys, Rat(0), cfg.eps_pos);
  if (rep.verdict != Verdict::Pass) {
    result.status = SynthesisStatus::SolverFailed;
    result.detail = "finite table failed exact re-validation";
    return result;
  }
  result.status = SynthesisStatus::Success;
  result.certificate = cand;
  return result;
}

/// Runs the loop for k = 0, 1, ... up to k_max and returns the first
/// certifiable bound. Exhausting k_max is explicitly inconclusive, never a
/// refutation.
template <typename MakeConditions, typename RunOne>
std::pair<std::optional<unsigned>, SynthesisResult> escalate_k_impl(
    unsigned k_max, MakeConditions make, RunOne run) {
  SynthesisResult last;
  for (unsigned k = 0; k <= k_max; ++k) {
    auto conds = make(k);
    SynthesisResult r = run(conds, k);
    if (r.ok()) return {k, std::move(r)};
    last = std::move(r);
  }
  last.detail = "k escalation exhausted (k_max=" + std::to_string(k_max) +
                "); inconclusive" +
                (last.detail.empty() ? "" : ": " + last.detail);
  return {std::nullopt, std::move(last)};
}

}  // namespace cbbc
