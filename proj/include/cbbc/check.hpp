#pragma once

#include <mutex>
#include <optional>
#include <sstream>

#include "cbbc/certify.hpp"

namespace cbbc {

enum class Verdict { Pass, Fail, Unknown };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

/// A point violating one condition; margin is the normalized violation
/// (positive = violated beyond tolerance, see CheckReport).
struct Counterexample {
  std::string condition;
  std::vector<Rat> point;
  Rat margin;
  std::string detail;
};

struct ConditionMargin {
  std::string condition;
  size_t points = 0;
  std::optional<Rat> worst;  // max normalized violation over evaluated points
  std::vector<Rat> worst_at;
  bool proven = false;    // certified mode: condition proved over its pieces
  bool undecided = false; // certified mode: interval straddled at full depth
};

/// Normalized violation convention: for "<= 0" conditions the margin is the
/// expression value (violated when > tolerance); for "> 0" conditions it is
/// eps_pos - value (violated when > tolerance, i.e. value < eps_pos - tol).
/// Negative margins mean satisfaction with room.
struct CheckReport {
  Verdict verdict = Verdict::Unknown;
  std::string mode;
  Rat tolerance;
  Rat eps_pos;
  std::vector<ConditionMargin> margins;
  std::vector<Counterexample> counterexamples;
  std::vector<std::string> warnings;

  std::optional<Rat> worst_for(const std::string& prefix) const {
    std::optional<Rat> w;
    for (const auto& m : margins)
      if (m.condition.rfind(prefix, 0) == 0 && m.worst)
        if (!w || *m.worst > *w) w = *m.worst;
    return w;
  }

  std::string str() const {
    std::ostringstream os;
    os << "check-report\n";
    os << "mode: " << mode << "\n";
    os << "tolerance: " << rat_string(tolerance) << "\n";
    os << "verdict: " << verdict_name(verdict) << "\n";
    os << "conditions: " << margins.size() << "\n";
    for (const auto& m : margins) {
      os << "  " << m.condition << ": points " << m.points;
      if (m.worst) {
        os << ", worst margin " << rat_decimal(*m.worst) << " (exact "
           << rat_string(*m.worst) << ")";
        if (!m.worst_at.empty()) os << " at " << point_str(m.worst_at);
      }
      if (m.proven) os << ", proven";
      if (m.undecided) os << ", undecided";
      os << "\n";
    }
    if (counterexamples.empty()) {
      os << "counterexamples: none\n";
    } else {
      os << "counterexamples: " << counterexamples.size() << "\n";
      for (const auto& c : counterexamples) {
        os << "  " << c.condition << " at "
           << (c.point.empty() ? c.detail : point_str(c.point)) << ": margin "
           << rat_decimal(c.margin) << " (exact " << rat_string(c.margin) << ")";
        if (!c.point.empty() && !c.detail.empty()) os << " [" << c.detail << "]";
        os << "\n";
      }
    }
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    return os.str();
  }
};

enum class CheckMode { Sampled, Certified };

struct CheckOptions {
  size_t grid = 201;           // grid points per state dimension
  size_t random = 10000;       // seeded random points per condition
  size_t refine_iters = 50;    // golden-section iterations from the worst point
  uint64_t seed = 1;
  unsigned threads = 1;
  unsigned depth = 12;         // certified bisection depth
  Rat eps_pos = Rat(1, 1000000);
  size_t max_counterexamples = 32;
};

namespace detail {

/// Evaluates one condition for an arbitrary candidate at a state point.
inline Rat condition_value(const Condition& c, const CertificateCandidate& cand,
                           const std::vector<Rat>& point) {
  Rat acc(0);
  for (const auto& app : c.apps) {
    std::vector<Rat> image(app.arg.size());
    PointMap pm;
    for (size_t i = 0; i < point.size(); ++i) pm[cand.state_vars[i]] = point[i];
    for (size_t i = 0; i < app.arg.size(); ++i) image[i] = app.arg[i].eval(pm);
    acc += app.sign * cand.eval(image, app.aut, app.counter);
  }
  return acc;
}

/// Materializes the condition expression as a polynomial over the state
/// variables; possible for template candidates and for constant-in-x tables.
inline std::optional<Polynomial> condition_polynomial(
    const Condition& c, const CertificateCandidate& cand) {
  Polynomial acc(cand.state_vars);
  for (const auto& app : c.apps) {
    if (cand.has_poly() && cand.table.empty()) {
      Polynomial b = cand.instantiate(app.aut, app.counter);
      std::map<std::string, Polynomial> subst;
      for (size_t i = 0; i < cand.state_vars.size(); ++i)
        subst[cand.state_vars[i]] = app.arg[i];
      acc += app.sign * b.compose(subst).on_vars(cand.state_vars);
    } else if (!cand.table.empty()) {
      auto it = cand.table.find(TableKey{{}, app.aut, app.counter});
      if (it == cand.table.end()) return std::nullopt;
      acc += Polynomial::constant(app.sign * it->second, cand.state_vars);
    } else {
      return std::nullopt;
    }
  }
  return acc;
}

inline Rat normalized_violation(Rel rel, const Rat& value, const Rat& eps_pos) {
  return rel == Rel::LeqZero ? value : eps_pos - value;
}

struct PieceResult {
  std::optional<Rat> worst;
  std::vector<Rat> worst_at;
  size_t points = 0;
  std::vector<Counterexample> cexs;
  bool proven = false, undecided = false;
  std::vector<std::string> warnings;
};

}  // namespace detail

/// Sampled- or certified-mode check of a candidate against a condition
/// system. Sampled mode evaluates a deterministic grid, seeded random points
/// and a local refinement pass, all in exact arithmetic; certified mode
/// proves conditions by interval bisection over box-shaped pieces (falling
/// back to sampling, with a warning, elsewhere). Results are merged in
/// condition order so they are independent of the thread count.
inline CheckReport check_certificate(const CertificateCandidate& cand,
                                     const ConditionSystem& cs, CheckMode mode,
                                     const Rat& tolerance,
                                     const CheckOptions& opt = {}) {
  if (cand.sig != cs.sig)
    throw InputError("candidate domain signature does not match the condition system");
  CheckReport rep;
  rep.mode = mode == CheckMode::Sampled ? "sampled" : "certified";
  rep.tolerance = tolerance;
  rep.eps_pos = opt.eps_pos;

  struct Task {
    size_t cond;
    size_t piece;
  };
  std::vector<Task> tasks;
  for (size_t ci = 0; ci < cs.conditions.size(); ++ci)
    for (size_t pi = 0; pi < cs.conditions[ci].pieces.size(); ++pi)
      tasks.push_back({ci, pi});

  std::vector<detail::PieceResult> results(tasks.size());

  parallel_for(tasks.size(), opt.threads, [&](size_t b, size_t e, size_t) {
    for (size_t ti = b; ti < e; ++ti) {
      const Condition& c = cs.conditions[tasks[ti].cond];
      const SemialgebraicSet& piece = c.pieces[tasks[ti].piece];
      detail::PieceResult& res = results[ti];

      auto bbox = piece.bounded_box();
      std::optional<Polynomial> expr = detail::condition_polynomial(c, cand);

      if (mode == CheckMode::Certified && bbox && expr) {
        bool empty = false;
        for (const auto& iv : *bbox)
          if (!iv.valid()) empty = true;
        if (empty) {
          res.proven = true;
          continue;
        }
        Rat threshold = c.rel == Rel::LeqZero ? tolerance : opt.eps_pos - tolerance;
        ProofResult pr = prove_on_box(*expr, *bbox, threshold,
                                      c.rel == Rel::GtZero, opt.depth);
        if (pr.status == ProofStatus::Proven) {
          res.proven = true;
          res.worst = c.rel == Rel::LeqZero
                          ? *pr.bound.hi
                          : opt.eps_pos - *pr.bound.lo;
          continue;
        }
        if (pr.status == ProofStatus::Refuted && piece.contains_aligned(pr.witness)) {
          Rat v = expr->eval_aligned(pr.witness);
          Rat viol = detail::normalized_violation(c.rel, v, opt.eps_pos);
          res.worst = viol;
          res.worst_at = pr.witness;
          res.points = 1;
          res.cexs.push_back({c.tag, pr.witness, viol, ""});
          continue;
        }
        res.undecided = true;
        continue;
      }
      if (mode == CheckMode::Certified)
        res.warnings.push_back("condition '" + c.tag +
                               "' has a non-box domain; falling back to sampled "
                               "evaluation");

      // sampled evaluation
      Box host;
      if (bbox) {
        host = *bbox;
        bool empty = false;
        for (const auto& iv : host)
          if (!iv.valid()) empty = true;
        if (empty) continue;
      } else {
        // host box: widest bounded box among the condition pieces' variables
        auto hb = piece.box();
        if (!hb) continue;
        bool bounded = true;
        for (const auto& iv : *hb)
          if (!iv.bounded()) bounded = false;
        if (!bounded)
          throw InputError("sampled mode needs a bounded box around condition '" +
                           c.tag + "'");
        host = *hb;
      }

      auto consider = [&](const std::vector<Rat>& p) {
        if (!piece.contains_aligned(p)) return;
        Rat v = expr ? expr->eval_aligned(p)
                     : detail::condition_value(c, cand, p);
        Rat viol = detail::normalized_violation(c.rel, v, opt.eps_pos);
        ++res.points;
        if (!res.worst || viol > *res.worst ||
            (viol == *res.worst && p < res.worst_at)) {
          res.worst = viol;
          res.worst_at = p;
        }
        if (viol > tolerance && res.cexs.size() < opt.max_counterexamples)
          res.cexs.push_back({c.tag, p, viol, ""});
      };

      for (const auto& p : grid_points(host, opt.grid)) consider(p);
      uint64_t piece_seed =
          opt.seed ^ (0x9e3779b97f4a7c15ull * (tasks[ti].cond + 1) + tasks[ti].piece);
      for (const auto& p : random_points(host, opt.random, piece_seed)) consider(p);

      // local refinement from the worst point: coordinate-wise golden section
      if (res.worst && !res.worst_at.empty() && opt.refine_iters > 0 && expr) {
        std::vector<double> x(res.worst_at.size());
        for (size_t i = 0; i < x.size(); ++i) x[i] = rat_double(res.worst_at[i]);
        double sign = c.rel == Rel::LeqZero ? 1.0 : -1.0;
        auto value = [&](const std::vector<double>& pt) {
          return sign * expr->eval_double(pt);
        };
        const double gr = 0.6180339887498949;
        for (size_t it = 0; it < opt.refine_iters; ++it) {
          size_t d = it % x.size();
          double lo = rat_double(*host[d].lo), hi = rat_double(*host[d].hi);
          double span = (hi - lo) / std::max<size_t>(1, opt.grid - 1);
          double a = std::max(lo, x[d] - span), b2 = std::min(hi, x[d] + span);
          double c1 = b2 - gr * (b2 - a), c2 = a + gr * (b2 - a);
          std::vector<double> p1 = x, p2 = x;
          p1[d] = c1;
          p2[d] = c2;
          x[d] = value(p1) >= value(p2) ? c1 : c2;
        }
        std::vector<Rat> refined = rationalize(x);
        if (piece.contains_aligned(refined)) {
          Rat v = expr->eval_aligned(refined);
          Rat viol = detail::normalized_violation(c.rel, v, opt.eps_pos);
          if (viol > *res.worst) {
            res.worst = viol;
            res.worst_at = refined;
            if (viol > tolerance) res.cexs.push_back({c.tag, refined, viol, ""});
          }
        }
      }
    }
  });

  // deterministic merge per condition
  rep.margins.resize(cs.conditions.size());
  for (size_t ci = 0; ci < cs.conditions.size(); ++ci) {
    rep.margins[ci].condition = cs.conditions[ci].tag;
    for (const auto& [key, val] : cs.conditions[ci].indices)
      rep.margins[ci].condition += " " + key + "=" + std::to_string(val);
  }
  for (size_t ti = 0; ti < tasks.size(); ++ti) {
    auto& m = rep.margins[tasks[ti].cond];
    const auto& r = results[ti];
    m.points += r.points;
    if (r.proven) m.proven = true;
    if (r.undecided) m.undecided = true;
    if (r.worst && (!m.worst || *r.worst > *m.worst))
      m.worst = r.worst, m.worst_at = r.worst_at;
    for (const auto& cex : r.cexs) {
      Counterexample c2 = cex;
      c2.condition = m.condition;
      rep.counterexamples.push_back(std::move(c2));
    }
    for (const auto& w : r.warnings) rep.warnings.push_back(w);
  }
  // order counterexamples by severity, then condition order, then point
  std::stable_sort(rep.counterexamples.begin(), rep.counterexamples.end(),
                   [](const Counterexample& a, const Counterexample& b) {
                     if (a.margin != b.margin) return a.margin > b.margin;
                     return a.point < b.point;
                   });
  if (rep.counterexamples.size() > opt.max_counterexamples)
    rep.counterexamples.resize(opt.max_counterexamples);

  bool any_violation = !rep.counterexamples.empty();
  bool any_undecided = false;
  for (const auto& m : rep.margins)
    if (m.undecided) any_undecided = true;
  if (any_violation)
    rep.verdict = Verdict::Fail;
  else if (mode == CheckMode::Certified && any_undecided)
    rep.verdict = Verdict::Unknown;
  else
    rep.verdict = Verdict::Pass;
  return rep;
}

/// Exhaustive pointwise check over an enumerated state space: exact verdict.
inline CheckReport check_finite(const CertificateCandidate& cand,
                                const std::vector<FiniteCondition>& conds,
                                const DynamicalSystem& sys, const Rat& tolerance,
                                const Rat& eps_pos = Rat(1, 1000000)) {
  const auto& t = sys.table();
  CheckReport rep;
  rep.mode = "finite";
  rep.tolerance = tolerance;
  rep.eps_pos = eps_pos;
  std::map<std::string, size_t> tag_index;
  for (const auto& c : conds) {
    Rat acc(0);
    for (const auto& term : c.terms)
      acc += term.sign * cand.eval(t.states[term.state], term.aut, term.counter);
    Rat viol = detail::normalized_violation(c.rel, acc, eps_pos);
    auto [it, fresh] = tag_index.try_emplace(c.tag, rep.margins.size());
    if (fresh) rep.margins.push_back({c.tag, 0, std::nullopt, {}, false, false});
    auto& m = rep.margins[it->second];
    ++m.points;
    const auto& anchor = t.states[c.terms.back().state];
    if (!m.worst || viol > *m.worst) {
      m.worst = viol;
      m.worst_at = anchor;
    }
    if (viol > tolerance)
      rep.counterexamples.push_back({c.tag, anchor, viol, c.where});
  }
  rep.verdict = rep.counterexamples.empty() ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace cbbc
