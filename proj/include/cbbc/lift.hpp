#pragma once

#include <optional>
#include <set>
#include <sstream>

#include "cbbc/cegis.hpp"

namespace cbbc {

struct LiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A barrier attached to a state triplet. Merging produces formal pointwise
/// extrema over the merged parts (never expanded to one polynomial).
struct TripletBarrier {
  enum class Kind { Single, MaxOf, MinOf };
  Triplet triplet;
  Kind kind = Kind::Single;
  std::vector<CertificateCandidate> parts;
  bool found = false;

  Rat eval(const std::vector<Rat>& point) const {
    Rat v = parts[0].eval(point, -1, -1);
    for (size_t i = 1; i < parts.size(); ++i) {
      Rat w = parts[i].eval(point, -1, -1);
      if (kind == Kind::MaxOf ? w > v : (kind == Kind::MinOf ? w < v : false))
        v = w;
    }
    return v;
  }

  /// B <= 0 as semialgebraic pieces over the state variables: a max needs
  /// every part nonpositive (one piece), a min needs some part nonpositive
  /// (one piece per part).
  std::vector<SemialgebraicSet> nonpositive_pieces(
      const std::vector<std::string>& vars) const {
    std::vector<SemialgebraicSet> out;
    if (kind == Kind::MinOf) {
      for (const auto& p : parts) {
        SemialgebraicSet s;
        s.vars = vars;
        s.inequalities.push_back({-p.instantiate(-1, -1).on_vars(vars), false});
        out.push_back(std::move(s));
      }
    } else {
      SemialgebraicSet s;
      s.vars = vars;
      for (const auto& p : parts)
        s.inequalities.push_back({-p.instantiate(-1, -1).on_vars(vars), false});
      out.push_back(std::move(s));
    }
    return out;
  }

  std::string str() const {
    std::string s;
    if (kind == Kind::MaxOf) s = "max";
    if (kind == Kind::MinOf) s = "min";
    if (!s.empty()) s += "{";
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) s += ", ";
      s += parts[i].poly_str();
    }
    if (kind != Kind::Single) s += "}";
    return s;
  }
};

/// Piecewise-constant lifted certificate: v_l on Q'_l at counter 0, v_r on
/// Q'_r at counters {0,1}.
struct LiftedCbbc {
  std::vector<size_t> left, right;  // partition of the unrolled states
  Rat v_l, v_r;
  CertificateCandidate candidate;
};

enum class LiftStatus { Lifted, UncutPath, CoverageBroken, TrivialNoAccepting };

struct LiftReport {
  LiftStatus status = LiftStatus::UncutPath;
  std::vector<std::string> log;
  std::vector<std::string> uncut;  // diagnosis per uncut path
  std::optional<LiftedCbbc> lifted;
  std::optional<CheckReport> check;
  OmegaAutomaton unrolled;

  std::string str() const {
    std::ostringstream os;
    os << "lift-report\n";
    os << "status: ";
    switch (status) {
      case LiftStatus::Lifted: os << "lifted"; break;
      case LiftStatus::UncutPath: os << "uncut-path"; break;
      case LiftStatus::CoverageBroken: os << "coverage-broken"; break;
      case LiftStatus::TrivialNoAccepting: os << "trivial-no-accepting"; break;
    }
    os << "\n";
    for (const auto& l : log) os << "  " << l << "\n";
    for (const auto& u : uncut) os << "  uncut: " << u << "\n";
    if (lifted) {
      os << "v_l: " << rat_decimal(lifted->v_l) << " (exact "
         << rat_string(lifted->v_l) << ")\n";
      os << "v_r: " << rat_decimal(lifted->v_r) << " (exact "
         << rat_string(lifted->v_r) << ")\n";
    }
    if (check) os << check->str();
    return os.str();
  }
};

namespace lift_detail {

inline std::string triplet_str(const OmegaAutomaton& a, const Triplet& t) {
  auto letters = [&](const std::vector<size_t>& ls) {
    std::string s;
    for (size_t i = 0; i < ls.size(); ++i) {
      if (i) s += ",";
      s += a.alphabet[ls[i]];
    }
    return s;
  };
  return "(" + a.states[t.first] + " -" + letters(t.entry_letters) + "-> " +
         a.states[t.mid] + " -" + letters(t.exit_letters) + "-> " +
         a.states[t.last] + ")";
}

inline bool same_triplet(const Triplet& a, const Triplet& b) {
  return a.first == b.first && a.mid == b.mid && a.last == b.last &&
         a.entry_letters == b.entry_letters && a.exit_letters == b.exit_letters;
}

/// Classic barrier conditions for a triplet: B <= 0 on the entry-letter
/// regions, B > 0 on the exit-letter regions, decrease on X.
inline ConditionSystem triplet_conditions(const DynamicalSystem& sys,
                                          const Labeling& lab,
                                          const OmegaAutomaton& aut,
                                          const Triplet& t) {
  ConditionSystem cs;
  cs.sig = Signature::StateOnly;
  cs.state_vars = sys.vars;
  auto id = [&] {
    std::vector<Polynomial> v;
    for (const auto& var : sys.vars)
      v.push_back(Polynomial::variable(var).on_vars(sys.vars));
    return v;
  }();
  std::vector<Polynomial> f;
  for (const auto& p : sys.poly_map()) f.push_back(p.on_vars(sys.vars));

  Condition init{"init", {}, Rel::LeqZero, {{Rat(1), id, -1, -1}}, {}, std::nullopt};
  for (size_t l : t.entry_letters)
    init.pieces.push_back(sys.state_set.intersect(lab.regions.at(aut.alphabet[l])));
  Condition unsafe{"unsafe", {}, Rel::GtZero, {{Rat(1), id, -1, -1}}, {}, std::nullopt};
  for (size_t l : t.exit_letters)
    unsafe.pieces.push_back(sys.state_set.intersect(lab.regions.at(aut.alphabet[l])));
  Condition dec{"decrease",
                {},
                Rel::LeqZero,
                {{Rat(1), f, -1, -1}, {Rat(-1), id, -1, -1}},
                {sys.state_set},
                sys.state_set};
  cs.conditions = {std::move(init), std::move(unsafe), std::move(dec)};
  return cs;
}

inline std::vector<FiniteCondition> finite_triplet_conditions(
    const DynamicalSystem& sys, const Labeling& lab, const OmegaAutomaton& aut,
    const Triplet& t) {
  const auto& tab = sys.table();
  std::vector<FiniteCondition> out;
  auto letter_in = [&](size_t s, const std::vector<size_t>& ls) {
    std::string letter = lab.letter_of(tab.states[s], sys);
    for (size_t l : ls)
      if (aut.alphabet[l] == letter) return true;
    return false;
  };
  for (size_t s = 0; s < tab.states.size(); ++s) {
    if (letter_in(s, t.entry_letters))
      out.push_back({"init", point_str(tab.states[s]), Rel::LeqZero,
                     {{Rat(1), s, -1, -1}}});
    if (letter_in(s, t.exit_letters))
      out.push_back({"unsafe", point_str(tab.states[s]), Rel::GtZero,
                     {{Rat(1), s, -1, -1}}});
    out.push_back({"decrease", point_str(tab.states[s]), Rel::LeqZero,
                   {{Rat(1), tab.next[s], -1, -1}, {Rat(-1), s, -1, -1}}});
  }
  return out;
}

struct Extremum {
  std::optional<Rat> value;
  std::vector<Rat> at;
};

/// Sampled extremum of a barrier over the letter regions (grid + random +
/// exact re-evaluation); maximize=true for v_l-style maxima.
inline Extremum region_extremum(const TripletBarrier& tb,
                                const std::vector<size_t>& letters,
                                const DynamicalSystem& sys, const Labeling& lab,
                                const OmegaAutomaton& aut, bool maximize,
                                const CegisConfig& cfg) {
  Extremum ext;
  auto consider = [&](const std::vector<Rat>& p, const SemialgebraicSet& region) {
    if (!region.contains_aligned(p)) return;
    Rat v = tb.eval(p);
    if (!ext.value || (maximize ? v > *ext.value : v < *ext.value)) {
      ext.value = v;
      ext.at = p;
    }
  };
  if (sys.is_finite()) {
    for (size_t s = 0; s < sys.table().states.size(); ++s) {
      std::string letter = lab.letter_of(sys.table().states[s], sys);
      for (size_t l : letters)
        if (aut.alphabet[l] == letter) {
          Rat v = tb.eval(sys.table().states[s]);
          if (!ext.value || (maximize ? v > *ext.value : v < *ext.value)) {
            ext.value = v;
            ext.at = sys.table().states[s];
          }
        }
    }
    return ext;
  }
  for (size_t l : letters) {
    SemialgebraicSet region = sys.state_set.intersect(lab.regions.at(aut.alphabet[l]));
    auto box = region.bounded_box();
    if (!box) continue;
    bool empty = false;
    for (const auto& iv : *box)
      if (!iv.valid()) empty = true;
    if (empty) continue;
    for (const auto& p : grid_points(*box, cfg.grid)) consider(p, region);
    for (const auto& p : random_points(*box, cfg.random_points, cfg.seed ^ (l + 1)))
      consider(p, region);
  }
  return ext;
}

}  // namespace lift_detail

/// For each simple path of the unrolled automaton, synthesizes a classic
/// barrier for the first cuttable triplet in path order. Failure lists the
/// uncut paths with per-triplet reasons.
struct TripletSearch {
  bool complete = false;
  std::vector<SimplePath> paths;
  std::vector<long> chosen;  // index into barriers, -1 when uncut
  std::vector<TripletBarrier> barriers;
  std::vector<std::string> uncut_reasons;
};

inline TripletSearch find_triplet_barriers(const DynamicalSystem& sys,
                                           const Labeling& lab,
                                           const OmegaAutomaton& unrolled,
                                           unsigned degree,
                                           const CegisConfig& cfg) {
  TripletSearch out;
  out.paths = enumerate_triplets(unrolled);
  out.chosen.assign(out.paths.size(), -1);
  out.complete = true;
  auto basis = monomial_basis(sys.vars, degree);

  for (size_t pi = 0; pi < out.paths.size(); ++pi) {
    const auto& path = out.paths[pi];
    std::string reasons;
    for (const auto& t : path.triplets) {
      // already synthesized?
      long found = -1;
      for (size_t bi = 0; bi < out.barriers.size(); ++bi)
        if (lift_detail::same_triplet(out.barriers[bi].triplet, t)) {
          found = static_cast<long>(bi);
          break;
        }
      if (found >= 0) {
        if (out.barriers[found].found) {
          out.chosen[pi] = found;
          break;
        }
        continue;  // known uncuttable
      }
      TripletBarrier tb;
      tb.triplet = t;
      // shared entry/exit letter: the barrier would need <= 0 and > 0 on the
      // same region
      bool overlap = false;
      for (size_t a : t.entry_letters)
        for (size_t b : t.exit_letters)
          if (a == b) overlap = true;
      if (overlap) {
        tb.found = false;
        out.barriers.push_back(tb);
        reasons += lift_detail::triplet_str(unrolled, t) +
                   ": entry and exit share a letter; ";
        continue;
      }
      CegisConfig tcfg = cfg;
      tcfg.seed = cfg.seed * 0x100000001b3ull + out.barriers.size() + 1;
      SynthesisResult sr;
      if (sys.is_finite()) {
        auto conds = lift_detail::finite_triplet_conditions(sys, lab, unrolled, t);
        sr = synthesize_finite(conds, sys, Signature::StateOnly, 1, 1, tcfg);
        if (sr.ok()) {
          // rekey table cells to state-only keys
          CertificateCandidate c = *sr.certificate;
          CertificateCandidate rekeyed;
          rekeyed.sig = Signature::StateOnly;
          rekeyed.state_vars = sys.vars;
          for (const auto& [key, val] : c.table)
            rekeyed.table[TableKey{key.point, -1, -1}] = val;
          sr.certificate = rekeyed;
        }
      } else {
        auto conds = lift_detail::triplet_conditions(sys, lab, unrolled, t);
        sr = cegis_loop(conds, basis, tcfg);
      }
      tb.found = sr.ok();
      if (sr.ok()) tb.parts = {*sr.certificate};
      out.barriers.push_back(tb);
      if (tb.found) {
        out.chosen[pi] = static_cast<long>(out.barriers.size() - 1);
        break;
      }
      reasons += lift_detail::triplet_str(unrolled, t) + ": no barrier found; ";
    }
    if (out.chosen[pi] < 0) {
      out.complete = false;
      std::string pathstr;
      for (size_t i = 0; i < path.states.size(); ++i) {
        if (i) pathstr += " -> ";
        pathstr += unrolled.states[path.states[i]];
      }
      out.uncut_reasons.push_back(pathstr + " [" + reasons + "]");
    }
  }
  return out;
}

/// Shared-middle merging: same entry edge -> pointwise max, same exit edge ->
/// pointwise min, otherwise both barriers are dropped (the paths must be cut
/// again further right). Returns the surviving barriers; no two share a
/// middle state.
inline std::vector<TripletBarrier> merge_shared_middle(
    std::vector<TripletBarrier> barriers) {
  std::vector<TripletBarrier> found;
  for (auto& b : barriers)
    if (b.found) found.push_back(std::move(b));

  std::vector<TripletBarrier> out;
  std::set<size_t> handled;
  for (size_t i = 0; i < found.size(); ++i) {
    if (handled.count(i)) continue;
    std::vector<size_t> group{i};
    for (size_t j = i + 1; j < found.size(); ++j)
      if (found[j].triplet.mid == found[i].triplet.mid) group.push_back(j);
    if (group.size() == 1) {
      out.push_back(found[i]);
      continue;
    }
    for (size_t g : group) handled.insert(g);
    // pairwise classification within the group; the paper's three cases
    bool same_entry = true, same_exit = true;
    for (size_t g : group) {
      if (found[g].triplet.first != found[i].triplet.first ||
          found[g].triplet.entry_letters != found[i].triplet.entry_letters)
        same_entry = false;
      if (found[g].triplet.last != found[i].triplet.last ||
          found[g].triplet.exit_letters != found[i].triplet.exit_letters)
        same_exit = false;
    }
    if (same_entry) {
      TripletBarrier merged;
      merged.kind = TripletBarrier::Kind::MaxOf;
      merged.found = true;
      merged.triplet = found[i].triplet;
      for (size_t g : group) {
        for (const auto& p : found[g].parts) merged.parts.push_back(p);
        for (size_t l : found[g].triplet.exit_letters)
          if (std::find(merged.triplet.exit_letters.begin(),
                        merged.triplet.exit_letters.end(),
                        l) == merged.triplet.exit_letters.end())
            merged.triplet.exit_letters.push_back(l);
      }
      out.push_back(std::move(merged));
    } else if (same_exit) {
      TripletBarrier merged;
      merged.kind = TripletBarrier::Kind::MinOf;
      merged.found = true;
      merged.triplet = found[i].triplet;
      for (size_t g : group) {
        for (const auto& p : found[g].parts) merged.parts.push_back(p);
        for (size_t l : found[g].triplet.entry_letters)
          if (std::find(merged.triplet.entry_letters.begin(),
                        merged.triplet.entry_letters.end(),
                        l) == merged.triplet.entry_letters.end())
            merged.triplet.entry_letters.push_back(l);
      }
      out.push_back(std::move(merged));
    }
    // neither: dropped; coverage is re-checked by the caller
  }
  return out;
}

/// Q'_l: states that are, or lie before, a surviving triplet's middle state
/// on some simple initial-to-accepting path; Q'_r is the complement and must
/// contain every accepting state.
inline std::pair<std::vector<size_t>, std::vector<size_t>> partition_states(
    const OmegaAutomaton& unrolled, const std::vector<SimplePath>& paths,
    const std::vector<TripletBarrier>& surviving) {
  std::vector<char> left(unrolled.states.size(), 0);
  for (const auto& path : paths) {
    for (const auto& tb : surviving) {
      for (size_t i = 0; i + 2 < path.states.size(); ++i) {
        if (path.states[i] == tb.triplet.first &&
            path.states[i + 1] == tb.triplet.mid &&
            path.states[i + 2] == tb.triplet.last) {
          for (size_t j = 0; j <= i + 1; ++j) left[path.states[j]] = 1;
        }
      }
    }
  }
  std::vector<size_t> L, R;
  for (size_t q = 0; q < unrolled.states.size(); ++q)
    (left[q] ? L : R).push_back(q);
  for (size_t q : unrolled.accepting)
    if (left[q])
      throw LiftError("accepting state '" + unrolled.states[q] +
                      "' landed in Q'_l; the partition is inconsistent");
  return {L, R};
}

/// Product conditions for the lifted check: the literal conditions at k = 0,
/// with every Q'_l -> Q'_r crossing condition's domain guarded by the middle
/// barrier's invariant region {B_mid <= 0}. Entry into the middle state
/// forces B_mid <= 0 along the whole run, while the crossing letter region
/// satisfies B_mid > 0, so a cut crossing has an empty guarded domain.
inline ConditionSystem lifted_check_conditions(
    const DynamicalSystem& sys, const Labeling& lab,
    const OmegaAutomaton& unrolled, const std::vector<size_t>& left,
    const std::vector<TripletBarrier>& surviving) {
  ConditionSystem cs =
      product_cbbc_conditions(sys, lab, unrolled.with_semantics(Semantics::KUCA, 0), 0);
  std::vector<char> is_left(unrolled.states.size(), 0);
  for (size_t q : left) is_left[q] = 1;
  for (auto& c : cs.conditions) {
    if (c.tag.rfind("decrease[", 0) != 0) continue;
    long src = c.indices.at("q");
    long dst = c.apps[0].aut;
    if (!is_left[src] || is_left[dst]) continue;
    const TripletBarrier* mid_barrier = nullptr;
    for (const auto& tb : surviving)
      if (static_cast<long>(tb.triplet.mid) == src) mid_barrier = &tb;
    if (!mid_barrier) continue;  // unguarded crossing: checked as-is
    auto guards = mid_barrier->nonpositive_pieces(sys.vars);
    std::vector<SemialgebraicSet> guarded;
    for (const auto& piece : c.pieces)
      for (const auto& g : guards) guarded.push_back(piece.intersect(g));
    c.pieces = std::move(guarded);
    c.sos_domain.reset();
    c.tag += " (guarded by middle barrier)";
  }
  return cs;
}

/// End-to-end pipeline: unroll, cut every simple path, merge shared middles,
/// partition, compute the extremal constants, and re-check the resulting
/// piecewise CBBC with the product checker at k = 0.
inline LiftReport lift_to_cbbc(const DynamicalSystem& sys, const Labeling& lab,
                               const OmegaAutomaton& nba, unsigned degree,
                               const CegisConfig& cfg) {
  if (nba.semantics != Semantics::NBA)
    throw InputError("the lifting pipeline expects an NBA specification");
  LiftReport rep;
  rep.unrolled = unroll(nba);
  const OmegaAutomaton& ua = rep.unrolled;
  rep.log.push_back("unrolled automaton: " + std::to_string(ua.states.size()) +
                    " states, " + std::to_string(ua.transitions.size()) +
                    " transitions");

  if (ua.accepting.empty()) {
    rep.status = LiftStatus::TrivialNoAccepting;
    LiftedCbbc lc;
    for (size_t q = 0; q < ua.states.size(); ++q) lc.left.push_back(q);
    lc.v_l = Rat(-1);
    lc.v_r = Rat(1);
    lc.candidate.sig = Signature::StateAutCounter;
    lc.candidate.state_vars = sys.vars;
    for (size_t q = 0; q < ua.states.size(); ++q) {
      lc.candidate.table[TableKey{{}, static_cast<long>(q), 0}] = Rat(-1);
      lc.candidate.table[TableKey{{}, static_cast<long>(q), 1}] = Rat(-1);
    }
    rep.lifted = lc;
    if (!sys.is_finite()) {
      ConditionSystem cs = product_cbbc_conditions(
          sys, lab, ua.with_semantics(Semantics::KUCA, 0), 0);
      rep.check = check_certificate(lc.candidate, cs, CheckMode::Sampled, Rat(0),
                                    cfg.check_options(cfg.seed));
    } else {
      rep.check = check_finite(lc.candidate,
                               finite_product_conditions(
                                   sys, lab, ua.with_semantics(Semantics::KUCA, 0), 0),
                               sys, Rat(0), cfg.eps_pos);
    }
    return rep;
  }

  TripletSearch search = find_triplet_barriers(sys, lab, ua, degree, cfg);
  for (size_t pi = 0; pi < search.paths.size(); ++pi) {
    std::string pathstr;
    for (size_t i = 0; i < search.paths[pi].states.size(); ++i) {
      if (i) pathstr += " -> ";
      pathstr += ua.states[search.paths[pi].states[i]];
    }
    if (search.chosen[pi] >= 0) {
      const auto& tb = search.barriers[search.chosen[pi]];
      rep.log.push_back("path " + pathstr + ": cut at " +
                        lift_detail::triplet_str(ua, tb.triplet) + " by " +
                        tb.str());
    }
  }
  if (!search.complete) {
    rep.status = LiftStatus::UncutPath;
    rep.uncut = search.uncut_reasons;
    return rep;
  }

  std::vector<TripletBarrier> surviving = merge_shared_middle(search.barriers);
  // coverage after the merge: every path needs a surviving triplet
  for (size_t pi = 0; pi < search.paths.size(); ++pi) {
    const auto& path = search.paths[pi];
    bool covered = false;
    for (const auto& tb : surviving)
      for (size_t i = 0; i + 2 < path.states.size() && !covered; ++i)
        if (path.states[i] == tb.triplet.first &&
            path.states[i + 1] == tb.triplet.mid &&
            path.states[i + 2] == tb.triplet.last)
          covered = true;
    if (!covered) {
      rep.status = LiftStatus::CoverageBroken;
      std::string pathstr;
      for (size_t i = 0; i < path.states.size(); ++i) {
        if (i) pathstr += " -> ";
        pathstr += ua.states[path.states[i]];
      }
      rep.uncut.push_back(pathstr + " [chosen triplet dropped during merging]");
      return rep;
    }
  }
  rep.log.push_back(std::to_string(surviving.size()) +
                    " barriers survive merging");

  auto [left, right] = partition_states(ua, search.paths, surviving);
  {
    std::string ls, rs;
    for (size_t q : left) ls += (ls.empty() ? "" : ", ") + ua.states[q];
    for (size_t q : right) rs += (rs.empty() ? "" : ", ") + ua.states[q];
    rep.log.push_back("Q'_l = {" + ls + "}, Q'_r = {" + rs + "}");
  }

  // extremal constants over the labeled regions
  std::optional<Rat> vl, vr;
  for (const auto& tb : surviving) {
    auto mx = lift_detail::region_extremum(tb, tb.triplet.entry_letters, sys, lab,
                                           ua, true, cfg);
    auto mn = lift_detail::region_extremum(tb, tb.triplet.exit_letters, sys, lab,
                                           ua, false, cfg);
    if (mx.value && (!vl || *mx.value > *vl)) vl = mx.value;
    if (mn.value && (!vr || *mn.value < *vr)) vr = mn.value;
  }
  if (!vl || !vr)
    throw LiftError("could not evaluate the barrier extrema over the regions");
  if (*vl > 0)
    throw LiftError("numerical maximum of a barrier over its entry region is "
                    "positive (" + rat_string(*vl) + "); barrier status inconsistent");
  if (*vr <= 0)
    throw LiftError("numerical minimum of a barrier over its exit region is "
                    "nonpositive (" + rat_string(*vr) + "); barrier status inconsistent");
  // safety shrink/expand toward feasibility
  Rat safety(1, 1000000);
  LiftedCbbc lc;
  lc.left = left;
  lc.right = right;
  lc.v_l = *vl - safety;
  lc.v_r = *vr + safety;

  lc.candidate.sig = Signature::StateAutCounter;
  lc.candidate.state_vars = sys.vars;
  for (size_t q : left) lc.candidate.table[TableKey{{}, static_cast<long>(q), 0}] = lc.v_l;
  for (size_t q : right) {
    lc.candidate.table[TableKey{{}, static_cast<long>(q), 0}] = lc.v_r;
    lc.candidate.table[TableKey{{}, static_cast<long>(q), 1}] = lc.v_r;
  }
  // left states can appear as accepting-edge targets only when unreachable;
  // give them a counter-1 value anyway so evaluation is total
  for (size_t q : left) lc.candidate.table[TableKey{{}, static_cast<long>(q), 1}] = lc.v_l;
  rep.lifted = lc;

  if (sys.is_finite()) {
    auto conds = finite_product_conditions(
        sys, lab, ua.with_semantics(Semantics::KUCA, 0), 0);
    std::vector<char> is_left(ua.states.size(), 0);
    for (size_t q : left) is_left[q] = 1;
    std::vector<FiniteCondition> guarded;
    for (const auto& c : conds) {
      if (c.tag.rfind("decrease[", 0) == 0 && c.terms.size() == 2) {
        long dst = c.terms[0].aut, src = c.terms[1].aut;
        if (is_left[src] && !is_left[dst]) {
          const TripletBarrier* mid = nullptr;
          for (const auto& tb : surviving)
            if (static_cast<long>(tb.triplet.mid) == src) mid = &tb;
          if (mid && mid->eval(sys.table().states[c.terms[1].state]) > 0)
            continue;  // crossing disabled by the middle barrier's invariant
        }
      }
      guarded.push_back(c);
    }
    rep.check = check_finite(lc.candidate, guarded, sys, Rat(0), cfg.eps_pos);
  } else {
    ConditionSystem cs = lifted_check_conditions(sys, lab, ua, left, surviving);
    rep.check = check_certificate(lc.candidate, cs, CheckMode::Sampled, Rat(0),
                                  cfg.check_options(cfg.seed));
  }
  rep.status = LiftStatus::Lifted;
  if (rep.check->verdict != Verdict::Pass)
    throw LiftError("lifted certificate failed the product check:\n" +
                    rep.check->str());
  return rep;
}

}  // namespace cbbc
