#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbbc/polynomial.hpp"

namespace cbbc {

/// Closed interval with optionally infinite endpoints.
struct Interval {
  std::optional<Rat> lo;  // nullopt = -inf
  std::optional<Rat> hi;  // nullopt = +inf

  static Interval whole() { return {std::nullopt, std::nullopt}; }
  static Interval point(const Rat& v) { return {v, v}; }
  static Interval of(const Rat& a, const Rat& b) { return {a, b}; }

  bool bounded() const { return lo && hi; }
  bool valid() const { return !bounded() || *lo <= *hi; }
  Rat width() const { return *hi - *lo; }
  Rat mid() const { return (*lo + *hi) / 2; }
  bool contains(const Rat& v) const {
    return (!lo || *lo <= v) && (!hi || v <= *hi);
  }
  Interval intersect(const Interval& o) const {
    Interval r = *this;
    if (o.lo && (!r.lo || *o.lo > *r.lo)) r.lo = o.lo;
    if (o.hi && (!r.hi || *o.hi < *r.hi)) r.hi = o.hi;
    return r;
  }
};

using Box = std::vector<Interval>;  // aligned with a variable list

namespace detail {

inline Interval iv_add(const Interval& a, const Interval& b) {
  return {*a.lo + *b.lo, *a.hi + *b.hi};
}

inline Interval iv_mul(const Interval& a, const Interval& b) {
  Rat c1 = *a.lo * *b.lo, c2 = *a.lo * *b.hi, c3 = *a.hi * *b.lo, c4 = *a.hi * *b.hi;
  Rat lo = std::min(std::min(c1, c2), std::min(c3, c4));
  Rat hi = std::max(std::max(c1, c2), std::max(c3, c4));
  return {lo, hi};
}

// Tight power rule; even powers of sign-straddling intervals floor at zero.
inline Interval iv_pow(const Interval& a, unsigned e) {
  if (e == 0) return Interval::point(Rat(1));
  if (e == 1) return a;
  Rat plo = *a.lo, phi = *a.hi;
  Rat vlo = 1, vhi = 1;
  for (unsigned k = 0; k < e; ++k) vlo *= plo;
  for (unsigned k = 0; k < e; ++k) vhi *= phi;
  if (e % 2 == 1) return {vlo, vhi};
  if (plo >= 0) return {vlo, vhi};
  if (phi <= 0) return {vhi, vlo};
  return {Rat(0), std::max(vlo, vhi)};
}

}  // namespace detail

/// Plain interval-arithmetic enclosure of p over a finite box (no splitting).
inline Interval interval_eval(const Polynomial& p, const Box& box) {
  for (const auto& iv : box)
    if (!iv.bounded()) throw InputError("interval_eval requires a finite box");
  Interval acc = Interval::point(Rat(0));
  for (const auto& [e, c] : p.terms()) {
    Interval t = Interval::point(c);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t = detail::iv_mul(t, detail::iv_pow(box[i], e[i]));
    acc = detail::iv_add(acc, t);
  }
  return acc;
}

/// Sound enclosure of the range of p over the box. Recursive bisection of the
/// widest dimension; the overestimate shrinks monotonically with depth
/// because interval arithmetic is inclusion-isotonic.
inline Interval bound_on_box(const Polynomial& p, const Box& box, unsigned depth = 12) {
  if (depth == 0) return interval_eval(p, box);
  size_t widest = 0;
  Rat w(-1);
  for (size_t i = 0; i < box.size(); ++i) {
    if (!box[i].bounded()) throw InputError("bound_on_box requires a finite box");
    if (box[i].width() > w) {
      w = box[i].width();
      widest = i;
    }
  }
  if (box.empty() || w == 0) return interval_eval(p, box);
  Rat m = box[widest].mid();
  Box left = box, right = box;
  left[widest].hi = m;
  right[widest].lo = m;
  Interval a = bound_on_box(p, left, depth - 1);
  Interval b = bound_on_box(p, right, depth - 1);
  return {std::min(*a.lo, *b.lo), std::max(*a.hi, *b.hi)};
}

enum class ProofStatus { Proven, Refuted, Unknown };

struct ProofResult {
  ProofStatus status;
  std::vector<Rat> witness;  // a point in the box when refuted
  Interval bound;            // hull of the undecided enclosures otherwise
};

/// Tries to prove `p <= threshold` on the box (or `p >= threshold` when
/// prove_ge). Splits only undecided boxes; refutation carries a witness
/// midpoint checked by exact evaluation.
inline ProofResult prove_on_box(const Polynomial& p, const Box& box,
                                const Rat& threshold, bool prove_ge,
                                unsigned depth = 12) {
  Interval enc = interval_eval(p, box);
  if (prove_ge ? (*enc.lo >= threshold) : (*enc.hi <= threshold))
    return {ProofStatus::Proven, {}, enc};
  std::vector<Rat> mid;
  mid.reserve(box.size());
  for (const auto& iv : box) mid.push_back(iv.mid());
  Rat at_mid = p.eval_aligned(mid);
  if (prove_ge ? (at_mid < threshold) : (at_mid > threshold))
    return {ProofStatus::Refuted, mid, enc};
  if (depth == 0) return {ProofStatus::Unknown, {}, enc};

  size_t widest = 0;
  Rat w(-1);
  for (size_t i = 0; i < box.size(); ++i)
    if (box[i].width() > w) {
      w = box[i].width();
      widest = i;
    }
  if (box.empty() || w == 0) return {ProofStatus::Unknown, {}, enc};
  Rat m = box[widest].mid();
  Box left = box, right = box;
  left[widest].hi = m;
  right[widest].lo = m;
  ProofResult a = prove_on_box(p, left, threshold, prove_ge, depth - 1);
  if (a.status == ProofStatus::Refuted) return a;
  ProofResult b = prove_on_box(p, right, threshold, prove_ge, depth - 1);
  if (b.status == ProofStatus::Refuted) return b;
  if (a.status == ProofStatus::Proven && b.status == ProofStatus::Proven)
    return {ProofStatus::Proven, {}, {std::min(*a.bound.lo, *b.bound.lo),
                                      std::max(*a.bound.hi, *b.bound.hi)}};
  return {ProofStatus::Unknown, {}, {std::min(*a.bound.lo, *b.bound.lo),
                                     std::max(*a.bound.hi, *b.bound.hi)}};
}

}  // namespace cbbc
