#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbbc/expr.hpp"
#include "cbbc/interval.hpp"
#include "cbbc/polynomial.hpp"

namespace cbbc {

/// One polynomial inequality, p >= 0 or p > 0.
struct Inequality {
  Polynomial poly;
  bool strict = false;

  std::string str() const { return poly.str() + (strict ? " > 0" : " >= 0"); }
};

/// Conjunction of polynomial inequalities over an ordered variable list.
/// An empty list denotes the whole space.
struct SemialgebraicSet {
  std::vector<std::string> vars;
  std::vector<Inequality> inequalities;

  static SemialgebraicSet whole(std::vector<std::string> vars) {
    return {std::move(vars), {}};
  }

  bool contains(const PointMap& point) const {
    for (const auto& iq : inequalities) {
      Rat v = iq.poly.eval(point);
      if (iq.strict ? !(v > 0) : !(v >= 0)) return false;
    }
    return true;
  }

  bool contains_aligned(const std::vector<Rat>& values) const {
    for (const auto& iq : inequalities) {
      Rat v = iq.poly.on_vars(vars).eval_aligned(values);
      if (iq.strict ? !(v > 0) : !(v >= 0)) return false;
    }
    return true;
  }

  SemialgebraicSet intersect(const SemialgebraicSet& o) const {
    SemialgebraicSet r = *this;
    for (const auto& iq : o.inequalities) r.inequalities.push_back(iq);
    return r;
  }

  /// Per-variable interval hull when every inequality is linear in a single
  /// variable; nullopt otherwise. Strictness is dropped (closure), which is
  /// the sound direction for proving conditions over the set.
  std::optional<Box> box() const {
    Box b(vars.size(), Interval::whole());
    for (const auto& iq : inequalities) {
      const Polynomial p = iq.poly.on_vars(vars);
      // must be a*v + c with a != 0, or a constant
      Rat a(0), c(0);
      int var_idx = -1;
      bool linear = true;
      for (const auto& [e, coeff] : p.terms()) {
        unsigned deg = 0;
        int idx = -1;
        for (size_t i = 0; i < e.size(); ++i) {
          deg += e[i];
          if (e[i] > 0) idx = static_cast<int>(i);
        }
        if (deg == 0) {
          c = coeff;
        } else if (deg == 1) {
          if (var_idx != -1 && idx != var_idx) {
            linear = false;
            break;
          }
          var_idx = idx;
          a = coeff;
        } else {
          linear = false;
          break;
        }
      }
      if (!linear) return std::nullopt;
      if (var_idx == -1) {
        if (c < 0 || (iq.strict && c == 0)) {
          // constant inequality that never holds: empty box
          for (auto& iv : b) iv = {Rat(1), Rat(0)};
          return b;
        }
        continue;
      }
      Rat bound = -c / a;
      if (a > 0)
        b[var_idx] = b[var_idx].intersect({bound, std::nullopt});
      else
        b[var_idx] = b[var_idx].intersect({std::nullopt, bound});
    }
    return b;
  }

  /// Box hull when it exists and is bounded and nonempty.
  std::optional<Box> bounded_box() const {
    auto b = box();
    if (!b) return std::nullopt;
    for (const auto& iv : *b)
      if (!iv.bounded() || !iv.valid()) return std::nullopt;
    return b;
  }

  std::string str() const {
    if (inequalities.empty()) return "(whole space)";
    std::string s;
    for (size_t i = 0; i < inequalities.size(); ++i) {
      if (i) s += ", ";
      s += inequalities[i].str();
    }
    return s;
  }
};

/// Parses "lhs >= rhs", "lhs > rhs", "lhs <= rhs" or "lhs < rhs" into a
/// normalized inequality (poly >= 0 / poly > 0).
inline Inequality parse_inequality(const std::string& text) {
  size_t pos = std::string::npos;
  std::string op;
  for (const char* cand : {">=", "<=", ">", "<"}) {
    size_t p = text.find(cand);
    if (p != std::string::npos && (pos == std::string::npos || p < pos)) {
      pos = p;
      op = cand;
    }
  }
  if (pos == std::string::npos)
    throw InputError("inequality needs a relation (>=, >, <=, <): " + text);
  Polynomial lhs = parse_polynomial(text.substr(0, pos));
  Polynomial rhs = parse_polynomial(text.substr(pos + op.size()));
  Inequality out;
  out.strict = (op == ">" || op == "<");
  out.poly = (op == ">" || op == ">=") ? lhs - rhs : rhs - lhs;
  return out;
}

inline SemialgebraicSet parse_set(const std::vector<std::string>& vars,
                                  const std::string& list) {
  SemialgebraicSet s;
  s.vars = vars;
  size_t start = 0;
  while (start <= list.size()) {
    size_t comma = list.find(',', start);
    std::string piece = list.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (piece.find_first_not_of(" \t") != std::string::npos)
      s.inequalities.push_back(parse_inequality(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (auto& iq : s.inequalities) iq.poly = iq.poly.on_vars(vars);
  return s;
}

}  // namespace cbbc
