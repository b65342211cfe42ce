#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbbc/rational.hpp"

namespace cbbc {

using ExpVec = std::vector<unsigned>;
using PointMap = std::map<std::string, Rat>;

/// Sparse multivariate polynomial with exact rational coefficients over an
/// ordered variable list. Terms with zero coefficient are dropped eagerly;
/// exponent vectors always match the variable list length.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial constant(const Rat& c,
                             std::vector<std::string> vars = {}) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_[ExpVec(p.vars_.size(), 0)] = c;
    return p;
  }

  static Polynomial variable(const std::string& name) {
    Polynomial p({name});
    p.terms_[{1}] = 1;
    return p;
  }

  static Polynomial monomial(const std::vector<std::string>& vars,
                             const ExpVec& exps, const Rat& c = 1) {
    Polynomial p(vars);
    if (c != 0) p.terms_[exps] = c;
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<ExpVec, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
  }

  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    return terms_.begin()->second;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned t = 0;
      for (unsigned x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  bool uses(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return false;
    size_t idx = it - vars_.begin();
    for (const auto& [e, c] : terms_)
      if (e[idx] > 0) return true;
    return false;
  }

  /// Re-bases the polynomial onto a variable list that must contain every
  /// variable actually used.
  Polynomial on_vars(const std::vector<std::string>& vars) const {
    Polynomial out(vars);
    std::vector<std::optional<size_t>> pos(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(vars.begin(), vars.end(), vars_[i]);
      if (it != vars.end()) pos[i] = static_cast<size_t>(it - vars.begin());
    }
    for (const auto& [e, c] : terms_) {
      ExpVec ne(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!pos[i])
          throw InputError("polynomial uses variable '" + vars_[i] +
                           "' absent from target variable list");
        ne[*pos[i]] = e[i];
      }
      out.add_term(ne, c);
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.vars_ == vars_) {
      for (const auto& [e, c] : o.terms_) add_term(e, c);
      return *this;
    }
    *this = aligned_apply(*this, o, [](Polynomial& a, const Polynomial& b) {
      for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    });
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (o.vars_ == vars_) {
      for (const auto& [e, c] : o.terms_) add_term(e, Rat(-c));
      return *this;
    }
    *this = aligned_apply(*this, o, [](Polynomial& a, const Polynomial& b) {
      for (const auto& [e, c] : b.terms_) a.add_term(e, Rat(-c));
    });
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r(a.vars_);
    for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.vars_ == b.vars_) {
      Polynomial r(a.vars_);
      for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
          ExpVec e = ea;
          for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
          r.add_term(e, ca * cb);
        }
      return r;
    }
    auto uv = union_vars(a.vars_, b.vars_);
    return a.on_vars(uv) * b.on_vars(uv);
  }

  friend Polynomial operator*(const Rat& c, const Polynomial& p) {
    Polynomial r(p.vars_);
    if (c == 0) return r;
    for (const auto& [e, k] : p.terms_) r.terms_[e] = c * k;
    return r;
  }
  friend Polynomial operator*(const Polynomial& p, const Rat& c) { return c * p; }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(1, vars_);
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    auto uv = union_vars(a.vars_, b.vars_);
    return a.on_vars(uv).terms_ == b.on_vars(uv).terms_;
  }

  /// Exact value at a point that must assign every used variable.
  Rat eval(const PointMap& point) const {
    Rat acc(0);
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        auto it = point.find(vars_[i]);
        if (it == point.end())
          throw InputError("missing assignment for variable '" + vars_[i] + "'");
        Rat p = it->second;
        for (unsigned k = 0; k < e[i]; ++k) t *= p;
      }
      acc += t;
    }
    return acc;
  }

  /// Fast path: values aligned with vars().
  Rat eval_aligned(const std::vector<Rat>& values) const {
    Rat acc(0);
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= values[i];
      acc += t;
    }
    return acc;
  }

  double eval_double(const std::vector<double>& values) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
      double t = c.get_d();
      for (size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= values[i];
      acc += t;
    }
    return acc;
  }

  /// Substitutes a polynomial image for every variable. The substitution must
  /// cover each variable the polynomial uses.
  Polynomial compose(const std::map<std::string, Polynomial>& subst) const {
    std::vector<std::string> out_vars;
    for (const auto& v : vars_) {
      auto it = subst.find(v);
      if (it == subst.end()) {
        if (uses(v))
          throw InputError("substitution does not cover variable '" + v + "'");
        continue;
      }
      for (const auto& w : it->second.vars())
        if (std::find(out_vars.begin(), out_vars.end(), w) == out_vars.end())
          out_vars.push_back(w);
    }
    Polynomial result(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial term = constant(c, out_vars);
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        term = term * subst.at(vars_[i]).on_vars(out_vars).pow(e[i]);
      }
      result += term;
    }
    return result;
  }

  /// Fixes some variables to constants; the result ranges over the rest.
  Polynomial substitute(const PointMap& fixed) const {
    std::vector<std::string> rest;
    std::vector<std::optional<Rat>> val(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
      auto it = fixed.find(vars_[i]);
      if (it != fixed.end())
        val[i] = it->second;
      else
        rest.push_back(vars_[i]);
    }
    Polynomial out(rest);
    for (const auto& [e, c] : terms_) {
      Rat coeff = c;
      ExpVec ne;
      ne.reserve(rest.size());
      for (size_t i = 0; i < e.size(); ++i) {
        if (val[i]) {
          for (unsigned k = 0; k < e[i]; ++k) coeff *= *val[i];
        } else {
          ne.push_back(e[i]);
        }
      }
      out.add_term(ne, coeff);
    }
    return out;
  }

  /// Graded-lexicographic rendering, highest degree first; deterministic.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const ExpVec, Rat>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
      unsigned da = 0, db = 0;
      for (unsigned x : a->first) da += x;
      for (unsigned x : b->first) db += x;
      if (da != db) return da > db;
      return a->first > b->first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto* t : order) {
      Rat c = t->second;
      if (first) {
        if (c < 0) {
          os << "-";
          c = -c;
        }
      } else {
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
      }
      first = false;
      std::string mono = monomial_str(t->first);
      if (mono.empty()) {
        os << rat_string(c);
      } else {
        if (c != 1) os << rat_string(c) << "*";
        os << mono;
      }
    }
    return os.str();
  }

  static std::vector<std::string> union_vars(const std::vector<std::string>& a,
                                             const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    for (const auto& v : b)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
  }

  void add_term(const ExpVec& e, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

 private:
  template <typename F>
  static Polynomial aligned_apply(const Polynomial& a, const Polynomial& b, F f) {
    auto uv = union_vars(a.vars_, b.vars_);
    Polynomial r = a.on_vars(uv);
    Polynomial rb = b.on_vars(uv);
    f(r, rb);
    return r;
  }

  std::string monomial_str(const ExpVec& e) const {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += vars_[i];
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s;
  }

  std::vector<std::string> vars_;
  std::map<ExpVec, Rat> terms_;
};

/// All monomials over `vars` with total degree <= d, graded-lex ascending.
/// This ordering fixes coefficient indexing everywhere (LP columns,
/// certificate files, emitted documents).
inline std::vector<Polynomial> monomial_basis(const std::vector<std::string>& vars,
                                              unsigned d) {
  std::vector<ExpVec> exps;
  ExpVec cur(vars.size(), 0);
  // enumerate exponent vectors by total degree, then lexicographically
  std::function<void(size_t, unsigned)> rec = [&](size_t i, unsigned left) {
    if (i == vars.size()) {
      exps.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[i] = e;
      rec(i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(0, d);
  std::sort(exps.begin(), exps.end(), [](const ExpVec& a, const ExpVec& b) {
    unsigned da = 0, db = 0;
    for (unsigned x : a) da += x;
    for (unsigned x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  });
  std::vector<Polynomial> out;
  out.reserve(exps.size());
  for (const auto& e : exps) out.push_back(Polynomial::monomial(vars, e));
  return out;
}

}  // namespace cbbc
