#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbbc/polynomial.hpp"

namespace cbbc {

/// Domain signature of a certificate: B(x), B(x, i) with i the visit
/// counter, or B(x, i, l) with i the automaton state index and l the
/// counter (the index naming follows the certificates as printed).
enum class Signature { StateOnly, StateCounter, StateAutCounter };

inline std::string signature_name(Signature s) {
  switch (s) {
    case Signature::StateOnly: return "state";
    case Signature::StateCounter: return "state_counter";
    case Signature::StateAutCounter: return "state_aut_counter";
  }
  return "?";
}

inline Signature signature_from_name(const std::string& n) {
  if (n == "state") return Signature::StateOnly;
  if (n == "state_counter") return Signature::StateCounter;
  if (n == "state_aut_counter") return Signature::StateAutCounter;
  throw InputError("unknown signature: " + n);
}

/// Index variables appended to the state variables for each signature.
inline std::vector<std::string> index_vars(Signature s) {
  switch (s) {
    case Signature::StateOnly: return {};
    case Signature::StateCounter: return {"i"};
    case Signature::StateAutCounter: return {"i", "l"};
  }
  return {};
}

/// Key of one piecewise-table entry. An empty point matches every state
/// (constant-in-x entries, used by lifted certificates); a nonempty point is
/// an enumerated state of a finite system.
struct TableKey {
  std::vector<Rat> point;
  long aut = -1;      // automaton state index, -1 when absent
  long counter = -1;  // counter value, -1 when absent

  bool operator<(const TableKey& o) const {
    if (aut != o.aut) return aut < o.aut;
    if (counter != o.counter) return counter < o.counter;
    return point < o.point;
  }
};

/// Template monomial basis with rational coefficients, plus an optional
/// piecewise table that overrides the polynomial where a key is present.
struct CertificateCandidate {
  Signature sig = Signature::StateOnly;
  std::vector<std::string> state_vars;
  std::vector<Polynomial> basis;  // over template_vars()
  std::vector<Rat> coeffs;
  std::map<TableKey, Rat> table;
  std::string note;

  std::vector<std::string> template_vars() const {
    std::vector<std::string> v = state_vars;
    for (const auto& iv : index_vars(sig)) v.push_back(iv);
    return v;
  }

  bool has_poly() const { return !basis.empty(); }

  void validate() const {
    if (basis.size() != coeffs.size())
      throw InputError("certificate basis and coefficient lengths differ");
  }

  /// The polynomial over the state variables obtained by fixing the finite
  /// indices. Requires a polynomial part.
  Polynomial instantiate(long aut, long counter) const {
    if (!has_poly())
      throw InputError("certificate has no polynomial part to instantiate");
    PointMap fixed;
    if (sig == Signature::StateCounter) {
      fixed["i"] = Rat(counter);
    } else if (sig == Signature::StateAutCounter) {
      fixed["i"] = Rat(aut);
      fixed["l"] = Rat(counter);
    }
    Polynomial acc(state_vars);
    for (size_t m = 0; m < basis.size(); ++m) {
      if (coeffs[m] == 0) continue;
      acc += coeffs[m] * basis[m].substitute(fixed).on_vars(state_vars);
    }
    return acc;
  }

  /// Value at a state point and index combination. Table entries win over
  /// the polynomial; a constant-in-x entry (empty point) matches any state.
  Rat eval(const std::vector<Rat>& point, long aut, long counter) const {
    if (!table.empty()) {
      auto it = table.find(TableKey{point, aut, counter});
      if (it != table.end()) return it->second;
      it = table.find(TableKey{{}, aut, counter});
      if (it != table.end()) return it->second;
    }
    if (!has_poly())
      throw InputError("piecewise table has no entry for the requested index");
    std::vector<Rat> vals = point;
    if (sig == Signature::StateCounter) {
      vals.push_back(Rat(counter));
    } else if (sig == Signature::StateAutCounter) {
      vals.push_back(Rat(aut));
      vals.push_back(Rat(counter));
    }
    Polynomial p(template_vars());
    Rat acc(0);
    for (size_t m = 0; m < basis.size(); ++m) {
      if (coeffs[m] == 0) continue;
      acc += coeffs[m] * basis[m].on_vars(template_vars()).eval_aligned(vals);
    }
    return acc;
  }

  /// Pretty polynomial form (for reports); piecewise tables print per entry.
  std::string poly_str() const {
    Polynomial acc{template_vars()};
    for (size_t m = 0; m < basis.size(); ++m)
      acc += coeffs[m] * basis[m].on_vars(template_vars());
    return acc.str();
  }
};

}  // namespace cbbc
