#pragma once

#include <optional>
#include <sstream>

#include "cbbc/automata.hpp"
#include "cbbc/cegis.hpp"
#include "cbbc/model.hpp"

namespace cbbc {

/// Parsed problem file. Exactly one of the visit region or the automaton
/// drives verification; a labeling is required alongside an automaton.
struct Problem {
  std::string name = "problem";
  DynamicalSystem system;
  std::optional<SemialgebraicSet> visit_region;
  bool visit_region_empty = false;
  std::optional<unsigned> visit_k;
  std::optional<SemialgebraicSet> visit_complement;
  std::optional<Labeling> labeling;
  std::optional<OmegaAutomaton> automaton;
  CegisConfig cegis;
  std::optional<unsigned> degree;

  bool has_visit() const { return visit_region.has_value(); }
  bool has_automaton() const { return automaton.has_value(); }

  CounterSystem counter_system() const {
    if (!has_visit()) throw InputError("problem has no [visit] section");
    return CounterSystem{system, *visit_region, visit_k.value_or(0)};
  }
};

namespace problem_detail {

struct Line {
  int number;
  std::string text;
};

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      std::string piece = trim(cur);
      if (!piece.empty()) out.push_back(piece);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw InputError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace problem_detail

inline Problem parse_problem(const std::string& text) {
  using problem_detail::fail;
  using problem_detail::split_list;
  using problem_detail::trim;

  Problem p;
  std::map<std::string, std::vector<problem_detail::Line>> sections;
  std::vector<problem_detail::Line> preamble;
  {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string current;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = raw;
      size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']') {
        current = line.substr(1, line.size() - 2);
        if (sections.count(current))
          fail(lineno, "duplicate section [" + current + "]");
        sections[current];
        continue;
      }
      if (current.empty())
        preamble.push_back({lineno, line});
      else
        sections[current].push_back({lineno, line});
    }
  }

  auto key_value = [&](const problem_detail::Line& l) {
    size_t colon = l.text.find(':');
    if (colon == std::string::npos)
      fail(l.number, "expected 'key: value', got '" + l.text + "'");
    return std::pair<std::string, std::string>(trim(l.text.substr(0, colon)),
                                               trim(l.text.substr(colon + 1)));
  };

  for (const auto& l : preamble) {
    auto [k, v] = key_value(l);
    if (k == "name")
      p.name = v;
    else
      fail(l.number, "unknown key '" + k + "' before any section");
  }

  // [system]
  auto sys_it = sections.find("system");
  if (sys_it == sections.end()) throw InputError("missing [system] section");
  std::vector<std::pair<std::string, std::string>> updates;
  std::optional<std::string> states_line, table_line, init_states_line;
  std::string state_ineqs, init_ineqs;
  for (const auto& l : sys_it->second) {
    auto [k, v] = key_value(l);
    if (k == "vars") {
      p.system.vars = split_list(v);
    } else if (k == "state") {
      state_ineqs = v;
    } else if (k == "init") {
      init_ineqs = v;
    } else if (k.rfind("update ", 0) == 0) {
      updates.emplace_back(trim(k.substr(7)), v);
    } else if (k == "states") {
      states_line = v;
    } else if (k == "table") {
      table_line = v;
    } else if (k == "init-states") {
      init_states_line = v;
    } else {
      fail(l.number, "unknown [system] key '" + k + "'");
    }
  }
  if (p.system.vars.empty()) throw InputError("[system] needs a 'vars:' line");
  p.system.state_set = state_ineqs.empty()
                           ? SemialgebraicSet::whole(p.system.vars)
                           : parse_set(p.system.vars, state_ineqs);
  p.system.initial_set = init_ineqs.empty()
                             ? SemialgebraicSet::whole(p.system.vars)
                             : parse_set(p.system.vars, init_ineqs);
  if (!updates.empty() && states_line)
    throw InputError("finite-table and polynomial dynamics are mutually exclusive");
  if (!updates.empty()) {
    PolyMap pm(p.system.vars.size());
    std::vector<char> seen(p.system.vars.size(), 0);
    for (const auto& [var, expr] : updates) {
      auto it = std::find(p.system.vars.begin(), p.system.vars.end(), var);
      if (it == p.system.vars.end())
        throw InputError("update for undeclared variable '" + var + "'");
      size_t idx = it - p.system.vars.begin();
      pm[idx] = parse_polynomial(expr).on_vars(p.system.vars);
      seen[idx] = 1;
    }
    for (size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw InputError("missing update for variable '" + p.system.vars[i] + "'");
    p.system.dynamics = std::move(pm);
  } else if (states_line) {
    if (p.system.vars.size() != 1)
      throw InputError("finite tables are supported for one state variable");
    FiniteTable t;
    for (const auto& s : split_list(*states_line)) t.states.push_back({parse_rat(s)});
    if (!table_line) throw InputError("[system] finite table needs a 'table:' line");
    t.next.assign(t.states.size(), 0);
    std::vector<char> covered(t.states.size(), 0);
    for (const auto& entry : split_list(*table_line)) {
      size_t arrow = entry.find("->");
      if (arrow == std::string::npos)
        throw InputError("malformed table entry '" + entry + "' (expected a -> b)");
      Rat from = parse_rat(trim(entry.substr(0, arrow)));
      Rat to = parse_rat(trim(entry.substr(arrow + 2)));
      auto find_state = [&](const Rat& v) -> size_t {
        for (size_t i = 0; i < t.states.size(); ++i)
          if (t.states[i][0] == v) return i;
        throw InputError("table references unenumerated state " + rat_string(v));
      };
      size_t fi = find_state(from);
      t.next[fi] = find_state(to);
      covered[fi] = 1;
    }
    for (size_t i = 0; i < covered.size(); ++i)
      if (!covered[i])
        throw InputError("table is not total: state " +
                         rat_string(t.states[i][0]) + " has no successor");
    if (!init_states_line)
      throw InputError("[system] finite table needs an 'init-states:' line");
    for (const auto& s : split_list(*init_states_line)) {
      Rat v = parse_rat(s);
      bool found = false;
      for (size_t i = 0; i < t.states.size(); ++i)
        if (t.states[i][0] == v) {
          t.initial.push_back(i);
          found = true;
        }
      if (!found)
        throw InputError("initial state " + rat_string(v) + " is not enumerated");
    }
    p.system.dynamics = std::move(t);
  } else {
    throw InputError("[system] needs either update lines or a finite table");
  }
  p.system.validate();

  // [visit]
  if (auto it = sections.find("visit"); it != sections.end()) {
    for (const auto& l : it->second) {
      auto [k, v] = key_value(l);
      if (k == "region") {
        if (v == "empty") {
          p.visit_region_empty = true;
          SemialgebraicSet s;
          s.vars = p.system.vars;
          s.inequalities.push_back(
              {Polynomial::constant(Rat(-1), p.system.vars), false});
          p.visit_region = s;
        } else {
          p.visit_region = parse_set(p.system.vars, v);
        }
      } else if (k == "k") {
        long kk = std::stol(v);
        if (kk < 0) fail(l.number, "k must be >= 0");
        p.visit_k = static_cast<unsigned>(kk);
      } else if (k == "complement") {
        p.visit_complement = parse_set(p.system.vars, v);
      } else {
        fail(l.number, "unknown [visit] key '" + k + "'");
      }
    }
    if (!p.visit_region) throw InputError("[visit] needs a 'region:' line");
  }

  // [labels]
  if (auto it = sections.find("labels"); it != sections.end()) {
    Labeling lab;
    for (const auto& l : it->second) {
      auto [k, v] = key_value(l);
      if (k.rfind("state ", 0) == 0) {
        if (!p.system.is_finite())
          fail(l.number, "per-state labels need a finite-table system");
        Rat sv = parse_rat(trim(k.substr(6)));
        auto idx = p.system.state_index({sv});
        if (!idx) fail(l.number, "label for unenumerated state " + rat_string(sv));
        lab.by_state[*idx] = v;
        if (std::find(lab.alphabet.begin(), lab.alphabet.end(), v) ==
            lab.alphabet.end())
          lab.alphabet.push_back(v);
      } else {
        lab.regions[k] = parse_set(p.system.vars, v);
        if (std::find(lab.alphabet.begin(), lab.alphabet.end(), k) ==
            lab.alphabet.end())
          lab.alphabet.push_back(k);
      }
    }
    p.labeling = std::move(lab);
  }

  // [automaton]: re-parse with original line numbers preserved
  if (auto it = sections.find("automaton"); it != sections.end()) {
    int first_line = it->second.empty() ? 0 : it->second.front().number;
    std::string body;
    int emitted = 1;
    for (const auto& l : it->second) {
      while (emitted < l.number) {
        body += "\n";
        ++emitted;
      }
      body += l.text;
    }
    (void)first_line;
    p.automaton = parse_automaton(body);
  }

  if (p.has_visit() && p.has_automaton())
    throw InputError(
        "exactly one of [visit] or [automaton] may drive verification");
  if (p.has_automaton() && !p.labeling)
    throw InputError("[automaton] requires a [labels] section");

  // [cegis]
  if (auto it = sections.find("cegis"); it != sections.end()) {
    for (const auto& l : it->second) {
      auto [k, v] = key_value(l);
      if (k == "degree")
        p.degree = static_cast<unsigned>(std::stoul(v));
      else if (k == "samples")
        p.cegis.initial_samples = std::stoul(v);
      else if (k == "grid")
        p.cegis.grid = std::stoul(v);
      else if (k == "random")
        p.cegis.random_points = std::stoul(v);
      else if (k == "rounds")
        p.cegis.max_rounds = std::stoul(v);
      else if (k == "max-counterexamples")
        p.cegis.max_counterexamples = std::stoul(v);
      else if (k == "seed")
        p.cegis.seed = std::stoull(v);
      else if (k == "k-max")
        p.cegis.k_max = static_cast<unsigned>(std::stoul(v));
      else if (k == "coeff-bound")
        p.cegis.coeff_bound = std::stod(v);
      else if (k == "eps-pos")
        p.cegis.eps_pos = parse_rat(v);
      else
        fail(l.number, "unknown [cegis] key '" + k + "'");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Certificate files.

/// Writes a certificate as monomial/coefficient pairs (exact rationals) plus
/// piecewise table entries. Automaton state indices print as state names
/// when the automaton is known.
inline std::string write_certificate(const CertificateCandidate& cand,
                                     const OmegaAutomaton* aut = nullptr,
                                     const std::string& name = "certificate") {
  std::ostringstream os;
  os << "certificate\n";
  os << "name: " << name << "\n";
  os << "signature: " << signature_name(cand.sig) << "\n";
  os << "vars: ";
  for (size_t i = 0; i < cand.state_vars.size(); ++i) {
    if (i) os << ", ";
    os << cand.state_vars[i];
  }
  os << "\n";
  for (size_t m = 0; m < cand.basis.size(); ++m) {
    if (cand.coeffs[m] == 0) continue;
    os << "term " << cand.basis[m].str() << ": " << rat_string(cand.coeffs[m])
       << "\n";
  }
  for (const auto& [key, val] : cand.table) {
    os << "value";
    for (size_t i = 0; i < key.point.size(); ++i)
      os << " " << cand.state_vars[i] << "=" << rat_string(key.point[i]);
    if (key.aut >= 0) {
      os << " q=";
      if (aut && static_cast<size_t>(key.aut) < aut->states.size())
        os << aut->states[key.aut];
      else
        os << key.aut;
    }
    if (key.counter >= 0)
      os << (cand.sig == Signature::StateAutCounter ? " l=" : " i=")
         << key.counter;
    os << ": " << rat_string(val) << "\n";
  }
  if (!cand.note.empty()) os << "note: " << cand.note << "\n";
  return os.str();
}

inline CertificateCandidate parse_certificate(const std::string& text,
                                              const OmegaAutomaton* aut = nullptr) {
  using problem_detail::split_list;
  using problem_detail::trim;
  CertificateCandidate cand;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_signature = false;
  std::optional<std::string> expr_line;
  std::vector<std::pair<std::string, Rat>> terms;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line == "certificate") continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      problem_detail::fail(lineno, "expected 'key: value'");
    std::string k = trim(line.substr(0, colon));
    std::string v = trim(line.substr(colon + 1));
    if (k == "name") {
      // informational
    } else if (k == "signature") {
      cand.sig = signature_from_name(v);
      have_signature = true;
    } else if (k == "vars") {
      cand.state_vars = split_list(v);
    } else if (k == "expr") {
      expr_line = v;
    } else if (k.rfind("term ", 0) == 0) {
      terms.emplace_back(trim(k.substr(5)), parse_rat(v));
    } else if (k.rfind("value", 0) == 0) {
      TableKey key;
      std::istringstream as(k.substr(5));
      std::string tok;
      std::map<std::string, std::string> assign;
      while (as >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos)
          problem_detail::fail(lineno, "malformed value assignment '" + tok + "'");
        assign[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      size_t assigned = 0;
      for (const auto& var : cand.state_vars)
        if (assign.count(var)) ++assigned;
      if (assigned != 0 && assigned != cand.state_vars.size())
        problem_detail::fail(lineno, "value entry assigns only some state variables");
      if (assigned == cand.state_vars.size()) {
        for (const auto& var : cand.state_vars) {
          key.point.push_back(parse_rat(assign.at(var)));
          assign.erase(var);
        }
      }
      if (auto it = assign.find("q"); it != assign.end()) {
        if (aut)
          key.aut = static_cast<long>(aut->state_index(it->second));
        else
          key.aut = std::stol(it->second);
        assign.erase(it);
      }
      for (const char* ck : {"i", "l"}) {
        if (auto it = assign.find(ck); it != assign.end()) {
          key.counter = std::stol(it->second);
          assign.erase(it);
        }
      }
      if (!assign.empty())
        problem_detail::fail(lineno, "value entry has unknown assignment '" +
                                          assign.begin()->first + "'");
      cand.table[key] = parse_rat(v);
    } else if (k == "note") {
      cand.note = v;
    } else {
      problem_detail::fail(lineno, "unknown certificate key '" + k + "'");
    }
  }
  if (!have_signature) throw InputError("certificate needs a 'signature:' line");

  std::vector<std::string> tvars = cand.state_vars;
  for (const auto& iv : index_vars(cand.sig)) tvars.push_back(iv);
  if (expr_line) {
    Polynomial p = parse_polynomial(*expr_line).on_vars(tvars);
    for (const auto& [e, c] : p.terms()) {
      cand.basis.push_back(Polynomial::monomial(tvars, e));
      cand.coeffs.push_back(c);
    }
  }
  for (const auto& [mono, coeff] : terms) {
    Polynomial m = parse_polynomial(mono).on_vars(tvars);
    if (m.terms().size() != 1 || m.terms().begin()->second != 1)
      throw InputError("term key must be a monomial: " + mono);
    cand.basis.push_back(Polynomial::monomial(tvars, m.terms().begin()->first));
    cand.coeffs.push_back(coeff);
  }
  cand.validate();
  return cand;
}

}  // namespace cbbc
