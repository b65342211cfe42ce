#pragma once

#include <gmpxx.h>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cbbc {

/// Exact rational scalar used throughout the library.
using Rat = mpq_class;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses an integer, a fraction "n/d", or a decimal "12.34" into an exact
/// rational (decimals become tenth-power fractions, 0.33 -> 33/100).
inline Rat parse_rat(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty rational literal");

  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string intpart, fracpart, denpart;
  std::string* cur = &intpart;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (cur != &intpart) throw InputError("malformed rational literal: " + text);
      cur = &fracpart;
    } else if (c == '/') {
      if (cur == &denpart || !fracpart.empty())
        throw InputError("malformed rational literal: " + text);
      cur = &denpart;
    } else if (isdigit(static_cast<unsigned char>(c))) {
      *cur += c;
    } else {
      throw InputError("invalid character in rational literal: " + text);
    }
  }
  if (intpart.empty() && fracpart.empty())
    throw InputError("malformed rational literal: " + text);
  if (!fracpart.empty() && !denpart.empty())
    throw InputError("mixed decimal/fraction literal: " + text);

  Rat value;
  if (!denpart.empty()) {
    if (denpart.find_first_not_of('0') == std::string::npos)
      throw InputError("zero denominator in literal: " + text);
    value = Rat(mpz_class(intpart.empty() ? "0" : intpart),
                mpz_class(denpart));
  } else if (!fracpart.empty()) {
    mpz_class num(intpart.empty() ? "0" : intpart);
    mpz_class den(1);
    for (size_t k = 0; k < fracpart.size(); ++k) den *= 10;
    num = num * den + mpz_class(fracpart);
    value = Rat(num, den);
  } else {
    value = Rat(mpz_class(intpart));
  }
  value.canonicalize();
  if (neg) value = -value;
  return value;
}

/// Canonical exact form, "n" or "n/d".
inline std::string rat_string(const Rat& r) { return r.get_str(); }

/// Shortest-ish decimal rendering with 12 significant digits.
inline std::string rat_decimal(const Rat& r, int sig = 12) {
  mpf_class f(r, 256);
  char buf[128];
  gmp_snprintf(buf, sizeof buf, "%.*Fg", sig, f.get_mpf_t());
  return buf;
}

inline double rat_double(const Rat& r) { return r.get_d(); }

/// Exact conversion; every finite double is a dyadic rational.
inline Rat rat_from_double(double d) {
  Rat r(d);
  r.canonicalize();
  return r;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace cbbc
