#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cbbc/expr.hpp"
#include "cbbc/interval.hpp"
#include "cbbc/semialgebraic.hpp"

using namespace cbbc;

namespace {

Rat random_rat(std::mt19937_64& rng, long span = 20) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, 7);
  return Rat(num(rng), den(rng));
}

Polynomial random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars,
                       unsigned degree) {
  auto basis = monomial_basis(vars, degree);
  Polynomial p(vars);
  for (const auto& m : basis)
    if (rng() % 2 == 0) p += random_rat(rng) * m;
  return p;
}

}  // namespace

TEST_CASE("rational literals parse exactly") {
  CHECK(parse_rat("0.33") == Rat(33, 100));
  CHECK(parse_rat("-0.000018") == Rat(-18, 1000000));
  CHECK(parse_rat("157/5") == Rat(157, 5));
  CHECK(parse_rat("7") == Rat(7));
  CHECK_THROWS_AS(parse_rat("1/0"), InputError);
  CHECK_THROWS_AS(parse_rat("1.2.3"), InputError);
}

TEST_CASE("eval_poly on the stated examples") {
  // x^2 - 1 at x=3
  Polynomial p = parse_polynomial("x^2 - 1");
  CHECK(p.eval({{"x", Rat(3)}}) == Rat(8));

  // the room-model dynamics at 35 gives exactly 157/5
  Polynomial f = parse_polynomial("0.8*x + 3.4");
  CHECK(f.eval({{"x", Rat(35)}}) == Rat(157, 5));

  // a constant polynomial ignores the point
  Polynomial c = parse_polynomial("7");
  CHECK(c.eval({{"x", Rat(123)}}) == Rat(7));

  // missing assignment is an input error
  CHECK_THROWS_AS(p.eval({{"y", Rat(1)}}), InputError);
}

TEST_CASE("compose expands substitutions") {
  Polynomial p = parse_polynomial("x^2");
  std::map<std::string, Polynomial> subst{{"x", parse_polynomial("x + 1")}};
  CHECK(p.compose(subst) == parse_polynomial("x^2 + 2*x + 1"));

  // identity substitution
  Polynomial x = parse_polynomial("x");
  std::map<std::string, Polynomial> id{{"x", parse_polynomial("x")}};
  CHECK(x.compose(id) == x);

  // a counter-template term under the room-model dynamics
  Polynomial t = parse_polynomial("x*i");
  std::map<std::string, Polynomial> fsub{{"x", parse_polynomial("0.8*x + 3.4")},
                                         {"i", parse_polynomial("i")}};
  Polynomial composed = t.compose(fsub);
  CHECK(composed == parse_polynomial("0.8*x*i + 3.4*i"));

  CHECK_THROWS_AS(t.compose(id), InputError);  // i uncovered
}

TEST_CASE("compose/eval commutation on random instances") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial p = random_poly(rng, {"x", "y"}, 3);
    std::map<std::string, Polynomial> subst{
        {"x", random_poly(rng, {"x", "y"}, 2)},
        {"y", random_poly(rng, {"x", "y"}, 2)}};
    Polynomial composed = p.compose(subst);
    for (int k = 0; k < 20; ++k) {
      PointMap pt{{"x", random_rat(rng)}, {"y", random_rat(rng)}};
      PointMap image{{"x", subst.at("x").eval(pt)}, {"y", subst.at("y").eval(pt)}};
      CHECK(composed.eval(pt) == p.eval(image));
    }
  }
}

TEST_CASE("ring laws hold exactly on random triples") {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 60; ++trial) {
    Polynomial a = random_poly(rng, {"x", "y"}, 2);
    Polynomial b = random_poly(rng, {"x", "y"}, 2);
    Polynomial c = random_poly(rng, {"x", "y"}, 2);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("bound_on_box encloses and tightens") {
  // linear term: exact at depth 0
  Polynomial x = parse_polynomial("x").on_vars({"x"});
  Box box{{Rat(17), Rat(40)}};
  Interval enc = bound_on_box(x, box, 0);
  CHECK(*enc.lo == Rat(17));
  CHECK(*enc.hi == Rat(40));

  // x^2 - x over [0,1]: true range [-1/4, 0]
  Polynomial q = parse_polynomial("x^2 - x").on_vars({"x"});
  Box unit{{Rat(0), Rat(1)}};
  Interval prev = bound_on_box(q, unit, 0);
  CHECK(*prev.lo <= Rat(-1, 4));
  CHECK(*prev.hi >= Rat(0));
  for (unsigned depth = 1; depth <= 10; ++depth) {
    Interval cur = bound_on_box(q, unit, depth);
    CHECK(*cur.lo <= Rat(-1, 4));
    CHECK(*cur.hi >= Rat(0));
    // monotone shrinking with depth
    CHECK(*cur.lo >= *prev.lo);
    CHECK(*cur.hi <= *prev.hi);
    prev = cur;
  }
  CHECK(*prev.lo >= Rat(-1, 4) - Rat(1, 100));
  CHECK(*prev.hi <= Rat(0) + Rat(1, 100));

  // constants are exact
  Polynomial c = Polynomial::constant(Rat(-1), {"x"});
  Interval cenc = bound_on_box(c, box, 3);
  CHECK(*cenc.lo == Rat(-1));
  CHECK(*cenc.hi == Rat(-1));
}

TEST_CASE("bound_on_box soundness against sampling") {
  std::mt19937_64 rng(777);
  Polynomial p = random_poly(rng, {"x", "y"}, 3);
  Box box{{Rat(-2), Rat(3)}, {Rat(0), Rat(1)}};
  Interval enc = bound_on_box(p, box, 6);
  std::uniform_int_distribution<long> dist(0, 1 << 16);
  for (int k = 0; k < 1000; ++k) {
    Rat rx = Rat(-2) + Rat(5) * Rat(dist(rng), 1 << 16);
    Rat ry = Rat(dist(rng), 1 << 16);
    Rat v = p.eval({{"x", rx}, {"y", ry}});
    CHECK(v >= *enc.lo);
    CHECK(v <= *enc.hi);
  }
}

TEST_CASE("set_contains follows the inequalities") {
  SemialgebraicSet vf = parse_set({"x"}, "x - 27 >= 0, 35 - x >= 0");
  CHECK(vf.contains({{"x", Rat(30)}}));
  CHECK(!vf.contains({{"x", Rat(26)}}));

  SemialgebraicSet strict = parse_set({"x"}, "x - 28 > 0");
  CHECK(!strict.contains({{"x", Rat(28)}}));
  CHECK(strict.contains({{"x", Rat(29)}}));

  SemialgebraicSet whole = SemialgebraicSet::whole({"x"});
  CHECK(whole.contains({{"x", Rat(-1000)}}));
}

TEST_CASE("box extraction from linear inequalities") {
  SemialgebraicSet s = parse_set({"x"}, "x - 17 >= 0, 40 - x >= 0");
  auto box = s.bounded_box();
  REQUIRE(box);
  CHECK(*(*box)[0].lo == Rat(17));
  CHECK(*(*box)[0].hi == Rat(40));

  SemialgebraicSet quad = parse_set({"x"}, "x^2 - 1 >= 0");
  CHECK(!quad.box());
}

TEST_CASE("expression grammar errors carry positions") {
  CHECK_THROWS_AS(parse_polynomial("x +"), InputError);
  CHECK_THROWS_AS(parse_polynomial("(x"), InputError);
  CHECK_THROWS_AS(parse_polynomial("x ^ y"), InputError);
  CHECK_THROWS_AS(parse_polynomial("2 x"), InputError);  // no implicit product
}

TEST_CASE("printing is graded-lex and parses back") {
  Polynomial p = parse_polynomial("3.4 + 0.8*x + x^2 - 2*x*i");
  std::string s = p.str();
  CHECK(parse_polynomial(s) == p);
  // highest total degree first
  CHECK(s.find("x^2") < s.find("17/5"));
}
