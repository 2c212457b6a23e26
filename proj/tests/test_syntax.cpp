#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "generator.hpp"
#include "remora/syntax.hpp"

using namespace remora;

TEST_CASE("literals") {
  auto e = parse_term("(array (2 2) 1 -2.5 #t #\\a)");
  REQUIRE(e->tag == Expr::Tag::Array);
  CHECK(e->dims == std::vector<std::uint64_t>{2, 2});
  CHECK(e->atoms[0]->base == BaseVal::number(1));
  CHECK(e->atoms[1]->base == BaseVal::number(-2.5));
  CHECK(e->atoms[2]->base == BaseVal::boolean(true));
  CHECK(e->atoms[3]->base == BaseVal::character(U'a'));
  CHECK(print(e) == "(array (2 2) 1 -2.5 #t #\\a)");
}

TEST_CASE("comments and whitespace are skipped") {
  auto e = parse_term("; leading\n(array () ; inside\n  +)\n");
  CHECK(print(e) == "(array () +)");
}

TEST_CASE("round trip through the printer") {
  for (const auto& p : testing::load_corpus()) {
    CAPTURE(p.name);
    auto e = parse_term(p.source);
    CHECK(same(parse_term(print(e)), e, false));
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::ProgramGenerator g(seed);
    auto src = g.program();
    auto e = parse_term(src);
    CHECK(print(e) == print(parse_term(print(e))));
    CHECK(same(parse_term(print(e)), e, false));
  }
}

TEST_CASE("types and indices round trip") {
  for (const char* t : {"(Arr Num (Shp 2 3))", "(Forall ((a Atom) (b Array)) (-> ((Arr a (Shp)) b) b))",
                        "(Pi ((d Dim) (s Shape)) (Arr (Sigma ((n Dim)) (Arr Num (Shp n))) (++ (Shp (+ 1 d)) s)))"})
    CHECK(print(parse_type(t)) == t);
  for (const char* i : {"(+ x 1)", "(Shp)", "(++ s (Shp 2) t)"}) CHECK(print(parse_index(i)) == i);
}

TEST_CASE("parse errors carry locations") {
  auto fails_at = [](const char* src, std::uint32_t line, std::uint32_t col) {
    try {
      parse_term(src, "t");
      return false;
    } catch (const ParseError& e) {
      return e.loc.line == line && e.loc.column == col;
    }
  };
  CHECK(fails_at("(array (2) 1 2", 1, 1));
  CHECK(fails_at("(array () 1))", 1, 13));
  CHECK(fails_at("\n  (array () (bogus))", 2, 14));
  CHECK_THROWS_AS(parse_term("(array (x) 1)"), ParseError);
  CHECK_THROWS_AS(parse_term("(array () (lam (x) x))"), ParseError);
  CHECK_THROWS_AS(parse_type("(Arr Num)"), ParseError);
  CHECK_THROWS_AS(parse_index("(Shp 1"), ParseError);
}

TEST_CASE("freshening renames binders and preserves alpha-equivalence") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::ProgramGenerator g(seed);
    auto e = parse_term(g.program());
    NameSupply names("v");
    auto f = freshen(e, names);
    CHECK(alpha_equal(e, f, false));
    NameSupply n1("v"), n2("v");
    CHECK(same(freshen(f, n1), freshen(e, n2), false));
  }
}

TEST_CASE("alpha equivalence distinguishes binding structure") {
  auto a = parse_term("(array () (lam ((x (Arr Num (Shp))) (y (Arr Num (Shp)))) x))");
  auto b = parse_term("(array () (lam ((p (Arr Num (Shp))) (q (Arr Num (Shp)))) p))");
  auto c = parse_term("(array () (lam ((p (Arr Num (Shp))) (q (Arr Num (Shp)))) q))");
  CHECK(alpha_equal(a, b));
  CHECK_FALSE(alpha_equal(a, c));
  auto d = parse_term("(array () (ilam ((n Dim)) (array () (lam ((x (Arr Num (Shp n)))) x))))");
  auto e = parse_term("(array () (ilam ((m Dim)) (array () (lam ((x (Arr Num (Shp m)))) x))))");
  CHECK(alpha_equal(d, e));
}

TEST_CASE("substitution avoids capture") {
  auto body = parse_term("(array () (lam ((y (Arr Num (Shp)))) ((array () +) x y)))");
  Subst s;
  s.terms["x"] = evar("y");
  auto r = substitute(body, s);
  auto expected = parse_term("(array () (lam ((z (Arr Num (Shp)))) ((array () +) y z)))");
  CHECK(alpha_equal(r, expected));
  CHECK(free_names(r).terms == std::set<std::string>{"y"});

  auto ty = parse_type("(Pi ((n Dim)) (Arr Num (Shp n m)))");
  Subst si;
  si.indices["m"] = ivar("n");
  auto t = substitute(ty, si);
  CHECK(free_index_vars(t) == std::set<std::string>{"n"});
}

TEST_CASE("free names by namespace") {
  auto e = parse_term("(unbox (n v b) ((t-app f a) (i-app g (Shp n k)) v))");
  auto fn = free_names(e);
  CHECK(fn.terms == std::set<std::string>{"b", "f", "g"});
  CHECK(fn.types == std::set<std::string>{"a"});
  CHECK(fn.indices == std::set<std::string>{"k"});
}

TEST_CASE("term depth") {
  CHECK(term_depth(parse_term("(array () 1)")) == 1);
  CHECK(term_depth(parse_term("((array () +) (array () 1) (array () 2))")) == 2);
}
