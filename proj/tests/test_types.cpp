#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "remora/index.hpp"
#include "remora/prims.hpp"

using namespace remora;

namespace {

TypePtr type_of(const std::string& src) { return elaborate({}, default_signature(), parse_term(src)).type; }

bool fully_annotated(const ExprPtr& e) {
  if (!e->annot) return false;
  for (auto& a : e->atoms)
    if (a->body && !fully_annotated(a->body)) return false;
  for (auto& c : e->args)
    if (!fully_annotated(c)) return false;
  if (e->fn && !fully_annotated(e->fn)) return false;
  return !e->body || fully_annotated(e->body);
}

}  // namespace

TEST_CASE("corpus programs have their recorded types") {
  for (const auto& p : testing::load_corpus()) {
    CAPTURE(p.name);
    auto el = elaborate({}, default_signature(), parse_term(p.source));
    CHECK(types_equal(el.type, parse_type(p.type)));
    CHECK(print(normalize_type(el.type)) == p.type);
    CHECK(fully_annotated(el.term));
  }
}

TEST_CASE("application lifts over the principal frame") {
  CHECK(print(normalize_type(type_of("((array () +) (array (2) 1 2) (array (2 3) 1 2 3 4 5 6))"))) ==
        "(Arr Num (Shp 2 3))");
  CHECK(print(normalize_type(type_of("((array (2) + -) (array () 1) (array (2 3) 1 2 3 4 5 6))"))) ==
        "(Arr Num (Shp 2 3))");
  CHECK(print(normalize_type(type_of("((array (4) + - * +) (array () 1) (array () 2))"))) == "(Arr Num (Shp 4))");
}

TEST_CASE("type equivalence") {
  CHECK(types_equal(parse_type("(Arr Num (Shp (+ 1 1)))"), parse_type("(Arr Num (Shp 2))")));
  CHECK(types_equal(parse_type("(Arr Num (++ (Shp 1) (++ (Shp 2) s)))"), parse_type("(Arr Num (++ (Shp 1 2) s))")));
  CHECK(types_equal(parse_type("(Forall ((a Atom)) (Arr a (Shp)))"), parse_type("(Forall ((b Atom)) (Arr b (Shp)))")));
  CHECK(types_equal(parse_type("(Pi ((n Dim)) (Arr Num (Shp (+ n 1))))"),
                    parse_type("(Pi ((m Dim)) (Arr Num (Shp (+ 1 m))))")));
  CHECK(types_equal(parse_type("(Arr (Sigma ((n Dim)) (Arr Num (Shp n))) (Shp))"),
                    parse_type("(Arr (Sigma ((k Dim)) (Arr Num (Shp k))) (Shp))")));
  CHECK_FALSE(types_equal(parse_type("(Pi ((n Dim) (m Dim)) (Arr Num (Shp n m)))"),
                          parse_type("(Pi ((n Dim) (m Dim)) (Arr Num (Shp m n)))")));
  CHECK_FALSE(types_equal(parse_type("(Arr Num (Shp 2))"), parse_type("(Arr Bool (Shp 2))")));
  CHECK_FALSE(types_equal(parse_type("(Forall ((a Atom)) (Arr a (Shp)))"), parse_type("(Forall ((a Array)) a)")));
}

TEST_CASE("kinds and sorts") {
  Env env;
  env.sorts["n"] = Sort::Dim;
  env.sorts["s"] = Sort::Shape;
  env.kinds["a"] = Kind::Atom;
  CHECK(sort_of(env, parse_index("(+ n 1)")) == Sort::Dim);
  CHECK(sort_of(env, parse_index("(++ (Shp n) s)")) == Sort::Shape);
  CHECK_THROWS_AS(sort_of(env, parse_index("(+ s 1)")), TypeError);
  CHECK_THROWS_AS(sort_of(env, parse_index("q")), TypeError);
  CHECK(kind_of(env, parse_type("Num")) == Kind::Atom);
  CHECK(kind_of(env, parse_type("(Arr a (Shp n))")) == Kind::Array);
  CHECK(kind_of(env, parse_type("(-> ((Arr a s)) (Arr a (Shp)))")) == Kind::Atom);
  CHECK(kind_of(env, parse_type("(Sigma ((m Dim)) (Arr a (Shp m)))")) == Kind::Atom);
  CHECK_THROWS_AS(kind_of(env, parse_type("(Arr (Arr a (Shp)) (Shp))")), TypeError);
  CHECK_THROWS_AS(kind_of(env, parse_type("(-> (a) a)")), TypeError);
}

TEST_CASE("every primitive signature is well kinded") {
  for (const auto& [name, t] : default_signature()) {
    CAPTURE(name);
    CHECK(kind_of({}, t) == Kind::Atom);
  }
}

TEST_CASE("elaboration in a non-empty environment") {
  Env env;
  env.sorts["n"] = Sort::Dim;
  env.types["v"] = parse_type("(Arr Num (Shp n))");
  auto el = elaborate(env, default_signature(), parse_term("((array () +) v (array () 1))"));
  CHECK(types_equal(el.type, parse_type("(Arr Num (Shp n))")));
}

TEST_CASE("written annotations are checked up to equivalence") {
  CHECK(print(type_of("((array () +) (array () 1) (array (2) 2 3) : (Arr Num (Shp (+ 1 1))))")) ==
        "(Arr Num (Shp 2))");
  CHECK_THROWS_AS(type_of("(array (2) 1 2 : (Arr Bool (Shp 2)))"), TypeError);
}

TEST_CASE("empty forms") {
  CHECK(print(type_of("(empty-array Num (0 3))")) == "(Arr Num (Shp 0 3))");
  CHECK(print(normalize_type(type_of("(empty-frame (Arr Num (Shp 3)) (0))"))) == "(Arr Num (Shp 0 3))");
  auto t = type_of("(empty-frame (Arr (-> ((Arr Num (Shp))) (Arr Num (Shp))) (Shp)) (0))");
  CHECK(print(normalize_type(t)) == "(Arr (-> ((Arr Num (Shp))) (Arr Num (Shp))) (Shp 0))");
}

TEST_CASE("polymorphic and dependent abstractions") {
  CHECK(print(type_of("(array () (tlam ((a Atom)) (array () (lam ((x (Arr a (Shp)))) x))))")) ==
        "(Arr (Forall ((a Atom)) (Arr (-> ((Arr a (Shp))) (Arr a (Shp))) (Shp))) (Shp))");
  CHECK(types_equal(type_of("(array () (ilam ((n Dim)) (array () (lam ((x (Arr Num (Shp n)))) x))))"),
                    parse_type("(Arr (Pi ((m Dim)) (Arr (-> ((Arr Num (Shp m))) (Arr Num (Shp m))) (Shp))) (Shp))")));
  CHECK(print(normalize_type(type_of("((i-app (array () iota/s) (Shp 2 3)))"))) == "(Arr Num (Shp 2 3))");
}

TEST_CASE("atoms") {
  CHECK(print(type_of_atom({}, default_signature(), abase(BaseVal::character(U'x')))) == "Char");
  CHECK(print(type_of_atom({}, default_signature(), aprim("+"))) ==
        "(-> ((Arr Num (Shp)) (Arr Num (Shp))) (Arr Num (Shp)))");
}
