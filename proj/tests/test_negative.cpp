#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "negative_cases.hpp"
#include "remora/prims.hpp"

using namespace remora;

TEST_CASE("ill-typed programs report their designated error") {
  for (const auto& c : testing::negative_cases()) {
    CAPTURE(c.source);
    auto parsed = parse_term(c.source);
    try {
      elaborate({}, default_signature(), parsed);
      FAIL("accepted");
    } catch (const TypeError& e) {
      CHECK(std::string(to_string(e.kind)) == to_string(c.kind));
    }
  }
}

TEST_CASE("the suite covers every required failure class") {
  std::set<ErrorKind> kinds;
  for (const auto& c : testing::negative_cases()) kinds.insert(c.kind);
  CHECK(testing::negative_cases().size() >= 12);
  for (auto k : {ErrorKind::FrameIncompatible, ErrorKind::LengthMismatch, ErrorKind::EscapingIndexVar,
                 ErrorKind::AnnotationMismatch, ErrorKind::KindMismatch})
    CHECK(kinds.count(k) == 1);
}

TEST_CASE("type errors carry the location of the offending node") {
  try {
    elaborate({}, default_signature(), parse_term("(frame (2) (array () 1)\n  (array () #t))", "f.remora"));
    FAIL("accepted");
  } catch (const TypeError& e) {
    CHECK(e.loc.file == "f.remora");
    CHECK(e.loc.line == 2);
    CHECK(e.loc.column == 3);
  }
}

TEST_CASE("environments are checked before use") {
  Env env;
  env.types["x"] = tarr(tbase("Num"), ishape({ivar("n")}));
  CHECK_THROWS_AS(check_env(env), TypeError);
  env.sorts["n"] = Sort::Dim;
  CHECK_NOTHROW(check_env(env));
}
