#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "checks.hpp"
#include "generator.hpp"
#include "remora/index.hpp"
#include "remora/prims.hpp"

using namespace remora;

namespace {

constexpr std::uint64_t kPrograms = 150;
constexpr std::size_t kFuel = 10000;

Elaborated generated(std::uint64_t seed) {
  testing::ProgramGenerator g(seed);
  return elaborate({}, default_signature(), parse_term(g.program()));
}

}  // namespace

TEST_CASE("generated programs are well typed with concrete array types") {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    testing::ProgramGenerator g(seed);
    auto src = g.program();
    CAPTURE(src);
    auto el = elaborate({}, default_signature(), parse_term(src));
    REQUIRE(el.type->tag == Type::Tag::Arr);
    CHECK(concrete_dims(el.type->shape));
  }
}

TEST_CASE("progress and preservation") {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    auto v = testing::soundness_violation(generated(seed), kFuel);
    CHECK_MESSAGE(!v, "seed " << seed << ": " << v.value_or(""));
  }
}

TEST_CASE("typing is unique up to equivalence") {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    testing::ProgramGenerator g(seed);
    auto v = testing::uniqueness_violation(parse_term(g.program()));
    CHECK_MESSAGE(!v, "seed " << seed << ": " << v.value_or(""));
  }
}

TEST_CASE("typed and erased machines stay in lockstep") {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    auto v = testing::bisim_violation(generated(seed).term, kFuel);
    CHECK_MESSAGE(!v, "seed " << seed << ": " << v.value_or(""));
  }
}

TEST_CASE("erasure commutes with substitution") {
  std::mt19937_64 rng(5);
  for (auto kind : {testing::SubstKind::Term, testing::SubstKind::Type, testing::SubstKind::Index}) {
    std::size_t cases = 0;
    for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
      for (const auto& c : testing::substitution_cases(generated(seed).term, kind, rng)) {
        ++cases;
        CHECK(print(erase_term(substitute(c.body, c.typed))) == print(substitute(erase_term(c.body), c.erased)));
      }
    }
    CHECK(cases >= 50);
  }
}

TEST_CASE("normalization is idempotent on elaborated types") {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    auto t = normalize_type(generated(seed).type);
    CHECK(same(t, normalize_type(t)));
    CHECK(types_equal(t, generated(seed).type));
  }
}

TEST_CASE("erased freshening is idempotent up to alpha") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto e = erase_term(generated(seed).term);
    NameSupply a("a"), b("b");
    auto f = freshen(e, a);
    CHECK(erased_alpha_equal(e, f));
    CHECK(erased_alpha_equal(f, freshen(f, b)));
  }
}
