#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "generator.hpp"
#include "remora/index.hpp"

using namespace remora;

namespace {

IndexPtr idx(const char* s) { return parse_index(s); }

CanonicalShape shape(const char* s) { return canonicalize_shape(idx(s)); }

// Linear forms agreeing on {0..3}^3 agree everywhere, so this is exact.
bool brute_force_equal(const IndexPtr& a, const IndexPtr& b) {
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y)
      for (std::uint64_t z = 0; z < 4; ++z) {
        std::map<std::string, std::uint64_t> env{{"x", x}, {"y", y}, {"z", z}};
        if (eval_dim(a, env) != eval_dim(b, env)) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("dimension equality goldens") {
  CHECK(indices_equal(idx("(+ x y 5 x)"), idx("(+ (+ x x) 5 y)")));
  CHECK_FALSE(indices_equal(idx("(+ q 5 y)"), idx("(+ (+ x x) 5 y)")));
  CHECK(indices_equal(idx("(+)"), idx("0")));
  CHECK(indices_equal(idx("(+ 2 3)"), idx("5")));
  CHECK(print(canonicalize_dim(idx("(+ y 5 (+ x x))"))) == "(+ x x y 5)");
}

TEST_CASE("shape canonicalization golden") {
  auto c = shape("(++ (Shp 2 (+ x 5 x)) (++ d (Shp 3)))");
  REQUIRE(c.components.size() == 4);
  CHECK(print(c) == "[2 (+ x x 5) d 3]");
  CHECK(c.components[2].is_var);
  CHECK(print(normalize_index(idx("(++ (Shp 2 (+ x 5 x)) (++ d (Shp 3)))"))) == "(++ (Shp 2 (+ x x 5)) d (Shp 3))");
}

TEST_CASE("shape equality") {
  CHECK(indices_equal(idx("(++ (Shp) s (Shp))"), idx("s")));
  CHECK(indices_equal(idx("(++ (Shp 1) (Shp 2 3))"), idx("(Shp 1 2 3)")));
  CHECK_FALSE(indices_equal(idx("(++ s t)"), idx("(++ t s)")));
  CHECK_FALSE(indices_equal(idx("(++ (Shp 1) s)"), idx("(++ s (Shp 1))")));
  CHECK_THROWS_AS(indices_equal(idx("(Shp 1)"), idx("1")), SortError);
}

TEST_CASE("prefix subtraction") {
  auto r = prefix_subtract(concrete_shape({3, 4, 5, 6}), concrete_shape({3, 4}));
  REQUIRE(r);
  CHECK(*r == concrete_shape({5, 6}));
  CHECK_FALSE(prefix_subtract(concrete_shape({3, 4, 5, 6}), concrete_shape({4})));
  CHECK(prefix_subtract(shape("(++ (Shp n) s)"), shape("(Shp n)")) == shape("s"));
  CHECK_FALSE(prefix_subtract(shape("s"), shape("(Shp 1)")));
  CHECK(drop_suffix(shape("(++ (Shp 2 n) s)"), shape("s")) == shape("(Shp 2 n)"));
  CHECK_FALSE(drop_suffix(concrete_shape({2, 3}), concrete_shape({2})));
}

TEST_CASE("prefix order and frame join") {
  CHECK(prefix_leq(concrete_shape({}), concrete_shape({2, 3})));
  CHECK(prefix_leq(concrete_shape({2}), concrete_shape({2, 3})));
  CHECK_FALSE(prefix_leq(concrete_shape({3}), concrete_shape({2, 3})));
  auto j = frame_join({concrete_shape({2}), concrete_shape({}), concrete_shape({2, 3})});
  REQUIRE(j);
  CHECK(*j == concrete_shape({2, 3}));
  CHECK_FALSE(frame_join({concrete_shape({2}), concrete_shape({3})}));
  CHECK(frame_join({})->components.empty());
}

TEST_CASE("lengths and concrete dims") {
  CHECK(shape_length(concrete_shape({2, 0, 4})) == 3u);
  CHECK_FALSE(shape_length(shape("(++ (Shp 1) s)")));
  CHECK_FALSE(shape_length(shape("(Shp n)")));
  CHECK(element_count({2, 3, 4}) == 24);
  CHECK(element_count({}) == 1);
  CHECK(element_count({5, 0}) == 0);
  CHECK(concrete_dims(idx("(++ (Shp (+ 1 1)) (Shp 3))")) == std::vector<std::uint64_t>{2, 3});
  CHECK_FALSE(concrete_dims(idx("(Shp k)")));
}

TEST_CASE("ill-sorted indices") {
  CHECK_THROWS_AS(canonicalize_dim(idx("(Shp 1)")), SortError);
  CHECK_THROWS_AS(canonicalize_shape(idx("3")), SortError);
  CHECK_THROWS_AS(canonicalize_dim(idx("(+ 1 (Shp))")), SortError);
  CHECK(syntactic_sort(idx("x")) == std::nullopt);
  CHECK(syntactic_sort(idx("(++ x)")) == Sort::Shape);
}

TEST_CASE("canonical equality agrees with brute force") {
  std::mt19937_64 rng(2024);
  int equal = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = idx(testing::random_dim_text(rng, 3).c_str());
    auto b = trial % 2 ? idx(testing::random_dim_text(rng, 3).c_str()) : normalize_index(iplus({a, inat(0)}));
    CAPTURE(print(a));
    CAPTURE(print(b));
    bool oracle = brute_force_equal(a, b);
    equal += oracle;
    CHECK(indices_equal(a, b) == oracle);
  }
  CHECK(equal >= 1000);
}

TEST_CASE("normalization preserves meaning") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = idx(testing::random_dim_text(rng, 4).c_str());
    CHECK(brute_force_equal(a, normalize_index(a)));
    CHECK(same(normalize_index(a), normalize_index(normalize_index(a))));
  }
}
