#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "remora/metafunctions.hpp"

using namespace remora;
using V = std::vector<int>;
using VV = std::vector<V>;

TEST_CASE("goldens") {
  CHECK(split_list(3, V{1, 2, 3, 4, 5, 6}) == VV{{1, 2, 3}, {4, 5, 6}});
  CHECK(rep_list(2, V{0, 1}) == V{0, 0, 1, 1});
  CHECK(rep_list(2, VV{{1, 2, 3}, {4, 5, 6}}) == VV{{1, 2, 3}, {1, 2, 3}, {4, 5, 6}, {4, 5, 6}});
  CHECK(transpose_list(VV{{1, 2, 3}, {4, 5, 6}}) == VV{{1, 4}, {2, 5}, {3, 6}});
  CHECK(concat_list(VV{{1}, {}, {2, 3}}) == V{1, 2, 3});
}

TEST_CASE("edge cases") {
  CHECK(split_list(0, V{}).empty());
  CHECK_THROWS(split_list(0, V{1}));
  CHECK_THROWS(split_list(4, V{1, 2, 3}));
  CHECK(rep_list(0, V{1, 2}).empty());
  CHECK(transpose_list(VV{}).empty());
  CHECK(transpose_list(VV{{}, {}}).empty());
  CHECK_THROWS(transpose_list(VV{{1}, {1, 2}}));
}

TEST_CASE("algebra on random inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng() % 5, pieces = rng() % 6;
    V xs(n * pieces);
    for (auto& x : xs) x = static_cast<int>(rng() % 100);
    auto parts = split_list(n, xs);
    CHECK(parts.size() == pieces);
    CHECK(concat_list(parts) == xs);
    std::size_t k = rng() % 4;
    auto r = rep_list(k, xs);
    REQUIRE(r.size() == k * xs.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == xs[i / k]);
    if (pieces > 0) CHECK(transpose_list(transpose_list(parts)) == parts);
  }
}
