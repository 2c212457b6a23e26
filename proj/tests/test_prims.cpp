#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "remora/prims.hpp"

using namespace remora;

namespace {

using Arr = PrimArray<BaseVal>;

Arr nums(std::vector<std::uint64_t> dims, std::vector<double> xs) {
  Arr a{std::move(dims), {}};
  for (double x : xs) a.atoms.push_back(BaseVal::number(x));
  return a;
}

Arr bools(std::vector<bool> xs) {
  Arr a{{xs.size()}, {}};
  for (bool x : xs) a.atoms.push_back(BaseVal::boolean(x));
  return a;
}

DeltaResult<BaseVal> run(const std::string& op, std::vector<Arr> args, std::vector<std::uint64_t> result = {}) {
  return delta_kernel<BaseVal>(
      op, args, result, [](const BaseVal& b) { return &b; }, [](BaseVal b) { return b; });
}

std::vector<double> values(const Arr& a) {
  std::vector<double> out;
  for (auto& b : a.atoms) out.push_back(b.num);
  return out;
}

bool misapplied(const DeltaResult<BaseVal>& r) { return std::holds_alternative<DeltaMisapplied>(r); }

}  // namespace

TEST_CASE("registry") {
  auto names = primitive_names();
  for (const char* p : {"+", "-", "*", "/", "<", "=", "head", "append", "reduce", "iota/v", "iota/s", "reshape",
                        "ravel", "filter"})
    CHECK(std::find(names.begin(), names.end(), p) != names.end());
  CHECK(signature_lookup("head"));
  CHECK_FALSE(signature_lookup("tail"));
  CHECK(names.size() == default_signature().size());
}

TEST_CASE("scalar arithmetic and comparison") {
  CHECK(values(std::get<Arr>(run("+", {nums({}, {2}), nums({}, {3})}))) == std::vector<double>{5});
  CHECK(values(std::get<Arr>(run("-", {nums({}, {2}), nums({}, {3})}))) == std::vector<double>{-1});
  CHECK(values(std::get<Arr>(run("*", {nums({}, {2}), nums({}, {3})}))) == std::vector<double>{6});
  CHECK(values(std::get<Arr>(run("/", {nums({}, {3}), nums({}, {2})}))) == std::vector<double>{1.5});
  CHECK(misapplied(run("/", {nums({}, {3}), nums({}, {0})})));
  CHECK(std::get<Arr>(run("<", {nums({}, {1}), nums({}, {2})})).atoms[0] == BaseVal::boolean(true));
  CHECK(std::get<Arr>(run("=", {nums({}, {1}), nums({}, {2})})).atoms[0] == BaseVal::boolean(false));
  CHECK(misapplied(run("+", {bools({true}), nums({}, {2})})));
}

TEST_CASE("structural primitives") {
  auto h = std::get<Arr>(run("head", {nums({3, 2}, {0, 1, 2, 3, 4, 5})}));
  CHECK(h.dims == std::vector<std::uint64_t>{2});
  CHECK(values(h) == std::vector<double>{0, 1});
  CHECK(misapplied(run("head", {nums({0, 2}, {})})));

  auto ap = std::get<Arr>(run("append", {nums({1, 2}, {1, 2}), nums({2, 2}, {3, 4, 5, 6})}));
  CHECK(ap.dims == std::vector<std::uint64_t>{3, 2});
  CHECK(values(ap) == std::vector<double>{1, 2, 3, 4, 5, 6});

  auto s = std::get<Arr>(run("iota/s", {}, {2, 2}));
  CHECK(values(s) == std::vector<double>{0, 1, 2, 3});
}

TEST_CASE("reduce hands back a fold over the cells") {
  auto f = std::get<DeltaFold<BaseVal>>(run("reduce", {nums({}, {0}), nums({3, 2}, {1, 2, 3, 4, 5, 6})}));
  REQUIRE(f.cells.size() == 3);
  CHECK(values(f.cells[2]) == std::vector<double>{5, 6});
  auto one = std::get<Arr>(run("reduce", {nums({}, {0}), nums({1}, {7})}));
  CHECK(one.dims.empty());
  CHECK(values(one) == std::vector<double>{7});
}

TEST_CASE("box producers") {
  auto b = std::get<DeltaBox<BaseVal>>(run("iota/v", {nums({}, {3})}));
  CHECK(print(b.indices[0]) == "3");
  CHECK(values(b.payload) == std::vector<double>{0, 1, 2});
  CHECK(misapplied(run("iota/v", {nums({}, {-1})})));
  CHECK(misapplied(run("iota/v", {nums({}, {2.5})})));
  CHECK(std::get<DeltaBox<BaseVal>>(run("iota/v", {nums({}, {0})})).payload.atoms.empty());

  auto r = std::get<DeltaBox<BaseVal>>(run("reshape", {nums({2}, {3, 2}), nums({5}, {1, 2, 3, 4, 5})}));
  CHECK(print(r.indices[0]) == "(Shp 3 2)");
  CHECK(values(r.payload) == std::vector<double>{1, 2, 3, 4, 5, 1});
  CHECK(misapplied(run("reshape", {nums({1}, {2}), nums({0}, {})})));
  CHECK(misapplied(run("reshape", {nums({1}, {-2}), nums({1}, {1})})));
  CHECK(std::get<DeltaBox<BaseVal>>(run("reshape", {nums({1}, {0}), nums({0}, {})})).payload.dims ==
        std::vector<std::uint64_t>{0});

  auto rv = std::get<DeltaBox<BaseVal>>(run("ravel", {nums({2, 2}, {1, 2, 3, 4})}));
  CHECK(print(rv.indices[0]) == "4");
  CHECK(rv.payload.dims == std::vector<std::uint64_t>{4});

  auto fl = std::get<DeltaBox<BaseVal>>(run("filter", {bools({true, false, true}), nums({3, 2}, {1, 2, 3, 4, 5, 6})}));
  CHECK(print(fl.indices[0]) == "2");
  CHECK(fl.payload.dims == std::vector<std::uint64_t>{2, 2});
  CHECK(values(fl.payload) == std::vector<double>{1, 2, 5, 6});
}

TEST_CASE("typed wrapper builds annotated values") {
  auto num = tarr(tbase("Num"), ishape({}));
  auto sum = delta_apply("+", {scalar(BaseVal::number(2), num), scalar(BaseVal::number(3), num)}, num);
  REQUIRE(sum);
  CHECK(print(*sum) == "(array () 5)");
  CHECK((*sum)->annot);
  CHECK_FALSE(delta_apply("/", {scalar(BaseVal::number(2), num), scalar(BaseVal::number(0), num)}, num));

  auto boxed = parse_type("(Arr (Sigma ((n Dim)) (Arr Num (Shp n))) (Shp))");
  auto iota = delta_apply("iota/v", {scalar(BaseVal::number(2), num)}, boxed);
  REQUIRE(iota);
  CHECK(print(*iota) == "(array () (box (2) (array (2) 0 1) (Sigma ((n Dim)) (Arr Num (Shp n)))))");
}
