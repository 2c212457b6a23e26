#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "remora/erase.hpp"
#include "remora/syntax.hpp"
#include "remora/types.hpp"

namespace remora::testing {

using Dims = std::vector<std::uint64_t>;

// Type-directed generator of closed, well-typed programs in surface syntax.
// Every program has type (Arr Num (Shp ...)) or (Arr Bool (Shp ...)) with a
// concrete shape; `depth` bounds the nesting of generator choices.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, int depth = 5) : rng_(seed), depth_(depth) {}

  std::string program();
  std::string number_array(const Dims& dims, int depth);
  std::string bool_array(const Dims& dims, int depth);

  std::mt19937_64& rng() { return rng_; }

 private:
  struct Var {
    std::string name;
    Dims dims;
  };

  std::mt19937_64 rng_;
  int depth_;
  std::vector<Var> scope_;
  std::uint64_t names_ = 0;

  std::size_t pick(std::size_t n);
  bool chance(double p);
  std::uint64_t dim(std::uint64_t lo, std::uint64_t hi);
  Dims random_dims(std::size_t max_rank, std::uint64_t max_dim);
  std::string fresh(const char* base);

  std::string num_literal(const Dims& dims);
  std::string sum_of(const std::string& len, const std::string& vec);
  std::string with_tail(const std::string& scalar, const Dims& dims, int depth);
};

// Literal array of the given element type (Num, Bool or Char) and shape.
std::string random_literal(std::mt19937_64& rng, const std::string& elem, const Dims& dims);
TypePtr random_type(std::mt19937_64& rng, Kind k);
IndexPtr random_index(std::mt19937_64& rng, Sort s);

std::string dims_text(const Dims& dims);

// Random Dim expression over the variables x, y and z.
std::string random_dim_text(std::mt19937_64& rng, int depth);

// A binder site of an elaborated program together with a closed
// replacement for its variables, in typed and erased form.
struct SubstCase {
  ExprPtr body;
  Subst typed;
  ESubst erased;
};

enum class SubstKind { Term, Type, Index };

// Every binder site of `elaborated` whose variables can be replaced by
// closed values of the kind requested.
std::vector<SubstCase> substitution_cases(const ExprPtr& elaborated, SubstKind kind, std::mt19937_64& rng);

}  // namespace remora::testing
