#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "remora/syntax.hpp"

namespace remora {

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// constant + sum of coeff * var, coefficients positive, keyed by name.
struct CanonicalDim {
  std::uint64_t constant = 0;
  std::map<std::string, std::uint64_t> coeffs;
  bool operator==(const CanonicalDim&) const = default;
};

struct ShapeComponent {
  bool is_var = false;
  CanonicalDim dim;  // when !is_var
  std::string var;   // when is_var
  bool operator==(const ShapeComponent&) const = default;
};

struct CanonicalShape {
  std::vector<ShapeComponent> components;
  bool operator==(const CanonicalShape&) const = default;
};

CanonicalShape concrete_shape(const std::vector<std::uint64_t>& dims);

CanonicalDim canonicalize_dim(const IndexPtr& i);
CanonicalShape canonicalize_shape(const IndexPtr& i);

// Sort evident from the syntax alone; nullopt for a bare variable.
std::optional<Sort> syntactic_sort(const IndexPtr& i);

bool indices_equal(const IndexPtr& a, const IndexPtr& b);

bool prefix_leq(const CanonicalShape& a, const CanonicalShape& b);

// The ⊑-greatest input when the inputs form a chain; nullopt is the
// incompatible (top) case.
std::optional<CanonicalShape> frame_join(const std::vector<CanonicalShape>& shapes);

std::optional<CanonicalShape> drop_suffix(const CanonicalShape& whole, const CanonicalShape& suffix);
std::optional<CanonicalShape> prefix_subtract(const CanonicalShape& a, const CanonicalShape& b);
CanonicalShape append(const CanonicalShape& a, const CanonicalShape& b);

// Number of axes; nullopt when the shape has a shape variable or a
// dimension that mentions a variable.
std::optional<std::uint64_t> shape_length(const CanonicalShape& a);

std::uint64_t element_count(const std::vector<std::uint64_t>& dims);

// The literal dimensions of a variable-free shape.
std::optional<std::vector<std::uint64_t>> concrete_dims(const CanonicalShape& s);
std::optional<std::vector<std::uint64_t>> concrete_dims(const IndexPtr& shape);

IndexPtr to_index(const CanonicalDim& d);
IndexPtr to_index(const CanonicalShape& s);

// Canonical re-expression of any index whose sort is evident.
IndexPtr normalize_index(const IndexPtr& i);
TypePtr normalize_type(const TypePtr& t);

std::string print(const CanonicalDim& d);
std::string print(const CanonicalShape& s);

// Evaluation under an assignment of naturals; used by tests as an oracle.
std::uint64_t eval_dim(const IndexPtr& i, const std::map<std::string, std::uint64_t>& env);

}  // namespace remora
