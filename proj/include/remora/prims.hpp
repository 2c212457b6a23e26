#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "remora/index.hpp"
#include "remora/types.hpp"

namespace remora {

const Signature& default_signature();
std::optional<TypePtr> signature_lookup(const std::string& name);
std::vector<std::string> primitive_names();

// δ kernels work on flat row-major atom lists so that the typed and the
// erased machine can wrap them in their own term representations.
template <class A>
struct PrimArray {
  std::vector<std::uint64_t> dims;
  std::vector<A> atoms;
};

struct DeltaMisapplied {};

template <class A>
struct DeltaBox {
  std::vector<IndexPtr> indices;
  PrimArray<A> payload;
};

// Right fold (fn c0 (fn c1 ... c_{n-1})), n >= 2, left to the evaluator.
template <class A>
struct DeltaFold {
  A fn;
  std::vector<PrimArray<A>> cells;
};

template <class A>
using DeltaResult = std::variant<DeltaMisapplied, PrimArray<A>, DeltaBox<A>, DeltaFold<A>>;

namespace detail {

inline bool natural_value(double d) { return std::isfinite(d) && d >= 0 && d == std::floor(d) && d < 1e12; }

template <class A>
std::vector<PrimArray<A>> cells_of(const PrimArray<A>& a) {
  std::vector<PrimArray<A>> out;
  if (a.dims.empty()) return out;
  std::vector<std::uint64_t> cd(a.dims.begin() + 1, a.dims.end());
  std::uint64_t cs = element_count(cd);
  for (std::uint64_t i = 0; i < a.dims[0]; ++i) {
    PrimArray<A> c{cd, {}};
    c.atoms.assign(a.atoms.begin() + static_cast<std::ptrdiff_t>(i * cs),
                   a.atoms.begin() + static_cast<std::ptrdiff_t>((i + 1) * cs));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

// base_of: const A& -> const BaseVal* (null for non-base atoms)
// make:    BaseVal -> A
template <class A, class BaseOf, class Make>
DeltaResult<A> delta_kernel(const std::string& name, const std::vector<PrimArray<A>>& args,
                            const std::vector<std::uint64_t>& result_dims, BaseOf base_of, Make make) {
  auto num = [&](std::size_t i) -> std::optional<double> {
    if (i >= args.size() || args[i].atoms.size() != 1) return std::nullopt;
    const BaseVal* b = base_of(args[i].atoms[0]);
    if (!b || b->tag != BaseVal::Tag::Num) return std::nullopt;
    return b->num;
  };
  auto scalar_out = [&](BaseVal v) { return PrimArray<A>{{}, {make(v)}}; };

  if (name == "+" || name == "-" || name == "*" || name == "/" || name == "<" || name == "=") {
    auto x = num(0), y = num(1);
    if (!x || !y) return DeltaMisapplied{};
    if (name == "+") return scalar_out(BaseVal::number(*x + *y));
    if (name == "-") return scalar_out(BaseVal::number(*x - *y));
    if (name == "*") return scalar_out(BaseVal::number(*x * *y));
    if (name == "/") {
      if (*y == 0) return DeltaMisapplied{};
      return scalar_out(BaseVal::number(*x / *y));
    }
    if (name == "<") return scalar_out(BaseVal::boolean(*x < *y));
    return scalar_out(BaseVal::boolean(*x == *y));
  }
  if (name == "head") {
    if (args.size() != 1 || args[0].dims.empty() || args[0].dims[0] == 0) return DeltaMisapplied{};
    return detail::cells_of(args[0]).front();
  }
  if (name == "append") {
    if (args.size() != 2 || args[0].dims.empty() || args[1].dims.empty()) return DeltaMisapplied{};
    PrimArray<A> out{args[0].dims, args[0].atoms};
    out.dims[0] += args[1].dims[0];
    out.atoms.insert(out.atoms.end(), args[1].atoms.begin(), args[1].atoms.end());
    return out;
  }
  if (name == "reduce") {
    if (args.size() != 2 || args[0].atoms.size() != 1 || args[1].dims.empty() || args[1].dims[0] == 0)
      return DeltaMisapplied{};
    auto cells = detail::cells_of(args[1]);
    if (cells.size() == 1) return cells[0];
    return DeltaFold<A>{args[0].atoms[0], std::move(cells)};
  }
  if (name == "iota/v") {
    auto n = num(0);
    if (!n || !detail::natural_value(*n)) return DeltaMisapplied{};
    auto len = static_cast<std::uint64_t>(*n);
    PrimArray<A> p{{len}, {}};
    for (std::uint64_t i = 0; i < len; ++i) p.atoms.push_back(make(BaseVal::number(static_cast<double>(i))));
    return DeltaBox<A>{{inat(len)}, std::move(p)};
  }
  if (name == "iota/s") {
    if (!args.empty()) return DeltaMisapplied{};
    PrimArray<A> p{result_dims, {}};
    std::uint64_t count = element_count(result_dims);
    for (std::uint64_t i = 0; i < count; ++i) p.atoms.push_back(make(BaseVal::number(static_cast<double>(i))));
    return p;
  }
  if (name == "reshape") {
    if (args.size() != 2 || args[0].dims.size() != 1) return DeltaMisapplied{};
    std::vector<std::uint64_t> dims;
    for (auto& a : args[0].atoms) {
      const BaseVal* b = base_of(a);
      if (!b || b->tag != BaseVal::Tag::Num || !detail::natural_value(b->num)) return DeltaMisapplied{};
      dims.push_back(static_cast<std::uint64_t>(b->num));
    }
    std::uint64_t count = element_count(dims);
    const auto& src = args[1].atoms;
    if (count > 0 && src.empty()) return DeltaMisapplied{};
    PrimArray<A> p{dims, {}};
    for (std::uint64_t i = 0; i < count; ++i) p.atoms.push_back(src[i % src.size()]);
    return DeltaBox<A>{{ishape_of(dims)}, std::move(p)};
  }
  if (name == "ravel") {
    if (args.size() != 1) return DeltaMisapplied{};
    auto len = static_cast<std::uint64_t>(args[0].atoms.size());
    return DeltaBox<A>{{inat(len)}, PrimArray<A>{{len}, args[0].atoms}};
  }
  if (name == "filter") {
    if (args.size() != 2 || args[0].dims.size() != 1 || args[1].dims.empty() || args[0].dims[0] != args[1].dims[0])
      return DeltaMisapplied{};
    auto cells = detail::cells_of(args[1]);
    PrimArray<A> p{args[1].dims, {}};
    std::uint64_t kept = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const BaseVal* b = base_of(args[0].atoms[i]);
      if (!b || b->tag != BaseVal::Tag::Bool) return DeltaMisapplied{};
      if (!b->flag) continue;
      ++kept;
      p.atoms.insert(p.atoms.end(), cells[i].atoms.begin(), cells[i].atoms.end());
    }
    p.dims[0] = kept;
    return DeltaBox<A>{{inat(kept)}, std::move(p)};
  }
  return DeltaMisapplied{};
}

// δ on typed values. `result` is the application's annotation, already
// instantiated by elaboration. nullopt signals misapplication; otherwise
// the returned expression is a value, or for reduce an application chain.
std::optional<ExprPtr> delta_apply(const std::string& name, const std::vector<ExprPtr>& args, const TypePtr& result);

}  // namespace remora
