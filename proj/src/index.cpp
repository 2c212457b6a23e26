#include "remora/index.hpp"

namespace remora {

CanonicalShape concrete_shape(const std::vector<std::uint64_t>& dims) {
  CanonicalShape s;
  for (auto d : dims) s.components.push_back({false, {d, {}}, {}});
  return s;
}

CanonicalDim canonicalize_dim(const IndexPtr& i) {
  CanonicalDim d;
  switch (i->tag) {
    case Index::Tag::Nat:
      d.constant = i->nat;
      return d;
    case Index::Tag::Var:
      d.coeffs[i->name] = 1;
      return d;
    case Index::Tag::Plus:
      for (auto& a : i->args) {
        CanonicalDim x = canonicalize_dim(a);
        d.constant += x.constant;
        for (auto& [v, c] : x.coeffs) d.coeffs[v] += c;
      }
      return d;
    case Index::Tag::Shape:
    case Index::Tag::Append:
      break;
  }
  throw SortError("expected a Dim index, got the Shape " + print(i));
}

CanonicalShape canonicalize_shape(const IndexPtr& i) {
  CanonicalShape s;
  switch (i->tag) {
    case Index::Tag::Var:
      s.components.push_back({true, {}, i->name});
      return s;
    case Index::Tag::Shape:
      for (auto& a : i->args) s.components.push_back({false, canonicalize_dim(a), {}});
      return s;
    case Index::Tag::Append:
      for (auto& a : i->args) {
        CanonicalShape x = canonicalize_shape(a);
        s.components.insert(s.components.end(), x.components.begin(), x.components.end());
      }
      return s;
    case Index::Tag::Nat:
    case Index::Tag::Plus:
      break;
  }
  throw SortError("expected a Shape index, got the Dim " + print(i));
}

std::optional<Sort> syntactic_sort(const IndexPtr& i) {
  switch (i->tag) {
    case Index::Tag::Nat:
    case Index::Tag::Plus:
      return Sort::Dim;
    case Index::Tag::Shape:
    case Index::Tag::Append:
      return Sort::Shape;
    case Index::Tag::Var:
      break;
  }
  return std::nullopt;
}

bool indices_equal(const IndexPtr& a, const IndexPtr& b) {
  auto sa = syntactic_sort(a), sb = syntactic_sort(b);
  if (sa && sb && *sa != *sb) throw SortError("cannot compare " + print(a) + " with " + print(b));
  if (!sa && !sb) return a->name == b->name;
  Sort s = sa ? *sa : *sb;
  if (s == Sort::Dim) return canonicalize_dim(a) == canonicalize_dim(b);
  return canonicalize_shape(a) == canonicalize_shape(b);
}

bool prefix_leq(const CanonicalShape& a, const CanonicalShape& b) {
  if (a.components.size() > b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (!(a.components[i] == b.components[i])) return false;
  return true;
}

std::optional<CanonicalShape> frame_join(const std::vector<CanonicalShape>& shapes) {
  if (shapes.empty()) return CanonicalShape{};
  const CanonicalShape* best = &shapes[0];
  for (auto& s : shapes)
    if (s.components.size() > best->components.size()) best = &s;
  for (auto& s : shapes)
    if (!prefix_leq(s, *best)) return std::nullopt;
  return *best;
}

std::optional<CanonicalShape> drop_suffix(const CanonicalShape& whole, const CanonicalShape& suffix) {
  std::size_t n = whole.components.size(), m = suffix.components.size();
  if (m > n) return std::nullopt;
  for (std::size_t i = 0; i < m; ++i)
    if (!(whole.components[n - m + i] == suffix.components[i])) return std::nullopt;
  CanonicalShape f;
  f.components.assign(whole.components.begin(), whole.components.begin() + static_cast<std::ptrdiff_t>(n - m));
  return f;
}

std::optional<CanonicalShape> prefix_subtract(const CanonicalShape& a, const CanonicalShape& b) {
  if (!prefix_leq(b, a)) return std::nullopt;
  CanonicalShape c;
  c.components.assign(a.components.begin() + static_cast<std::ptrdiff_t>(b.components.size()), a.components.end());
  return c;
}

CanonicalShape append(const CanonicalShape& a, const CanonicalShape& b) {
  CanonicalShape c = a;
  c.components.insert(c.components.end(), b.components.begin(), b.components.end());
  return c;
}

std::optional<std::uint64_t> shape_length(const CanonicalShape& a) {
  for (auto& c : a.components)
    if (c.is_var || !c.dim.coeffs.empty()) return std::nullopt;
  return a.components.size();
}

std::uint64_t element_count(const std::vector<std::uint64_t>& dims) {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::optional<std::vector<std::uint64_t>> concrete_dims(const CanonicalShape& s) {
  std::vector<std::uint64_t> out;
  for (auto& c : s.components) {
    if (c.is_var || !c.dim.coeffs.empty()) return std::nullopt;
    out.push_back(c.dim.constant);
  }
  return out;
}

std::optional<std::vector<std::uint64_t>> concrete_dims(const IndexPtr& shape) {
  try {
    return concrete_dims(canonicalize_shape(shape));
  } catch (const SortError&) {
    return std::nullopt;
  }
}

IndexPtr to_index(const CanonicalDim& d) {
  std::vector<IndexPtr> terms;
  for (auto& [v, c] : d.coeffs)
    for (std::uint64_t k = 0; k < c; ++k) terms.push_back(ivar(v));
  if (d.constant != 0 || terms.empty()) terms.push_back(inat(d.constant));
  if (terms.size() == 1) return terms[0];
  return iplus(std::move(terms));
}

IndexPtr to_index(const CanonicalShape& s) {
  std::vector<IndexPtr> parts;
  std::vector<IndexPtr> run;
  bool in_run = false;
  for (auto& c : s.components) {
    if (c.is_var) {
      if (in_run) parts.push_back(ishape(std::move(run)));
      run.clear();
      in_run = false;
      parts.push_back(ivar(c.var));
    } else {
      run.push_back(to_index(c.dim));
      in_run = true;
    }
  }
  if (in_run) parts.push_back(ishape(std::move(run)));
  if (parts.empty()) return ishape({});
  if (parts.size() == 1) return parts[0];
  return iappend(std::move(parts));
}

IndexPtr normalize_index(const IndexPtr& i) {
  auto s = syntactic_sort(i);
  if (!s) return i;
  if (*s == Sort::Dim) return to_index(canonicalize_dim(i));
  return to_index(canonicalize_shape(i));
}

TypePtr normalize_type(const TypePtr& t) { return map_indices(t, &normalize_index); }

std::string print(const CanonicalDim& d) { return print(to_index(d)); }

std::string print(const CanonicalShape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    if (i) out += " ";
    auto& c = s.components[i];
    out += c.is_var ? c.var : print(c.dim);
  }
  return out + "]";
}

std::uint64_t eval_dim(const IndexPtr& i, const std::map<std::string, std::uint64_t>& env) {
  switch (i->tag) {
    case Index::Tag::Nat:
      return i->nat;
    case Index::Tag::Var:
      return env.at(i->name);
    case Index::Tag::Plus: {
      std::uint64_t n = 0;
      for (auto& a : i->args) n += eval_dim(a, env);
      return n;
    }
    default:
      break;
  }
  throw SortError("eval_dim on a Shape index");
}

}  // namespace remora
