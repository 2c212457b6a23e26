#include "remora/erase.hpp"

#include <set>
#include <stdexcept>

#include "remora/index.hpp"
#include "remora/metafunctions.hpp"
#include "remora/prims.hpp"

namespace remora {

namespace {

EExprPtr make(EExpr e) { return std::make_shared<const EExpr>(std::move(e)); }
EAtomPtr make(EAtom a) { return std::make_shared<const EAtom>(std::move(a)); }

EExprPtr e_array(std::vector<std::uint64_t> dims, std::vector<EAtomPtr> atoms) {
  EExpr e;
  e.tag = EExpr::Tag::Array;
  e.dims = std::move(dims);
  e.atoms = std::move(atoms);
  return make(std::move(e));
}

EExprPtr e_frame(std::vector<std::uint64_t> dims, std::vector<EExprPtr> cells, IndexPtr tag) {
  EExpr e;
  e.tag = EExpr::Tag::Frame;
  e.dims = std::move(dims);
  e.args = std::move(cells);
  e.tag_shape = std::move(tag);
  return make(std::move(e));
}

EExprPtr e_app(EExprPtr fn, std::vector<EExprPtr> args, std::vector<IndexPtr> cells, IndexPtr result) {
  EExpr e;
  e.tag = EExpr::Tag::App;
  e.fn = std::move(fn);
  e.args = std::move(args);
  e.cells = std::move(cells);
  e.tag_shape = std::move(result);
  return make(std::move(e));
}

IndexPtr annotation_shape(const TypePtr& t) {
  if (!t) throw std::invalid_argument("erase: term is not elaborated");
  return erase_type(t);
}

}  // namespace

IndexPtr erase_type(const TypePtr& t) {
  switch (t->tag) {
    case Type::Tag::Arr:
      return t->shape;
    case Type::Tag::Var:
      return ivar(t->name);
    default:
      return ishape({});
  }
}

EAtomPtr erase_atom(const AtomPtr& a) {
  EAtom out;
  switch (a->tag) {
    case Atom::Tag::Base:
      out.tag = EAtom::Tag::Base;
      out.base = a->base;
      break;
    case Atom::Tag::Prim:
      out.tag = EAtom::Tag::Prim;
      out.prim = a->prim;
      break;
    case Atom::Tag::Lam:
      out.tag = EAtom::Tag::Lam;
      for (auto& [x, t] : a->params) out.params.push_back(x);
      out.body = erase_term(a->body);
      break;
    case Atom::Tag::TLam:
      out.tag = EAtom::Tag::ILam;
      for (auto& [x, k] : a->tvars) out.params.push_back(x);
      out.body = erase_term(a->body);
      break;
    case Atom::Tag::ILam:
      out.tag = EAtom::Tag::ILam;
      for (auto& [x, s] : a->ivars) out.params.push_back(x);
      out.body = erase_term(a->body);
      break;
    case Atom::Tag::Box:
      out.tag = EAtom::Tag::Box;
      out.indices = a->indices;
      out.body = erase_term(a->body);
      break;
  }
  return make(std::move(out));
}

EExprPtr erase_term(const ExprPtr& e) {
  EExpr out;
  switch (e->tag) {
    case Expr::Tag::Var:
      out.tag = EExpr::Tag::Var;
      out.name = e->name;
      break;
    case Expr::Tag::Array:
    case Expr::Tag::EmptyArray:
      out.tag = EExpr::Tag::Array;
      out.dims = e->dims;
      for (auto& a : e->atoms) out.atoms.push_back(erase_atom(a));
      break;
    case Expr::Tag::Frame:
    case Expr::Tag::EmptyFrame:
      out.tag = EExpr::Tag::Frame;
      out.dims = e->dims;
      for (auto& c : e->args) out.args.push_back(erase_term(c));
      out.tag_shape = annotation_shape(e->annot);
      break;
    case Expr::Tag::App: {
      out.tag = EExpr::Tag::App;
      out.fn = erase_term(e->fn);
      for (auto& a : e->args) out.args.push_back(erase_term(a));
      const TypePtr& ft = e->fn->annot;
      if (!ft || ft->tag != Type::Tag::Arr || ft->body->tag != Type::Tag::Fun)
        throw std::invalid_argument("erase: function position lacks a function type");
      for (auto& in : ft->body->inputs) out.cells.push_back(erase_type(in));
      out.tag_shape = annotation_shape(e->annot);
      break;
    }
    case Expr::Tag::TApp:
      out.tag = EExpr::Tag::IApp;
      out.fn = erase_term(e->fn);
      for (auto& t : e->types) out.indices.push_back(erase_type(t));
      out.tag_shape = annotation_shape(e->annot);
      break;
    case Expr::Tag::IApp:
      out.tag = EExpr::Tag::IApp;
      out.fn = erase_term(e->fn);
      out.indices = e->indices;
      out.tag_shape = annotation_shape(e->annot);
      break;
    case Expr::Tag::Unbox:
      out.tag = EExpr::Tag::Unbox;
      out.ivars = e->ivars;
      out.name = e->name;
      out.fn = erase_term(e->fn);
      out.body = erase_term(e->body);
      out.tag_shape = annotation_shape(e->body->annot);
      break;
  }
  return make(std::move(out));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string dims_text(const std::vector<std::uint64_t>& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? " " : "") + std::to_string(dims[i]);
  return s + ")";
}

std::string names_text(const std::vector<std::string>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i];
  return s + ")";
}

}  // namespace

std::string print(const EAtomPtr& a) {
  switch (a->tag) {
    case EAtom::Tag::Base:
      return print(a->base);
    case EAtom::Tag::Prim:
      return a->prim;
    case EAtom::Tag::Lam:
      return "(lam " + names_text(a->params) + " " + print(a->body) + ")";
    case EAtom::Tag::ILam:
      return "(ilam " + names_text(a->params) + " " + print(a->body) + ")";
    case EAtom::Tag::Box: {
      std::string s = "(box (";
      for (std::size_t i = 0; i < a->indices.size(); ++i) s += (i ? " " : "") + print(a->indices[i]);
      return s + ") " + print(a->body) + ")";
    }
  }
  return "?";
}

std::string print(const EExprPtr& e) {
  switch (e->tag) {
    case EExpr::Tag::Var:
      return e->name;
    case EExpr::Tag::Array: {
      std::string s = "(array " + dims_text(e->dims);
      for (auto& a : e->atoms) s += " " + print(a);
      return s + ")";
    }
    case EExpr::Tag::Frame: {
      std::string s = "(frame " + dims_text(e->dims) + " " + print(e->tag_shape);
      for (auto& c : e->args) s += " " + print(c);
      return s + ")";
    }
    case EExpr::Tag::App: {
      std::string s = "(" + print(e->fn);
      for (std::size_t i = 0; i < e->args.size(); ++i) s += " (" + print(e->args[i]) + " " + print(e->cells[i]) + ")";
      return s + " " + print(e->tag_shape) + ")";
    }
    case EExpr::Tag::IApp: {
      std::string s = "(i-app " + print(e->fn);
      for (auto& i : e->indices) s += " " + print(i);
      return s + " " + print(e->tag_shape) + ")";
    }
    case EExpr::Tag::Unbox: {
      std::string s = "(unbox (";
      for (auto& x : e->ivars) s += x + " ";
      return s + e->name + " " + print(e->fn) + ") " + print(e->body) + " " + print(e->tag_shape) + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Free names, substitution, renaming

namespace {

void free_in(const EExprPtr& e, std::set<std::string> bt, std::set<std::string> bi, FreeNames& out);

void free_index(const IndexPtr& i, const std::set<std::string>& bi, FreeNames& out) {
  FreeNames f;
  collect_free(i, f);
  for (auto& x : f.indices)
    if (!bi.count(x)) out.indices.insert(x);
}

void free_in(const EAtomPtr& a, const std::set<std::string>& bt, const std::set<std::string>& bi, FreeNames& out) {
  switch (a->tag) {
    case EAtom::Tag::Base:
    case EAtom::Tag::Prim:
      return;
    case EAtom::Tag::Lam: {
      auto t = bt;
      t.insert(a->params.begin(), a->params.end());
      free_in(a->body, t, bi, out);
      return;
    }
    case EAtom::Tag::ILam: {
      auto i = bi;
      i.insert(a->params.begin(), a->params.end());
      free_in(a->body, bt, i, out);
      return;
    }
    case EAtom::Tag::Box:
      for (auto& i : a->indices) free_index(i, bi, out);
      free_in(a->body, bt, bi, out);
      return;
  }
}

void free_in(const EExprPtr& e, std::set<std::string> bt, std::set<std::string> bi, FreeNames& out) {
  if (e->tag_shape) free_index(e->tag_shape, bi, out);
  for (auto& i : e->cells) free_index(i, bi, out);
  for (auto& i : e->indices) free_index(i, bi, out);
  for (auto& a : e->atoms) free_in(a, bt, bi, out);
  for (auto& c : e->args) free_in(c, bt, bi, out);
  if (e->tag == EExpr::Tag::Var && !bt.count(e->name)) out.terms.insert(e->name);
  if (e->fn) free_in(e->fn, bt, bi, out);
  if (e->tag == EExpr::Tag::Unbox) {
    bt.insert(e->name);
    bi.insert(e->ivars.begin(), e->ivars.end());
    free_in(e->body, bt, bi, out);
  }
}

struct Substituter {
  std::set<std::string> avoid;

  std::vector<IndexPtr> indices(const std::vector<IndexPtr>& xs, const ESubst& s) {
    std::vector<IndexPtr> out;
    for (auto& i : xs) out.push_back(substitute(i, s.indices));
    return out;
  }

  // Removes shadowed entries and renames binders that would capture.
  std::vector<std::string> bind(const std::vector<std::string>& names, bool index_names, ESubst& s) {
    std::vector<std::string> out;
    for (auto& x : names) {
      if (index_names)
        s.indices.erase(x);
      else
        s.terms.erase(x);
      if (avoid.count(x)) {
        std::string y = fresh_name(x);
        if (index_names) {
          s.indices[x] = ivar(y);
        } else {
          EExpr v;
          v.name = y;
          s.terms[x] = make(std::move(v));
        }
        out.push_back(y);
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

  EAtomPtr atom(const EAtomPtr& a, const ESubst& s) {
    EAtom out = *a;
    switch (a->tag) {
      case EAtom::Tag::Base:
      case EAtom::Tag::Prim:
        return a;
      case EAtom::Tag::Lam:
      case EAtom::Tag::ILam: {
        ESubst inner = s;
        out.params = bind(a->params, a->tag == EAtom::Tag::ILam, inner);
        out.body = expr(a->body, inner);
        break;
      }
      case EAtom::Tag::Box:
        out.indices = indices(a->indices, s);
        out.body = expr(a->body, s);
        break;
    }
    return make(std::move(out));
  }

  EExprPtr expr(const EExprPtr& e, const ESubst& s) {
    if (e->tag == EExpr::Tag::Var) {
      auto it = s.terms.find(e->name);
      return it == s.terms.end() ? e : it->second;
    }
    EExpr out = *e;
    if (e->tag_shape) out.tag_shape = substitute(e->tag_shape, s.indices);
    out.cells = indices(e->cells, s);
    out.indices = indices(e->indices, s);
    for (auto& a : out.atoms) a = atom(a, s);
    for (auto& c : out.args) c = expr(c, s);
    if (e->fn) out.fn = expr(e->fn, s);
    if (e->tag == EExpr::Tag::Unbox) {
      ESubst inner = s;
      out.ivars = bind(e->ivars, true, inner);
      out.name = bind({e->name}, false, inner).front();
      out.body = expr(e->body, inner);
    }
    return make(std::move(out));
  }
};

struct Renamer {
  NameSupply& names;
  using Env = std::map<std::string, std::string>;

  static std::string lookup(const Env& m, const std::string& x) {
    auto it = m.find(x);
    return it == m.end() ? x : it->second;
  }

  IndexPtr index(const IndexPtr& i, const Env& ie) {
    std::map<std::string, IndexPtr> s;
    for (auto& [x, y] : ie) s[x] = ivar(y);
    return substitute(i, s);
  }

  std::vector<std::string> bind(const std::vector<std::string>& xs, Env& env) {
    std::vector<std::string> out;
    for (auto& x : xs) {
      out.push_back(names.fresh(x));
      env[x] = out.back();
    }
    return out;
  }

  EAtomPtr atom(const EAtomPtr& a, const Env& te, const Env& ie) {
    EAtom out = *a;
    if (a->tag == EAtom::Tag::Lam) {
      Env t = te;
      out.params = bind(a->params, t);
      out.body = expr(a->body, t, ie);
    } else if (a->tag == EAtom::Tag::ILam) {
      Env i = ie;
      out.params = bind(a->params, i);
      out.body = expr(a->body, te, i);
    } else if (a->tag == EAtom::Tag::Box) {
      for (auto& x : out.indices) x = index(x, ie);
      out.body = expr(a->body, te, ie);
    } else {
      return a;
    }
    return make(std::move(out));
  }

  EExprPtr expr(const EExprPtr& e, const Env& te, const Env& ie) {
    EExpr out = *e;
    if (e->tag == EExpr::Tag::Var) out.name = lookup(te, e->name);
    if (e->tag_shape) out.tag_shape = index(e->tag_shape, ie);
    for (auto& x : out.cells) x = index(x, ie);
    for (auto& x : out.indices) x = index(x, ie);
    for (auto& a : out.atoms) a = atom(a, te, ie);
    for (auto& c : out.args) c = expr(c, te, ie);
    if (e->fn) out.fn = expr(e->fn, te, ie);
    if (e->tag == EExpr::Tag::Unbox) {
      Env t = te, i = ie;
      out.ivars = bind(e->ivars, i);
      out.name = bind({e->name}, t).front();
      out.body = expr(e->body, t, i);
    }
    return make(std::move(out));
  }
};

bool same_index(const IndexPtr& a, const IndexPtr& b) {
  if (!a || !b) return !a && !b;
  try {
    return indices_equal(a, b);
  } catch (const SortError&) {
    return false;
  }
}

bool same_indices(const std::vector<IndexPtr>& a, const std::vector<IndexPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_index(a[i], b[i])) return false;
  return true;
}

bool same_atom(const EAtomPtr& a, const EAtomPtr& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case EAtom::Tag::Base:
      return a->base == b->base;
    case EAtom::Tag::Prim:
      return a->prim == b->prim;
    case EAtom::Tag::Lam:
    case EAtom::Tag::ILam:
      return a->params == b->params && erased_same(a->body, b->body);
    case EAtom::Tag::Box:
      return same_indices(a->indices, b->indices) && erased_same(a->body, b->body);
  }
  return false;
}

}  // namespace

EExprPtr substitute(const EExprPtr& e, const ESubst& s) {
  if (s.terms.empty() && s.indices.empty()) return e;
  Substituter sub;
  FreeNames f;
  for (auto& [x, r] : s.terms) free_in(r, {}, {}, f);
  for (auto& [x, r] : s.indices) collect_free(r, f);
  sub.avoid.insert(f.terms.begin(), f.terms.end());
  sub.avoid.insert(f.indices.begin(), f.indices.end());
  return sub.expr(e, s);
}

EExprPtr freshen(const EExprPtr& e, NameSupply& names) {
  Renamer r{names};
  return r.expr(e, {}, {});
}

bool erased_same(const EExprPtr& a, const EExprPtr& b) {
  if (a->tag != b->tag || a->name != b->name || a->dims != b->dims || a->ivars != b->ivars) return false;
  if (!same_index(a->tag_shape, b->tag_shape) || !same_indices(a->cells, b->cells) ||
      !same_indices(a->indices, b->indices))
    return false;
  if (a->atoms.size() != b->atoms.size() || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->atoms.size(); ++i)
    if (!same_atom(a->atoms[i], b->atoms[i])) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!erased_same(a->args[i], b->args[i])) return false;
  if (!a->fn != !b->fn || (a->fn && !erased_same(a->fn, b->fn))) return false;
  if (!a->body != !b->body || (a->body && !erased_same(a->body, b->body))) return false;
  return true;
}

bool erased_alpha_equal(const EExprPtr& a, const EExprPtr& b) {
  NameSupply na("%"), nb("%");
  return erased_same(freshen(a, na), freshen(b, nb));
}

bool is_value(const EExprPtr& e) {
  if (e->tag != EExpr::Tag::Array) return false;
  for (auto& a : e->atoms)
    if (a->tag == EAtom::Tag::Box && !is_value(a->body)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Erased machine

namespace {

using Dims = std::vector<std::uint64_t>;
using Status = StepResult::Status;

EStepResult advanced(EExprPtr t, Rule r) {
  EStepResult s;
  s.status = Status::Stepped;
  s.term = std::move(t);
  s.rule = r;
  return s;
}

EStepResult stuck(StuckReason why, std::string detail) {
  EStepResult s;
  s.status = Status::Stuck;
  s.reason = why;
  s.detail = std::move(detail);
  return s;
}

EStepResult internal(const std::string& what) { return stuck(StuckReason::Internal, what); }

std::optional<Dims> tag_dims(const IndexPtr& tag) {
  try {
    return concrete_dims(canonicalize_shape(tag));
  } catch (const SortError&) {
    return std::nullopt;
  }
}

// The part of a concrete-able result shape that follows the frame `p`.
std::optional<CanonicalShape> after_prefix(const IndexPtr& tag, const Dims& p) {
  try {
    return prefix_subtract(canonicalize_shape(tag), concrete_shape(p));
  } catch (const SortError&) {
    return std::nullopt;
  }
}

std::vector<EAtomPtr> replicate(const std::vector<EAtomPtr>& atoms, std::uint64_t cell, std::uint64_t times) {
  if (cell == 0) return {};
  return concat_list(rep_list(times, split_list(cell, atoms)));
}

EStepResult apply(const EExprPtr& e) {
  const EExprPtr& fn = e->fn;
  if (e->cells.size() != e->args.size()) return internal("cell tags disagree with argument count");

  std::vector<Dims> cell_dims, frames;
  for (std::size_t k = 0; k < e->args.size(); ++k) {
    auto cd = tag_dims(e->cells[k]);
    const Dims& ad = e->args[k]->dims;
    if (!cd || cd->size() > ad.size() || !std::equal(cd->begin(), cd->end(), ad.end() - static_cast<std::ptrdiff_t>(cd->size())))
      return internal("argument does not end in its cell shape");
    cell_dims.push_back(*cd);
    frames.emplace_back(ad.begin(), ad.end() - static_cast<std::ptrdiff_t>(cd->size()));
  }
  Dims principal = fn->dims;
  for (auto& f : frames)
    if (f.size() > principal.size()) principal = f;
  auto prefix_of_principal = [&](const Dims& f) {
    return std::equal(f.begin(), f.end(), principal.begin());
  };
  if (!prefix_of_principal(fn->dims)) return internal("incompatible frames");
  bool uniform = fn->dims == principal;
  for (auto& f : frames) {
    if (!prefix_of_principal(f)) return internal("incompatible frames");
    uniform = uniform && f == principal;
  }

  auto tail_count = [&](std::size_t own) {
    return element_count(Dims(principal.begin() + static_cast<std::ptrdiff_t>(own), principal.end()));
  };

  if (!uniform) {
    EExpr out = *e;
    out.fn = e_array(principal, replicate(fn->atoms, 1, tail_count(fn->dims.size())));
    for (std::size_t k = 0; k < e->args.size(); ++k) {
      Dims d = principal;
      d.insert(d.end(), cell_dims[k].begin(), cell_dims[k].end());
      out.args[k] = e_array(d, replicate(e->args[k]->atoms, element_count(cell_dims[k]), tail_count(frames[k].size())));
    }
    return advanced(make(std::move(out)), Rule::Lift);
  }

  if (!principal.empty()) {
    auto rest = after_prefix(e->tag_shape, principal);
    if (!rest) return internal("result tag does not start with the principal frame");
    IndexPtr inner = to_index(*rest);
    std::uint64_t n = element_count(principal);
    std::vector<std::vector<std::vector<EAtomPtr>>> columns;
    for (std::size_t k = 0; k < e->args.size(); ++k) {
      std::uint64_t cs = element_count(cell_dims[k]);
      columns.push_back(cs == 0 ? std::vector<std::vector<EAtomPtr>>(n) : split_list(cs, e->args[k]->atoms));
    }
    std::vector<EExprPtr> apps;
    for (std::uint64_t j = 0; j < n; ++j) {
      std::vector<EExprPtr> args;
      for (std::size_t k = 0; k < e->args.size(); ++k) args.push_back(e_array(cell_dims[k], columns[k][j]));
      apps.push_back(e_app(e_array({}, {fn->atoms[j]}), std::move(args), e->cells, inner));
    }
    return advanced(e_frame(principal, std::move(apps), e->tag_shape), Rule::Map);
  }

  const EAtomPtr& f = fn->atoms.at(0);
  if (f->tag == EAtom::Tag::Lam) {
    if (f->params.size() != e->args.size()) return internal("arity mismatch");
    ESubst s;
    for (std::size_t k = 0; k < f->params.size(); ++k) s.terms[f->params[k]] = e->args[k];
    return advanced(substitute(f->body, s), Rule::Beta);
  }
  if (f->tag != EAtom::Tag::Prim) return internal("applying a non-function atom");

  std::vector<PrimArray<EAtomPtr>> in;
  for (auto& a : e->args) in.push_back({a->dims, a->atoms});
  Dims rdims = tag_dims(e->tag_shape).value_or(Dims{});
  auto base_of = [](const EAtomPtr& a) -> const BaseVal* { return a->tag == EAtom::Tag::Base ? &a->base : nullptr; };
  auto mk = [](BaseVal v) {
    EAtom a;
    a.base = v;
    return make(std::move(a));
  };
  auto r = delta_kernel<EAtomPtr>(f->prim, in, rdims, base_of, mk);
  if (std::holds_alternative<DeltaMisapplied>(r)) return stuck(StuckReason::Misapplied, f->prim);
  if (auto* p = std::get_if<PrimArray<EAtomPtr>>(&r)) return advanced(e_array(p->dims, p->atoms), Rule::Delta);
  if (auto* b = std::get_if<DeltaBox<EAtomPtr>>(&r)) {
    EAtom box;
    box.tag = EAtom::Tag::Box;
    box.indices = b->indices;
    box.body = e_array(b->payload.dims, b->payload.atoms);
    return advanced(e_array({}, {make(std::move(box))}), Rule::Delta);
  }
  auto& fold = std::get<DeltaFold<EAtomPtr>>(r);
  const IndexPtr& c = e->tag_shape;
  EExprPtr acc = e_array(fold.cells.back().dims, fold.cells.back().atoms);
  for (std::size_t i = fold.cells.size() - 1; i-- > 0;)
    acc = e_app(e->args[0], {e_array(fold.cells[i].dims, fold.cells[i].atoms), acc}, {c, c}, c);
  return advanced(acc, Rule::Delta);
}

EStepResult instantiate(const EExprPtr& e) {
  std::vector<EExprPtr> cells;
  for (auto& a : e->fn->atoms) {
    if (a->tag == EAtom::Tag::Prim) {
      cells.push_back(e_array({}, {a}));
    } else if (a->tag == EAtom::Tag::ILam && a->params.size() == e->indices.size()) {
      ESubst s;
      for (std::size_t i = 0; i < a->params.size(); ++i) s.indices[a->params[i]] = e->indices[i];
      cells.push_back(substitute(a->body, s));
    } else {
      return internal("instantiating a non-abstraction atom");
    }
  }
  return advanced(e_frame(e->fn->dims, std::move(cells), e->tag_shape), Rule::IBeta);
}

EStepResult unbox(const EExprPtr& e) {
  const EExprPtr& boxes = e->fn;
  std::vector<EExprPtr> cells;
  for (auto& b : boxes->atoms) {
    if (b->tag != EAtom::Tag::Box || b->indices.size() != e->ivars.size()) return internal("unboxing a non-box atom");
    ESubst s;
    for (std::size_t i = 0; i < e->ivars.size(); ++i) s.indices[e->ivars[i]] = b->indices[i];
    s.terms[e->name] = b->body;
    cells.push_back(substitute(e->body, s));
  }
  return advanced(e_frame(boxes->dims, std::move(cells), iappend({ishape_of(boxes->dims), e->tag_shape})), Rule::Unbox);
}

EStepResult collapse(const EExprPtr& e) {
  Dims dims = e->dims;
  std::vector<EAtomPtr> atoms;
  if (e->args.empty()) {
    auto rest = after_prefix(e->tag_shape, e->dims);
    auto cd = rest ? concrete_dims(*rest) : std::nullopt;
    if (!cd) return internal("empty frame tag does not determine the cell shape");
    dims.insert(dims.end(), cd->begin(), cd->end());
  } else {
    const Dims& cd = e->args[0]->dims;
    for (auto& c : e->args) {
      if (c->dims != cd) return internal("ragged frame");
      atoms.insert(atoms.end(), c->atoms.begin(), c->atoms.end());
    }
    dims.insert(dims.end(), cd.begin(), cd.end());
  }
  return advanced(e_array(std::move(dims), std::move(atoms)), Rule::Collapse);
}

// Steps child `c` in place; returns nullopt when it is already a value.
template <class Rebuild>
std::optional<EStepResult> inside(const EExprPtr& c, Rebuild rebuild) {
  EStepResult r = erased_step(c);
  if (r.status == Status::Value) return std::nullopt;
  if (r.status == Status::Stepped) r.term = rebuild(r.term);
  return r;
}

}  // namespace

EStepResult erased_step(const EExprPtr& e) {
  switch (e->tag) {
    case EExpr::Tag::Array:
      for (std::size_t i = 0; i < e->atoms.size(); ++i) {
        if (e->atoms[i]->tag != EAtom::Tag::Box) continue;
        auto r = inside(e->atoms[i]->body, [&](EExprPtr t) {
          EAtom box = *e->atoms[i];
          box.body = std::move(t);
          EExpr out = *e;
          out.atoms[i] = make(std::move(box));
          return make(std::move(out));
        });
        if (r) return *r;
      }
      return {};
    case EExpr::Tag::Frame:
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        auto r = inside(e->args[i], [&](EExprPtr t) {
          EExpr out = *e;
          out.args[i] = std::move(t);
          return make(std::move(out));
        });
        if (r) return *r;
      }
      return collapse(e);
    case EExpr::Tag::App:
    case EExpr::Tag::IApp:
    case EExpr::Tag::Unbox: {
      auto r = inside(e->fn, [&](EExprPtr t) {
        EExpr out = *e;
        out.fn = std::move(t);
        return make(std::move(out));
      });
      if (r) return *r;
      if (e->tag == EExpr::Tag::IApp) return instantiate(e);
      if (e->tag == EExpr::Tag::Unbox) return unbox(e);
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        r = inside(e->args[i], [&](EExprPtr t) {
          EExpr out = *e;
          out.args[i] = std::move(t);
          return make(std::move(out));
        });
        if (r) return *r;
      }
      return apply(e);
    }
    case EExpr::Tag::Var:
      return internal("free variable " + e->name);
  }
  return internal("unknown form");
}

EEvalResult erased_evaluate(const EExprPtr& e, std::size_t fuel) {
  EEvalResult out;
  out.term = e;
  for (;;) {
    EStepResult r = erased_step(out.term);
    if (r.status == Status::Value) {
      out.status = EvalResult::Status::Value;
      return out;
    }
    if (r.status == Status::Stuck) {
      out.status = EvalResult::Status::Stuck;
      out.reason = r.reason;
      out.detail = r.detail;
      return out;
    }
    if (out.steps == fuel) {
      out.status = EvalResult::Status::OutOfFuel;
      return out;
    }
    ++out.steps;
    out.term = r.term;
  }
}

// ---------------------------------------------------------------------------
// Lockstep harness

const char* to_string(BisimReport::Outcome o) {
  switch (o) {
    case BisimReport::Outcome::BothValue:
      return "both-value";
    case BisimReport::Outcome::BothStuck:
      return "both-stuck";
    case BisimReport::Outcome::Diverged:
      return "diverged";
    case BisimReport::Outcome::Mismatch:
      return "mismatch";
  }
  return "?";
}

BisimReport bisim_run(const ExprPtr& elaborated, std::size_t fuel, bool trace) {
  BisimReport rep;
  ExprPtr t = elaborated;
  EExprPtr u = erase_term(t);
  auto mismatch = [&](std::string why) {
    rep.outcome = BisimReport::Outcome::Mismatch;
    rep.mismatch_step = rep.steps;
    rep.typed = t;
    rep.erased = u;
    rep.detail = std::move(why);
    return rep;
  };
  if (!erased_alpha_equal(erase_term(t), u)) return mismatch("initial states differ");
  for (;;) {
    StepResult a = step(t);
    EStepResult b = erased_step(u);
    if (a.status != b.status) {
      auto name = [](Status s) { return s == Status::Value ? "value" : s == Status::Stuck ? "stuck" : "stepped"; };
      return mismatch(std::string("typed is ") + name(a.status) + ", erased is " + name(b.status));
    }
    if (a.status == Status::Value) {
      rep.outcome = BisimReport::Outcome::BothValue;
      rep.typed = t;
      rep.erased = u;
      return rep;
    }
    if (a.status == Status::Stuck) {
      if (a.reason != b.reason) return mismatch("stuck for different reasons: " + a.detail + " / " + b.detail);
      rep.outcome = BisimReport::Outcome::BothStuck;
      rep.typed = t;
      rep.erased = u;
      rep.detail = a.detail;
      return rep;
    }
    if (rep.steps == fuel) {
      rep.outcome = BisimReport::Outcome::Diverged;
      rep.typed = t;
      rep.erased = u;
      return rep;
    }
    ++rep.steps;
    t = a.term;
    u = b.term;
    if (trace) rep.trace.push_back({a.rule, b.rule, t, u});
    if (!erased_alpha_equal(erase_term(t), u)) return mismatch("states differ after a step");
  }
}

}  // namespace remora
