#include "remora/types.hpp"

#include <algorithm>

#include "remora/index.hpp"

namespace remora {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnboundVar:
      return "UnboundVar";
    case ErrorKind::SortMismatch:
      return "SortMismatch";
    case ErrorKind::KindMismatch:
      return "KindMismatch";
    case ErrorKind::FrameIncompatible:
      return "FrameIncompatible";
    case ErrorKind::CellMismatch:
      return "CellMismatch";
    case ErrorKind::LengthMismatch:
      return "LengthMismatch";
    case ErrorKind::EscapingIndexVar:
      return "EscapingIndexVar";
    case ErrorKind::NotAFunction:
      return "NotAFunction";
    case ErrorKind::NotABox:
      return "NotABox";
    case ErrorKind::AnnotationMismatch:
      return "AnnotationMismatch";
  }
  return "?";
}

TypeError::TypeError(ErrorKind k, SourceLocation l, std::string d)
    : std::runtime_error(to_string(l) + ": " + to_string(k) + ": " + d), kind(k), loc(std::move(l)),
      detail(std::move(d)) {}

[[noreturn]] static void fail(ErrorKind k, const SourceLocation& loc, const std::string& detail) {
  throw TypeError(k, loc, detail);
}

Sort sort_of(const Env& env, const IndexPtr& i, const SourceLocation& loc) {
  switch (i->tag) {
    case Index::Tag::Nat:
      return Sort::Dim;
    case Index::Tag::Var: {
      auto it = env.sorts.find(i->name);
      if (it == env.sorts.end()) fail(ErrorKind::UnboundVar, loc, "unbound index variable " + i->name);
      return it->second;
    }
    case Index::Tag::Plus:
    case Index::Tag::Shape:
      for (auto& a : i->args)
        if (sort_of(env, a, loc) != Sort::Dim)
          fail(ErrorKind::SortMismatch, loc, "expected Dim, got Shape " + print(a) + " in " + print(i));
      return i->tag == Index::Tag::Plus ? Sort::Dim : Sort::Shape;
    case Index::Tag::Append:
      for (auto& a : i->args)
        if (sort_of(env, a, loc) != Sort::Shape)
          fail(ErrorKind::SortMismatch, loc, "expected Shape, got Dim " + print(a) + " in " + print(i));
      return Sort::Shape;
  }
  return Sort::Dim;
}

static void expect_kind(const Env& env, const TypePtr& t, Kind k, const SourceLocation& loc, const char* what) {
  if (kind_of(env, t, loc) != k)
    fail(ErrorKind::KindMismatch, loc,
         std::string(what) + " " + print(t) + " must have kind " + to_string(k));
}

Kind kind_of(const Env& env, const TypePtr& t, const SourceLocation& loc) {
  switch (t->tag) {
    case Type::Tag::Base:
      if (t->name != "Num" && t->name != "Bool" && t->name != "Char")
        fail(ErrorKind::UnboundVar, loc, "unknown base type " + t->name);
      return Kind::Atom;
    case Type::Tag::Var: {
      auto it = env.kinds.find(t->name);
      if (it == env.kinds.end()) fail(ErrorKind::UnboundVar, loc, "unbound type variable " + t->name);
      return it->second;
    }
    case Type::Tag::Fun:
      for (auto& x : t->inputs) expect_kind(env, x, Kind::Array, loc, "function input");
      expect_kind(env, t->body, Kind::Array, loc, "function output");
      return Kind::Atom;
    case Type::Tag::Arr:
      expect_kind(env, t->body, Kind::Atom, loc, "array element type");
      if (sort_of(env, t->shape, loc) != Sort::Shape)
        fail(ErrorKind::SortMismatch, loc, "array shape " + print(t->shape) + " must have sort Shape");
      return Kind::Array;
    case Type::Tag::Forall: {
      Env inner = env;
      for (auto& [x, k] : t->tvars) inner.kinds[x] = k;
      expect_kind(inner, t->body, Kind::Array, loc, "Forall body");
      return Kind::Atom;
    }
    case Type::Tag::Pi:
    case Type::Tag::Sigma: {
      Env inner = env;
      for (auto& [x, s] : t->ivars) inner.sorts[x] = s;
      expect_kind(inner, t->body, Kind::Array, loc, t->tag == Type::Tag::Pi ? "Pi body" : "Sigma body");
      return Kind::Atom;
    }
  }
  return Kind::Atom;
}

bool types_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag) return false;
  switch (a->tag) {
    case Type::Tag::Base:
    case Type::Tag::Var:
      return a->name == b->name;
    case Type::Tag::Fun:
      if (a->inputs.size() != b->inputs.size()) return false;
      for (std::size_t i = 0; i < a->inputs.size(); ++i)
        if (!types_equal(a->inputs[i], b->inputs[i])) return false;
      return types_equal(a->body, b->body);
    case Type::Tag::Arr:
      if (!types_equal(a->body, b->body)) return false;
      try {
        return indices_equal(a->shape, b->shape);
      } catch (const SortError&) {
        return false;
      }
    case Type::Tag::Forall: {
      if (a->tvars.size() != b->tvars.size()) return false;
      Subst sa, sb;
      for (std::size_t i = 0; i < a->tvars.size(); ++i) {
        if (a->tvars[i].second != b->tvars[i].second) return false;
        auto f = tvar(fresh_name("%t"));
        sa.types[a->tvars[i].first] = f;
        sb.types[b->tvars[i].first] = f;
      }
      return types_equal(substitute(a->body, sa), substitute(b->body, sb));
    }
    case Type::Tag::Pi:
    case Type::Tag::Sigma: {
      if (a->ivars.size() != b->ivars.size()) return false;
      Subst sa, sb;
      for (std::size_t i = 0; i < a->ivars.size(); ++i) {
        if (a->ivars[i].second != b->ivars[i].second) return false;
        auto f = ivar(fresh_name("%i"));
        sa.indices[a->ivars[i].first] = f;
        sb.indices[b->ivars[i].first] = f;
      }
      return types_equal(substitute(a->body, sa), substitute(b->body, sb));
    }
  }
  return false;
}

void check_env(const Env& env) {
  for (auto& [x, t] : env.types)
    if (kind_of(env, t) != Kind::Array)
      fail(ErrorKind::KindMismatch, {}, "binding " + x + " : " + print(t) + " must have kind Array");
}

namespace {

CanonicalShape canon(const IndexPtr& i, const SourceLocation& loc) {
  try {
    return canonicalize_shape(i);
  } catch (const SortError& e) {
    fail(ErrorKind::SortMismatch, loc, e.what());
  }
}

bool has_zero(const std::vector<std::uint64_t>& dims) {
  return std::find(dims.begin(), dims.end(), 0) != dims.end();
}

// Arr elem (++ frame shape), or the plain type when the frame is scalar
// and the type is not an Arr (an Array-kinded type variable).
TypePtr prepend_frame(const IndexPtr& frame, const TypePtr& t, const SourceLocation& loc) {
  if (t->tag == Type::Tag::Arr) return tarr(t->body, normalize_index(iappend({frame, t->shape})));
  if (canon(frame, loc).components.empty()) return t;
  fail(ErrorKind::KindMismatch, loc, "cannot lift " + print(t) + " over frame " + print(frame));
}

class Elaborator {
 public:
  explicit Elaborator(const Signature& sig) : sig_(sig) {}

  // A written or previously inferred annotation must agree with the type
  // synthesized for the node.
  Elaborated expr(const Env& env, const ExprPtr& e) {
    Elaborated r = synth(env, e);
    if (e->annot && r.type != e->annot) {
      expect_kind(env, e->annot, Kind::Array, e->loc, "annotation");
      if (!types_equal(r.type, e->annot))
        fail(ErrorKind::AnnotationMismatch, e->loc,
             "expression of type " + print(r.type) + " annotated as " + print(e->annot));
    }
    return r;
  }

  Elaborated synth(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    switch (e->tag) {
      case Expr::Tag::Var: {
        auto it = env.types.find(e->name);
        if (it == env.types.end()) fail(ErrorKind::UnboundVar, loc, "unbound variable " + e->name);
        return done(e, it->second);
      }
      case Expr::Tag::Array:
        return array(env, e);
      case Expr::Tag::Frame:
        return frame(env, e);
      case Expr::Tag::EmptyArray: {
        if (!has_zero(e->dims)) fail(ErrorKind::LengthMismatch, loc, "empty-array dimensions must include 0");
        expect_kind(env, e->elem, Kind::Atom, loc, "empty-array element type");
        auto t = tarr(e->elem, ishape_of(e->dims));
        return {with_annot(earray(e->dims, {}, loc), t), t};
      }
      case Expr::Tag::EmptyFrame: {
        if (!has_zero(e->dims)) fail(ErrorKind::LengthMismatch, loc, "empty-frame dimensions must include 0");
        expect_kind(env, e->elem, Kind::Array, loc, "empty-frame cell type");
        auto t = prepend_frame(ishape_of(e->dims), e->elem, loc);
        return {with_annot(eframe(e->dims, {}, loc), t), t};
      }
      case Expr::Tag::App:
        return app(env, e);
      case Expr::Tag::TApp:
        return tapp(env, e);
      case Expr::Tag::IApp:
        return iapp(env, e);
      case Expr::Tag::Unbox:
        return unbox(env, e);
    }
    fail(ErrorKind::AnnotationMismatch, loc, "unknown expression form");
  }

  std::pair<AtomPtr, TypePtr> atom(const Env& env, const AtomPtr& a) {
    const auto& loc = a->loc;
    switch (a->tag) {
      case Atom::Tag::Base:
        return {a, tbase(a->base.tag == BaseVal::Tag::Num    ? "Num"
                         : a->base.tag == BaseVal::Tag::Bool ? "Bool"
                                                             : "Char")};
      case Atom::Tag::Prim: {
        auto it = sig_.find(a->prim);
        if (it == sig_.end()) fail(ErrorKind::UnboundVar, loc, "unknown primitive " + a->prim);
        return {a, instantiated(env, it->second, a)};
      }
      case Atom::Tag::Lam: {
        Env inner = env;
        std::vector<TypePtr> ins;
        for (auto& [x, t] : a->params) {
          expect_kind(env, t, Kind::Array, loc, "parameter type");
          inner.types[x] = t;
          ins.push_back(t);
        }
        auto body = expr(inner, a->body);
        return {alam(a->params, body.term, loc), tfun(std::move(ins), body.type)};
      }
      case Atom::Tag::TLam: {
        Env inner = env;
        for (auto& [x, k] : a->tvars) inner.kinds[x] = k;
        auto body = expr(inner, a->body);
        return {atlam(a->tvars, body.term, loc), tforall(a->tvars, body.type)};
      }
      case Atom::Tag::ILam: {
        Env inner = env;
        for (auto& [x, s] : a->ivars) inner.sorts[x] = s;
        auto body = expr(inner, a->body);
        return {ailam(a->ivars, body.term, loc), tpi(a->ivars, body.type)};
      }
      case Atom::Tag::Box: {
        const TypePtr& sigma = a->annot;
        expect_kind(env, sigma, Kind::Atom, loc, "box annotation");
        if (sigma->tag != Type::Tag::Sigma)
          fail(ErrorKind::AnnotationMismatch, loc, "box annotation " + print(sigma) + " is not a Sigma type");
        if (sigma->ivars.size() != a->indices.size())
          fail(ErrorKind::LengthMismatch, loc, "box has " + std::to_string(a->indices.size()) +
                                                   " indices but its Sigma binds " +
                                                   std::to_string(sigma->ivars.size()));
        Subst s;
        for (std::size_t i = 0; i < a->indices.size(); ++i) {
          Sort got = sort_of(env, a->indices[i], loc);
          if (got != sigma->ivars[i].second)
            fail(ErrorKind::SortMismatch, loc, "box index " + print(a->indices[i]) + " has sort " + to_string(got) +
                                                   ", expected " + to_string(sigma->ivars[i].second));
          s.indices[sigma->ivars[i].first] = a->indices[i];
        }
        auto payload = expr(env, a->body);
        auto want = substitute(sigma->body, s);
        if (!types_equal(payload.type, want))
          fail(ErrorKind::AnnotationMismatch, loc,
               "box payload has type " + print(payload.type) + ", annotation requires " + print(want));
        return {abox(a->indices, payload.term, sigma, loc), sigma};
      }
    }
    fail(ErrorKind::AnnotationMismatch, loc, "unknown atom form");
  }

 private:
  const Signature& sig_;

  static Elaborated done(const ExprPtr& e, TypePtr t) { return {with_annot(e, t), t}; }

  Elaborated array(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    if (e->atoms.size() != element_count(e->dims))
      fail(ErrorKind::LengthMismatch, loc, "array literal has " + std::to_string(e->atoms.size()) +
                                               " atoms but its dimensions call for " +
                                               std::to_string(element_count(e->dims)));
    if (e->atoms.empty()) {
      // Only elaborated empty literals reach here; they carry their type.
      if (!e->annot || e->annot->tag != Type::Tag::Arr)
        fail(ErrorKind::AnnotationMismatch, loc, "an empty array literal needs a type; use empty-array");
      expect_kind(env, e->annot, Kind::Array, loc, "array annotation");
      if (!indices_equal(e->annot->shape, ishape_of(e->dims)))
        fail(ErrorKind::AnnotationMismatch, loc, "annotation " + print(e->annot) + " disagrees with dimensions");
      return {e, e->annot};
    }
    std::vector<AtomPtr> atoms;
    TypePtr elem;
    for (auto& a : e->atoms) {
      auto [a2, t] = atom(env, a);
      if (!elem) {
        elem = t;
      } else if (!types_equal(elem, t)) {
        fail(ErrorKind::CellMismatch, a->loc, "atom of type " + print(t) + " in an array of " + print(elem));
      }
      atoms.push_back(a2);
    }
    auto t = tarr(elem, ishape_of(e->dims));
    return {with_annot(earray(e->dims, std::move(atoms), loc), t), t};
  }

  Elaborated frame(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    if (e->args.size() != element_count(e->dims))
      fail(ErrorKind::LengthMismatch, loc, "frame has " + std::to_string(e->args.size()) +
                                               " cells but its dimensions call for " +
                                               std::to_string(element_count(e->dims)));
    if (e->args.empty()) {
      if (!e->annot || e->annot->tag != Type::Tag::Arr)
        fail(ErrorKind::AnnotationMismatch, loc, "an empty frame needs a type; use empty-frame");
      expect_kind(env, e->annot, Kind::Array, loc, "frame annotation");
      if (!prefix_subtract(canon(e->annot->shape, loc), concrete_shape(e->dims)))
        fail(ErrorKind::AnnotationMismatch, loc, "annotation " + print(e->annot) + " disagrees with frame dimensions");
      return {e, e->annot};
    }
    std::vector<ExprPtr> cells;
    TypePtr cell;
    for (auto& c : e->args) {
      auto r = expr(env, c);
      if (!cell) {
        cell = r.type;
      } else if (!types_equal(cell, r.type)) {
        fail(ErrorKind::CellMismatch, c->loc, "frame cell of type " + print(r.type) + " among cells of " + print(cell));
      }
      cells.push_back(r.term);
    }
    auto t = prepend_frame(ishape_of(e->dims), cell, loc);
    return {with_annot(eframe(e->dims, std::move(cells), loc), t), t};
  }

  Elaborated app(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    auto f = expr(env, e->fn);
    const TypePtr& ft = f.type;
    if (ft->tag != Type::Tag::Arr || ft->body->tag != Type::Tag::Fun)
      fail(ErrorKind::NotAFunction, e->fn->loc, "applying an expression of type " + print(ft));
    const TypePtr& fun = ft->body;
    if (fun->inputs.size() != e->args.size())
      fail(ErrorKind::LengthMismatch, loc, "function expects " + std::to_string(fun->inputs.size()) +
                                               " arguments, got " + std::to_string(e->args.size()));
    std::vector<CanonicalShape> frames{canon(ft->shape, loc)};
    std::vector<ExprPtr> args;
    for (std::size_t i = 0; i < e->args.size(); ++i) {
      auto a = expr(env, e->args[i]);
      const TypePtr& want = fun->inputs[i];
      const auto& aloc = e->args[i]->loc;
      if (want->tag != Type::Tag::Arr) {
        if (!types_equal(a.type, want))
          fail(ErrorKind::CellMismatch, aloc, "argument of type " + print(a.type) + " where " + print(want) + " expected");
        frames.push_back({});
      } else {
        if (a.type->tag != Type::Tag::Arr || !types_equal(a.type->body, want->body))
          fail(ErrorKind::CellMismatch, aloc, "argument of type " + print(a.type) + " where cells of " + print(want) +
                                                  " expected");
        auto fr = drop_suffix(canon(a.type->shape, aloc), canon(want->shape, aloc));
        if (!fr)
          fail(ErrorKind::CellMismatch, aloc, "argument shape " + print(a.type->shape) + " does not end in cell shape " +
                                                  print(want->shape));
        frames.push_back(*fr);
      }
      args.push_back(a.term);
    }
    auto joined = frame_join(frames);
    if (!joined) {
      std::string fs;
      for (auto& s : frames) fs += " " + print(s);
      fail(ErrorKind::FrameIncompatible, loc, "frames are not prefix-ordered:" + fs);
    }
    auto t = prepend_frame(to_index(*joined), fun->body, loc);
    auto out = eapp(f.term, std::move(args), loc);
    return done(out, t);
  }

  Elaborated tapp(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    auto f = expr(env, e->fn);
    const TypePtr& ft = f.type;
    if (ft->tag != Type::Tag::Arr || ft->body->tag != Type::Tag::Forall)
      fail(ErrorKind::NotAFunction, e->fn->loc, "type-applying an expression of type " + print(ft));
    const TypePtr& all = ft->body;
    if (all->tvars.size() != e->types.size())
      fail(ErrorKind::LengthMismatch, loc, "expected " + std::to_string(all->tvars.size()) + " type arguments, got " +
                                               std::to_string(e->types.size()));
    Subst s;
    for (std::size_t i = 0; i < e->types.size(); ++i) {
      Kind k = kind_of(env, e->types[i], loc);
      if (k != all->tvars[i].second)
        fail(ErrorKind::KindMismatch, loc, "type argument " + print(e->types[i]) + " has kind " + to_string(k) +
                                               ", expected " + to_string(all->tvars[i].second));
      s.types[all->tvars[i].first] = e->types[i];
    }
    auto t = prepend_frame(ft->shape, substitute(all->body, s), loc);
    return done(etapp(f.term, e->types, loc), t);
  }

  Elaborated iapp(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    auto f = expr(env, e->fn);
    const TypePtr& ft = f.type;
    if (ft->tag != Type::Tag::Arr || ft->body->tag != Type::Tag::Pi)
      fail(ErrorKind::NotAFunction, e->fn->loc, "index-applying an expression of type " + print(ft));
    const TypePtr& pi = ft->body;
    if (pi->ivars.size() != e->indices.size())
      fail(ErrorKind::LengthMismatch, loc, "expected " + std::to_string(pi->ivars.size()) + " index arguments, got " +
                                               std::to_string(e->indices.size()));
    Subst s;
    for (std::size_t i = 0; i < e->indices.size(); ++i) {
      Sort got = sort_of(env, e->indices[i], loc);
      if (got != pi->ivars[i].second)
        fail(ErrorKind::SortMismatch, loc, "index argument " + print(e->indices[i]) + " has sort " + to_string(got) +
                                               ", expected " + to_string(pi->ivars[i].second));
      s.indices[pi->ivars[i].first] = e->indices[i];
    }
    auto t = prepend_frame(ft->shape, substitute(pi->body, s), loc);
    return done(eiapp(f.term, e->indices, loc), t);
  }

  // A primitive already run through iβ/tβ carries its arguments; replay
  // them over the declared type to get the atom's current type.
  TypePtr instantiated(const Env& env, TypePtr t, const AtomPtr& a) {
    const auto& loc = a->loc;
    auto peel = [&](const TypePtr& body) {
      if (body->tag != Type::Tag::Arr || !indices_equal(body->shape, ishape({})))
        fail(ErrorKind::NotAFunction, loc, "primitive " + a->prim + " cannot be instantiated further");
      return body->body;
    };
    if (!a->indices.empty()) {
      if (t->tag != Type::Tag::Pi || t->ivars.size() != a->indices.size())
        fail(ErrorKind::NotAFunction, loc, "primitive " + a->prim + " does not take these index arguments");
      Subst s;
      for (std::size_t i = 0; i < a->indices.size(); ++i) {
        if (sort_of(env, a->indices[i], loc) != t->ivars[i].second)
          fail(ErrorKind::SortMismatch, loc, "index argument " + print(a->indices[i]) + " of " + a->prim);
        s.indices[t->ivars[i].first] = a->indices[i];
      }
      t = peel(substitute(t->body, s));
    }
    if (!a->types.empty()) {
      if (t->tag != Type::Tag::Forall || t->tvars.size() != a->types.size())
        fail(ErrorKind::NotAFunction, loc, "primitive " + a->prim + " does not take these type arguments");
      Subst s;
      for (std::size_t i = 0; i < a->types.size(); ++i) {
        if (kind_of(env, a->types[i], loc) != t->tvars[i].second)
          fail(ErrorKind::KindMismatch, loc, "type argument " + print(a->types[i]) + " of " + a->prim);
        s.types[t->tvars[i].first] = a->types[i];
      }
      t = peel(substitute(t->body, s));
    }
    return t;
  }

  Elaborated unbox(const Env& env, const ExprPtr& e) {
    const auto& loc = e->loc;
    auto b = expr(env, e->fn);
    const TypePtr& bt = b.type;
    if (bt->tag != Type::Tag::Arr || bt->body->tag != Type::Tag::Sigma)
      fail(ErrorKind::NotABox, e->fn->loc, "unboxing an expression of type " + print(bt));
    const TypePtr& sigma = bt->body;
    if (sigma->ivars.size() != e->ivars.size())
      fail(ErrorKind::LengthMismatch, loc, "box binds " + std::to_string(sigma->ivars.size()) +
                                               " indices, unbox names " + std::to_string(e->ivars.size()));
    Env inner = env;
    Subst s;
    for (std::size_t i = 0; i < e->ivars.size(); ++i) {
      inner.sorts[e->ivars[i]] = sigma->ivars[i].second;
      s.indices[sigma->ivars[i].first] = ivar(e->ivars[i]);
    }
    inner.types[e->name] = substitute(sigma->body, s);
    auto body = expr(inner, e->body);
    auto fv = free_index_vars(body.type);
    for (auto& x : e->ivars)
      if (fv.count(x))
        fail(ErrorKind::EscapingIndexVar, loc, "index variable " + x + " escapes in body type " + print(body.type));
    auto t = prepend_frame(bt->shape, body.type, loc);
    return done(eunbox(e->ivars, e->name, b.term, body.term, loc), t);
  }
};

}  // namespace

Elaborated elaborate(const Env& env, const Signature& sig, const ExprPtr& e) {
  return Elaborator(sig).expr(env, e);
}

TypePtr type_of_atom(const Env& env, const Signature& sig, const AtomPtr& a) {
  return Elaborator(sig).atom(env, a).second;
}

}  // namespace remora
