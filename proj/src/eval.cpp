#include "remora/eval.hpp"

#include "remora/index.hpp"
#include "remora/prims.hpp"

namespace remora {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Lift:
      return "lift";
    case Rule::Map:
      return "map";
    case Rule::Beta:
      return "beta";
    case Rule::Delta:
      return "delta";
    case Rule::TBeta:
      return "tbeta";
    case Rule::IBeta:
      return "ibeta";
    case Rule::Collapse:
      return "collapse";
    case Rule::Unbox:
      return "unbox";
  }
  return "?";
}

bool is_value(const ExprPtr& e) {
  if (e->tag != Expr::Tag::Array) return false;
  for (auto& a : e->atoms)
    if (a->tag == Atom::Tag::Box && !is_value(a->body)) return false;
  return true;
}

namespace {

using Dims = std::vector<std::uint64_t>;

StepResult stepped(ExprPtr t, Rule r) {
  StepResult s;
  s.status = StepResult::Status::Stepped;
  s.term = std::move(t);
  s.rule = r;
  return s;
}

StepResult value() { return {}; }

StepResult stuck(StuckReason why, std::string detail) {
  StepResult s;
  s.status = StepResult::Status::Stuck;
  s.reason = why;
  s.detail = std::move(detail);
  return s;
}

StepResult internal(const std::string& what) { return stuck(StuckReason::Internal, what); }

bool has_suffix(const Dims& whole, const Dims& suffix) {
  if (suffix.size() > whole.size()) return false;
  return std::equal(suffix.begin(), suffix.end(), whole.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

bool is_prefix(const Dims& p, const Dims& whole) {
  return p.size() <= whole.size() && std::equal(p.begin(), p.end(), whole.begin());
}

Dims concat_dims(const Dims& a, const Dims& b) {
  Dims c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

std::uint64_t product_after(const Dims& principal, std::size_t from) {
  return element_count(Dims(principal.begin() + static_cast<std::ptrdiff_t>(from), principal.end()));
}

// Cells of `count` pieces of `size` atoms each; size 0 gives empty cells.
std::vector<std::vector<AtomPtr>> cells_of(const std::vector<AtomPtr>& atoms, std::uint64_t size, std::uint64_t count) {
  if (size == 0) return std::vector<std::vector<AtomPtr>>(count);
  return split_list(size, atoms);
}

StepResult apply(const ExprPtr& e) {
  const ExprPtr& fn = e->fn;
  const TypePtr& ft = fn->annot;
  if (!ft || ft->tag != Type::Tag::Arr || ft->body->tag != Type::Tag::Fun) return internal("function lacks a function type");
  const TypePtr& fun = ft->body;
  if (fun->inputs.size() != e->args.size()) return internal("arity mismatch");

  std::vector<Dims> cell_dims, frames;
  Dims principal = fn->dims;
  for (std::size_t k = 0; k < e->args.size(); ++k) {
    const TypePtr& in = fun->inputs[k];
    if (in->tag != Type::Tag::Arr) return internal("open input type");
    auto cd = concrete_dims(in->shape);
    if (!cd || !has_suffix(e->args[k]->dims, *cd)) return internal("argument does not end in the cell shape");
    cell_dims.push_back(*cd);
    frames.emplace_back(e->args[k]->dims.begin(), e->args[k]->dims.end() - static_cast<std::ptrdiff_t>(cd->size()));
    if (frames.back().size() > principal.size()) principal = frames.back();
  }
  if (!is_prefix(fn->dims, principal)) return internal("incompatible frames");
  bool differs = fn->dims != principal;
  for (auto& f : frames) {
    if (!is_prefix(f, principal)) return internal("incompatible frames");
    if (f != principal) differs = true;
  }

  if (differs) {
    auto fcopy = std::make_shared<Expr>(*fn);
    fcopy->dims = principal;
    fcopy->atoms = concat_list(rep_list(product_after(principal, fn->dims.size()), split_list(1, fn->atoms)));
    fcopy->annot = tarr(fun, ishape_of(principal));
    std::vector<ExprPtr> args;
    for (std::size_t k = 0; k < e->args.size(); ++k) {
      const ExprPtr& a = e->args[k];
      std::uint64_t cs = element_count(cell_dims[k]);
      auto acopy = std::make_shared<Expr>(*a);
      acopy->dims = concat_dims(principal, cell_dims[k]);
      acopy->atoms = cs == 0 ? std::vector<AtomPtr>{}
                             : concat_list(rep_list(product_after(principal, frames[k].size()), split_list(cs, a->atoms)));
      acopy->annot = tarr(a->annot->body, ishape_of(acopy->dims));
      args.push_back(acopy);
    }
    auto out = std::make_shared<Expr>(*e);
    out->fn = fcopy;
    out->args = std::move(args);
    return stepped(out, Rule::Lift);
  }

  if (!principal.empty()) {
    std::uint64_t n = element_count(principal);
    auto fcells = split_list(1, fn->atoms);
    std::vector<std::vector<std::vector<AtomPtr>>> per_arg;
    for (std::size_t k = 0; k < e->args.size(); ++k)
      per_arg.push_back(cells_of(e->args[k]->atoms, element_count(cell_dims[k]), n));
    auto by_cell = per_arg.empty() ? std::vector<std::vector<std::vector<AtomPtr>>>(n) : transpose_list(per_arg);
    auto scalar_fn = tarr(fun, ishape({}));
    std::vector<ExprPtr> apps;
    for (std::uint64_t j = 0; j < n; ++j) {
      std::vector<ExprPtr> args;
      for (std::size_t k = 0; k < e->args.size(); ++k)
        args.push_back(with_annot(earray(cell_dims[k], by_cell[j][k]), tarr(fun->inputs[k]->body, ishape_of(cell_dims[k]))));
      apps.push_back(with_annot(eapp(with_annot(earray({}, fcells[j]), scalar_fn), std::move(args)), fun->body));
    }
    return stepped(with_annot(eframe(principal, std::move(apps)), e->annot), Rule::Map);
  }

  const AtomPtr& f = fn->atoms.at(0);
  if (f->tag == Atom::Tag::Lam) {
    Subst s;
    for (std::size_t k = 0; k < f->params.size(); ++k) s.terms[f->params[k].first] = e->args[k];
    return stepped(substitute(f->body, s), Rule::Beta);
  }
  if (f->tag == Atom::Tag::Prim) {
    auto r = delta_apply(f->prim, e->args, e->annot);
    if (!r) return stuck(StuckReason::Misapplied, f->prim);
    return stepped(*r, Rule::Delta);
  }
  return internal("applying a non-function atom");
}

StepResult instantiate(const ExprPtr& e) {
  const ExprPtr& fn = e->fn;
  bool types = e->tag == Expr::Tag::TApp;
  const TypePtr& ft = fn->annot;
  if (!ft || ft->tag != Type::Tag::Arr) return internal("abstraction array lacks a type");
  std::vector<ExprPtr> cells;
  for (auto& a : fn->atoms) {
    Subst s;
    if (a->tag == Atom::Tag::Prim) {
      const TypePtr& q = ft->body;
      auto inst = std::make_shared<Atom>(*a);
      if (types) {
        for (std::size_t i = 0; i < q->tvars.size(); ++i) s.types[q->tvars[i].first] = e->types.at(i);
        inst->types.insert(inst->types.end(), e->types.begin(), e->types.end());
      } else {
        for (std::size_t i = 0; i < q->ivars.size(); ++i) s.indices[q->ivars[i].first] = e->indices.at(i);
        inst->indices.insert(inst->indices.end(), e->indices.begin(), e->indices.end());
      }
      cells.push_back(with_annot(earray({}, {inst}), substitute(q->body, s)));
    } else if (types && a->tag == Atom::Tag::TLam) {
      for (std::size_t i = 0; i < a->tvars.size(); ++i) s.types[a->tvars[i].first] = e->types.at(i);
      cells.push_back(substitute(a->body, s));
    } else if (!types && a->tag == Atom::Tag::ILam) {
      for (std::size_t i = 0; i < a->ivars.size(); ++i) s.indices[a->ivars[i].first] = e->indices.at(i);
      cells.push_back(substitute(a->body, s));
    } else {
      return internal("instantiating a non-abstraction atom");
    }
  }
  return stepped(with_annot(eframe(fn->dims, std::move(cells)), e->annot), types ? Rule::TBeta : Rule::IBeta);
}

StepResult unbox(const ExprPtr& e) {
  const ExprPtr& boxes = e->fn;
  std::vector<ExprPtr> cells;
  for (auto& b : boxes->atoms) {
    if (b->tag != Atom::Tag::Box || b->indices.size() != e->ivars.size()) return internal("unboxing a non-box atom");
    Subst s;
    for (std::size_t i = 0; i < e->ivars.size(); ++i) s.indices[e->ivars[i]] = b->indices[i];
    s.terms[e->name] = b->body;
    cells.push_back(substitute(e->body, s));
  }
  return stepped(with_annot(eframe(boxes->dims, std::move(cells)), e->annot), Rule::Unbox);
}

StepResult collapse(const ExprPtr& e) {
  Dims cdims;
  std::vector<AtomPtr> atoms;
  if (!e->args.empty()) {
    cdims = e->args[0]->dims;
    for (auto& c : e->args) {
      if (c->dims != cdims) return internal("ragged frame");
      atoms.insert(atoms.end(), c->atoms.begin(), c->atoms.end());
    }
  } else {
    if (!e->annot || e->annot->tag != Type::Tag::Arr) return internal("empty frame without a type");
    auto all = concrete_dims(e->annot->shape);
    if (!all || !is_prefix(e->dims, *all)) return internal("empty frame type disagrees with its dimensions");
    cdims.assign(all->begin() + static_cast<std::ptrdiff_t>(e->dims.size()), all->end());
  }
  return stepped(with_annot(earray(concat_dims(e->dims, cdims), std::move(atoms)), e->annot), Rule::Collapse);
}

}  // namespace

StepResult step(const ExprPtr& e) {
  switch (e->tag) {
    case Expr::Tag::Array: {
      for (std::size_t i = 0; i < e->atoms.size(); ++i) {
        const AtomPtr& a = e->atoms[i];
        if (a->tag != Atom::Tag::Box) continue;
        StepResult r = step(a->body);
        if (r.status == StepResult::Status::Value) continue;
        if (r.status == StepResult::Status::Stuck) return r;
        auto box = std::make_shared<Atom>(*a);
        box->body = r.term;
        auto copy = std::make_shared<Expr>(*e);
        copy->atoms[i] = box;
        r.term = copy;
        return r;
      }
      return value();
    }
    case Expr::Tag::Frame: {
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        StepResult r = step(e->args[i]);
        if (r.status == StepResult::Status::Value) continue;
        if (r.status == StepResult::Status::Stuck) return r;
        auto copy = std::make_shared<Expr>(*e);
        copy->args[i] = r.term;
        r.term = copy;
        return r;
      }
      return collapse(e);
    }
    case Expr::Tag::App: {
      StepResult r = step(e->fn);
      if (r.status == StepResult::Status::Stuck) return r;
      if (r.status == StepResult::Status::Stepped) {
        auto copy = std::make_shared<Expr>(*e);
        copy->fn = r.term;
        r.term = copy;
        return r;
      }
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        r = step(e->args[i]);
        if (r.status == StepResult::Status::Value) continue;
        if (r.status == StepResult::Status::Stuck) return r;
        auto copy = std::make_shared<Expr>(*e);
        copy->args[i] = r.term;
        r.term = copy;
        return r;
      }
      return apply(e);
    }
    case Expr::Tag::TApp:
    case Expr::Tag::IApp:
    case Expr::Tag::Unbox: {
      StepResult r = step(e->fn);
      if (r.status == StepResult::Status::Stuck) return r;
      if (r.status == StepResult::Status::Stepped) {
        auto copy = std::make_shared<Expr>(*e);
        copy->fn = r.term;
        r.term = copy;
        return r;
      }
      return e->tag == Expr::Tag::Unbox ? unbox(e) : instantiate(e);
    }
    case Expr::Tag::Var:
      return internal("free variable " + e->name);
    case Expr::Tag::EmptyArray:
    case Expr::Tag::EmptyFrame:
      return internal("unelaborated empty form");
  }
  return internal("unknown form");
}

EvalResult evaluate(const ExprPtr& e, std::size_t fuel, bool trace) {
  EvalResult out;
  out.term = e;
  for (;;) {
    StepResult r = step(out.term);
    if (r.status == StepResult::Status::Value) {
      out.status = EvalResult::Status::Value;
      return out;
    }
    if (r.status == StepResult::Status::Stuck) {
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
    if (trace) out.trace.emplace_back(r.rule, r.term);
  }
}

}  // namespace remora
