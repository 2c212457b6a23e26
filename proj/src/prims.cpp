#include "remora/prims.hpp"

namespace remora {

namespace {

const char* const kArith = "(-> ((Arr Num (Shp)) (Arr Num (Shp))) (Arr Num (Shp)))";
const char* const kCompare = "(-> ((Arr Num (Shp)) (Arr Num (Shp))) (Arr Bool (Shp)))";

const std::vector<std::pair<std::string, std::string>>& table() {
  static const std::vector<std::pair<std::string, std::string>> t{
      {"+", kArith},
      {"-", kArith},
      {"*", kArith},
      {"/", kArith},
      {"<", kCompare},
      {"=", kCompare},
      {"head",
       "(Pi ((d Dim) (s Shape)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr a (++ (Shp (+ 1 d)) s))) (Arr a s)) (Shp))) (Shp)))"},
      {"append",
       "(Pi ((c Shape) (m Dim) (n Dim)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr a (++ (Shp m) c)) (Arr a (++ (Shp n) c))) (Arr a (++ (Shp (+ m n)) c))) (Shp))) (Shp)))"},
      {"reduce",
       "(Pi ((d Dim) (c Shape)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr (-> ((Arr a c) (Arr a c)) (Arr a c)) (Shp)) (Arr a (++ (Shp (+ 1 d)) c))) (Arr a c))"
       " (Shp))) (Shp)))"},
      {"iota/v", "(-> ((Arr Num (Shp))) (Arr (Sigma ((n Dim)) (Arr Num (Shp n))) (Shp)))"},
      {"iota/s", "(Pi ((s Shape)) (Arr (-> () (Arr Num s)) (Shp)))"},
      {"reshape",
       "(Pi ((k Dim) (s Shape)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr Num (Shp k)) (Arr a s)) (Arr (Sigma ((r Shape)) (Arr a r)) (Shp))) (Shp))) (Shp)))"},
      {"ravel",
       "(Pi ((s Shape)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr a s)) (Arr (Sigma ((n Dim)) (Arr a (Shp n))) (Shp))) (Shp))) (Shp)))"},
      {"filter",
       "(Pi ((n Dim) (c Shape)) (Arr (Forall ((a Atom))"
       " (Arr (-> ((Arr Bool (Shp n)) (Arr a (++ (Shp n) c))) (Arr (Sigma ((m Dim)) (Arr a (++ (Shp m) c))) (Shp)))"
       " (Shp))) (Shp)))"},
  };
  return t;
}

}  // namespace

const Signature& default_signature() {
  static const Signature sig = [] {
    Signature s;
    for (auto& [name, ty] : table()) s[name] = parse_type(ty);
    return s;
  }();
  return sig;
}

std::optional<TypePtr> signature_lookup(const std::string& name) {
  const auto& sig = default_signature();
  auto it = sig.find(name);
  if (it == sig.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> primitive_names() {
  std::vector<std::string> out;
  for (auto& [name, ty] : table()) out.push_back(name);
  return out;
}

std::optional<ExprPtr> delta_apply(const std::string& name, const std::vector<ExprPtr>& args, const TypePtr& result) {
  std::vector<PrimArray<AtomPtr>> in;
  for (auto& a : args) in.push_back({a->dims, a->atoms});
  std::vector<std::uint64_t> rdims;
  if (result && result->tag == Type::Tag::Arr)
    if (auto d = concrete_dims(result->shape)) rdims = *d;

  auto base_of = [](const AtomPtr& a) -> const BaseVal* { return a->tag == Atom::Tag::Base ? &a->base : nullptr; };
  auto make = [](BaseVal v) { return abase(v); };
  auto r = delta_kernel<AtomPtr>(name, in, rdims, base_of, make);

  if (std::holds_alternative<DeltaMisapplied>(r)) return std::nullopt;
  if (auto* p = std::get_if<PrimArray<AtomPtr>>(&r)) return with_annot(earray(p->dims, p->atoms), result);
  if (auto* b = std::get_if<DeltaBox<AtomPtr>>(&r)) {
    TypePtr sigma = normalize_type(result->body);
    Subst s;
    for (std::size_t i = 0; i < sigma->ivars.size() && i < b->indices.size(); ++i)
      s.indices[sigma->ivars[i].first] = b->indices[i];
    auto payload = with_annot(earray(b->payload.dims, b->payload.atoms), normalize_type(substitute(sigma->body, s)));
    return with_annot(earray({}, {abox(b->indices, payload, sigma)}), result);
  }
  auto& fold = std::get<DeltaFold<AtomPtr>>(r);
  const ExprPtr& fn = args[0];
  TypePtr elem = args[1]->annot->body;
  auto cell = [&](const PrimArray<AtomPtr>& c) {
    return with_annot(earray(c.dims, c.atoms), tarr(elem, ishape_of(c.dims)));
  };
  ExprPtr acc = cell(fold.cells.back());
  for (std::size_t i = fold.cells.size() - 1; i-- > 0;) acc = with_annot(eapp(fn, {cell(fold.cells[i]), acc}), result);
  return acc;
}

}  // namespace remora
