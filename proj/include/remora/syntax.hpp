#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace remora {

struct SourceLocation {
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

std::string to_string(const SourceLocation& loc);

enum class Sort { Dim, Shape };
enum class Kind { Atom, Array };

const char* to_string(Sort s);
const char* to_string(Kind k);

// ---------------------------------------------------------------------------
// Indices

struct Index;
using IndexPtr = std::shared_ptr<const Index>;

struct Index {
  enum class Tag { Nat, Var, Plus, Shape, Append };
  Tag tag = Tag::Nat;
  std::uint64_t nat = 0;
  std::string name;
  std::vector<IndexPtr> args;
};

IndexPtr inat(std::uint64_t n);
IndexPtr ivar(std::string name);
IndexPtr iplus(std::vector<IndexPtr> args);
IndexPtr ishape(std::vector<IndexPtr> dims);
IndexPtr ishape_of(const std::vector<std::uint64_t>& dims);
IndexPtr iappend(std::vector<IndexPtr> args);

// ---------------------------------------------------------------------------
// Types

struct Type;
using TypePtr = std::shared_ptr<const Type>;

using KindBinders = std::vector<std::pair<std::string, Kind>>;
using SortBinders = std::vector<std::pair<std::string, Sort>>;

struct Type {
  enum class Tag { Base, Var, Fun, Arr, Forall, Pi, Sigma };
  Tag tag = Tag::Base;
  std::string name;             // Base and Var
  std::vector<TypePtr> inputs;  // Fun
  TypePtr body;                 // Fun output, Arr element, binder body
  IndexPtr shape;               // Arr
  KindBinders tvars;            // Forall
  SortBinders ivars;            // Pi, Sigma
};

TypePtr tbase(std::string name);
TypePtr tvar(std::string name);
TypePtr tfun(std::vector<TypePtr> inputs, TypePtr output);
TypePtr tarr(TypePtr elem, IndexPtr shape);
TypePtr tforall(KindBinders vars, TypePtr body);
TypePtr tpi(SortBinders vars, TypePtr body);
TypePtr tsigma(SortBinders vars, TypePtr body);

// ---------------------------------------------------------------------------
// Terms

struct BaseVal {
  enum class Tag { Num, Bool, Char };
  Tag tag = Tag::Num;
  double num = 0;
  bool flag = false;
  char32_t ch = 0;

  static BaseVal number(double d) { return {Tag::Num, d, false, 0}; }
  static BaseVal boolean(bool b) { return {Tag::Bool, 0, b, 0}; }
  static BaseVal character(char32_t c) { return {Tag::Char, 0, false, c}; }
};

bool operator==(const BaseVal& a, const BaseVal& b);

struct Atom;
struct Expr;
using AtomPtr = std::shared_ptr<const Atom>;
using ExprPtr = std::shared_ptr<const Expr>;

using TermBinders = std::vector<std::pair<std::string, TypePtr>>;

struct Atom {
  enum class Tag { Base, Prim, Lam, TLam, ILam, Box };
  Tag tag = Tag::Base;
  BaseVal base;
  std::string prim;
  TermBinders params;             // Lam
  KindBinders tvars;              // TLam
  SortBinders ivars;              // ILam
  std::vector<IndexPtr> indices;  // Box witnesses; index arguments a Prim was instantiated at
  std::vector<TypePtr> types;     // type arguments a Prim was instantiated at
  ExprPtr body;                   // abstraction body or box payload
  TypePtr annot;                  // Box's Sigma type
  SourceLocation loc;
};

struct Expr {
  enum class Tag { Var, Array, Frame, EmptyArray, EmptyFrame, App, TApp, IApp, Unbox };
  Tag tag = Tag::Var;
  std::string name;                 // Var, or the payload variable of Unbox
  std::vector<std::uint64_t> dims;  // Array, Frame, EmptyArray, EmptyFrame
  std::vector<AtomPtr> atoms;       // Array
  std::vector<ExprPtr> args;        // Frame cells, App arguments
  ExprPtr fn;                       // App/TApp/IApp function, Unbox box expression
  ExprPtr body;                     // Unbox body
  std::vector<TypePtr> types;       // TApp arguments
  std::vector<IndexPtr> indices;    // IApp arguments
  std::vector<std::string> ivars;   // Unbox index variables
  TypePtr elem;                     // EmptyArray atom type, EmptyFrame cell type
  TypePtr annot;
  SourceLocation loc;
};

AtomPtr abase(BaseVal v, SourceLocation loc = {});
AtomPtr aprim(std::string name, SourceLocation loc = {});
AtomPtr alam(TermBinders params, ExprPtr body, SourceLocation loc = {});
AtomPtr atlam(KindBinders vars, ExprPtr body, SourceLocation loc = {});
AtomPtr ailam(SortBinders vars, ExprPtr body, SourceLocation loc = {});
AtomPtr abox(std::vector<IndexPtr> indices, ExprPtr payload, TypePtr sigma, SourceLocation loc = {});

ExprPtr evar(std::string name, SourceLocation loc = {});
ExprPtr earray(std::vector<std::uint64_t> dims, std::vector<AtomPtr> atoms, SourceLocation loc = {});
ExprPtr eframe(std::vector<std::uint64_t> dims, std::vector<ExprPtr> cells, SourceLocation loc = {});
ExprPtr eempty_array(TypePtr elem, std::vector<std::uint64_t> dims, SourceLocation loc = {});
ExprPtr eempty_frame(TypePtr cell, std::vector<std::uint64_t> dims, SourceLocation loc = {});
ExprPtr eapp(ExprPtr fn, std::vector<ExprPtr> args, SourceLocation loc = {});
ExprPtr etapp(ExprPtr fn, std::vector<TypePtr> args, SourceLocation loc = {});
ExprPtr eiapp(ExprPtr fn, std::vector<IndexPtr> args, SourceLocation loc = {});
ExprPtr eunbox(std::vector<std::string> ivars, std::string xvar, ExprPtr box, ExprPtr body,
               SourceLocation loc = {});

// Copy of e with its annotation slot replaced.
ExprPtr with_annot(const ExprPtr& e, TypePtr annot);

// Scalar literal shorthand used throughout tests and primitives.
ExprPtr scalar(BaseVal v, TypePtr annot = nullptr);

// ---------------------------------------------------------------------------
// Parsing and printing

struct ParseError : std::runtime_error {
  SourceLocation loc;
  ParseError(SourceLocation l, const std::string& msg);
};

ExprPtr parse_term(std::string_view input, const std::string& file = "<input>");
TypePtr parse_type(std::string_view input);
IndexPtr parse_index(std::string_view input);

struct PrintOptions {
  bool annotations = false;
};

std::string print(const IndexPtr& i);
std::string print(const TypePtr& t);
std::string print(const BaseVal& v);
std::string print(const AtomPtr& a, const PrintOptions& opts = {});
std::string print(const ExprPtr& e, const PrintOptions& opts = {});

// ---------------------------------------------------------------------------
// Names, freshening and substitution

class NameSupply {
 public:
  explicit NameSupply(std::string anonymous_base = {}) : anonymous_(std::move(anonymous_base)) {}
  // A supply that draws from the process-wide counter.
  static NameSupply global();
  std::string fresh(std::string_view base);

 private:
  std::string anonymous_;
  bool global_ = false;
  std::uint64_t counter_ = 0;
};

// Process-wide supply used when no explicit one is given.
std::string fresh_name(std::string_view base);
std::string base_name(std::string_view name);

ExprPtr freshen(const ExprPtr& e, NameSupply& names);
ExprPtr freshen(const ExprPtr& e);
TypePtr freshen(const TypePtr& t, NameSupply& names);

struct FreeNames {
  std::set<std::string> terms;
  std::set<std::string> types;
  std::set<std::string> indices;
};

void collect_free(const IndexPtr& i, FreeNames& out);
void collect_free(const TypePtr& t, FreeNames& out);
void collect_free(const ExprPtr& e, FreeNames& out);
void collect_free(const AtomPtr& a, FreeNames& out);
FreeNames free_names(const ExprPtr& e);
FreeNames free_names(const TypePtr& t);
std::set<std::string> free_index_vars(const TypePtr& t);

struct Subst {
  std::map<std::string, ExprPtr> terms;
  std::map<std::string, TypePtr> types;
  std::map<std::string, IndexPtr> indices;
  bool empty() const { return terms.empty() && types.empty() && indices.empty(); }
};

IndexPtr substitute(const IndexPtr& i, const std::map<std::string, IndexPtr>& s);
TypePtr substitute(const TypePtr& t, const Subst& s);
ExprPtr substitute(const ExprPtr& e, const Subst& s);
AtomPtr substitute(const AtomPtr& a, const Subst& s);

// Exact structural equality. Locations are ignored; annotations are
// compared only when requested.
bool same(const IndexPtr& a, const IndexPtr& b);
bool same(const TypePtr& a, const TypePtr& b);
bool same(const ExprPtr& a, const ExprPtr& b, bool annotations = true);
bool same(const AtomPtr& a, const AtomPtr& b, bool annotations = true);

// Equality up to consistent renaming of every binder.
bool alpha_equal(const ExprPtr& a, const ExprPtr& b, bool annotations = true);

// Rewrites every index in a term or type, e.g. into canonical form.
using IndexRewrite = IndexPtr (*)(const IndexPtr&);
TypePtr map_indices(const TypePtr& t, IndexRewrite f);
ExprPtr map_indices(const ExprPtr& e, IndexRewrite f);

std::size_t term_depth(const ExprPtr& e);

}  // namespace remora
