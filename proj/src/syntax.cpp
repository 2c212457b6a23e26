#include "remora/syntax.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace remora {

std::string to_string(const SourceLocation& loc) {
  std::ostringstream os;
  os << (loc.file.empty() ? "<input>" : loc.file) << ':' << loc.line << ':' << loc.column;
  return os.str();
}

const char* to_string(Sort s) { return s == Sort::Dim ? "Dim" : "Shape"; }
const char* to_string(Kind k) { return k == Kind::Atom ? "Atom" : "Array"; }

// ---------------------------------------------------------------------------
// Constructors

IndexPtr inat(std::uint64_t n) {
  auto i = std::make_shared<Index>();
  i->tag = Index::Tag::Nat;
  i->nat = n;
  return i;
}

IndexPtr ivar(std::string name) {
  auto i = std::make_shared<Index>();
  i->tag = Index::Tag::Var;
  i->name = std::move(name);
  return i;
}

static IndexPtr inode(Index::Tag tag, std::vector<IndexPtr> args) {
  auto i = std::make_shared<Index>();
  i->tag = tag;
  i->args = std::move(args);
  return i;
}

IndexPtr iplus(std::vector<IndexPtr> args) { return inode(Index::Tag::Plus, std::move(args)); }
IndexPtr ishape(std::vector<IndexPtr> dims) { return inode(Index::Tag::Shape, std::move(dims)); }
IndexPtr iappend(std::vector<IndexPtr> args) { return inode(Index::Tag::Append, std::move(args)); }

IndexPtr ishape_of(const std::vector<std::uint64_t>& dims) {
  std::vector<IndexPtr> ds;
  for (auto d : dims) ds.push_back(inat(d));
  return ishape(std::move(ds));
}

TypePtr tbase(std::string name) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Base;
  t->name = std::move(name);
  return t;
}

TypePtr tvar(std::string name) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Var;
  t->name = std::move(name);
  return t;
}

TypePtr tfun(std::vector<TypePtr> inputs, TypePtr output) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Fun;
  t->inputs = std::move(inputs);
  t->body = std::move(output);
  return t;
}

TypePtr tarr(TypePtr elem, IndexPtr shape) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Arr;
  t->body = std::move(elem);
  t->shape = std::move(shape);
  return t;
}

TypePtr tforall(KindBinders vars, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Forall;
  t->tvars = std::move(vars);
  t->body = std::move(body);
  return t;
}

TypePtr tpi(SortBinders vars, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Pi;
  t->ivars = std::move(vars);
  t->body = std::move(body);
  return t;
}

TypePtr tsigma(SortBinders vars, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Sigma;
  t->ivars = std::move(vars);
  t->body = std::move(body);
  return t;
}

bool operator==(const BaseVal& a, const BaseVal& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case BaseVal::Tag::Num:
      return a.num == b.num || (std::isnan(a.num) && std::isnan(b.num));
    case BaseVal::Tag::Bool:
      return a.flag == b.flag;
    case BaseVal::Tag::Char:
      return a.ch == b.ch;
  }
  return false;
}

static std::shared_ptr<Atom> new_atom(Atom::Tag tag, SourceLocation loc) {
  auto a = std::make_shared<Atom>();
  a->tag = tag;
  a->loc = std::move(loc);
  return a;
}

AtomPtr abase(BaseVal v, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::Base, std::move(loc));
  a->base = v;
  return a;
}

AtomPtr aprim(std::string name, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::Prim, std::move(loc));
  a->prim = std::move(name);
  return a;
}

AtomPtr alam(TermBinders params, ExprPtr body, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::Lam, std::move(loc));
  a->params = std::move(params);
  a->body = std::move(body);
  return a;
}

AtomPtr atlam(KindBinders vars, ExprPtr body, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::TLam, std::move(loc));
  a->tvars = std::move(vars);
  a->body = std::move(body);
  return a;
}

AtomPtr ailam(SortBinders vars, ExprPtr body, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::ILam, std::move(loc));
  a->ivars = std::move(vars);
  a->body = std::move(body);
  return a;
}

AtomPtr abox(std::vector<IndexPtr> indices, ExprPtr payload, TypePtr sigma, SourceLocation loc) {
  auto a = new_atom(Atom::Tag::Box, std::move(loc));
  a->indices = std::move(indices);
  a->body = std::move(payload);
  a->annot = std::move(sigma);
  return a;
}

static std::shared_ptr<Expr> new_expr(Expr::Tag tag, SourceLocation loc) {
  auto e = std::make_shared<Expr>();
  e->tag = tag;
  e->loc = std::move(loc);
  return e;
}

ExprPtr evar(std::string name, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::Var, std::move(loc));
  e->name = std::move(name);
  return e;
}

ExprPtr earray(std::vector<std::uint64_t> dims, std::vector<AtomPtr> atoms, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::Array, std::move(loc));
  e->dims = std::move(dims);
  e->atoms = std::move(atoms);
  return e;
}

ExprPtr eframe(std::vector<std::uint64_t> dims, std::vector<ExprPtr> cells, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::Frame, std::move(loc));
  e->dims = std::move(dims);
  e->args = std::move(cells);
  return e;
}

ExprPtr eempty_array(TypePtr elem, std::vector<std::uint64_t> dims, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::EmptyArray, std::move(loc));
  e->elem = std::move(elem);
  e->dims = std::move(dims);
  return e;
}

ExprPtr eempty_frame(TypePtr cell, std::vector<std::uint64_t> dims, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::EmptyFrame, std::move(loc));
  e->elem = std::move(cell);
  e->dims = std::move(dims);
  return e;
}

ExprPtr eapp(ExprPtr fn, std::vector<ExprPtr> args, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::App, std::move(loc));
  e->fn = std::move(fn);
  e->args = std::move(args);
  return e;
}

ExprPtr etapp(ExprPtr fn, std::vector<TypePtr> args, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::TApp, std::move(loc));
  e->fn = std::move(fn);
  e->types = std::move(args);
  return e;
}

ExprPtr eiapp(ExprPtr fn, std::vector<IndexPtr> args, SourceLocation loc) {
  auto e = new_expr(Expr::Tag::IApp, std::move(loc));
  e->fn = std::move(fn);
  e->indices = std::move(args);
  return e;
}

ExprPtr eunbox(std::vector<std::string> ivars, std::string xvar, ExprPtr box, ExprPtr body,
               SourceLocation loc) {
  auto e = new_expr(Expr::Tag::Unbox, std::move(loc));
  e->ivars = std::move(ivars);
  e->name = std::move(xvar);
  e->fn = std::move(box);
  e->body = std::move(body);
  return e;
}

ExprPtr with_annot(const ExprPtr& e, TypePtr annot) {
  auto c = std::make_shared<Expr>(*e);
  c->annot = std::move(annot);
  return c;
}

ExprPtr scalar(BaseVal v, TypePtr annot) {
  auto e = new_expr(Expr::Tag::Array, {});
  e->atoms.push_back(abase(v));
  e->annot = std::move(annot);
  return e;
}

// ---------------------------------------------------------------------------
// Reader

ParseError::ParseError(SourceLocation l, const std::string& msg)
    : std::runtime_error(to_string(l) + ": " + msg), loc(std::move(l)) {}

namespace {

struct SExp {
  bool list = false;
  std::string text;
  std::vector<SExp> items;
  SourceLocation loc;
};

class Reader {
 public:
  Reader(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  SExp read_one() {
    skip();
    if (pos_ >= src_.size()) throw ParseError(here(), "unexpected end of input");
    SExp s = read();
    skip();
    if (pos_ < src_.size()) throw ParseError(here(), "trailing input after expression");
    return s;
  }

 private:
  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1, col_ = 1;

  SourceLocation here() const { return {file_, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  static bool delimiter(char c) {
    return c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';';
  }

  SExp read() {
    SExp s;
    s.loc = here();
    char c = src_[pos_];
    if (c == ')') throw ParseError(here(), "unbalanced ')'");
    if (c == '(') {
      advance();
      s.list = true;
      for (;;) {
        skip();
        if (pos_ >= src_.size()) throw ParseError(s.loc, "unbalanced '(': missing ')'");
        if (src_[pos_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    std::size_t start = pos_;
    if (c == '#' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\\') {
      // Character literal: the character itself may be a delimiter.
      advance();
      advance();
      if (pos_ >= src_.size()) throw ParseError(s.loc, "incomplete character literal");
      advance();
      while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
    }
    while (pos_ < src_.size() && !delimiter(src_[pos_])) advance();
    s.text = std::string(src_.substr(start, pos_ - start));
    return s;
  }
};

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

bool decode_utf8(std::string_view s, char32_t& out) {
  if (s.empty()) return false;
  auto b0 = static_cast<unsigned char>(s[0]);
  std::size_t len = b0 < 0x80 ? 1 : (b0 >> 5) == 6 ? 2 : (b0 >> 4) == 14 ? 3 : (b0 >> 3) == 30 ? 4 : 0;
  if (len == 0 || s.size() != len) return false;
  char32_t c = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (std::size_t i = 1; i < len; ++i) c = (c << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
  out = c;
  return true;
}

const std::map<std::string, char32_t>& char_names() {
  static const std::map<std::string, char32_t> names{{"space", U' '}, {"newline", U'\n'}, {"tab", U'\t'}};
  return names;
}

bool looks_numeric(const std::string& t) {
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i < t.size() && t[i] == '.') ++i;
  return i < t.size() && t[i] >= '0' && t[i] <= '9';
}

bool is_keyword(const std::string& t) {
  static const std::set<std::string> kws{"array", "frame",  "empty-array", "empty-frame", "lam",
                                         "tlam",  "ilam",   "box",         "unbox",       "t-app",
                                         "i-app", ":",      "Arr",         "->",          "Forall",
                                         "Pi",    "Sigma",  "Shp",         "++"};
  return kws.count(t) > 0;
}

class Builder {
 public:
  IndexPtr index(const SExp& s) {
    if (!s.list) {
      if (looks_numeric(s.text)) return inat(natural(s));
      check_ident(s);
      return ivar(s.text);
    }
    if (s.items.empty()) throw ParseError(s.loc, "empty index form");
    const SExp& head = s.items[0];
    std::vector<IndexPtr> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(index(s.items[i]));
    if (!head.list && head.text == "+") return iplus(std::move(args));
    if (!head.list && head.text == "Shp") return ishape(std::move(args));
    if (!head.list && head.text == "++") return iappend(std::move(args));
    throw ParseError(head.loc, "unknown index form '" + head.text + "'");
  }

  TypePtr type(const SExp& s) {
    if (!s.list) {
      check_ident(s);
      if (s.text == "Num" || s.text == "Bool" || s.text == "Char") return tbase(s.text);
      return tvar(s.text);
    }
    if (s.items.empty() || s.items[0].list) throw ParseError(s.loc, "malformed type");
    const std::string& h = s.items[0].text;
    if (h == "Arr") {
      arity(s, 3);
      return tarr(type(s.items[1]), index(s.items[2]));
    }
    if (h == "->") {
      arity(s, 3);
      if (!s.items[1].list) throw ParseError(s.items[1].loc, "function inputs must be a list");
      std::vector<TypePtr> ins;
      for (auto& x : s.items[1].items) ins.push_back(type(x));
      return tfun(std::move(ins), type(s.items[2]));
    }
    if (h == "Forall") {
      arity(s, 3);
      return tforall(kind_binders(s.items[1]), type(s.items[2]));
    }
    if (h == "Pi" || h == "Sigma") {
      arity(s, 3);
      auto bs = sort_binders(s.items[1]);
      return h == "Pi" ? tpi(std::move(bs), type(s.items[2])) : tsigma(std::move(bs), type(s.items[2]));
    }
    throw ParseError(s.loc, "unknown type form '" + h + "'");
  }

  AtomPtr atom(const SExp& s) {
    if (!s.list) {
      const std::string& t = s.text;
      if (t == "#t") return abase(BaseVal::boolean(true), s.loc);
      if (t == "#f") return abase(BaseVal::boolean(false), s.loc);
      if (t.size() > 2 && t[0] == '#' && t[1] == '\\') {
        std::string rest = t.substr(2);
        char32_t c = 0;
        if (auto it = char_names().find(rest); it != char_names().end()) {
          c = it->second;
        } else if (!decode_utf8(rest, c)) {
          throw ParseError(s.loc, "malformed character literal '" + t + "'");
        }
        return abase(BaseVal::character(c), s.loc);
      }
      if (looks_numeric(t)) return abase(BaseVal::number(number(s)), s.loc);
      check_ident(s);
      return aprim(t, s.loc);
    }
    if (s.items.empty() || s.items[0].list) throw ParseError(s.loc, "malformed atom");
    const std::string& h = s.items[0].text;
    if (h == "lam") {
      arity(s, 3);
      const SExp& bs = s.items[1];
      if (!bs.list) throw ParseError(bs.loc, "malformed binder list");
      TermBinders params;
      for (auto& b : bs.items) {
        if (!b.list || b.items.size() != 2 || b.items[0].list) throw ParseError(b.loc, "malformed binder list");
        check_ident(b.items[0]);
        params.emplace_back(b.items[0].text, type(b.items[1]));
      }
      return alam(std::move(params), expr(s.items[2]), s.loc);
    }
    if (h == "tlam") {
      arity(s, 3);
      return atlam(kind_binders(s.items[1]), expr(s.items[2]), s.loc);
    }
    if (h == "ilam") {
      arity(s, 3);
      return ailam(sort_binders(s.items[1]), expr(s.items[2]), s.loc);
    }
    if (h == "box") {
      arity(s, 4);
      if (!s.items[1].list) throw ParseError(s.items[1].loc, "box indices must be a list");
      std::vector<IndexPtr> is;
      for (auto& x : s.items[1].items) is.push_back(index(x));
      return abox(std::move(is), expr(s.items[2]), type(s.items[3]), s.loc);
    }
    throw ParseError(s.items[0].loc, "unknown atom form '" + h + "'");
  }

  ExprPtr expr(const SExp& s0) {
    if (!s0.list) {
      if (s0.text.empty() || s0.text[0] == '#' || looks_numeric(s0.text))
        throw ParseError(s0.loc, "atom '" + s0.text + "' in expression position; write (array () " + s0.text + ")");
      check_ident(s0);
      return evar(s0.text, s0.loc);
    }
    // Optional trailing annotation: (... : type)
    SExp s = s0;
    TypePtr annot;
    if (s.items.size() >= 3 && !s.items[s.items.size() - 2].list && s.items[s.items.size() - 2].text == ":") {
      annot = type(s.items.back());
      s.items.resize(s.items.size() - 2);
    }
    ExprPtr e = expr_form(s);
    if (annot) e = with_annot(e, annot);
    return e;
  }

 private:
  ExprPtr expr_form(const SExp& s) {
    if (s.items.empty()) throw ParseError(s.loc, "empty application");
    const SExp& head = s.items[0];
    const std::string h = head.list ? "" : head.text;
    if (h == "array") {
      min_arity(s, 2);
      std::vector<AtomPtr> atoms;
      for (std::size_t i = 2; i < s.items.size(); ++i) atoms.push_back(atom(s.items[i]));
      return earray(dims(s.items[1]), std::move(atoms), s.loc);
    }
    if (h == "frame") {
      min_arity(s, 2);
      std::vector<ExprPtr> cells;
      for (std::size_t i = 2; i < s.items.size(); ++i) cells.push_back(expr(s.items[i]));
      return eframe(dims(s.items[1]), std::move(cells), s.loc);
    }
    if (h == "empty-array" || h == "empty-frame") {
      arity(s, 3);
      auto t = type(s.items[1]);
      auto ds = dims(s.items[2]);
      return h == "empty-array" ? eempty_array(t, ds, s.loc) : eempty_frame(t, ds, s.loc);
    }
    if (h == "t-app") {
      min_arity(s, 2);
      std::vector<TypePtr> ts;
      for (std::size_t i = 2; i < s.items.size(); ++i) ts.push_back(type(s.items[i]));
      return etapp(expr(s.items[1]), std::move(ts), s.loc);
    }
    if (h == "i-app") {
      min_arity(s, 2);
      std::vector<IndexPtr> is;
      for (std::size_t i = 2; i < s.items.size(); ++i) is.push_back(index(s.items[i]));
      return eiapp(expr(s.items[1]), std::move(is), s.loc);
    }
    if (h == "unbox") {
      arity(s, 3);
      const SExp& bind = s.items[1];
      if (!bind.list || bind.items.size() < 2) throw ParseError(bind.loc, "malformed unbox binder list");
      std::vector<std::string> ivs;
      for (std::size_t i = 0; i + 2 < bind.items.size(); ++i) {
        check_ident(bind.items[i]);
        ivs.push_back(bind.items[i].text);
      }
      const SExp& xv = bind.items[bind.items.size() - 2];
      check_ident(xv);
      return eunbox(std::move(ivs), xv.text, expr(bind.items.back()), expr(s.items[2]), s.loc);
    }
    if (h == "lam" || h == "tlam" || h == "ilam" || h == "box")
      throw ParseError(head.loc, "'" + h + "' is an atom; wrap it as (array () ...)");
    if (!head.list && is_keyword(h)) throw ParseError(head.loc, "unknown keyword '" + h + "' in expression");
    std::vector<ExprPtr> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(expr(s.items[i]));
    return eapp(expr(head), std::move(args), s.loc);
  }

  static void arity(const SExp& s, std::size_t n) {
    if (s.items.size() != n)
      throw ParseError(s.loc, "'" + (s.items[0].list ? std::string("form") : s.items[0].text) + "' expects " +
                                  std::to_string(n - 1) + " operands");
  }

  static void min_arity(const SExp& s, std::size_t n) {
    if (s.items.size() < n) throw ParseError(s.loc, "'" + s.items[0].text + "' is missing operands");
  }

  static void check_ident(const SExp& s) {
    if (s.list || s.text.empty() || s.text[0] == '#' || is_keyword(s.text))
      throw ParseError(s.loc, "expected identifier, got '" + (s.list ? std::string("(...)") : s.text) + "'");
  }

  static std::uint64_t natural(const SExp& s) {
    std::uint64_t n = 0;
    auto [p, ec] = std::from_chars(s.text.data(), s.text.data() + s.text.size(), n);
    if (ec != std::errc() || p != s.text.data() + s.text.size())
      throw ParseError(s.loc, "expected a natural number, got '" + s.text + "'");
    return n;
  }

  static double number(const SExp& s) {
    const char* b = s.text.data();
    const char* e = b + s.text.size();
    if (*b == '+') ++b;
    double d = 0;
    auto [p, ec] = std::from_chars(b, e, d);
    if (ec != std::errc() || p != e) throw ParseError(s.loc, "malformed number '" + s.text + "'");
    return d;
  }

  static std::vector<std::uint64_t> dims(const SExp& s) {
    if (!s.list) throw ParseError(s.loc, "expected a dimension list");
    std::vector<std::uint64_t> out;
    for (auto& d : s.items) {
      if (d.list) throw ParseError(d.loc, "dimensions must be natural literals");
      out.push_back(natural(d));
    }
    return out;
  }

  static KindBinders kind_binders(const SExp& s) {
    if (!s.list) throw ParseError(s.loc, "malformed binder list");
    KindBinders out;
    for (auto& b : s.items) {
      if (!b.list || b.items.size() != 2 || b.items[0].list || b.items[1].list)
        throw ParseError(b.loc, "malformed binder list");
      check_ident(b.items[0]);
      const std::string& k = b.items[1].text;
      if (k != "Atom" && k != "Array") throw ParseError(b.items[1].loc, "unknown kind '" + k + "'");
      out.emplace_back(b.items[0].text, k == "Atom" ? Kind::Atom : Kind::Array);
    }
    return out;
  }

  static SortBinders sort_binders(const SExp& s) {
    if (!s.list) throw ParseError(s.loc, "malformed binder list");
    SortBinders out;
    for (auto& b : s.items) {
      if (!b.list || b.items.size() != 2 || b.items[0].list || b.items[1].list)
        throw ParseError(b.loc, "malformed binder list");
      check_ident(b.items[0]);
      const std::string& k = b.items[1].text;
      if (k != "Dim" && k != "Shape") throw ParseError(b.items[1].loc, "unknown sort '" + k + "'");
      out.emplace_back(b.items[0].text, k == "Dim" ? Sort::Dim : Sort::Shape);
    }
    return out;
  }
};

}  // namespace

ExprPtr parse_term(std::string_view input, const std::string& file) {
  Reader r(input, file);
  Builder b;
  return b.expr(r.read_one());
}

TypePtr parse_type(std::string_view input) {
  Reader r(input, "<type>");
  Builder b;
  return b.type(r.read_one());
}

IndexPtr parse_index(std::string_view input) {
  Reader r(input, "<index>");
  Builder b;
  return b.index(r.read_one());
}

// ---------------------------------------------------------------------------
// Printer

std::string print(const IndexPtr& i) {
  switch (i->tag) {
    case Index::Tag::Nat:
      return std::to_string(i->nat);
    case Index::Tag::Var:
      return i->name;
    default:
      break;
  }
  std::string out = i->tag == Index::Tag::Plus ? "(+" : i->tag == Index::Tag::Shape ? "(Shp" : "(++";
  for (auto& a : i->args) out += " " + print(a);
  return out + ")";
}

static std::string print_binders(const KindBinders& bs) {
  std::string out = "(";
  for (std::size_t i = 0; i < bs.size(); ++i)
    out += (i ? " (" : "(") + bs[i].first + " " + to_string(bs[i].second) + ")";
  return out + ")";
}

static std::string print_binders(const SortBinders& bs) {
  std::string out = "(";
  for (std::size_t i = 0; i < bs.size(); ++i)
    out += (i ? " (" : "(") + bs[i].first + " " + to_string(bs[i].second) + ")";
  return out + ")";
}

std::string print(const TypePtr& t) {
  switch (t->tag) {
    case Type::Tag::Base:
    case Type::Tag::Var:
      return t->name;
    case Type::Tag::Fun: {
      std::string out = "(-> (";
      for (std::size_t i = 0; i < t->inputs.size(); ++i) out += (i ? " " : "") + print(t->inputs[i]);
      return out + ") " + print(t->body) + ")";
    }
    case Type::Tag::Arr:
      return "(Arr " + print(t->body) + " " + print(t->shape) + ")";
    case Type::Tag::Forall:
      return "(Forall " + print_binders(t->tvars) + " " + print(t->body) + ")";
    case Type::Tag::Pi:
      return "(Pi " + print_binders(t->ivars) + " " + print(t->body) + ")";
    case Type::Tag::Sigma:
      return "(Sigma " + print_binders(t->ivars) + " " + print(t->body) + ")";
  }
  return "?";
}

static std::string print_number(double d) {
  if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) {
    long long v = static_cast<long long>(d);
    return std::to_string(v);
  }
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

std::string print(const BaseVal& v) {
  switch (v.tag) {
    case BaseVal::Tag::Num:
      return print_number(v.num);
    case BaseVal::Tag::Bool:
      return v.flag ? "#t" : "#f";
    case BaseVal::Tag::Char:
      for (auto& [name, c] : char_names())
        if (c == v.ch) return "#\\" + name;
      return "#\\" + encode_utf8(v.ch);
  }
  return "?";
}

static std::string print_dims(const std::vector<std::uint64_t>& ds) {
  std::string out = "(";
  for (std::size_t i = 0; i < ds.size(); ++i) out += (i ? " " : "") + std::to_string(ds[i]);
  return out + ")";
}

std::string print(const AtomPtr& a, const PrintOptions& opts) {
  switch (a->tag) {
    case Atom::Tag::Base:
      return print(a->base);
    case Atom::Tag::Prim:
      return a->prim;
    case Atom::Tag::Lam: {
      std::string out = "(lam (";
      for (std::size_t i = 0; i < a->params.size(); ++i)
        out += (i ? " (" : "(") + a->params[i].first + " " + print(a->params[i].second) + ")";
      return out + ") " + print(a->body, opts) + ")";
    }
    case Atom::Tag::TLam:
      return "(tlam " + print_binders(a->tvars) + " " + print(a->body, opts) + ")";
    case Atom::Tag::ILam:
      return "(ilam " + print_binders(a->ivars) + " " + print(a->body, opts) + ")";
    case Atom::Tag::Box: {
      std::string out = "(box (";
      for (std::size_t i = 0; i < a->indices.size(); ++i) out += (i ? " " : "") + print(a->indices[i]);
      return out + ") " + print(a->body, opts) + " " + print(a->annot) + ")";
    }
  }
  return "?";
}

std::string print(const ExprPtr& e, const PrintOptions& opts) {
  std::string out;
  switch (e->tag) {
    case Expr::Tag::Var:
      return e->name;
    case Expr::Tag::Array:
      out = "(array " + print_dims(e->dims);
      for (auto& a : e->atoms) out += " " + print(a, opts);
      break;
    case Expr::Tag::Frame:
      out = "(frame " + print_dims(e->dims);
      for (auto& c : e->args) out += " " + print(c, opts);
      break;
    case Expr::Tag::EmptyArray:
      out = "(empty-array " + print(e->elem) + " " + print_dims(e->dims);
      break;
    case Expr::Tag::EmptyFrame:
      out = "(empty-frame " + print(e->elem) + " " + print_dims(e->dims);
      break;
    case Expr::Tag::App:
      out = "(" + print(e->fn, opts);
      for (auto& a : e->args) out += " " + print(a, opts);
      break;
    case Expr::Tag::TApp:
      out = "(t-app " + print(e->fn, opts);
      for (auto& t : e->types) out += " " + print(t);
      break;
    case Expr::Tag::IApp:
      out = "(i-app " + print(e->fn, opts);
      for (auto& i : e->indices) out += " " + print(i);
      break;
    case Expr::Tag::Unbox:
      out = "(unbox (";
      for (auto& v : e->ivars) out += v + " ";
      out += e->name + " " + print(e->fn, opts) + ") " + print(e->body, opts);
      break;
  }
  if (opts.annotations && e->annot) out += " : " + print(e->annot);
  return out + ")";
}

// ---------------------------------------------------------------------------
// Names

std::string base_name(std::string_view name) {
  auto h = name.find('#');
  return std::string(h == std::string_view::npos ? name : name.substr(0, h));
}

NameSupply NameSupply::global() {
  NameSupply ns;
  ns.global_ = true;
  return ns;
}

std::string NameSupply::fresh(std::string_view base) {
  if (global_) return fresh_name(anonymous_.empty() ? base : std::string_view(anonymous_));
  ++counter_;
  return (anonymous_.empty() ? base_name(base) : anonymous_) + "#" + std::to_string(counter_);
}

std::string fresh_name(std::string_view base) {
  static std::atomic<std::uint64_t> counter{0};
  return base_name(base) + "#" + std::to_string(++counter);
}

namespace {

struct Renaming {
  std::map<std::string, std::string> terms, types, indices;
};

std::string lookup(const std::map<std::string, std::string>& m, const std::string& n) {
  auto it = m.find(n);
  return it == m.end() ? n : it->second;
}

class Freshener {
 public:
  explicit Freshener(NameSupply& ns) : ns_(ns) {}

  IndexPtr index(const IndexPtr& i, const Renaming& r) {
    if (i->tag == Index::Tag::Nat) return i;
    if (i->tag == Index::Tag::Var) return ivar(lookup(r.indices, i->name));
    auto c = std::make_shared<Index>(*i);
    for (auto& a : c->args) a = index(a, r);
    return c;
  }

  TypePtr type(const TypePtr& t, const Renaming& r) {
    if (!t) return t;
    auto c = std::make_shared<Type>(*t);
    switch (t->tag) {
      case Type::Tag::Base:
        return t;
      case Type::Tag::Var:
        c->name = lookup(r.types, t->name);
        return c;
      case Type::Tag::Fun:
        for (auto& x : c->inputs) x = type(x, r);
        c->body = type(t->body, r);
        return c;
      case Type::Tag::Arr:
        c->body = type(t->body, r);
        c->shape = index(t->shape, r);
        return c;
      case Type::Tag::Forall: {
        Renaming inner = r;
        for (auto& b : c->tvars) b.first = inner.types[b.first] = ns_.fresh(b.first);
        c->body = type(t->body, inner);
        return c;
      }
      case Type::Tag::Pi:
      case Type::Tag::Sigma: {
        Renaming inner = r;
        for (auto& b : c->ivars) b.first = inner.indices[b.first] = ns_.fresh(b.first);
        c->body = type(t->body, inner);
        return c;
      }
    }
    return c;
  }

  AtomPtr atom(const AtomPtr& a, const Renaming& r) {
    auto c = std::make_shared<Atom>(*a);
    switch (a->tag) {
      case Atom::Tag::Base:
        return a;
      case Atom::Tag::Prim:
        for (auto& i : c->indices) i = index(i, r);
        for (auto& t : c->types) t = type(t, r);
        return c;
      case Atom::Tag::Lam: {
        Renaming inner = r;
        for (auto& p : c->params) {
          p.second = type(p.second, r);
          p.first = inner.terms[p.first] = ns_.fresh(p.first);
        }
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::TLam: {
        Renaming inner = r;
        for (auto& b : c->tvars) b.first = inner.types[b.first] = ns_.fresh(b.first);
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::ILam: {
        Renaming inner = r;
        for (auto& b : c->ivars) b.first = inner.indices[b.first] = ns_.fresh(b.first);
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::Box:
        for (auto& i : c->indices) i = index(i, r);
        c->body = expr(a->body, r);
        c->annot = type(a->annot, r);
        return c;
    }
    return c;
  }

  ExprPtr expr(const ExprPtr& e, const Renaming& r) {
    auto c = std::make_shared<Expr>(*e);
    c->annot = type(e->annot, r);
    c->elem = type(e->elem, r);
    switch (e->tag) {
      case Expr::Tag::Var:
        c->name = lookup(r.terms, e->name);
        break;
      case Expr::Tag::Array:
        for (auto& a : c->atoms) a = atom(a, r);
        break;
      case Expr::Tag::Frame:
      case Expr::Tag::App:
        if (c->fn) c->fn = expr(e->fn, r);
        for (auto& x : c->args) x = expr(x, r);
        break;
      case Expr::Tag::EmptyArray:
      case Expr::Tag::EmptyFrame:
        break;
      case Expr::Tag::TApp:
        c->fn = expr(e->fn, r);
        for (auto& t : c->types) t = type(t, r);
        break;
      case Expr::Tag::IApp:
        c->fn = expr(e->fn, r);
        for (auto& i : c->indices) i = index(i, r);
        break;
      case Expr::Tag::Unbox: {
        c->fn = expr(e->fn, r);
        Renaming inner = r;
        for (auto& v : c->ivars) v = inner.indices[v] = ns_.fresh(v);
        c->name = inner.terms[e->name] = ns_.fresh(e->name);
        c->body = expr(e->body, inner);
        break;
      }
    }
    return c;
  }

 private:
  NameSupply& ns_;
};

}  // namespace

ExprPtr freshen(const ExprPtr& e, NameSupply& names) { return Freshener(names).expr(e, {}); }

TypePtr freshen(const TypePtr& t, NameSupply& names) { return Freshener(names).type(t, {}); }

ExprPtr freshen(const ExprPtr& e) {
  NameSupply ns = NameSupply::global();
  return Freshener(ns).expr(e, {});
}

// ---------------------------------------------------------------------------
// Free names

void collect_free(const IndexPtr& i, FreeNames& out) {
  if (i->tag == Index::Tag::Var) out.indices.insert(i->name);
  for (auto& a : i->args) collect_free(a, out);
}

void collect_free(const TypePtr& t, FreeNames& out) {
  if (!t) return;
  switch (t->tag) {
    case Type::Tag::Base:
      return;
    case Type::Tag::Var:
      out.types.insert(t->name);
      return;
    case Type::Tag::Fun:
      for (auto& x : t->inputs) collect_free(x, out);
      collect_free(t->body, out);
      return;
    case Type::Tag::Arr:
      collect_free(t->body, out);
      collect_free(t->shape, out);
      return;
    case Type::Tag::Forall: {
      FreeNames inner;
      collect_free(t->body, inner);
      for (auto& b : t->tvars) inner.types.erase(b.first);
      out.terms.insert(inner.terms.begin(), inner.terms.end());
      out.types.insert(inner.types.begin(), inner.types.end());
      out.indices.insert(inner.indices.begin(), inner.indices.end());
      return;
    }
    case Type::Tag::Pi:
    case Type::Tag::Sigma: {
      FreeNames inner;
      collect_free(t->body, inner);
      for (auto& b : t->ivars) inner.indices.erase(b.first);
      out.terms.insert(inner.terms.begin(), inner.terms.end());
      out.types.insert(inner.types.begin(), inner.types.end());
      out.indices.insert(inner.indices.begin(), inner.indices.end());
      return;
    }
  }
}

static void merge(FreeNames& out, const FreeNames& in) {
  out.terms.insert(in.terms.begin(), in.terms.end());
  out.types.insert(in.types.begin(), in.types.end());
  out.indices.insert(in.indices.begin(), in.indices.end());
}

void collect_free(const AtomPtr& a, FreeNames& out) {
  switch (a->tag) {
    case Atom::Tag::Base:
      return;
    case Atom::Tag::Prim:
      for (auto& i : a->indices) collect_free(i, out);
      for (auto& t : a->types) collect_free(t, out);
      return;
    case Atom::Tag::Lam: {
      FreeNames inner;
      collect_free(a->body, inner);
      for (auto& p : a->params) {
        inner.terms.erase(p.first);
        collect_free(p.second, out);
      }
      merge(out, inner);
      return;
    }
    case Atom::Tag::TLam: {
      FreeNames inner;
      collect_free(a->body, inner);
      for (auto& b : a->tvars) inner.types.erase(b.first);
      merge(out, inner);
      return;
    }
    case Atom::Tag::ILam: {
      FreeNames inner;
      collect_free(a->body, inner);
      for (auto& b : a->ivars) inner.indices.erase(b.first);
      merge(out, inner);
      return;
    }
    case Atom::Tag::Box:
      for (auto& i : a->indices) collect_free(i, out);
      collect_free(a->body, out);
      collect_free(a->annot, out);
      return;
  }
}

void collect_free(const ExprPtr& e, FreeNames& out) {
  collect_free(e->annot, out);
  collect_free(e->elem, out);
  switch (e->tag) {
    case Expr::Tag::Var:
      out.terms.insert(e->name);
      return;
    case Expr::Tag::Array:
      for (auto& a : e->atoms) collect_free(a, out);
      return;
    case Expr::Tag::Frame:
    case Expr::Tag::App:
      if (e->fn) collect_free(e->fn, out);
      for (auto& x : e->args) collect_free(x, out);
      return;
    case Expr::Tag::EmptyArray:
    case Expr::Tag::EmptyFrame:
      return;
    case Expr::Tag::TApp:
      collect_free(e->fn, out);
      for (auto& t : e->types) collect_free(t, out);
      return;
    case Expr::Tag::IApp:
      collect_free(e->fn, out);
      for (auto& i : e->indices) collect_free(i, out);
      return;
    case Expr::Tag::Unbox: {
      collect_free(e->fn, out);
      FreeNames inner;
      collect_free(e->body, inner);
      for (auto& v : e->ivars) inner.indices.erase(v);
      inner.terms.erase(e->name);
      merge(out, inner);
      return;
    }
  }
}

FreeNames free_names(const ExprPtr& e) {
  FreeNames f;
  collect_free(e, f);
  return f;
}

FreeNames free_names(const TypePtr& t) {
  FreeNames f;
  collect_free(t, f);
  return f;
}

std::set<std::string> free_index_vars(const TypePtr& t) { return free_names(t).indices; }

// ---------------------------------------------------------------------------
// Substitution

IndexPtr substitute(const IndexPtr& i, const std::map<std::string, IndexPtr>& s) {
  if (s.empty() || i->tag == Index::Tag::Nat) return i;
  if (i->tag == Index::Tag::Var) {
    auto it = s.find(i->name);
    return it == s.end() ? i : it->second;
  }
  auto c = std::make_shared<Index>(*i);
  for (auto& a : c->args) a = substitute(a, s);
  return c;
}

namespace {

class Substituter {
 public:
  explicit Substituter(const Subst& s) {
    FreeNames f;
    for (auto& [k, v] : s.terms) collect_free(v, f);
    for (auto& [k, v] : s.types) collect_free(v, f);
    for (auto& [k, v] : s.indices) collect_free(v, f);
    avoid_.insert(f.terms.begin(), f.terms.end());
    avoid_.insert(f.types.begin(), f.types.end());
    avoid_.insert(f.indices.begin(), f.indices.end());
  }

  TypePtr type(const TypePtr& t, const Subst& s) {
    if (!t || (s.types.empty() && s.indices.empty())) return t;
    switch (t->tag) {
      case Type::Tag::Base:
        return t;
      case Type::Tag::Var: {
        auto it = s.types.find(t->name);
        return it == s.types.end() ? t : it->second;
      }
      case Type::Tag::Fun: {
        auto c = std::make_shared<Type>(*t);
        for (auto& x : c->inputs) x = type(x, s);
        c->body = type(t->body, s);
        return c;
      }
      case Type::Tag::Arr: {
        auto c = std::make_shared<Type>(*t);
        c->body = type(t->body, s);
        c->shape = substitute(t->shape, s.indices);
        return c;
      }
      case Type::Tag::Forall: {
        auto c = std::make_shared<Type>(*t);
        Subst inner = s;
        for (auto& b : c->tvars) bind_type(b.first, inner);
        c->body = type(t->body, inner);
        return c;
      }
      case Type::Tag::Pi:
      case Type::Tag::Sigma: {
        auto c = std::make_shared<Type>(*t);
        Subst inner = s;
        for (auto& b : c->ivars) bind_index(b.first, inner);
        c->body = type(t->body, inner);
        return c;
      }
    }
    return t;
  }

  AtomPtr atom(const AtomPtr& a, const Subst& s) {
    if (s.empty()) return a;
    switch (a->tag) {
      case Atom::Tag::Base:
        return a;
      case Atom::Tag::Prim: {
        if (a->indices.empty() && a->types.empty()) return a;
        auto c = std::make_shared<Atom>(*a);
        for (auto& i : c->indices) i = substitute(i, s.indices);
        for (auto& t : c->types) t = type(t, s);
        return c;
      }
      case Atom::Tag::Lam: {
        auto c = std::make_shared<Atom>(*a);
        Subst inner = s;
        for (auto& p : c->params) {
          p.second = type(p.second, s);
          bind_term(p.first, inner);
        }
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::TLam: {
        auto c = std::make_shared<Atom>(*a);
        Subst inner = s;
        for (auto& b : c->tvars) bind_type(b.first, inner);
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::ILam: {
        auto c = std::make_shared<Atom>(*a);
        Subst inner = s;
        for (auto& b : c->ivars) bind_index(b.first, inner);
        c->body = expr(a->body, inner);
        return c;
      }
      case Atom::Tag::Box: {
        auto c = std::make_shared<Atom>(*a);
        for (auto& i : c->indices) i = substitute(i, s.indices);
        c->body = expr(a->body, s);
        c->annot = type(a->annot, s);
        return c;
      }
    }
    return a;
  }

  ExprPtr expr(const ExprPtr& e, const Subst& s) {
    if (s.empty()) return e;
    if (e->tag == Expr::Tag::Var) {
      auto it = s.terms.find(e->name);
      if (it != s.terms.end()) return it->second;
    }
    auto c = std::make_shared<Expr>(*e);
    c->annot = type(e->annot, s);
    c->elem = type(e->elem, s);
    switch (e->tag) {
      case Expr::Tag::Var:
      case Expr::Tag::EmptyArray:
      case Expr::Tag::EmptyFrame:
        break;
      case Expr::Tag::Array:
        for (auto& a : c->atoms) a = atom(a, s);
        break;
      case Expr::Tag::Frame:
      case Expr::Tag::App:
        if (c->fn) c->fn = expr(e->fn, s);
        for (auto& x : c->args) x = expr(x, s);
        break;
      case Expr::Tag::TApp:
        c->fn = expr(e->fn, s);
        for (auto& t : c->types) t = type(t, s);
        break;
      case Expr::Tag::IApp:
        c->fn = expr(e->fn, s);
        for (auto& i : c->indices) i = substitute(i, s.indices);
        break;
      case Expr::Tag::Unbox: {
        c->fn = expr(e->fn, s);
        Subst inner = s;
        for (auto& v : c->ivars) bind_index(v, inner);
        bind_term(c->name, inner);
        c->body = expr(e->body, inner);
        break;
      }
    }
    return c;
  }

 private:
  std::set<std::string> avoid_;

  // Each binder shadows its own namespace; a binder that would capture a
  // free name of some replacement is renamed.
  void bind_term(std::string& name, Subst& s) {
    s.terms.erase(name);
    if (avoid_.count(name) && !s.empty()) {
      std::string n = fresh_name(name);
      s.terms[name] = evar(n);
      name = n;
    }
  }

  void bind_type(std::string& name, Subst& s) {
    s.types.erase(name);
    if (avoid_.count(name) && !s.empty()) {
      std::string n = fresh_name(name);
      s.types[name] = tvar(n);
      name = n;
    }
  }

  void bind_index(std::string& name, Subst& s) {
    s.indices.erase(name);
    if (avoid_.count(name) && !s.empty()) {
      std::string n = fresh_name(name);
      s.indices[name] = ivar(n);
      name = n;
    }
  }
};

}  // namespace

TypePtr substitute(const TypePtr& t, const Subst& s) { return Substituter(s).type(t, s); }
ExprPtr substitute(const ExprPtr& e, const Subst& s) { return Substituter(s).expr(e, s); }
AtomPtr substitute(const AtomPtr& a, const Subst& s) { return Substituter(s).atom(a, s); }

// ---------------------------------------------------------------------------
// Structural equality

bool same(const IndexPtr& a, const IndexPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag || a->nat != b->nat || a->name != b->name || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i])) return false;
  return true;
}

bool same(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag || a->name != b->name || a->tvars != b->tvars || a->ivars != b->ivars ||
      a->inputs.size() != b->inputs.size())
    return false;
  for (std::size_t i = 0; i < a->inputs.size(); ++i)
    if (!same(a->inputs[i], b->inputs[i])) return false;
  if (!same(a->body, b->body)) return false;
  if ((a->shape == nullptr) != (b->shape == nullptr)) return false;
  return !a->shape || same(a->shape, b->shape);
}

bool same(const AtomPtr& a, const AtomPtr& b, bool annotations) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Atom::Tag::Base:
      return a->base == b->base;
    case Atom::Tag::Prim:
      if (a->prim != b->prim || a->indices.size() != b->indices.size() || a->types.size() != b->types.size())
        return false;
      for (std::size_t i = 0; i < a->indices.size(); ++i)
        if (!same(a->indices[i], b->indices[i])) return false;
      for (std::size_t i = 0; i < a->types.size(); ++i)
        if (!same(a->types[i], b->types[i])) return false;
      return true;
    case Atom::Tag::Lam:
      if (a->params.size() != b->params.size()) return false;
      for (std::size_t i = 0; i < a->params.size(); ++i)
        if (a->params[i].first != b->params[i].first || !same(a->params[i].second, b->params[i].second))
          return false;
      return same(a->body, b->body, annotations);
    case Atom::Tag::TLam:
      return a->tvars == b->tvars && same(a->body, b->body, annotations);
    case Atom::Tag::ILam:
      return a->ivars == b->ivars && same(a->body, b->body, annotations);
    case Atom::Tag::Box:
      if (a->indices.size() != b->indices.size()) return false;
      for (std::size_t i = 0; i < a->indices.size(); ++i)
        if (!same(a->indices[i], b->indices[i])) return false;
      return same(a->annot, b->annot) && same(a->body, b->body, annotations);
  }
  return false;
}

bool same(const ExprPtr& a, const ExprPtr& b, bool annotations) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag || a->name != b->name || a->dims != b->dims || a->ivars != b->ivars) return false;
  if (annotations && (a->annot || b->annot) && !same(a->annot, b->annot)) return false;
  if ((a->elem || b->elem) && !same(a->elem, b->elem)) return false;
  if (a->atoms.size() != b->atoms.size() || a->args.size() != b->args.size() ||
      a->types.size() != b->types.size() || a->indices.size() != b->indices.size())
    return false;
  for (std::size_t i = 0; i < a->atoms.size(); ++i)
    if (!same(a->atoms[i], b->atoms[i], annotations)) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i], annotations)) return false;
  for (std::size_t i = 0; i < a->types.size(); ++i)
    if (!same(a->types[i], b->types[i])) return false;
  for (std::size_t i = 0; i < a->indices.size(); ++i)
    if (!same(a->indices[i], b->indices[i])) return false;
  if ((a->fn || b->fn) && !same(a->fn, b->fn, annotations)) return false;
  if ((a->body || b->body) && !same(a->body, b->body, annotations)) return false;
  return true;
}

bool alpha_equal(const ExprPtr& a, const ExprPtr& b, bool annotations) {
  NameSupply na("%"), nb("%");
  return same(freshen(a, na), freshen(b, nb), annotations);
}

// ---------------------------------------------------------------------------
// Index rewriting

TypePtr map_indices(const TypePtr& t, IndexRewrite f) {
  if (!t) return t;
  auto c = std::make_shared<Type>(*t);
  for (auto& x : c->inputs) x = map_indices(x, f);
  c->body = map_indices(t->body, f);
  if (t->shape) c->shape = f(t->shape);
  return c;
}

static AtomPtr map_indices(const AtomPtr& a, IndexRewrite f) {
  auto c = std::make_shared<Atom>(*a);
  for (auto& p : c->params) p.second = map_indices(p.second, f);
  for (auto& i : c->indices) i = f(i);
  for (auto& t : c->types) t = map_indices(t, f);
  if (a->body) c->body = map_indices(a->body, f);
  c->annot = map_indices(a->annot, f);
  return c;
}

ExprPtr map_indices(const ExprPtr& e, IndexRewrite f) {
  auto c = std::make_shared<Expr>(*e);
  c->annot = map_indices(e->annot, f);
  c->elem = map_indices(e->elem, f);
  for (auto& a : c->atoms) a = map_indices(a, f);
  for (auto& x : c->args) x = map_indices(x, f);
  for (auto& t : c->types) t = map_indices(t, f);
  for (auto& i : c->indices) i = f(i);
  if (e->fn) c->fn = map_indices(e->fn, f);
  if (e->body) c->body = map_indices(e->body, f);
  return c;
}

std::size_t term_depth(const ExprPtr& e) {
  std::size_t d = 0;
  auto sub = [&](const ExprPtr& x) {
    if (x) d = std::max(d, term_depth(x));
  };
  for (auto& a : e->atoms)
    if (a->body) sub(a->body);
  for (auto& x : e->args) sub(x);
  sub(e->fn);
  sub(e->body);
  return d + 1;
}

}  // namespace remora
