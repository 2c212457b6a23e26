#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "remora/eval.hpp"
#include "remora/syntax.hpp"

namespace remora {

// The erased language keeps terms and indices; types survive only as the
// shapes they describe.

struct EAtom;
struct EExpr;
using EAtomPtr = std::shared_ptr<const EAtom>;
using EExprPtr = std::shared_ptr<const EExpr>;

struct EAtom {
  enum class Tag { Base, Prim, Lam, ILam, Box };
  Tag tag = Tag::Base;
  BaseVal base;
  std::string prim;
  std::vector<std::string> params;  // Lam term variables, ILam index variables
  std::vector<IndexPtr> indices;    // Box
  EExprPtr body;
};

struct EExpr {
  enum class Tag { Var, Array, Frame, App, IApp, Unbox };
  Tag tag = Tag::Var;
  std::string name;                 // Var, or the payload variable of Unbox
  std::vector<std::uint64_t> dims;  // Array, Frame
  std::vector<EAtomPtr> atoms;      // Array
  std::vector<EExprPtr> args;       // Frame cells, App arguments
  std::vector<IndexPtr> cells;      // App: declared cell shape per argument
  std::vector<IndexPtr> indices;    // IApp arguments
  std::vector<std::string> ivars;   // Unbox index variables
  EExprPtr fn;                      // App/IApp function, Unbox box expression
  EExprPtr body;                    // Unbox body
  IndexPtr tag_shape;               // Frame/App/IApp result shape, Unbox body shape
};

IndexPtr erase_type(const TypePtr& t);
EExprPtr erase_term(const ExprPtr& e);
EAtomPtr erase_atom(const AtomPtr& a);

// (frame (dims) tag cells...), (f (a cell)... result), (i-app f ι... result),
// (unbox (xs... x box) body shape), (ilam (xs...) body), (box (ι...) e)
std::string print(const EExprPtr& e);
std::string print(const EAtomPtr& a);

struct ESubst {
  std::map<std::string, EExprPtr> terms;
  std::map<std::string, IndexPtr> indices;
};

EExprPtr substitute(const EExprPtr& e, const ESubst& s);
EExprPtr freshen(const EExprPtr& e, NameSupply& names);

// Structural equality with indices compared up to index equivalence.
bool erased_same(const EExprPtr& a, const EExprPtr& b);
// As above after renaming every binder canonically on both sides.
bool erased_alpha_equal(const EExprPtr& a, const EExprPtr& b);

bool is_value(const EExprPtr& e);

struct EStepResult {
  StepResult::Status status = StepResult::Status::Value;
  EExprPtr term;
  Rule rule = Rule::Lift;
  StuckReason reason = StuckReason::Internal;
  std::string detail;
};

EStepResult erased_step(const EExprPtr& e);

struct EEvalResult {
  EvalResult::Status status = EvalResult::Status::Value;
  EExprPtr term;
  StuckReason reason = StuckReason::Internal;
  std::string detail;
  std::size_t steps = 0;
};

EEvalResult erased_evaluate(const EExprPtr& e, std::size_t fuel = kDefaultFuel);

struct BisimStep {
  Rule typed_rule;
  Rule erased_rule;
  ExprPtr typed;
  EExprPtr erased;
};

struct BisimReport {
  enum class Outcome { BothValue, BothStuck, Diverged, Mismatch };
  Outcome outcome = Outcome::BothValue;
  std::size_t steps = 0;
  // Mismatch: the step after which the states disagree (0 = initial state).
  std::size_t mismatch_step = 0;
  ExprPtr typed;
  EExprPtr erased;
  std::string detail;
  std::vector<BisimStep> trace;
};

const char* to_string(BisimReport::Outcome o);

BisimReport bisim_run(const ExprPtr& elaborated, std::size_t fuel = kDefaultFuel, bool trace = false);

}  // namespace remora
