#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "remora/syntax.hpp"

namespace remora {

// Θ (index sorts), Δ (type kinds), Γ (term types).
struct Env {
  std::map<std::string, Sort> sorts;
  std::map<std::string, Kind> kinds;
  std::map<std::string, TypePtr> types;
};

using Signature = std::map<std::string, TypePtr>;

enum class ErrorKind {
  UnboundVar,
  SortMismatch,
  KindMismatch,
  FrameIncompatible,
  CellMismatch,
  LengthMismatch,
  EscapingIndexVar,
  NotAFunction,
  NotABox,
  AnnotationMismatch,
};

const char* to_string(ErrorKind k);

struct TypeError : std::runtime_error {
  ErrorKind kind;
  SourceLocation loc;
  std::string detail;
  TypeError(ErrorKind k, SourceLocation l, std::string d);
};

Sort sort_of(const Env& env, const IndexPtr& i, const SourceLocation& loc = {});
Kind kind_of(const Env& env, const TypePtr& t, const SourceLocation& loc = {});
bool types_equal(const TypePtr& a, const TypePtr& b);
void check_env(const Env& env);

struct Elaborated {
  ExprPtr term;  // every node annotated; empty forms rewritten
  TypePtr type;
};

Elaborated elaborate(const Env& env, const Signature& sig, const ExprPtr& e);

// Type of a single atom in the given environment.
TypePtr type_of_atom(const Env& env, const Signature& sig, const AtomPtr& a);

}  // namespace remora
