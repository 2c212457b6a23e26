#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "remora/metafunctions.hpp"
#include "remora/syntax.hpp"

namespace remora {

enum class Rule { Lift, Map, Beta, Delta, TBeta, IBeta, Collapse, Unbox };
const char* to_string(Rule r);

enum class StuckReason { Misapplied, Internal };

struct StepResult {
  enum class Status { Stepped, Value, Stuck };
  Status status = Status::Value;
  ExprPtr term;            // the new term when Stepped
  Rule rule = Rule::Lift;  // when Stepped
  StuckReason reason = StuckReason::Internal;
  std::string detail;  // the misapplied operator, or a diagnostic
};

bool is_value(const ExprPtr& e);

// One step of the typed machine on a closed, elaborated term.
StepResult step(const ExprPtr& e);

struct EvalResult {
  enum class Status { Value, Stuck, OutOfFuel };
  Status status = Status::Value;
  ExprPtr term;  // the value, the stuck term, or the last term reached
  StuckReason reason = StuckReason::Internal;
  std::string detail;
  std::size_t steps = 0;
  std::vector<std::pair<Rule, ExprPtr>> trace;
};

constexpr std::size_t kDefaultFuel = 100000;

EvalResult evaluate(const ExprPtr& e, std::size_t fuel = kDefaultFuel, bool trace = false);

}  // namespace remora
