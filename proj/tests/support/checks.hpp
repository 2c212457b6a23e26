#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "remora/erase.hpp"
#include "remora/eval.hpp"
#include "remora/types.hpp"

namespace remora::testing {

// Walks the typed machine from `elaborated`, checking at every state that
// it is a value, steps, or is stuck on a misapplied primitive, and that each
// stepped term elaborates again to the original type. Returns the first
// violation.
std::optional<std::string> soundness_violation(const Elaborated& elaborated, std::size_t fuel);

// Two independent freshen + elaborate passes agree on the type.
std::optional<std::string> uniqueness_violation(const ExprPtr& parsed);

// Lockstep run plus the outcome/final value agreement the harness promises.
std::optional<std::string> bisim_violation(const ExprPtr& elaborated, std::size_t fuel);

}  // namespace remora::testing
