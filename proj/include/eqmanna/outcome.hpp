#pragma once

#include <optional>
#include <string>

#include "eqmanna/fairness.hpp"
#include "eqmanna/model.hpp"

namespace eqmanna {

enum class OutcomeStatus { found, does_not_exist, not_applicable };

/// An allocation with the checks that certify it, a verified "does not
/// exist", or "not applicable to this instance class".
struct SolverOutcome {
  OutcomeStatus status = OutcomeStatus::not_applicable;
  std::optional<Allocation> allocation;
  std::optional<FairnessReport> certificate;
  std::string note;

  bool found() const noexcept { return status == OutcomeStatus::found; }
};

}  // namespace eqmanna
