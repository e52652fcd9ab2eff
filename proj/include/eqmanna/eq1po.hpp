#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqmanna/model.hpp"
#include "eqmanna/outcome.hpp"

namespace eqmanna {

/// Goods-only view of a symmetric tri-valued instance: the items of O± ∪ O+,
/// with every -1 an agent has for a subjective item lifted to 0. Values are
/// in units of w.
struct BinaryReduction {
  std::vector<ItemId> base_items;  // original indices, ascending
  Instance reduced;                // n x |base_items|, entries in {0, 1}
  Value scale = 1;
};

BinaryReduction build_binary_reduction(const Instance& instance);

struct NashOptions {
  /// Randomises the order in which improving paths are searched.
  std::optional<std::uint64_t> path_seed;
};

/// Nash-optimal complete allocation for {0,1} valuations. Starts from a
/// non-wasteful allocation and pushes one unit of utility along exchange
/// paths (each hop an item both endpoints value 1) from an agent to one at
/// least 2 poorer, until no such path remains. The result is leximin among
/// non-wasteful allocations. Items nobody values go to agent 0.
Allocation nash_optimal_binary(const Instance& instance, const NashOptions& options = {});

/// Decides EQ1 + PO for symmetric tri-valued valuations (normalization not
/// required). Returns the allocation with its certificate, or does_not_exist.
/// Throws NotApplicable on other valuation classes.
SolverOutcome solve_trivalued_eq1po(const Instance& instance, const NashOptions& options = {});

}  // namespace eqmanna
