#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eqmanna/model.hpp"

namespace eqmanna {

enum class Phase { goods, chores };

struct TraceStep {
  int step = 0;
  AgentId agent = kNone;
  ItemId item = kNone;
  Value utility_before = 0;
  Value utility_after = 0;
  Phase phase = Phase::goods;
};

using PhaseTrace = std::vector<TraceStep>;

struct GreedyOptions {
  /// nullopt: lowest agent index, then lowest item index on ties.
  /// Otherwise ties are broken uniformly at random from this seed.
  std::optional<std::uint64_t> tie_seed;
  /// Called after every assignment with the partial allocation.
  std::function<void(const Allocation&, const TraceStep&)> observer;
};

struct GreedyResult {
  Allocation allocation;
  PhaseTrace trace;
};

/// EQ1 for objective instances (no subjective items). Poor agents pick their
/// favourite remaining objective good; once goods run out, rich agents take
/// their most disliked remaining chore. Throws NotApplicable naming the first
/// subjective item.
GreedyResult solve_objective_eq1(const Instance& instance, const GreedyOptions& options = {});

/// Extends an EQ1 partial allocation whose unallocated items are all
/// objective, using the same two phases. Throws PreconditionViolated if an
/// unallocated item is subjective or the partial allocation is not EQ1.
GreedyResult complete_allocation(const Instance& instance, Allocation partial, const GreedyOptions& options = {});

/// Rebuilds an allocation by replaying a trace on top of `start`.
Allocation replay(const Instance& instance, const PhaseTrace& trace, Allocation start);

}  // namespace eqmanna
