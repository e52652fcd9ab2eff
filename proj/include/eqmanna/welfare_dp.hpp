#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "eqmanna/execution.hpp"
#include "eqmanna/model.hpp"

namespace eqmanna {

enum class Objective { utilitarian, egalitarian };

struct DpOptions {
  int max_agents = 4;
  /// Upper limit on the n * m^(2n+1) * V^n state-space estimate.
  long double state_ceiling = 1e14L;
  Execution execution = Execution::parallel;
};

struct DpStats {
  std::vector<std::size_t> layer_states;  // reachable states after k items, k = 0..m
  std::size_t total_states = 0;         // layers 1..m (the empty start state is not counted)
  Value value_range = 0;         // V = V_g + V_c
  long double estimate = 0;      // n * m^(2n+1) * V^n, used by the guard
  long double runtime_bound = 0; // same with m and V clamped to >= 1
};

struct DpResult {
  bool exists = false;  // false: no strict-EQX allocation at all
  std::optional<Allocation> allocation;
  Value optimum = 0;
  std::vector<Value> utilities;
  DpStats stats;
};

/// UW- or EW-maximal allocation among strict-EQX allocations by a forward DP
/// over states (k, utilities, least valuable good per bundle, least disliked
/// chore per bundle). Throws CeilingExceeded when n exceeds `max_agents` or the
/// estimate exceeds `state_ceiling`.
DpResult dp_welfare_eqx(const Instance& instance, Objective objective, const DpOptions& options = {});

/// The state-space estimate n * m^(2n+1) * V^n.
long double dp_state_estimate(const Instance& instance);

}  // namespace eqmanna
