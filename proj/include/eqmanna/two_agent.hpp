#pragma once

#include "eqmanna/model.hpp"

namespace eqmanna {

/// Two agents, type-normalized valuations: EQ1. Subjective items go to
/// their positive valuer, the poorer agent then takes its favourite objective
/// goods until it catches up, and the rest is completed greedily.
Allocation solve_two_agent_type_normalized(const Instance& instance);

/// Two agents, type-normalized, subjective items only: agent 0 keeps what it
/// likes, agent 1 gets the rest. Both end at the common good sum g (EQ + PO).
Allocation solve_two_agent_subjective_eq(const Instance& instance);

/// Two agents, symmetric tri-valued, type-normalized: EQ1 + PO.
Allocation solve_two_agent_trivalued_eq1po(const Instance& instance);

/// Identical valuations: the objective greedy output, which is PO because
/// every complete allocation is.
Allocation solve_identical_eq1po(const Instance& instance);

}  // namespace eqmanna
