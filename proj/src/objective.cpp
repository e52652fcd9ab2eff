#include "eqmanna/objective.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"

namespace eqmanna {
namespace {

class TiePicker {
 public:
  explicit TiePicker(std::optional<std::uint64_t> seed) {
    if (seed) rng_.emplace(*seed);
  }
  // `candidates` is non-empty and in ascending index order.
  int pick(const std::vector<int>& candidates) {
    if (!rng_ || candidates.size() == 1) return candidates.front();
    std::uniform_int_distribution<std::size_t> d(0, candidates.size() - 1);
    return candidates[d(*rng_)];
  }

 private:
  std::optional<std::mt19937_64> rng_;
};

std::vector<AgentId> extreme_agents(const Allocation& a, bool poorest) {
  const auto u = a.utilities();
  const Value target = poorest ? *std::ranges::min_element(u) : *std::ranges::max_element(u);
  std::vector<AgentId> out;
  for (AgentId i = 0; i < a.num_agents(); ++i)
    if (u[i] == target) out.push_back(i);
  return out;
}

// Runs both phases over the listed remaining goods and chores.
void run_phases(const Instance& inst, Allocation& alloc, std::vector<ItemId> goods, std::vector<ItemId> chores,
                const GreedyOptions& options, PhaseTrace& trace) {
  TiePicker ties(options.tie_seed);
  auto take = [&](std::vector<ItemId>& pool, Phase phase) {
    while (!pool.empty()) {
      const AgentId agent = ties.pick(extreme_agents(alloc, phase == Phase::goods));
      // goods: the agent's most valued; chores: its most disliked.
      Value best = inst.value(agent, pool.front());
      for (ItemId o : pool) {
        const Value v = inst.value(agent, o);
        best = phase == Phase::goods ? std::max(best, v) : std::min(best, v);
      }
      std::vector<ItemId> tied;
      for (ItemId o : pool)
        if (inst.value(agent, o) == best) tied.push_back(o);
      const ItemId item = ties.pick(tied);
      TraceStep step{static_cast<int>(trace.size()), agent, item, alloc.utility(agent), 0, phase};
      alloc.assign(inst, item, agent);
      step.utility_after = alloc.utility(agent);
      trace.push_back(step);
      std::erase(pool, item);
      if (options.observer) options.observer(alloc, step);
    }
  };
  take(goods, Phase::goods);
  take(chores, Phase::chores);
}

}  // namespace

GreedyResult solve_objective_eq1(const Instance& instance, const GreedyOptions& options) {
  const ItemClass items = classify_items(instance);
  if (!items.is_objective()) {
    throw NotApplicable("objective", "item " + std::to_string(items.subjective.front()) +
                                         " is subjective; the objective greedy does not apply");
  }
  GreedyResult r{Allocation(instance), {}};
  run_phases(instance, r.allocation, items.objective_goods, items.objective_chores, options, r.trace);
  return r;
}

GreedyResult complete_allocation(const Instance& instance, Allocation partial, const GreedyOptions& options) {
  if (partial.num_agents() != instance.num_agents() || partial.num_items() != instance.num_items())
    throw PreconditionViolated("partial allocation shape does not match the instance");
  std::vector<ItemId> goods, chores;
  for (ItemId o : partial.unallocated()) {
    switch (item_kind(instance, o)) {
      case ItemKind::objective_good: goods.push_back(o); break;
      case ItemKind::objective_chore: chores.push_back(o); break;
      case ItemKind::subjective:
        throw PreconditionViolated("unallocated item " + std::to_string(o) + " is subjective");
    }
  }
  if (!check_eq1(instance, partial)) throw PreconditionViolated("partial allocation is not EQ1");
  GreedyResult r{std::move(partial), {}};
  run_phases(instance, r.allocation, std::move(goods), std::move(chores), options, r.trace);
  return r;
}

Allocation replay(const Instance& instance, const PhaseTrace& trace, Allocation start) {
  for (const TraceStep& s : trace) start.assign(instance, s.item, s.agent);
  return start;
}

}  // namespace eqmanna
