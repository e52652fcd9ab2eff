#include "eqmanna/two_agent.hpp"

#include <algorithm>
#include <string>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/objective.hpp"

namespace eqmanna {
namespace {

void require_two_agents(const Instance& inst) {
  if (inst.num_agents() != 2)
    throw NotApplicable("two_agents", "needs exactly 2 agents, got " + std::to_string(inst.num_agents()));
}

void require_type_normalized(const ValuationClass& vc) {
  if (!vc.is_type_normalized)
    throw NotApplicable("type_normalized", "goods or chores do not sum to a common constant across agents");
}

AgentId positive_valuer(const Instance& inst, ItemId o) { return inst.value(0, o) > 0 ? 0 : 1; }

}  // namespace

Allocation solve_two_agent_type_normalized(const Instance& instance) {
  require_two_agents(instance);
  require_type_normalized(classify_valuations(instance));
  const ItemClass items = classify_items(instance);

  Allocation a(instance);
  for (ItemId o : items.subjective) a.assign(instance, o, positive_valuer(instance, o));

  if (a.utility(0) != a.utility(1)) {
    const AgentId poor = a.utility(0) < a.utility(1) ? 0 : 1;
    const AgentId rich = 1 - poor;
    std::vector<ItemId> goods = items.objective_goods;
    std::ranges::stable_sort(goods, [&](ItemId x, ItemId y) { return instance.value(poor, x) > instance.value(poor, y); });
    auto next = goods.begin();
    while (a.utility(poor) < a.utility(rich)) {
      if (next == goods.end() || instance.value(poor, *next) <= 0)
        throw InternalDefect("type-normalization should leave enough objective goods for the poorer agent");
      a.assign(instance, *next++, poor);
    }
  }
  return complete_allocation(instance, std::move(a)).allocation;
}

Allocation solve_two_agent_subjective_eq(const Instance& instance) {
  require_two_agents(instance);
  require_type_normalized(classify_valuations(instance));
  const ItemClass items = classify_items(instance);
  if (!items.objective_goods.empty())
    throw NotApplicable("subjective_only", "item " + std::to_string(items.objective_goods.front()) + " is an objective good");
  if (!items.objective_chores.empty())
    throw NotApplicable("subjective_only", "item " + std::to_string(items.objective_chores.front()) + " is an objective chore");

  Allocation a(instance);
  for (ItemId o = 0; o < instance.num_items(); ++o) a.assign(instance, o, positive_valuer(instance, o));
  return a;
}

Allocation solve_two_agent_trivalued_eq1po(const Instance& instance) {
  require_two_agents(instance);
  const ValuationClass vc = classify_valuations(instance);
  if (!vc.is_symmetric_trivalued) throw NotApplicable("symmetric_trivalued", "values are not all in {-w, 0, +w}");
  require_type_normalized(vc);
  const ItemClass items = classify_items(instance);

  Allocation a(instance);
  for (ItemId o : items.subjective) a.assign(instance, o, positive_valuer(instance, o));
  // Goods only one agent likes go to that agent.
  for (ItemId o : items.objective_goods) {
    const Value v0 = instance.value(0, o);
    const Value v1 = instance.value(1, o);
    if ((v0 == 0) != (v1 == 0)) a.assign(instance, o, v0 > 0 ? 0 : 1);
  }
  // Chores someone does not mind go to that agent. Utilities are unchanged,
  // so running this before the greedy goods phase gives the same result.
  for (ItemId o : items.objective_chores) {
    if (instance.value(0, o) == 0) a.assign(instance, o, 0);
    else if (instance.value(1, o) == 0) a.assign(instance, o, 1);
  }
  // Remaining goods are liked by both (or by neither); remaining chores are
  // universal. The completion hands goods to the poorer, chores to the richer.
  return complete_allocation(instance, std::move(a)).allocation;
}

Allocation solve_identical_eq1po(const Instance& instance) {
  if (!classify_valuations(instance).is_identical)
    throw NotApplicable("identical", "agents' valuation rows differ");
  return solve_objective_eq1(instance).allocation;
}

}  // namespace eqmanna
