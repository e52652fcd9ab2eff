#include "eqmanna/eq1po.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"

namespace eqmanna {

BinaryReduction build_binary_reduction(const Instance& instance) {
  const ValuationClass vc = classify_valuations(instance);
  if (!vc.is_symmetric_trivalued) throw NotApplicable("symmetric_trivalued", "values are not all in {-w, 0, +w}");
  BinaryReduction r;
  r.scale = vc.scale;
  const ItemClass items = classify_items(instance);
  for (ItemId o = 0; o < instance.num_items(); ++o)
    if (items.kind[o] != ItemKind::objective_chore) r.base_items.push_back(o);
  std::vector<Value> vals;
  vals.reserve(static_cast<std::size_t>(instance.num_agents()) * r.base_items.size());
  for (AgentId i = 0; i < instance.num_agents(); ++i)
    for (ItemId o : r.base_items) vals.push_back(std::max<Value>(instance.value(i, o) / r.scale, 0));
  r.reduced = Instance(instance.num_agents(), static_cast<int>(r.base_items.size()), std::move(vals), instance.name());
  return r;
}

namespace {

class PathImprover {
 public:
  PathImprover(const Instance& inst, Allocation& alloc, const NashOptions& options) : inst_(inst), alloc_(alloc) {
    if (options.path_seed) rng_.emplace(*options.path_seed);
  }

  void run() {
    while (improve_once()) {
    }
  }

 private:
  bool improve_once() {
    const int n = alloc_.num_agents();
    std::vector<AgentId> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    if (rng_) {
      std::ranges::shuffle(sources, *rng_);
    } else {
      std::ranges::stable_sort(sources, [&](AgentId a, AgentId b) { return alloc_.utility(a) > alloc_.utility(b); });
    }
    for (AgentId s : sources)
      if (push_from(s)) return true;
    return false;
  }

  // BFS over the exchange graph from s; moves one unit to the poorest agent
  // reachable with utility <= u_s - 2.
  bool push_from(AgentId s) {
    const int n = alloc_.num_agents();
    const auto bundles = alloc_.bundles();
    std::vector<AgentId> parent(n, kNone);
    std::vector<ItemId> via(n, kNone);
    std::vector<bool> seen(n, false);
    std::queue<AgentId> q;
    q.push(s);
    seen[s] = true;
    std::vector<AgentId> reached;
    while (!q.empty()) {
      const AgentId a = q.front();
      q.pop();
      std::vector<ItemId> items = bundles[a];
      if (rng_) std::ranges::shuffle(items, *rng_);
      for (ItemId o : items) {
        if (inst_.value(a, o) != 1) continue;
        for (AgentId b = 0; b < n; ++b) {
          if (seen[b] || inst_.value(b, o) != 1) continue;
          seen[b] = true;
          parent[b] = a;
          via[b] = o;
          reached.push_back(b);
          q.push(b);
        }
      }
    }
    std::vector<AgentId> eligible;
    for (AgentId t : reached)
      if (alloc_.utility(t) <= alloc_.utility(s) - 2) eligible.push_back(t);
    if (eligible.empty()) return false;
    AgentId target;
    if (rng_) {
      std::uniform_int_distribution<std::size_t> d(0, eligible.size() - 1);
      target = eligible[d(*rng_)];
    } else {
      std::ranges::sort(eligible);
      target = *std::ranges::min_element(eligible, {}, [&](AgentId t) { return alloc_.utility(t); });
    }
    for (AgentId b = target; b != s; b = parent[b]) alloc_.transfer(inst_, via[b], parent[b], b);
    return true;
  }

  const Instance& inst_;
  Allocation& alloc_;
  std::optional<std::mt19937_64> rng_;
};

}  // namespace

Allocation nash_optimal_binary(const Instance& instance, const NashOptions& options) {
  if (!classify_valuations(instance).is_binary) throw NotApplicable("binary", "values are not all in {0, 1}");
  Allocation a(instance);
  // Non-wasteful start: each liked item to its currently poorest admirer.
  for (ItemId o = 0; o < instance.num_items(); ++o) {
    AgentId best = kNone;
    for (AgentId i = 0; i < instance.num_agents(); ++i) {
      if (instance.value(i, o) != 1) continue;
      if (best == kNone || a.utility(i) < a.utility(best)) best = i;
    }
    a.assign(instance, o, best == kNone ? 0 : best);
  }
  PathImprover(instance, a, options).run();
  return a;
}

SolverOutcome solve_trivalued_eq1po(const Instance& instance, const NashOptions& options) {
  const BinaryReduction red = build_binary_reduction(instance);
  const Allocation nash = nash_optimal_binary(red.reduced, options);

  Allocation a(instance);
  for (std::size_t k = 0; k < red.base_items.size(); ++k)
    a.assign(instance, red.base_items[k], nash.owner(static_cast<ItemId>(k)));

  std::vector<ItemId> universal;
  for (ItemId o : classify_items(instance).objective_chores) {
    AgentId taker = kNone;
    for (AgentId i = 0; i < instance.num_agents() && taker == kNone; ++i)
      if (instance.value(i, o) == 0) taker = i;
    if (taker != kNone) a.assign(instance, o, taker);
    else universal.push_back(o);
  }
  for (ItemId o : universal) {
    const auto u = a.utilities();
    const auto richest = static_cast<AgentId>(std::ranges::max_element(u) - u.begin());
    a.assign(instance, o, richest);
  }

  SolverOutcome out;
  if (!check_eq1(instance, a)) {
    out.status = OutcomeStatus::does_not_exist;
    out.note = "Nash-optimal completion is not EQ1: no EQ1+PO allocation exists";
    return out;
  }
  FairnessReport cert = evaluate(instance, a);
  cert.po = check_po_nonwasteful(instance, a);
  if (!*cert.po) throw InternalDefect("EQ1+PO output lost its non-wastefulness certificate");
  out.status = OutcomeStatus::found;
  out.allocation = std::move(a);
  out.certificate = std::move(cert);
  return out;
}

}  // namespace eqmanna
