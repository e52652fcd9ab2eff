#include "eqmanna/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "eqmanna/errors.hpp"

namespace eqmanna {

Instance::Instance(int num_agents, std::vector<std::vector<Value>> rows, std::string name)
    : n_(num_agents), name_(std::move(name)) {
  if (num_agents <= 0) throw PreconditionViolated("instance needs at least one agent");
  if (static_cast<int>(rows.size()) != num_agents) {
    throw PreconditionViolated("expected " + std::to_string(num_agents) + " rows, got " +
                               std::to_string(rows.size()));
  }
  m_ = static_cast<int>(rows.front().size());
  values_.reserve(static_cast<std::size_t>(n_) * m_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m_) throw PreconditionViolated("ragged valuation matrix");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Instance::Instance(int num_agents, int num_items, std::vector<Value> row_major, std::string name)
    : n_(num_agents), m_(num_items), values_(std::move(row_major)), name_(std::move(name)) {
  if (num_agents <= 0) throw PreconditionViolated("instance needs at least one agent");
  if (num_items < 0) throw PreconditionViolated("negative item count");
  if (values_.size() != static_cast<std::size_t>(n_) * m_) {
    throw PreconditionViolated("valuation matrix has " + std::to_string(values_.size()) +
                               " entries, expected " + std::to_string(n_ * m_));
  }
}

std::vector<std::vector<Value>> Instance::rows() const {
  std::vector<std::vector<Value>> out;
  out.reserve(n_);
  for (AgentId i = 0; i < n_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

Value Instance::bundle_value(AgentId agent, std::span<const ItemId> items) const {
  Value total = 0;
  for (ItemId o : items) total += value(agent, o);
  return total;
}

Instance Instance::restricted_to(std::span<const ItemId> items) const {
  std::vector<Value> vals;
  vals.reserve(static_cast<std::size_t>(n_) * items.size());
  for (AgentId i = 0; i < n_; ++i)
    for (ItemId o : items) vals.push_back(value(i, o));
  return Instance(n_, static_cast<int>(items.size()), std::move(vals), name_);
}

ItemKind item_kind(const Instance& instance, ItemId item) {
  bool all_nonneg = true;
  bool all_nonpos = true;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    const Value v = instance.value(i, item);
    all_nonneg = all_nonneg && v >= 0;
    all_nonpos = all_nonpos && v <= 0;
  }
  if (all_nonneg) return ItemKind::objective_good;
  if (all_nonpos) return ItemKind::objective_chore;
  return ItemKind::subjective;
}

ItemClass classify_items(const Instance& instance) {
  ItemClass out;
  out.kind.reserve(instance.num_items());
  for (ItemId o = 0; o < instance.num_items(); ++o) {
    const ItemKind k = item_kind(instance, o);
    out.kind.push_back(k);
    switch (k) {
      case ItemKind::objective_good: out.objective_goods.push_back(o); break;
      case ItemKind::objective_chore: out.objective_chores.push_back(o); break;
      case ItemKind::subjective: out.subjective.push_back(o); break;
    }
  }
  return out;
}

ValuationClass classify_valuations(const Instance& instance) {
  const int n = instance.num_agents();
  const int m = instance.num_items();
  ValuationClass vc;
  vc.is_objective = classify_items(instance).is_objective();

  vc.is_identical = true;
  for (AgentId i = 1; i < n && vc.is_identical; ++i)
    vc.is_identical = std::ranges::equal(instance.row(i), instance.row(0));

  Value w = 0;
  bool has_zero = false;
  bool symmetric = true;
  vc.is_binary = true;
  for (AgentId i = 0; i < n; ++i) {
    for (Value v : instance.row(i)) {
      vc.is_binary = vc.is_binary && (v == 0 || v == 1);
      if (v == 0) {
        has_zero = true;
        continue;
      }
      const Value a = v < 0 ? -v : v;
      if (w == 0) w = a;
      symmetric = symmetric && a == w;
    }
  }
  vc.scale = w == 0 ? 1 : w;
  vc.is_symmetric_trivalued = symmetric;
  vc.is_symmetric_bivalued = symmetric && !has_zero && (w != 0 || m == 0);

  std::vector<Value> totals(n, 0), goods(n, 0), chores(n, 0);
  for (AgentId i = 0; i < n; ++i) {
    for (Value v : instance.row(i)) {
      totals[i] += v;
      if (v >= 0) goods[i] += v;
      if (v <= 0) chores[i] += v;
    }
  }
  auto constant = [](const std::vector<Value>& xs) { return std::ranges::all_of(xs, [&](Value x) { return x == xs[0]; }); };
  vc.is_normalized = constant(totals);
  vc.is_type_normalized = constant(goods) && constant(chores);
  if (vc.is_normalized) vc.total = totals[0];
  if (vc.is_type_normalized) {
    vc.good_sum = goods[0];
    vc.chore_sum = chores[0];
  }
  return vc;
}

Allocation::Allocation(const Instance& instance) : Allocation(instance.num_agents(), instance.num_items()) {}

Allocation::Allocation(int num_agents, int num_items)
    : owner_(static_cast<std::size_t>(num_items), kNone),
      utilities_(static_cast<std::size_t>(num_agents), 0),
      sizes_(static_cast<std::size_t>(num_agents), 0) {}

Allocation Allocation::from_owners(const Instance& instance, std::vector<AgentId> owners) {
  if (static_cast<int>(owners.size()) != instance.num_items())
    throw PreconditionViolated("owner vector length differs from item count");
  Allocation a(instance);
  for (ItemId o = 0; o < instance.num_items(); ++o)
    if (owners[o] != kNone) a.assign(instance, o, owners[o]);
  return a;
}

Allocation Allocation::from_bundles(const Instance& instance, const std::vector<std::vector<ItemId>>& bundles) {
  if (static_cast<int>(bundles.size()) != instance.num_agents())
    throw PreconditionViolated("expected " + std::to_string(instance.num_agents()) + " bundles, got " +
                               std::to_string(bundles.size()));
  Allocation a(instance);
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    for (ItemId o : bundles[i]) {
      if (o < 0 || o >= instance.num_items())
        throw PreconditionViolated("item index " + std::to_string(o) + " out of range");
      a.assign(instance, o, i);
    }
  }
  return a;
}

std::vector<ItemId> Allocation::bundle(AgentId agent) const {
  std::vector<ItemId> out;
  out.reserve(sizes_[agent]);
  for (ItemId o = 0; o < num_items(); ++o)
    if (owner_[o] == agent) out.push_back(o);
  return out;
}

std::vector<std::vector<ItemId>> Allocation::bundles() const {
  std::vector<std::vector<ItemId>> out(num_agents());
  for (ItemId o = 0; o < num_items(); ++o)
    if (owner_[o] != kNone) out[owner_[o]].push_back(o);
  return out;
}

std::vector<ItemId> Allocation::allocated() const {
  std::vector<ItemId> out;
  for (ItemId o = 0; o < num_items(); ++o)
    if (owner_[o] != kNone) out.push_back(o);
  return out;
}

std::vector<ItemId> Allocation::unallocated() const {
  std::vector<ItemId> out;
  for (ItemId o = 0; o < num_items(); ++o)
    if (owner_[o] == kNone) out.push_back(o);
  return out;
}

void Allocation::assign(const Instance& instance, ItemId item, AgentId agent) {
  if (owner_[item] != kNone) {
    throw AllocationError("item " + std::to_string(item) + " already allocated to agent " +
                              std::to_string(owner_[item]),
                          item, owner_[item]);
  }
  owner_[item] = agent;
  utilities_[agent] += instance.value(agent, item);
  ++sizes_[agent];
  ++allocated_;
  check_cache(instance);
}

void Allocation::unassign(const Instance& instance, ItemId item) {
  const AgentId agent = owner_[item];
  if (agent == kNone) throw AllocationError("item " + std::to_string(item) + " is not allocated", item, kNone);
  owner_[item] = kNone;
  utilities_[agent] -= instance.value(agent, item);
  --sizes_[agent];
  --allocated_;
  check_cache(instance);
}

void Allocation::transfer(const Instance& instance, ItemId item, AgentId from, AgentId to) {
  if (owner_[item] != from) {
    throw AllocationError("item " + std::to_string(item) + " is not owned by agent " + std::to_string(from),
                          item, owner_[item]);
  }
  owner_[item] = to;
  utilities_[from] -= instance.value(from, item);
  utilities_[to] += instance.value(to, item);
  --sizes_[from];
  ++sizes_[to];
  check_cache(instance);
}

bool Allocation::cache_consistent(const Instance& instance) const {
  std::vector<Value> u(num_agents(), 0);
  std::vector<int> s(num_agents(), 0);
  int count = 0;
  for (ItemId o = 0; o < num_items(); ++o) {
    if (owner_[o] == kNone) continue;
    u[owner_[o]] += instance.value(owner_[o], o);
    ++s[owner_[o]];
    ++count;
  }
  return u == utilities_ && s == sizes_ && count == allocated_;
}

void Allocation::check_cache([[maybe_unused]] const Instance& instance) const {
#ifdef EQMANNA_VERIFY_CACHE
  if (!cache_consistent(instance)) throw InternalDefect("cached utilities diverged from bundle sums");
#endif
}

Value utility(const Instance& instance, const Allocation& allocation, AgentId agent) {
  Value total = 0;
  for (ItemId o = 0; o < allocation.num_items(); ++o)
    if (allocation.owner(o) == agent) total += instance.value(agent, o);
  return total;
}

}  // namespace eqmanna
