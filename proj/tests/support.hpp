#pragma once

// Independent reference implementations used as test oracles. They follow
// the definitions word for word (every candidate item, every allocation) and
// share no code with the library beyond the Instance/Allocation containers.

#include <functional>
#include <vector>

#include "eqmanna/model.hpp"

namespace eqtest {

using eqmanna::AgentId;
using eqmanna::Allocation;
using eqmanna::Instance;
using eqmanna::ItemId;
using eqmanna::Value;

inline std::vector<Value> raw_utilities(const Instance& inst, const std::vector<AgentId>& owners) {
  std::vector<Value> u(inst.num_agents(), 0);
  for (ItemId o = 0; o < static_cast<ItemId>(owners.size()); ++o)
    if (owners[o] >= 0) u[owners[o]] += inst.value(owners[o], o);
  return u;
}

inline std::vector<AgentId> owners_of(const Allocation& a) { return {a.owners().begin(), a.owners().end()}; }

// v_i(A_j)
inline Value cross_value(const Instance& inst, const std::vector<AgentId>& owners, AgentId i, AgentId j) {
  Value s = 0;
  for (ItemId o = 0; o < static_cast<ItemId>(owners.size()); ++o)
    if (owners[o] == j) s += inst.value(i, o);
  return s;
}

inline bool literal_eq(const Instance& inst, const std::vector<AgentId>& owners) {
  const auto u = raw_utilities(inst, owners);
  for (Value x : u)
    if (x != u.front()) return false;
  return true;
}

inline bool literal_eq1(const Instance& inst, const std::vector<AgentId>& owners) {
  const auto u = raw_utilities(inst, owners);
  const int n = inst.num_agents();
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = 0; j < n; ++j) {
      if (!(u[i] < u[j])) continue;
      bool fixed = false;
      for (ItemId o = 0; o < static_cast<ItemId>(owners.size()) && !fixed; ++o) {
        if (owners[o] == j && inst.value(j, o) >= 0 && u[i] >= u[j] - inst.value(j, o)) fixed = true;
        if (owners[o] == i && inst.value(i, o) <= 0 && u[i] - inst.value(i, o) >= u[j]) fixed = true;
      }
      if (!fixed) return false;
    }
  return true;
}

inline bool literal_eqx(const Instance& inst, const std::vector<AgentId>& owners, bool nonzero_marginals = false) {
  const auto u = raw_utilities(inst, owners);
  const int n = inst.num_agents();
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = 0; j < n; ++j) {
      if (!(u[i] < u[j])) continue;
      for (ItemId o = 0; o < static_cast<ItemId>(owners.size()); ++o) {
        const Value vj = inst.value(j, o);
        const Value vi = inst.value(i, o);
        const bool good = nonzero_marginals ? vj > 0 : vj >= 0;
        const bool chore = nonzero_marginals ? vi < 0 : vi <= 0;
        if (owners[o] == j && good && u[i] < u[j] - vj) return false;
        if (owners[o] == i && chore && u[i] - vi < u[j]) return false;
      }
    }
  return true;
}

inline bool literal_ef(const Instance& inst, const std::vector<AgentId>& owners) {
  const int n = inst.num_agents();
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = 0; j < n; ++j)
      if (cross_value(inst, owners, i, i) < cross_value(inst, owners, i, j)) return false;
  return true;
}

// any_removal = false: EF1 (some removal fixes envy); true: EFX (every one).
inline bool literal_ef_relaxed(const Instance& inst, const std::vector<AgentId>& owners, bool any_removal) {
  const int n = inst.num_agents();
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = 0; j < n; ++j) {
      const Value mine = cross_value(inst, owners, i, i);
      const Value theirs = cross_value(inst, owners, i, j);
      if (i == j || mine >= theirs) continue;
      bool some = false;
      bool all = true;
      for (ItemId o = 0; o < static_cast<ItemId>(owners.size()); ++o) {
        const Value v = inst.value(i, o);
        bool candidate = false, ok = false;
        if (owners[o] == j && v >= 0) {
          candidate = true;
          ok = mine >= theirs - v;
        } else if (owners[o] == i && v <= 0) {
          candidate = true;
          ok = mine - v >= theirs;
        }
        if (!candidate) continue;
        some = some || ok;
        all = all && ok;
      }
      if (any_removal ? !all : !some) return false;
    }
  return true;
}

// Calls visit on every complete owner vector (recursive, item 0 outermost).
inline void each_assignment(int n, int m, const std::function<void(const std::vector<AgentId>&)>& visit) {
  std::vector<AgentId> owners(m, 0);
  std::function<void(int)> rec = [&](int o) {
    if (o == m) {
      visit(owners);
      return;
    }
    for (AgentId i = 0; i < n; ++i) {
      owners[o] = i;
      rec(o + 1);
    }
  };
  rec(0);
}

inline bool dominates(const std::vector<Value>& a, const std::vector<Value>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

inline bool literal_po(const Instance& inst, const std::vector<AgentId>& owners) {
  const auto mine = raw_utilities(inst, owners);
  bool po = true;
  each_assignment(inst.num_agents(), inst.num_items(), [&](const std::vector<AgentId>& other) {
    if (po && dominates(raw_utilities(inst, other), mine)) po = false;
  });
  return po;
}

// Product of utilities as long double (exact for the tiny instances tested)
// paired with the count of positive utilities; nullopt-like flag when some
// utility is negative.
struct LiteralNash {
  bool defined = false;
  int positive = 0;
  long double product = 1;
  friend bool operator<(const LiteralNash& a, const LiteralNash& b) {
    if (a.positive != b.positive) return a.positive < b.positive;
    return a.product < b.product;
  }
};

inline LiteralNash literal_nash(const std::vector<Value>& u) {
  LiteralNash k;
  for (Value x : u)
    if (x < 0) return k;
  k.defined = true;
  for (Value x : u)
    if (x > 0) {
      ++k.positive;
      k.product *= static_cast<long double>(x);
    }
  return k;
}

}  // namespace eqtest
