#include "eqmanna/welfare_dp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"

namespace eqmanna {

namespace {

constexpr int kMaxAgents = 4;

// Layout: [v_0..v_{n-1}, g_0..g_{n-1}, c_0..c_{n-1}], unused slots zero.
using Key = std::array<Value, 3 * kMaxAgents>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (Value x : k) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct State {
  Key key{};
  // Predecessor index in the previous layer and the agent that received the
  // item, packed so that the minimum is the lexicographic minimum.
  std::uint64_t link = 0;
};

std::uint64_t pack_link(std::size_t pred, int agent) { return (static_cast<std::uint64_t>(pred) << 3) | agent; }
std::size_t link_pred(std::uint64_t link) { return static_cast<std::size_t>(link >> 3); }
int link_agent(std::uint64_t link) { return static_cast<int>(link & 7U); }

using LayerMap = std::unordered_map<Key, std::uint64_t, KeyHash>;

void relax(LayerMap& map, const Key& key, std::uint64_t link) {
  auto [it, inserted] = map.try_emplace(key, link);
  if (!inserted && link < it->second) it->second = link;
}

Key successor(const Instance& inst, const Key& from, ItemId item, AgentId i) {
  const int n = inst.num_agents();
  Key k = from;
  const Value val = inst.value(i, item);
  k[i] += val;
  Value& g = k[n + i];
  Value& c = k[2 * n + i];
  if (val >= 0) {
    if (g == kNone || val < inst.value(i, static_cast<ItemId>(g))) g = item;
  } else {
    if (c == kNone || val > inst.value(i, static_cast<ItemId>(c))) c = item;
  }
  return k;
}

std::vector<State> expand(const Instance& inst, const std::vector<State>& prev, ItemId item, Execution exec) {
  const int n = inst.num_agents();
  const auto count = static_cast<std::ptrdiff_t>(prev.size());
  LayerMap merged;

  if (exec == Execution::serial) {
    for (std::ptrdiff_t p = 0; p < count; ++p)
      for (AgentId i = 0; i < n; ++i)
        relax(merged, successor(inst, prev[p].key, item, i), pack_link(static_cast<std::size_t>(p), i));
  } else {
#pragma omp parallel
    {
      LayerMap local;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t p = 0; p < count; ++p)
        for (AgentId i = 0; i < n; ++i)
          relax(local, successor(inst, prev[p].key, item, i), pack_link(static_cast<std::size_t>(p), i));
#pragma omp critical(eqmanna_dp_merge)
      for (const auto& [key, link] : local) relax(merged, key, link);
    }
  }

  std::vector<State> layer;
  layer.reserve(merged.size());
  for (const auto& [key, link] : merged) layer.push_back(State{key, link});
  std::ranges::sort(layer, {}, &State::key);
  return layer;
}

// Strict EQX on a final state, using only (v, g, c). A 0-valued item in the
// poorer bundle is also a chore whose removal leaves the gap unchanged.
bool state_is_eqx(const Instance& inst, const Key& k) {
  const int n = inst.num_agents();
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = 0; j < n; ++j) {
      if (i == j || k[i] >= k[j]) continue;
      const Value gj = k[n + j];
      const Value ci = k[2 * n + i];
      const Value gi = k[n + i];
      if (gj != kNone && k[i] < k[j] - inst.value(j, static_cast<ItemId>(gj))) return false;
      if (ci != kNone && k[i] - inst.value(i, static_cast<ItemId>(ci)) < k[j]) return false;
      if (gi != kNone && inst.value(i, static_cast<ItemId>(gi)) == 0) return false;
    }
  }
  return true;
}

Value score(const Key& k, int n, Objective objective) {
  if (objective == Objective::utilitarian) {
    Value s = 0;
    for (int i = 0; i < n; ++i) s += k[i];
    return s;
  }
  Value s = k[0];
  for (int i = 1; i < n; ++i) s = std::min(s, k[i]);
  return s;
}

std::vector<AgentId> reconstruct(const std::vector<std::vector<State>>& layers, std::size_t index) {
  const int m = static_cast<int>(layers.size()) - 1;
  std::vector<AgentId> owners(m, kNone);
  for (int k = m; k > 0; --k) {
    const State& s = layers[k][index];
    owners[k - 1] = link_agent(s.link);
    index = link_pred(s.link);
  }
  return owners;
}

Value value_range(const Instance& inst) {
  Value vr = 0;
  for (ItemId o = 0; o < inst.num_items(); ++o) {
    Value lo = inst.value(0, o), hi = lo;
    for (AgentId i = 1; i < inst.num_agents(); ++i) {
      lo = std::min(lo, inst.value(i, o));
      hi = std::max(hi, inst.value(i, o));
    }
    vr += hi - lo;
  }
  return vr;
}

long double estimate_for(int n, long double m, long double v) {
  return static_cast<long double>(n) * std::pow(m, 2.0L * n + 1) * std::pow(v, static_cast<long double>(n));
}

}  // namespace

long double dp_state_estimate(const Instance& instance) {
  if (instance.num_agents() == 0) return 0;
  return estimate_for(instance.num_agents(), instance.num_items(), static_cast<long double>(value_range(instance)));
}

DpResult dp_welfare_eqx(const Instance& instance, Objective objective, const DpOptions& options) {
  const int n = instance.num_agents();
  const int m = instance.num_items();
  if (n < 1) throw PreconditionViolated("dp_welfare_eqx needs at least one agent");

  DpResult result;
  result.stats.value_range = value_range(instance);
  result.stats.estimate = dp_state_estimate(instance);
  result.stats.runtime_bound = estimate_for(n, std::max(m, 1), std::max<long double>(result.stats.value_range, 1));

  const int agent_limit = std::min(options.max_agents, kMaxAgents);
  if (n > agent_limit)
    throw CeilingExceeded("dp_welfare_eqx supports at most " + std::to_string(agent_limit) + " agents, got " +
                              std::to_string(n),
                          n, agent_limit);
  if (result.stats.estimate > options.state_ceiling)
    throw CeilingExceeded("DP state-space estimate exceeds the configured ceiling", result.stats.estimate,
                          options.state_ceiling);

  // Per-agent utility box [sum of negatives, sum of positives].
  std::vector<Value> lo(n, 0), hi(n, 0);
  for (AgentId i = 0; i < n; ++i)
    for (Value v : instance.row(i)) (v < 0 ? lo[i] : hi[i]) += v;

  std::vector<std::vector<State>> layers(m + 1);
  State root;
  for (int i = 0; i < n; ++i) root.key[n + i] = root.key[2 * n + i] = kNone;
  layers[0].push_back(root);
  result.stats.layer_states.push_back(1);

  for (ItemId o = 0; o < m; ++o) {
    layers[o + 1] = expand(instance, layers[o], o, options.execution);
    const std::size_t here = layers[o + 1].size();
    if (here > layers[o].size() * static_cast<std::size_t>(n) * static_cast<std::size_t>(m + 1))
      throw InternalDefect("DP layer grew faster than n(m+1) per predecessor");
    result.stats.layer_states.push_back(here);
  }
  for (std::size_t k = 1; k < result.stats.layer_states.size(); ++k) result.stats.total_states += result.stats.layer_states[k];

  const auto& last = layers[m];
  std::vector<std::size_t> best;
  Value best_score = std::numeric_limits<Value>::min();
  for (std::size_t s = 0; s < last.size(); ++s) {
    const Key& k = last[s].key;
    for (AgentId i = 0; i < n; ++i)
      if (k[i] < lo[i] || k[i] > hi[i]) throw InternalDefect("DP utility left its per-agent box");
    if (!state_is_eqx(instance, k)) continue;
    const Value sc = score(k, n, objective);
    if (sc > best_score) {
      best_score = sc;
      best.clear();
    }
    if (sc == best_score) best.push_back(s);
  }
  if (best.empty()) return result;

  // Layers are sorted by key, so equal utility vectors are contiguous and the
  // first candidate has the smallest one.
  auto same_utilities = [&](std::size_t a, std::size_t b) {
    return std::equal(last[a].key.begin(), last[a].key.begin() + n, last[b].key.begin());
  };
  std::vector<AgentId> chosen = reconstruct(layers, best.front());
  std::size_t chosen_state = best.front();
  for (std::size_t idx = 1; idx < best.size() && same_utilities(best[idx], best.front()); ++idx) {
    auto owners = reconstruct(layers, best[idx]);
    if (owners < chosen) {
      chosen = std::move(owners);
      chosen_state = best[idx];
    }
  }

  Allocation alloc = Allocation::from_owners(instance, chosen);
  Key replayed = root.key;
  for (ItemId o = 0; o < m; ++o) replayed = successor(instance, replayed, o, chosen[o]);
  if (replayed != last[chosen_state].key) throw InternalDefect("DP reconstruction does not reproduce its state");
  for (AgentId i = 0; i < n; ++i)
    if (utility(instance, alloc, i) != replayed[i]) throw InternalDefect("DP reconstruction does not reproduce its utilities");
  if (!check_eqx(instance, alloc, ZeroPolicy::strict))
    throw InternalDefect("DP final filter disagrees with the strict EQX checker");

  result.exists = true;
  result.optimum = best_score;
  result.utilities.assign(alloc.utilities().begin(), alloc.utilities().end());
  result.allocation = std::move(alloc);
  return result;
}

}  // namespace eqmanna
