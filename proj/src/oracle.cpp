#include "eqmanna/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "eqmanna/errors.hpp"

namespace eqmanna {

namespace {

constexpr std::uint64_t kBlock = 4096;
constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();

struct NamedProperty {
  std::string_view name;
  Property prop;
};

constexpr NamedProperty kNames[] = {
    {"eq", Property::eq},   {"eq1", Property::eq1}, {"eqx", Property::eqx},          {"eqx-nz", Property::eqx_nonzero},
    {"ef", Property::ef},   {"ef1", Property::ef1}, {"efx", Property::efx},          {"po", Property::po},
    {"complete", Property::complete},
};

std::uint64_t checked_count(const Instance& inst, std::uint64_t ceiling) {
  if (inst.num_agents() == 0) throw PreconditionViolated("enumeration needs at least one agent");
  const long double count = allocation_count(inst);
  if (count > static_cast<long double>(ceiling))
    throw CeilingExceeded("enumeration needs " + std::to_string(static_cast<double>(count)) +
                              " allocations, ceiling is " + std::to_string(ceiling),
                          count, static_cast<long double>(ceiling));
  return static_cast<std::uint64_t>(std::llround(count));
}

// Walks consecutive enumeration indices with one transfer per step
// (amortised).
class Cursor {
 public:
  Cursor(const Instance& inst, std::uint64_t index) : inst_(inst), alloc_(allocation_at(inst, index)) {}

  const Allocation& current() const noexcept { return alloc_; }

  void next() {
    const int n = inst_.num_agents();
    for (ItemId o = 0; o < inst_.num_items(); ++o) {
      const AgentId cur = alloc_.owner(o);
      if (cur + 1 < n) {
        alloc_.transfer(inst_, o, cur, cur + 1);
        return;
      }
      alloc_.transfer(inst_, o, cur, 0);
    }
  }

 private:
  const Instance& inst_;
  Allocation alloc_;
};

// Runs body(begin, end) over disjoint index blocks covering [0, total).
template <class Body>
void for_blocks(std::uint64_t total, Execution exec, Body&& body) {
  const auto blocks = static_cast<std::int64_t>((total + kBlock - 1) / kBlock);
  if (exec == Execution::serial) {
    for (std::int64_t b = 0; b < blocks; ++b)
      body(static_cast<std::uint64_t>(b) * kBlock, std::min(total, static_cast<std::uint64_t>(b + 1) * kBlock));
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b)
    body(static_cast<std::uint64_t>(b) * kBlock, std::min(total, static_cast<std::uint64_t>(b + 1) * kBlock));
}

using Frontier = std::set<std::vector<Value>>;

Frontier frontier_set(const Instance& inst, const OracleOptions& options) {
  const std::uint64_t total = checked_count(inst, options.ceiling);
  const auto blocks = (total + kBlock - 1) / kBlock;
  std::vector<std::set<std::vector<Value>>> seen(blocks);
  for_blocks(total, options.execution, [&](std::uint64_t begin, std::uint64_t end) {
    Cursor cur(inst, begin);
    auto& local = seen[begin / kBlock];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto u = cur.current().utilities();
      local.emplace(u.begin(), u.end());
      if (idx + 1 < end) cur.next();
    }
  });
  std::set<std::vector<Value>> distinct;
  for (auto& s : seen) distinct.merge(s);

  // A dominator has a strictly larger sum, so scanning by decreasing sum
  // only needs to compare against vectors already kept.
  std::vector<std::pair<Value, const std::vector<Value>*>> order;
  order.reserve(distinct.size());
  for (const auto& v : distinct) {
    Value s = 0;
    for (Value x : v) s += x;
    order.emplace_back(s, &v);
  }
  std::ranges::stable_sort(order, std::greater<>{}, &std::pair<Value, const std::vector<Value>*>::first);
  Frontier front;
  std::vector<const std::vector<Value>*> kept;
  for (const auto& [sum, v] : order) {
    const bool dominated =
        std::ranges::any_of(kept, [&](const std::vector<Value>* f) { return pareto_dominates(*f, *v); });
    if (!dominated) {
      kept.push_back(v);
      front.insert(*v);
    }
  }
  return front;
}

bool in_frontier(const Frontier& front, std::span<const Value> u) {
  return front.contains(std::vector<Value>(u.begin(), u.end()));
}

struct Evaluator {
  const Instance& inst;
  const PropertyPredicate& pred;
  std::optional<Frontier> front;

  Evaluator(const Instance& i, const PropertyPredicate& p, const OracleOptions& options) : inst(i), pred(p) {
    if (pred.has(Property::po)) front = frontier_set(inst, options);
  }

  bool operator()(const Allocation& a) const {
    if (front && !in_frontier(*front, a.utilities())) return false;
    return pred.holds_without_po(inst, a);
  }
};

struct Score {
  bool valid = false;
  Value scalar = 0;
  NashKey nash;
};

Score score_of(const Allocation& a, WelfareKind kind) {
  Score s;
  switch (kind) {
    case WelfareKind::utilitarian:
      s.valid = true;
      s.scalar = utilitarian_welfare(a);
      break;
    case WelfareKind::egalitarian:
      s.valid = true;
      s.scalar = egalitarian_welfare(a);
      break;
    case WelfareKind::nash:
      for (Value u : a.utilities())
        if (u < 0) return s;
      s.valid = true;
      s.nash = nash_key(a.utilities());
      break;
  }
  return s;
}

bool better(const Score& a, const Score& b, WelfareKind kind) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (kind == WelfareKind::nash) return b.nash < a.nash;
  return a.scalar > b.scalar;
}

std::uint64_t binomial_ld_guard(std::uint64_t a, std::uint64_t b) {
  // C(a, b) for small arguments; saturates instead of overflowing.
  long double r = 1;
  for (std::uint64_t i = 1; i <= b; ++i) r = r * static_cast<long double>(a - b + i) / static_cast<long double>(i);
  return r > 1.8e19L ? kNoHit : static_cast<std::uint64_t>(std::llround(r));
}

// Every way to split `count` identical items among `n` agents.
void compositions(int count, int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(count);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= count; ++k) {
    cur.push_back(k);
    compositions(count - k, n, cur, out);
    cur.pop_back();
  }
}

}  // namespace

PropertyPredicate::PropertyPredicate(std::initializer_list<Property> props) {
  for (Property p : props) add(p);
}

PropertyPredicate PropertyPredicate::parse(std::string_view text) {
  PropertyPredicate pred;
  std::size_t pos = 0;
  bool any = false;
  while (pos <= text.size()) {
    const std::size_t next = text.find_first_of("+,", pos);
    std::string token(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    std::ranges::transform(token, token.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    std::erase(token, ' ');
    if (token == "eq1po") {
      pred.add(Property::eq1).add(Property::po);
      any = true;
    } else if (token == "eqx_nonzero" || token == "eqx-nonzero") {
      pred.add(Property::eqx_nonzero);
      any = true;
    } else if (!token.empty()) {
      const auto* hit = std::ranges::find(kNames, token, &NamedProperty::name);
      if (hit == std::end(kNames)) throw PreconditionViolated("unknown property '" + token + "'");
      pred.add(hit->prop);
      any = true;
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (!any) throw PreconditionViolated("empty property list");
  return pred;
}

std::string PropertyPredicate::to_string() const {
  std::string out;
  for (const auto& [name, prop] : kNames) {
    if (!has(prop)) continue;
    if (!out.empty()) out += '+';
    out += name;
  }
  return out.empty() ? "true" : out;
}

bool PropertyPredicate::holds_without_po(const Instance& instance, const Allocation& a) const {
  if (has(Property::complete) && !a.is_complete()) return false;
  if (has(Property::eq) && !check_eq(instance, a)) return false;
  if (has(Property::eq1) && !check_eq1(instance, a)) return false;
  if (has(Property::eqx) && !check_eqx(instance, a, ZeroPolicy::strict)) return false;
  if (has(Property::eqx_nonzero) && !check_eqx(instance, a, ZeroPolicy::nonzero_marginals)) return false;
  if (has(Property::ef) && !check_ef(instance, a)) return false;
  if (has(Property::ef1) && !check_ef1(instance, a)) return false;
  if (has(Property::efx) && !check_efx(instance, a)) return false;
  return true;
}

std::uint64_t default_ceiling() {
  constexpr std::uint64_t fallback = std::uint64_t{1} << 24;
  const char* env = std::getenv("EQMANNA_CEILING");
  if (env == nullptr) return fallback;
  const std::string_view text(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0) return fallback;
  return v;
}

long double allocation_count(const Instance& instance) {
  return std::pow(static_cast<long double>(instance.num_agents()), static_cast<long double>(instance.num_items()));
}

Allocation allocation_at(const Instance& instance, std::uint64_t index) {
  const auto n = static_cast<std::uint64_t>(instance.num_agents());
  std::vector<AgentId> owners(instance.num_items());
  for (auto& o : owners) {
    o = static_cast<AgentId>(index % n);
    index /= n;
  }
  return Allocation::from_owners(instance, std::move(owners));
}

void enumerate_allocations(const Instance& instance, const std::function<void(const Allocation&)>& visit,
                           std::uint64_t ceiling) {
  if (instance.num_agents() == 0) return;
  const std::uint64_t total = checked_count(instance, ceiling);
  Cursor cur(instance, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    visit(cur.current());
    if (idx + 1 < total) cur.next();
  }
}

std::vector<std::vector<Value>> pareto_frontier(const Instance& instance, const OracleOptions& options) {
  const Frontier f = frontier_set(instance, options);
  return {f.begin(), f.end()};
}

ExistsResult exists_with(const Instance& instance, const PropertyPredicate& predicate, const OracleOptions& options) {
  const std::uint64_t total = checked_count(instance, options.ceiling);
  const Evaluator eval(instance, predicate, options);
  std::atomic<std::uint64_t> first{kNoHit};
  for_blocks(total, options.execution, [&](std::uint64_t begin, std::uint64_t end) {
    if (begin > first.load(std::memory_order_relaxed)) return;
    Cursor cur(instance, begin);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (eval(cur.current())) {
        std::uint64_t seen = first.load();
        while (idx < seen && !first.compare_exchange_weak(seen, idx)) {
        }
        return;
      }
      if (idx + 1 < end) cur.next();
    }
  });
  ExistsResult r;
  const std::uint64_t hit = first.load();
  if (hit == kNoHit) {
    r.scanned = total;
  } else {
    r.scanned = hit + 1;
    r.witness = allocation_at(instance, hit);
  }
  return r;
}

std::vector<std::uint64_t> satisfying_indices(const Instance& instance, const PropertyPredicate& predicate,
                                              const OracleOptions& options) {
  const std::uint64_t total = checked_count(instance, options.ceiling);
  const Evaluator eval(instance, predicate, options);
  std::vector<std::vector<std::uint64_t>> per_block((total + kBlock - 1) / kBlock);
  for_blocks(total, options.execution, [&](std::uint64_t begin, std::uint64_t end) {
    Cursor cur(instance, begin);
    auto& local = per_block[begin / kBlock];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (eval(cur.current())) local.push_back(idx);
      if (idx + 1 < end) cur.next();
    }
  });
  std::vector<std::uint64_t> out;
  for (const auto& b : per_block) out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool exact_po(const Instance& instance, const Allocation& allocation, const OracleOptions& options) {
  if (!allocation.is_complete()) throw PreconditionViolated("exact_po needs a complete allocation");
  const Frontier front = frontier_set(instance, options);
  return in_frontier(front, allocation.utilities());
}

std::optional<OptimizeResult> optimize_within(const Instance& instance, const PropertyPredicate& predicate,
                                              WelfareKind kind, const OracleOptions& options) {
  const std::uint64_t total = checked_count(instance, options.ceiling);
  const Evaluator eval(instance, predicate, options);
  struct Best {
    Score score;
    std::uint64_t index = kNoHit;
  };
  std::vector<Best> per_block((total + kBlock - 1) / kBlock);
  for_blocks(total, options.execution, [&](std::uint64_t begin, std::uint64_t end) {
    Cursor cur(instance, begin);
    Best& best = per_block[begin / kBlock];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const Allocation& a = cur.current();
      if (eval(a)) {
        Score s = score_of(a, kind);
        if (better(s, best.score, kind)) best = Best{std::move(s), idx};
      }
      if (idx + 1 < end) cur.next();
    }
  });
  Best overall;
  for (auto& b : per_block)
    if (better(b.score, overall.score, kind)) overall = std::move(b);
  if (overall.index == kNoHit) return std::nullopt;
  OptimizeResult r{allocation_at(instance, overall.index), {}};
  r.value = welfare(r.allocation, kind);
  return r;
}

std::vector<std::pair<Value, int>> leximin_pp_key(std::span<const Value> utilities, std::span<const int> sizes) {
  std::vector<std::pair<Value, int>> key;
  key.reserve(utilities.size());
  for (std::size_t i = 0; i < utilities.size(); ++i) key.emplace_back(utilities[i], sizes.empty() ? 0 : sizes[i]);
  std::ranges::sort(key);
  return key;
}

Allocation leximin_pp(const Instance& instance, const OracleOptions& options, bool with_sizes) {
  const int n = instance.num_agents();
  const int m = instance.num_items();
  if (n == 0) throw PreconditionViolated("leximin needs at least one agent");

  // Group items by value column, in order of first appearance.
  std::map<std::vector<Value>, std::size_t> group_of;
  std::vector<std::vector<ItemId>> groups;
  for (ItemId o = 0; o < m; ++o) {
    std::vector<Value> col(n);
    for (AgentId i = 0; i < n; ++i) col[i] = instance.value(i, o);
    auto [it, fresh] = group_of.try_emplace(col, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(o);
  }

  long double combos = 1;
  for (const auto& g : groups) {
    const std::uint64_t c = binomial_ld_guard(g.size() + n - 1, static_cast<std::uint64_t>(n - 1));
    combos *= static_cast<long double>(c);
  }
  if (combos > static_cast<long double>(options.ceiling))
    throw CeilingExceeded("leximin search needs " + std::to_string(static_cast<double>(combos)) +
                              " combinations, ceiling is " + std::to_string(options.ceiling),
                          combos, static_cast<long double>(options.ceiling));

  std::vector<std::vector<std::vector<int>>> splits(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<int> cur;
    compositions(static_cast<int>(groups[g].size()), n, cur, splits[g]);
  }

  std::vector<Value> util(n, 0);
  std::vector<int> size(n, 0);
  std::vector<std::size_t> choice(groups.size(), 0), best_choice;
  std::vector<std::pair<Value, int>> best_key;
  bool have = false;

  auto visit = [&] {
    auto key = leximin_pp_key(util, with_sizes ? std::span<const int>(size) : std::span<const int>());
    if (!have || key > best_key) {
      best_key = std::move(key);
      best_choice = choice;
      have = true;
    }
  };
  auto dfs = [&](auto&& self, std::size_t g) -> void {
    if (g == groups.size()) {
      visit();
      return;
    }
    const ItemId rep = groups[g].front();
    for (std::size_t s = 0; s < splits[g].size(); ++s) {
      const auto& split = splits[g][s];
      for (AgentId i = 0; i < n; ++i) {
        util[i] += split[i] * instance.value(i, rep);
        size[i] += split[i];
      }
      choice[g] = s;
      self(self, g + 1);
      for (AgentId i = 0; i < n; ++i) {
        util[i] -= split[i] * instance.value(i, rep);
        size[i] -= split[i];
      }
    }
  };
  dfs(dfs, 0);

  std::vector<AgentId> owners(m, kNone);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& split = splits[g][best_choice[g]];
    std::size_t next = 0;
    for (AgentId i = 0; i < n; ++i)
      for (int k = 0; k < split[i]; ++k) owners[groups[g][next++]] = i;
  }
  return Allocation::from_owners(instance, std::move(owners));
}

Allocation leximin(const Instance& instance, const OracleOptions& options) {
  return leximin_pp(instance, options, false);
}

}  // namespace eqmanna
