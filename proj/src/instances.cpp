#include "eqmanna/instances.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "eqmanna/errors.hpp"

namespace eqmanna {

namespace {

struct RegimeName {
  Regime regime;
  std::string_view name;
};

constexpr RegimeName kRegimes[] = {
    {Regime::arbitrary, "arbitrary"},
    {Regime::objective, "objective"},
    {Regime::identical, "identical"},
    {Regime::symmetric_bivalued_normalized, "symmetric_bivalued_normalized"},
    {Regime::symmetric_trivalued_normalized, "symmetric_trivalued_normalized"},
    {Regime::trivalued, "trivalued"},
    {Regime::type_normalized, "type_normalized"},
    {Regime::two_agent_type_normalized, "two_agent_type_normalized"},
    {Regime::subjective_type_normalized, "subjective_type_normalized"},
    {Regime::trivalued_type_normalized, "trivalued_type_normalized"},
    {Regime::binary, "binary"},
};

using Rng = std::mt19937_64;

Rng make_rng(const GeneratorSpec& spec) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.regime), static_cast<std::uint32_t>(spec.n),
                    static_cast<std::uint32_t>(spec.m)};
  return Rng(seq);
}

Value uniform(Rng& rng, Value lo, Value hi) { return std::uniform_int_distribution<Value>(lo, hi)(rng); }

// Random composition of `total` into `parts` positive integers.
std::vector<Value> composition(Rng& rng, Value total, int parts) {
  if (parts == 0) return {};
  std::vector<Value> cuts(static_cast<std::size_t>(total - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::vector<Value> chosen;
  std::sample(cuts.begin(), cuts.end(), std::back_inserter(chosen), parts - 1, rng);
  chosen.insert(chosen.begin(), 0);
  chosen.push_back(total);
  std::vector<Value> out;
  for (std::size_t i = 1; i < chosen.size(); ++i) out.push_back(chosen[i] - chosen[i - 1]);
  return out;
}

std::vector<int> shuffled_items(Rng& rng, int m) {
  std::vector<int> items(m);
  std::iota(items.begin(), items.end(), 0);
  std::shuffle(items.begin(), items.end(), rng);
  return items;
}

using Rows = std::vector<std::vector<Value>>;

Rows gen_arbitrary(Rng& rng, int n, int m, Value b, Value lo) {
  Rows rows(n, std::vector<Value>(m));
  for (auto& r : rows)
    for (auto& v : r) v = uniform(rng, lo, b);
  return rows;
}

Rows gen_objective(Rng& rng, int n, int m, Value b) {
  Rows rows(n, std::vector<Value>(m));
  for (int o = 0; o < m; ++o) {
    const bool good = uniform(rng, 0, 1) == 1;
    for (int i = 0; i < n; ++i) rows[i][o] = good ? uniform(rng, 0, b) : -uniform(rng, 0, b);
  }
  return rows;
}

Rows gen_bivalued(Rng& rng, int n, int m, std::optional<int> k1) {
  const int k = k1 ? *k1 : static_cast<int>(uniform(rng, 0, m));
  if (k < 0 || k > m) throw PreconditionViolated("k1 must lie in [0, m]");
  Rows rows(n, std::vector<Value>(m, -1));
  for (auto& r : rows) {
    const auto items = shuffled_items(rng, m);
    for (int t = 0; t < k; ++t) r[items[t]] = 1;
  }
  return rows;
}

Rows gen_trivalued_normalized(Rng& rng, int n, int m) {
  const Value d = uniform(rng, -m, m);
  Rows rows(n, std::vector<Value>(m, 0));
  for (auto& r : rows) {
    const Value minus = uniform(rng, std::max<Value>(0, -d), (m - d) / 2);
    const Value plus = minus + d;
    const auto items = shuffled_items(rng, m);
    for (Value t = 0; t < plus; ++t) r[items[t]] = 1;
    for (Value t = plus; t < plus + minus; ++t) r[items[t]] = -1;
  }
  return rows;
}

Rows gen_trivalued_type_normalized(Rng& rng, int n, int m) {
  const Value plus = uniform(rng, 0, m);
  const Value minus = uniform(rng, 0, m - plus);
  Rows rows(n, std::vector<Value>(m, 0));
  for (auto& r : rows) {
    const auto items = shuffled_items(rng, m);
    for (Value t = 0; t < plus; ++t) r[items[t]] = 1;
    for (Value t = plus; t < plus + minus; ++t) r[items[t]] = -1;
  }
  return rows;
}

Rows gen_type_normalized(Rng& rng, int n, int m, Value b) {
  if (m < 2) throw PreconditionViolated("type-normalized generation needs m >= 2");
  const Value cap = std::max<Value>(2, b * m / 2);
  const Value g = uniform(rng, 1, cap);
  const Value c = uniform(rng, 1, cap);
  Rows rows(n, std::vector<Value>(m, 0));
  for (auto& r : rows) {
    const auto items = shuffled_items(rng, m);
    const int n_goods = static_cast<int>(uniform(rng, 1, std::min<Value>(g, m - 1)));
    const int n_chores = static_cast<int>(uniform(rng, 1, std::min<Value>(c, m - n_goods)));
    const auto gp = composition(rng, g, n_goods);
    const auto cp = composition(rng, c, n_chores);
    for (int t = 0; t < n_goods; ++t) r[items[t]] = gp[t];
    for (int t = 0; t < n_chores; ++t) r[items[n_goods + t]] = -cp[t];
  }
  return rows;
}

Rows gen_subjective_type_normalized(Rng& rng, int m, Value b) {
  if (m < 2) throw PreconditionViolated("subjective type-normalized generation needs m >= 2");
  const int s = static_cast<int>(uniform(rng, 1, m - 1));
  const Value need = std::max(s, m - s);
  const Value g = uniform(rng, need, std::max<Value>(need, b * m / 2));
  const Value c = uniform(rng, need, std::max<Value>(need, b * m / 2));
  const auto items = shuffled_items(rng, m);
  const std::vector<int> mine(items.begin(), items.begin() + s);
  const std::vector<int> theirs(items.begin() + s, items.end());
  Rows rows(2, std::vector<Value>(m, 0));
  auto fill = [&](std::vector<Value>& row, const std::vector<int>& where, Value total, Value sign) {
    const auto parts = composition(rng, total, static_cast<int>(where.size()));
    for (std::size_t t = 0; t < where.size(); ++t) row[where[t]] = sign * parts[t];
  };
  fill(rows[0], mine, g, 1);
  fill(rows[0], theirs, c, -1);
  fill(rows[1], theirs, g, 1);
  fill(rows[1], mine, c, -1);
  return rows;
}

Rows draw(Rng& rng, const GeneratorSpec& spec) {
  const int n = spec.n;
  const int m = spec.m;
  const Value b = spec.value_bound;
  switch (spec.regime) {
    case Regime::arbitrary:
      return gen_arbitrary(rng, n, m, b, -b);
    case Regime::objective:
      return gen_objective(rng, n, m, b);
    case Regime::identical: {
      const Rows one = gen_arbitrary(rng, 1, m, b, -b);
      return Rows(n, one.front());
    }
    case Regime::symmetric_bivalued_normalized:
      return gen_bivalued(rng, n, m, spec.k1);
    case Regime::symmetric_trivalued_normalized:
      return gen_trivalued_normalized(rng, n, m);
    case Regime::trivalued:
      return gen_arbitrary(rng, n, m, 1, -1);
    case Regime::type_normalized:
    case Regime::two_agent_type_normalized:
      return gen_type_normalized(rng, n, m, b);
    case Regime::subjective_type_normalized:
      return gen_subjective_type_normalized(rng, m, b);
    case Regime::trivalued_type_normalized:
      return gen_trivalued_type_normalized(rng, n, m);
    case Regime::binary:
      return gen_arbitrary(rng, n, m, 1, 0);
  }
  throw PreconditionViolated("unknown regime");
}

bool backtrack_bins(const std::vector<Value>& vals, std::size_t k, std::vector<Value>& load, std::vector<int>& count,
                    Value target, int cap) {
  if (k == vals.size()) return true;
  for (std::size_t b = 0; b < load.size(); ++b) {
    if (load[b] + vals[k] > target || (cap > 0 && count[b] >= cap)) continue;
    // Empty bins are interchangeable; trying one is enough.
    if (load[b] == 0 && count[b] == 0 && b > 0 && load[b - 1] == 0 && count[b - 1] == 0) break;
    load[b] += vals[k];
    ++count[b];
    if (backtrack_bins(vals, k + 1, load, count, target, cap)) return true;
    load[b] -= vals[k];
    --count[b];
  }
  return false;
}

bool partition_with_cap(std::vector<Value> values, int parts, int cap) {
  if (parts <= 0) return values.empty();
  const Value sum = std::accumulate(values.begin(), values.end(), Value{0});
  if (sum % parts != 0) return false;
  std::ranges::sort(values, std::greater<>{});
  std::vector<Value> load(parts, 0);
  std::vector<int> count(parts, 0);
  if (!backtrack_bins(values, 0, load, count, sum / parts, cap)) return false;
  return std::ranges::all_of(load, [&](Value l) { return l == sum / parts; }) &&
         (cap == 0 || std::ranges::all_of(count, [&](int c) { return c == cap; }));
}

Allocation highlight(const Instance& inst, const std::vector<std::vector<ItemId>>& bundles) {
  return Allocation::from_bundles(inst, bundles);
}

std::map<std::string, Fixture> build_fixtures() {
  std::map<std::string, Fixture> out;

  {
    Instance inst(2, {{-1, -1}, {1, 1}}, "ex_1_1");
    out.emplace("ex_1_1", Fixture{inst, std::nullopt, "no EQ1 allocation"});
  }
  {
    Instance inst(2, {{2, 2, 2, 2, -3, -3, -3}, {2, 2, 2, 2, -3, -3, -3}}, "ex_notEQX");
    out.emplace("ex_notEQX",
                Fixture{inst, highlight(inst, {{0, 2, 4, 6}, {1, 3, 5}}), "greedy output is EQ1 but not EQX"});
  }
  {
    Instance inst(2, {{1, 1, 1, 0, 0, 0, -1, -1, -1}, {-1, -1, -1, 1, 1, 1, 0, 0, 0}}, "ex_4_2");
    out.emplace("ex_4_2", Fixture{inst, std::nullopt, "no EQ1 allocation of the subjective items alone"});
  }
  {
    Instance inst(2, {{10, -15}, {-2, -3}}, "ex_leximin");
    out.emplace("ex_leximin", Fixture{inst, highlight(inst, {{0}, {1}}), "leximin++ optimum (10, -3) is not EQ1"});
  }
  {
    // Agent 0 likes items 1-5; the other five agents like items 0 and 8-11.
    const std::vector<Value> first{-1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1};
    const std::vector<Value> other{1, -1, -1, -1, -1, -1, -1, -1, 1, 1, 1, 1};
    Instance inst(6, {first, other, other, other, other, other}, "table2_leximin");
    out.emplace("table2_leximin",
                Fixture{inst, highlight(inst, {{1, 2, 3, 4, 5, 6, 7}, {0}, {8}, {9}, {10}, {11}}),
                        "leximin++ utilities {3,1,1,1,1,1} are not EQ1"});
  }
  {
    Instance inst(3, {{1, 1, 1, -1, -1, -1}, {-1, -1, -1, 1, 1, 1}, {-1, -1, -1, 1, 1, 1}}, "ex_5_1");
    out.emplace("ex_5_1", Fixture{inst, highlight(inst, {{0, 1, 2}, {3, 4}, {5}}), "no EQ1+PO allocation"});
  }
  {
    Instance inst(3, {{1, 1, 1, 0, 0, 0}, {1, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}}, "ex_3agent_binary");
    out.emplace("ex_3agent_binary", Fixture{inst, std::nullopt, "no EQ1+PO allocation"});
  }
  {
    Instance inst(1, {{3, -1, 2, 0}}, "single_agent");
    out.emplace("single_agent", Fixture{inst, highlight(inst, {{0, 1, 2, 3}}), "every fairness notion is vacuous"});
  }
  return out;
}

}  // namespace

std::string_view to_string(Regime regime) {
  for (const auto& [r, name] : kRegimes)
    if (r == regime) return name;
  return "unknown";
}

Regime parse_regime(std::string_view text) {
  for (const auto& [r, name] : kRegimes)
    if (name == text) return r;
  if (text == "bivalued") return Regime::symmetric_bivalued_normalized;
  if (text == "tri") return Regime::symmetric_trivalued_normalized;
  if (text == "type") return Regime::type_normalized;
  if (text == "subjective") return Regime::subjective_type_normalized;
  throw PreconditionViolated("unknown regime '" + std::string(text) + "'");
}

const std::vector<Regime>& all_regimes() {
  static const std::vector<Regime> regimes = [] {
    std::vector<Regime> r;
    for (const auto& entry : kRegimes) r.push_back(entry.regime);
    return r;
  }();
  return regimes;
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.n < 1 || spec.m < 0) throw PreconditionViolated("need n >= 1 and m >= 0");
  if (spec.value_bound < 1) throw PreconditionViolated("value_bound must be positive");
  const bool two_agent =
      spec.regime == Regime::two_agent_type_normalized || spec.regime == Regime::subjective_type_normalized;
  if (two_agent && spec.n != 2) throw PreconditionViolated(std::string(to_string(spec.regime)) + " needs n = 2");

  Rng rng = make_rng(spec);
  const std::string name = std::string(to_string(spec.regime)) + "_n" + std::to_string(spec.n) + "_m" +
                           std::to_string(spec.m) + "_s" + std::to_string(spec.seed);
  const bool wants_subjective = spec.regime == Regime::type_normalized ||
                                spec.regime == Regime::two_agent_type_normalized;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Value> flat;
    for (const auto& r : draw(rng, spec)) flat.insert(flat.end(), r.begin(), r.end());
    Instance inst(spec.n, spec.m, std::move(flat), name);
    // Resample type-normalized draws whose items are all objective.
    if (wants_subjective && spec.n >= 2 && classify_items(inst).subjective.empty()) continue;
    if (!verify_regime(inst, spec.regime))
      throw InternalDefect("generator output fails its regime check: " + std::string(to_string(spec.regime)));
    return inst;
  }
  throw PreconditionViolated("no non-degenerate instance found for this spec");
}

bool verify_regime(const Instance& instance, Regime regime) {
  const ValuationClass vc = classify_valuations(instance);
  switch (regime) {
    case Regime::arbitrary:
      return true;
    case Regime::objective:
      return vc.is_objective;
    case Regime::identical:
      return vc.is_identical;
    case Regime::symmetric_bivalued_normalized:
      return vc.is_symmetric_bivalued && vc.is_normalized;
    case Regime::symmetric_trivalued_normalized:
      return vc.is_symmetric_trivalued && vc.is_normalized;
    case Regime::trivalued:
      return vc.is_symmetric_trivalued;
    case Regime::type_normalized:
      return vc.is_type_normalized;
    case Regime::two_agent_type_normalized:
      return instance.num_agents() == 2 && vc.is_type_normalized;
    case Regime::subjective_type_normalized: {
      const ItemClass items = classify_items(instance);
      return instance.num_agents() == 2 && vc.is_type_normalized && items.objective_goods.empty() &&
             items.objective_chores.empty();
    }
    case Regime::trivalued_type_normalized:
      return vc.is_symmetric_trivalued && vc.is_type_normalized;
    case Regime::binary:
      return vc.is_binary;
  }
  return false;
}

Instance gadget_partition2(const std::vector<Value>& multiset) {
  if (std::ranges::any_of(multiset, [](Value b) { return b <= 0; }))
    throw PreconditionViolated("2-partition entries must be positive");
  const Value sum = std::accumulate(multiset.begin(), multiset.end(), Value{0});
  if (sum % 2 != 0) throw PreconditionViolated("2-partition needs an even sum, got " + std::to_string(sum));
  const Value t = sum / 2;
  std::vector<Value> set_row(multiset);
  std::vector<Value> dummy_row(multiset.size(), 0);
  for (int d = 0; d < 4; ++d) {
    set_row.push_back(-3 * t);
    dummy_row.push_back(t);
  }
  return Instance(4, {set_row, set_row, dummy_row, dummy_row}, "gadget_partition2");
}

Instance gadget_partition3(const std::vector<Value>& values, int r) {
  if (r < 1) throw PreconditionViolated("r must be positive");
  if (static_cast<int>(values.size()) != 3 * r)
    throw PreconditionViolated("3-partition needs exactly 3r = " + std::to_string(3 * r) + " values");
  if (std::ranges::any_of(values, [](Value b) { return b <= 0; }))
    throw PreconditionViolated("3-partition entries must be positive");
  const Value sum = std::accumulate(values.begin(), values.end(), Value{0});
  if (sum % r != 0) throw PreconditionViolated("sum " + std::to_string(sum) + " is not divisible by r");
  const Value t = sum / r;

  std::vector<Value> set_row(values);
  set_row.push_back(-t);
  set_row.push_back(-(r - 3) * t);
  std::vector<Value> dummy_row(values.size(), 0);
  dummy_row.back() = -(r - 2) * t;
  dummy_row.push_back(t);
  dummy_row.push_back((r - 1) * t);

  std::vector<std::vector<Value>> rows(r, set_row);
  rows.push_back(dummy_row);
  Instance inst(r + 1, std::move(rows), "gadget_partition3");
  for (AgentId i = 0; i <= r; ++i) {
    const auto row = inst.row(i);
    if (std::accumulate(row.begin(), row.end(), Value{0}) != 2 * t)
      throw InternalDefect("3-partition gadget row does not total 2T");
  }
  return inst;
}

bool equal_sum_partition_exists(const std::vector<Value>& values, int parts) {
  return partition_with_cap(values, parts, 0);
}

bool triplet_partition_exists(const std::vector<Value>& values) {
  if (values.size() % 3 != 0) return false;
  return partition_with_cap(values, static_cast<int>(values.size() / 3), 3);
}

const std::map<std::string, Fixture>& fixtures() {
  static const std::map<std::string, Fixture> all = build_fixtures();
  return all;
}

const Fixture& fixture(const std::string& name) {
  const auto& all = fixtures();
  const auto it = all.find(name);
  if (it == all.end()) throw PreconditionViolated("unknown fixture '" + name + "'");
  return it->second;
}

}  // namespace eqmanna
