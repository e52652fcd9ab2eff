#include "eqmanna/transfer.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <string>

#include "eqmanna/errors.hpp"
#include "eqmanna/objective.hpp"

namespace eqmanna {

std::string_view to_string(TransferKind kind) {
  switch (kind) {
    case TransferKind::rich_rich: return "RR";
    case TransferKind::rich_poor: return "RP";
    case TransferKind::poor_rich: return "PR";
    case TransferKind::poor_poor: return "PP";
    case TransferKind::fallback_pairing: return "FALLBACK_PAIRING";
  }
  return "?";
}

bool transfer_legal(TransferKind kind, Value from_value, Value to_value, bool trivalued) {
  using P = std::pair<Value, Value>;
  const P v{from_value, to_value};
  auto in = [&](std::initializer_list<P> allowed) { return std::ranges::find(allowed, v) != allowed.end(); };
  if (!trivalued) {
    switch (kind) {
      case TransferKind::rich_rich: return v == P{1, -1};
      case TransferKind::rich_poor: return v == P{1, 1};
      case TransferKind::poor_rich: return v == P{-1, -1};
      case TransferKind::poor_poor: return v == P{-1, 1};
      case TransferKind::fallback_pairing: return v == P{1, -1};
    }
    return false;
  }
  switch (kind) {
    case TransferKind::rich_rich: return in({{1, 0}, {0, -1}, {1, -1}});
    case TransferKind::rich_poor: return in({{1, 1}, {1, 0}, {0, 1}});
    case TransferKind::poor_rich: return in({{-1, 0}, {-1, -1}, {0, -1}});
    case TransferKind::poor_poor: return in({{-1, 1}, {0, 1}, {-1, 0}});
    case TransferKind::fallback_pairing: return v == P{1, -1};
  }
  return false;
}

namespace {

struct Move {
  AgentId agent;
  ItemId item;
};

struct Candidate {
  TransferKind kind;
  AgentId from;
  ItemId item;
  AgentId to;
};

Instance divide_by_scale(const Instance& inst, Value w) {
  std::vector<Value> vals;
  vals.reserve(static_cast<std::size_t>(inst.num_agents()) * inst.num_items());
  for (AgentId i = 0; i < inst.num_agents(); ++i)
    for (Value v : inst.row(i)) vals.push_back(v / w);
  return Instance(inst.num_agents(), inst.num_items(), std::move(vals), inst.name());
}

class TransferLoop {
 public:
  TransferLoop(const Instance& working, bool trivalued, Value scale, const TransferOptions& options)
      : inst_(working), trivalued_(trivalued), scale_(scale), options_(options), alloc_(working) {
    if (options.order_seed) rng_.emplace(*options.order_seed);
  }

  // Allocates every item of `pool`; returns the log.
  void run(std::vector<ItemId> pool) {
    pool_ = std::move(pool);
    const long ceiling = 4L * (static_cast<long>(inst_.num_items()) + 1) * (inst_.num_agents() + 1);
    long iterations = 0;
    while (!pool_.empty()) {
      if (++iterations > ceiling) throw InternalDefect("transfer loop exceeded its iteration ceiling");
      refresh_sets();
      if (greedy_step()) continue;
      if (spread() != 1)
        throw InternalDefect("greedy stalled with utility spread " + std::to_string(spread()) + " (expected 1)");
      if (transfer_step()) continue;
      if (poor_.size() > rich_.size()) {
        fallback();
        continue;
      }
      throw InternalDefect("no feasible transfer and |P| = " + std::to_string(poor_.size()) + " <= |R| = " +
                           std::to_string(rich_.size()) + " with " + std::to_string(pool_.size()) +
                           " subjective items left");
    }
  }

  Allocation& allocation() { return alloc_; }
  std::vector<TransferRecord>& log() { return log_; }
  int fallback_rounds() const { return fallback_rounds_; }
  void notify(LoopEvent e) {
    if (options_.observer) options_.observer(inst_, alloc_, e);
  }

 private:
  Value spread() const {
    const auto u = alloc_.utilities();
    return *std::ranges::max_element(u) - *std::ranges::min_element(u);
  }

  void refresh_sets() {
    const auto u = alloc_.utilities();
    const Value lo = *std::ranges::min_element(u);
    const Value hi = *std::ranges::max_element(u);
    poor_.clear();
    rich_.clear();
    for (AgentId i = 0; i < alloc_.num_agents(); ++i) {
      if (u[i] == lo) poor_.push_back(i);
      if (u[i] == hi) rich_.push_back(i);
    }
  }

  template <class T>
  const T& choose(const std::vector<T>& xs) {
    if (!rng_ || xs.size() == 1) return xs.front();
    std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
    return xs[d(*rng_)];
  }

  // Tiers: poor takes +1, poor takes 0, rich takes -1, rich takes 0. The
  // zero tiers only exist for tri-valued instances.
  bool greedy_step() {
    struct Tier {
      const std::vector<AgentId>* agents;
      Value value;
    };
    std::vector<Tier> tiers{{&poor_, 1}};
    if (trivalued_) tiers.push_back({&poor_, 0});
    tiers.push_back({&rich_, -1});
    if (trivalued_) tiers.push_back({&rich_, 0});
    for (const Tier& t : tiers) {
      std::vector<Move> moves;
      for (AgentId a : *t.agents) {
        for (ItemId o : pool_) {
          if (inst_.value(a, o) != t.value) continue;
          moves.push_back({a, o});
          if (!rng_) break;
        }
        if (!rng_ && !moves.empty()) break;
      }
      if (moves.empty()) continue;
      const Move mv = choose(moves);
      alloc_.assign(inst_, mv.item, mv.agent);
      std::erase(pool_, mv.item);
      notify(LoopEvent::assign);
      return true;
    }
    return false;
  }

  std::vector<Candidate> transfer_candidates(bool first_only) const {
    std::vector<Candidate> out;
    const std::array<std::pair<TransferKind, std::pair<const std::vector<AgentId>*, const std::vector<AgentId>*>>, 4>
        kinds{{{TransferKind::rich_rich, {&rich_, &rich_}},
               {TransferKind::rich_poor, {&rich_, &poor_}},
               {TransferKind::poor_rich, {&poor_, &rich_}},
               {TransferKind::poor_poor, {&poor_, &poor_}}}};
    const auto bundles = alloc_.bundles();
    for (const auto& [kind, sides] : kinds) {
      for (AgentId from : *sides.first) {
        for (ItemId o : bundles[from]) {
          for (AgentId to : *sides.second) {
            if (to == from) continue;
            if (!transfer_legal(kind, inst_.value(from, o), inst_.value(to, o), trivalued_)) continue;
            out.push_back({kind, from, o, to});
            if (first_only) return out;
          }
        }
      }
    }
    return out;
  }

  void record(TransferKind kind, AgentId from, ItemId o, AgentId to, Value gap) {
    log_.push_back({kind, o, from, to, inst_.value(from, o) * scale_, inst_.value(to, o) * scale_, gap * scale_});
  }

  bool transfer_step() {
    const auto cands = transfer_candidates(!rng_);
    if (cands.empty()) return false;
    const Candidate c = choose(cands);
    record(c.kind, c.from, c.item, c.to, spread());
    alloc_.transfer(inst_, c.item, c.from, c.to);
    notify(LoopEvent::transfer);
    return true;
  }

  // |P| > |R|: each rich r_j hands one of its +1 items to a distinct poor p_j.
  void fallback() {
    std::vector<AgentId> poor = poor_;
    if (rng_) std::ranges::shuffle(poor, *rng_);
    const Value gap = spread();
    for (std::size_t j = 0; j < rich_.size(); ++j) {
      const AgentId r = rich_[j];
      const AgentId p = poor[j];
      ItemId pick = kNone;
      for (ItemId o = 0; o < alloc_.num_items() && pick == kNone; ++o)
        if (alloc_.owner(o) == r && inst_.value(r, o) == 1) pick = o;
      if (pick == kNone) throw InternalDefect("fallback pairing: rich agent " + std::to_string(r) + " holds no +1 item");
      if (inst_.value(p, pick) != -1)
        throw InternalDefect("fallback pairing: poor agent values the moved item above -1, a rich-poor transfer was missed");
      record(TransferKind::fallback_pairing, r, pick, p, gap);
      alloc_.transfer(inst_, pick, r, p);
    }
    ++fallback_rounds_;
    notify(LoopEvent::fallback);
  }

  const Instance& inst_;
  bool trivalued_;
  Value scale_;
  const TransferOptions& options_;
  Allocation alloc_;
  std::vector<ItemId> pool_;
  std::vector<AgentId> poor_, rich_;
  std::vector<TransferRecord> log_;
  int fallback_rounds_ = 0;
  std::optional<std::mt19937_64> rng_;
};

TransferResult finish(const Instance& original, TransferLoop& loop, Value scale) {
  TransferResult r;
  r.allocation = Allocation::from_owners(original, {loop.allocation().owners().begin(), loop.allocation().owners().end()});
  r.log = std::move(loop.log());
  r.fallback_rounds = loop.fallback_rounds();
  r.scale = scale;
  return r;
}

}  // namespace

TransferResult solve_bivalued_eqx(const Instance& instance, const TransferOptions& options) {
  const ValuationClass vc = classify_valuations(instance);
  if (!vc.is_symmetric_bivalued) throw NotApplicable("symmetric_bivalued", "values are not all in {-w, +w}");
  if (!vc.is_normalized) throw NotApplicable("normalized", "agents value the grand bundle differently");
  const Instance working = divide_by_scale(instance, vc.scale);
  TransferLoop loop(working, false, vc.scale, options);
  loop.run(classify_items(working).subjective);

  GreedyOptions completion;
  if (options.observer)
    completion.observer = [&](const Allocation& a, const TraceStep&) { options.observer(working, a, LoopEvent::completion); };
  loop.allocation() = complete_allocation(working, std::move(loop.allocation()), completion).allocation;
  return finish(instance, loop, vc.scale);
}

TransferResult solve_trivalued_eq1(const Instance& instance, const TransferOptions& options) {
  const ValuationClass vc = classify_valuations(instance);
  if (!vc.is_symmetric_trivalued) throw NotApplicable("symmetric_trivalued", "values are not all in {-w, 0, +w}");
  if (!vc.is_normalized) throw NotApplicable("normalized", "agents value the grand bundle differently");
  const Instance working = divide_by_scale(instance, vc.scale);
  TransferLoop loop(working, true, vc.scale, options);
  std::vector<ItemId> all(working.num_items());
  for (ItemId o = 0; o < working.num_items(); ++o) all[o] = o;
  loop.run(std::move(all));
  return finish(instance, loop, vc.scale);
}

}  // namespace eqmanna
