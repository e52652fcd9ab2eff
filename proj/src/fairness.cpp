#include "eqmanna/fairness.hpp"

#include <algorithm>
#include <sstream>

#include "eqmanna/errors.hpp"

namespace eqmanna {
namespace {

// Extremal removal candidates in `owner`'s bundle, valued by `evaluator`.
// A good is an item the evaluator values >= 0, a chore one it values <= 0;
// under nonzero_marginals the inequalities are strict.
struct Extremes {
  ItemId best_good = kNone;    // largest value among goods
  ItemId worst_good = kNone;   // smallest value among goods
  ItemId best_chore = kNone;   // most negative chore (removal helps most)
  ItemId worst_chore = kNone;  // chore closest to zero
};

Extremes extremes(const Instance& inst, const Allocation& alloc, AgentId evaluator, AgentId owner,
                  ZeroPolicy policy) {
  Extremes e;
  const bool strict = policy == ZeroPolicy::strict;
  for (ItemId o = 0; o < alloc.num_items(); ++o) {
    if (alloc.owner(o) != owner) continue;
    const Value v = inst.value(evaluator, o);
    if (strict ? v >= 0 : v > 0) {
      if (e.best_good == kNone || v > inst.value(evaluator, e.best_good)) e.best_good = o;
      if (e.worst_good == kNone || v < inst.value(evaluator, e.worst_good)) e.worst_good = o;
    }
    if (strict ? v <= 0 : v < 0) {
      if (e.best_chore == kNone || v < inst.value(evaluator, e.best_chore)) e.best_chore = o;
      if (e.worst_chore == kNone || v > inst.value(evaluator, e.worst_chore)) e.worst_chore = o;
    }
  }
  return e;
}

enum class Relaxation { none, one, any };

// Shared pair scan for EQ/EQ1/EQX. `self[i]` is agent i's own extremes.
Verdict equitability(const Instance& inst, const Allocation& alloc, Relaxation relax, ZeroPolicy policy) {
  const int n = alloc.num_agents();
  std::vector<Extremes> self;
  if (relax != Relaxation::none) {
    self.reserve(n);
    for (AgentId i = 0; i < n; ++i) self.push_back(extremes(inst, alloc, i, i, policy));
  }
  for (AgentId i = 0; i < n; ++i) {
    const Value ui = alloc.utility(i);
    for (AgentId j = 0; j < n; ++j) {
      const Value uj = alloc.utility(j);
      if (!(ui < uj)) continue;
      PairWitness w{i, j, ui, uj, kNone, kNone};
      bool ok = false;
      if (relax == Relaxation::one) {
        w.good = self[j].best_good;
        w.chore = self[i].best_chore;
        ok = (w.good != kNone && ui >= uj - inst.value(j, w.good)) ||
             (w.chore != kNone && ui - inst.value(i, w.chore) >= uj);
      } else if (relax == Relaxation::any) {
        w.good = self[j].worst_good;
        w.chore = self[i].worst_chore;
        const bool goods_ok = w.good == kNone || ui >= uj - inst.value(j, w.good);
        const bool chores_ok = w.chore == kNone || ui - inst.value(i, w.chore) >= uj;
        ok = goods_ok && chores_ok;
      }
      if (!ok) return Verdict{false, w};
    }
  }
  return Verdict{};
}

Verdict envy(const Instance& inst, const Allocation& alloc, Relaxation relax) {
  const int n = alloc.num_agents();
  const int m = alloc.num_items();
  // cross[i][j] = v_i(A_j)
  std::vector<std::vector<Value>> cross(n, std::vector<Value>(n, 0));
  for (ItemId o = 0; o < m; ++o) {
    const AgentId j = alloc.owner(o);
    if (j == kNone) continue;
    for (AgentId i = 0; i < n; ++i) cross[i][j] += inst.value(i, o);
  }
  for (AgentId i = 0; i < n; ++i) {
    const Value own = cross[i][i];
    std::optional<Extremes> mine;
    for (AgentId j = 0; j < n; ++j) {
      if (i == j || !(own < cross[i][j])) continue;
      PairWitness w{i, j, own, cross[i][j], kNone, kNone};
      bool ok = false;
      if (relax != Relaxation::none) {
        if (!mine) mine = extremes(inst, alloc, i, i, ZeroPolicy::strict);
        const Extremes theirs = extremes(inst, alloc, i, j, ZeroPolicy::strict);
        if (relax == Relaxation::one) {
          w.good = theirs.best_good;
          w.chore = mine->best_chore;
          ok = (w.good != kNone && own >= cross[i][j] - inst.value(i, w.good)) ||
               (w.chore != kNone && own - inst.value(i, w.chore) >= cross[i][j]);
        } else {
          w.good = theirs.worst_good;
          w.chore = mine->worst_chore;
          ok = (w.good == kNone || own >= cross[i][j] - inst.value(i, w.good)) &&
               (w.chore == kNone || own - inst.value(i, w.chore) >= cross[i][j]);
        }
      }
      if (!ok) return Verdict{false, w};
    }
  }
  return Verdict{};
}

}  // namespace

Verdict check_eq(const Instance& instance, const Allocation& allocation) {
  return equitability(instance, allocation, Relaxation::none, ZeroPolicy::strict);
}

Verdict check_eq1(const Instance& instance, const Allocation& allocation) {
  return equitability(instance, allocation, Relaxation::one, ZeroPolicy::strict);
}

Verdict check_eqx(const Instance& instance, const Allocation& allocation, ZeroPolicy policy) {
  return equitability(instance, allocation, Relaxation::any, policy);
}

Verdict check_ef(const Instance& instance, const Allocation& allocation) {
  return envy(instance, allocation, Relaxation::none);
}

Verdict check_ef1(const Instance& instance, const Allocation& allocation) {
  return envy(instance, allocation, Relaxation::one);
}

Verdict check_efx(const Instance& instance, const Allocation& allocation) {
  return envy(instance, allocation, Relaxation::any);
}

FairnessReport evaluate(const Instance& instance, const Allocation& allocation) {
  FairnessReport r;
  auto record = [&r](const char* name, const Verdict& v) {
    if (!v.holds && v.witness) r.witnesses.emplace_back(name, *v.witness);
    return v.holds;
  };
  r.eq = record("EQ", check_eq(instance, allocation));
  r.eq1 = record("EQ1", check_eq1(instance, allocation));
  r.eqx = record("EQX", check_eqx(instance, allocation, ZeroPolicy::strict));
  r.eqx_nonzero_marginals = record("EQX+-", check_eqx(instance, allocation, ZeroPolicy::nonzero_marginals));
  r.ef = record("EF", check_ef(instance, allocation));
  r.ef1 = record("EF1", check_ef1(instance, allocation));
  r.efx = record("EFX", check_efx(instance, allocation));
  return r;
}

std::string describe(const FairnessReport& report) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream os;
  os << "EQ: " << yn(report.eq) << ", EQ1: " << yn(report.eq1) << ", EQX: " << yn(report.eqx)
     << ", EQX+-: " << yn(report.eqx_nonzero_marginals) << ", EF: " << yn(report.ef) << ", EF1: " << yn(report.ef1)
     << ", EFX: " << yn(report.efx);
  if (report.po) os << ", PO: " << yn(*report.po);
  return os.str();
}

std::string NashKey::to_string() const {
  std::ostringstream os;
  os << '(' << positive_count << ", " << product << ')';
  return os.str();
}

Value utilitarian_welfare(const Allocation& allocation) {
  Value total = 0;
  for (Value u : allocation.utilities()) total += u;
  return total;
}

double utilitarian_mean(const Allocation& allocation) {
  if (allocation.num_agents() == 0) return 0.0;
  return static_cast<double>(utilitarian_welfare(allocation)) / allocation.num_agents();
}

Value egalitarian_welfare(const Allocation& allocation) {
  const auto u = allocation.utilities();
  return u.empty() ? 0 : *std::ranges::min_element(u);
}

NashKey nash_key(std::span<const Value> utilities) {
  NashKey key;
  for (Value u : utilities) {
    if (u > 0) {
      ++key.positive_count;
      key.product *= u;
    }
  }
  return key;
}

std::optional<NashKey> nash_welfare(const Allocation& allocation) {
  if (!allocation.is_complete()) throw PreconditionViolated("Nash welfare needs a complete allocation");
  for (Value u : allocation.utilities())
    if (u < 0) return std::nullopt;
  return nash_key(allocation.utilities());
}

WelfareValue welfare(const Allocation& allocation, WelfareKind kind) {
  WelfareValue w;
  w.kind = kind;
  switch (kind) {
    case WelfareKind::utilitarian: w.scalar = utilitarian_welfare(allocation); break;
    case WelfareKind::egalitarian: w.scalar = egalitarian_welfare(allocation); break;
    case WelfareKind::nash:
      w.nash = nash_welfare(allocation);
      w.defined = w.nash.has_value();
      break;
  }
  return w;
}

bool pareto_dominates(std::span<const Value> a, std::span<const Value> b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    strict = strict || a[i] > b[i];
  }
  return strict;
}

bool pareto_dominates(const Allocation& a, const Allocation& b) {
  if (!a.is_complete() || !b.is_complete()) throw PreconditionViolated("Pareto comparison needs complete allocations");
  return pareto_dominates(a.utilities(), b.utilities());
}

bool check_po_nonwasteful(const Instance& instance, const Allocation& allocation) {
  if (!classify_valuations(instance).is_symmetric_trivalued)
    throw NotApplicable("symmetric_trivalued", "non-wastefulness certifies PO only on symmetric tri-valued instances");
  for (ItemId o = 0; o < instance.num_items(); ++o) {
    const AgentId holder = allocation.owner(o);
    if (holder == kNone) continue;
    for (AgentId i = 0; i < instance.num_agents(); ++i)
      if (instance.value(i, o) > instance.value(holder, o)) return false;
  }
  return true;
}

}  // namespace eqmanna
