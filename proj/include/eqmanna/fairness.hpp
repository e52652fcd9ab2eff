#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqmanna/model.hpp"

namespace eqmanna {

/// How zero-valued items are treated as removal candidates in EQX.
/// `strict` follows the definition literally (a 0 item is both a good and a
/// chore); `nonzero_marginals` only removes strictly positive goods and
/// strictly negative chores.
enum class ZeroPolicy { strict, nonzero_marginals };

/// A violating ordered pair together with the extremal removal candidates
/// that were examined (kNone when the bundle had no candidate).
struct PairWitness {
  AgentId poorer = kNone;  // for EF notions: the envious agent
  AgentId richer = kNone;  // for EF notions: the envied agent
  Value poorer_value = 0;
  Value richer_value = 0;
  ItemId good = kNone;
  ItemId chore = kNone;
};

struct Verdict {
  bool holds = true;
  std::optional<PairWitness> witness;

  explicit operator bool() const noexcept { return holds; }
};

Verdict check_eq(const Instance& instance, const Allocation& allocation);
Verdict check_eq1(const Instance& instance, const Allocation& allocation);
Verdict check_eqx(const Instance& instance, const Allocation& allocation, ZeroPolicy policy = ZeroPolicy::strict);
Verdict check_ef(const Instance& instance, const Allocation& allocation);
Verdict check_ef1(const Instance& instance, const Allocation& allocation);
Verdict check_efx(const Instance& instance, const Allocation& allocation);

struct FairnessReport {
  bool eq = false;
  bool eq1 = false;
  bool eqx = false;
  bool eqx_nonzero_marginals = false;
  bool ef = false;
  bool ef1 = false;
  bool efx = false;
  std::optional<bool> po;  // only set when a PO method was run
  std::vector<std::pair<std::string, PairWitness>> witnesses;
};

FairnessReport evaluate(const Instance& instance, const Allocation& allocation);
std::string describe(const FairnessReport& report);

/// Nash welfare compared as (number of agents with positive utility, product
/// of the positive utilities), lexicographically.
struct NashKey {
  int positive_count = 0;
  boost::multiprecision::cpp_int product = 1;

  friend bool operator==(const NashKey& a, const NashKey& b) {
    return a.positive_count == b.positive_count && a.product == b.product;
  }
  friend bool operator<(const NashKey& a, const NashKey& b) {
    if (a.positive_count != b.positive_count) return a.positive_count < b.positive_count;
    return a.product < b.product;
  }
  std::string to_string() const;
};

enum class WelfareKind { utilitarian, egalitarian, nash };

/// Sum of utilities (the 1/n mean is presentation only).
Value utilitarian_welfare(const Allocation& allocation);
double utilitarian_mean(const Allocation& allocation);
/// Minimum utility; 0 for an instance without agents' items.
Value egalitarian_welfare(const Allocation& allocation);
/// nullopt when some utility is negative (NW undefined). Requires a complete
/// allocation.
std::optional<NashKey> nash_welfare(const Allocation& allocation);
NashKey nash_key(std::span<const Value> utilities);

struct WelfareValue {
  WelfareKind kind = WelfareKind::utilitarian;
  bool defined = true;
  Value scalar = 0;
  std::optional<NashKey> nash;
};
WelfareValue welfare(const Allocation& allocation, WelfareKind kind);

bool pareto_dominates(std::span<const Value> a, std::span<const Value> b);
bool pareto_dominates(const Allocation& a, const Allocation& b);

/// True when every allocated item sits with an agent whose value for it is
/// maximal. On symmetric tri-valued instances this certifies UW-maximality and
/// therefore PO; false only means the certificate is absent.
bool check_po_nonwasteful(const Instance& instance, const Allocation& allocation);

}  // namespace eqmanna
