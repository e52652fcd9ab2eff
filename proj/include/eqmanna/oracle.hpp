#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqmanna/execution.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/model.hpp"

namespace eqmanna {

enum class Property : unsigned {
  eq = 1U << 0,
  eq1 = 1U << 1,
  eqx = 1U << 2,          // strict zero policy
  eqx_nonzero = 1U << 3,  // nonzero-marginals zero policy
  ef = 1U << 4,
  ef1 = 1U << 5,
  efx = 1U << 6,
  po = 1U << 7,
  complete = 1U << 8,
};

/// A conjunction of properties. The empty conjunction accepts everything.
class PropertyPredicate {
 public:
  PropertyPredicate() = default;
  PropertyPredicate(std::initializer_list<Property> props);

  /// Accepts names joined by '+' or ',', e.g. "eq1+po", "eqx", "ef1,po".
  /// "eq1po" is shorthand for "eq1+po"; "eqx-nz" selects nonzero marginals.
  static PropertyPredicate parse(std::string_view text);

  bool has(Property p) const noexcept { return (mask_ & static_cast<unsigned>(p)) != 0; }
  PropertyPredicate& add(Property p) noexcept {
    mask_ |= static_cast<unsigned>(p);
    return *this;
  }
  std::string to_string() const;

  /// Evaluates every property except PO, which needs the Pareto frontier and
  /// is handled by the oracle itself.
  bool holds_without_po(const Instance& instance, const Allocation& allocation) const;

 private:
  unsigned mask_ = 0;
};

/// Enumeration ceiling: EQMANNA_CEILING when set and valid, else 2^24.
std::uint64_t default_ceiling();

struct OracleOptions {
  std::uint64_t ceiling = default_ceiling();
  Execution execution = Execution::parallel;
};

/// n^m as a floating count (so huge values still report).
long double allocation_count(const Instance& instance);

/// Complete allocation number `index` in mixed-radix order: item 0 is the
/// least significant digit, agent ids are the digits.
Allocation allocation_at(const Instance& instance, std::uint64_t index);

/// Calls `visit` on every complete allocation, in mixed-radix order. Throws
/// CeilingExceeded when n^m exceeds the ceiling.
void enumerate_allocations(const Instance& instance, const std::function<void(const Allocation&)>& visit,
                           std::uint64_t ceiling = default_ceiling());

/// Distinct utility vectors that no achievable vector Pareto-dominates.
std::vector<std::vector<Value>> pareto_frontier(const Instance& instance, const OracleOptions& options = {});

struct ExistsResult {
  std::optional<Allocation> witness;  // first in enumeration order
  std::uint64_t scanned = 0;          // allocations up to and including the witness
};

ExistsResult exists_with(const Instance& instance, const PropertyPredicate& predicate,
                         const OracleOptions& options = {});

/// Enumeration indices of every satisfying allocation, ascending.
std::vector<std::uint64_t> satisfying_indices(const Instance& instance, const PropertyPredicate& predicate,
                                              const OracleOptions& options = {});

/// True iff no complete allocation Pareto-dominates `allocation`.
bool exact_po(const Instance& instance, const Allocation& allocation, const OracleOptions& options = {});

struct OptimizeResult {
  Allocation allocation;
  WelfareValue value;
};

/// Best satisfying allocation for the welfare kind (first index on ties).
/// For Nash welfare, allocations with a negative utility are not eligible.
std::optional<OptimizeResult> optimize_within(const Instance& instance, const PropertyPredicate& predicate,
                                              WelfareKind kind, const OracleOptions& options = {});

/// Leximin (or leximin++ when `with_sizes`) optimum. Items with identical
/// value columns are interchangeable, so only the number of each such item
/// per agent is enumerated; the ceiling applies to that count.
Allocation leximin_pp(const Instance& instance, const OracleOptions& options = {}, bool with_sizes = true);
Allocation leximin(const Instance& instance, const OracleOptions& options = {});

/// Sorted (utility, bundle size) sequence compared by leximin++.
std::vector<std::pair<Value, int>> leximin_pp_key(std::span<const Value> utilities, std::span<const int> sizes);

}  // namespace eqmanna
