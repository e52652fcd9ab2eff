#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqmanna/model.hpp"

namespace eqmanna {

enum class Regime {
  arbitrary,                        // uniform in [-B, B]
  objective,                        // every item an objective good or chore
  identical,                        // one random row, copied
  symmetric_bivalued_normalized,    // {-1, +1}, k1 ones per agent
  symmetric_trivalued_normalized,   // {-1, 0, +1}, equal row sums
  trivalued,                        // {-1, 0, +1}, no normalization
  type_normalized,                  // common good sum g and chore sum c
  two_agent_type_normalized,        // type_normalized with n = 2
  subjective_type_normalized,       // n = 2, every item subjective
  trivalued_type_normalized,        // {-1, 0, +1}, common counts of +1 and -1
  binary,                           // {0, 1}
};

std::string_view to_string(Regime regime);
/// Accepts the names above, plus the short aliases "bivalued", "tri",
/// "type" and "subjective". Throws PreconditionViolated otherwise.
Regime parse_regime(std::string_view text);
const std::vector<Regime>& all_regimes();

struct GeneratorSpec {
  Regime regime = Regime::arbitrary;
  int n = 2;
  int m = 4;
  Value value_bound = 3;
  std::uint64_t seed = 0;
  /// Number of +1 items per agent for the bi-valued regime (random if unset).
  std::optional<int> k1;
};

/// Deterministic per spec. The result is re-classified and must carry the
/// regime's flags; throws PreconditionViolated for infeasible sizes.
Instance generate(const GeneratorSpec& spec);

/// Whether `instance` satisfies the flags of `regime`.
bool verify_regime(const Instance& instance, Regime regime);

/// Equal-sum 2-partition reduction: 4 agents, |U| set items and 4 dummies.
/// Throws PreconditionViolated on an odd sum or a non-positive entry.
Instance gadget_partition2(const std::vector<Value>& multiset);

/// 3-Partition reduction with r set agents, one dummy agent, 3r set items
/// and 2 dummy items. Throws PreconditionViolated unless |values| = 3r and
/// the sum is divisible by r; checks that every agent's total is 2T.
Instance gadget_partition3(const std::vector<Value>& values, int r);

/// Brute-force feasibility used to cross-check the gadgets: can `values` be
/// split into `parts` groups of equal sum?
bool equal_sum_partition_exists(const std::vector<Value>& values, int parts);
/// Same with every group holding exactly three numbers.
bool triplet_partition_exists(const std::vector<Value>& values);

struct Fixture {
  Instance instance;
  std::optional<Allocation> highlighted;
  std::string property;  // what the fixture is known to exhibit
};

/// Named example instances, keyed and ordered by name.
const std::map<std::string, Fixture>& fixtures();
const Fixture& fixture(const std::string& name);

}  // namespace eqmanna
