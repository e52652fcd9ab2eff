#include <doctest.h>

#include "eqmanna/eq1po.hpp"
#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/instances.hpp"
#include "eqmanna/oracle.hpp"
#include "support.hpp"

using namespace eqmanna;

namespace {

// Largest Nash key over all complete allocations, by literal enumeration.
eqtest::LiteralNash brute_best_nash(const Instance& inst) {
  eqtest::LiteralNash best;
  eqtest::each_assignment(inst.num_agents(), inst.num_items(), [&](const std::vector<AgentId>& owners) {
    const auto k = eqtest::literal_nash(eqtest::raw_utilities(inst, owners));
    if (k.defined && (!best.defined || best < k)) best = k;
  });
  return best;
}

}  // namespace

TEST_CASE("binary reduction lifts subjective minus-ones to zero") {
  const Instance& ex = fixture("ex_5_1").instance;
  const BinaryReduction r = build_binary_reduction(ex);
  CHECK(r.base_items.size() == 6);
  CHECK(r.reduced.rows() == std::vector<std::vector<Value>>{{1, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}, {0, 0, 0, 1, 1, 1}});

  const Instance mixed(2, {{1, -1, -1, 0}, {0, -1, 1, 0}});
  const BinaryReduction m = build_binary_reduction(mixed);
  CHECK(m.base_items == std::vector<ItemId>{0, 2, 3});
  CHECK(m.reduced.rows() == std::vector<std::vector<Value>>{{1, 0, 0}, {0, 1, 0}});
  CHECK_THROWS_AS(build_binary_reduction(Instance(1, {{2, 1}})), NotApplicable);
}

TEST_CASE("Nash-optimal binary allocations") {
  const Instance two(2, {{1, 1}, {1, 1}});
  const Allocation a = nash_optimal_binary(two);
  CHECK(a.utility(0) == 1);
  CHECK(a.utility(1) == 1);
  CHECK(nash_key(a.utilities()).to_string() == "(2, 1)");

  const Instance red(3, {{1, 1, 1, 0, 0, 0}, {0, 0, 0, 1, 1, 1}, {0, 0, 0, 1, 1, 1}});
  const Allocation b = nash_optimal_binary(red);
  CHECK(b.bundle(0) == std::vector<ItemId>{0, 1, 2});
  CHECK(nash_key(b.utilities()).to_string() == "(3, 6)");

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::binary, 1 + static_cast<int>(seed % 3),
                                                 static_cast<int>(seed % 8), 1, seed});
    const Allocation out = nash_optimal_binary(inst);
    const auto best = brute_best_nash(inst);
    const auto got = eqtest::literal_nash({out.utilities().begin(), out.utilities().end()});
    CHECK(got.positive == best.positive);
    CHECK(got.product == best.product);
    // Non-wasteful: an item sits with a 0-valuer only if everyone values it 0.
    for (ItemId o = 0; o < inst.num_items(); ++o) {
      if (inst.value(out.owner(o), o) == 1) continue;
      for (AgentId i = 0; i < inst.num_agents(); ++i) CHECK(inst.value(i, o) == 0);
      CHECK(out.owner(o) == 0);
    }
    NashOptions seeded;
    seeded.path_seed = seed + 11;
    CHECK(nash_key(nash_optimal_binary(inst, seeded).utilities()) == nash_key(out.utilities()));
  }
  CHECK_THROWS_AS(nash_optimal_binary(Instance(2, {{1, -1}, {1, 1}})), NotApplicable);
}

TEST_CASE("EQ1+PO decision on the fixtures") {
  const SolverOutcome none = solve_trivalued_eq1po(fixture("ex_5_1").instance);
  CHECK(none.status == OutcomeStatus::does_not_exist);
  CHECK_FALSE(none.allocation.has_value());
  CHECK(solve_trivalued_eq1po(fixture("ex_3agent_binary").instance).status == OutcomeStatus::does_not_exist);

  const Instance& ex = fixture("ex_4_2").instance;
  const SolverOutcome yes = solve_trivalued_eq1po(ex);
  REQUIRE(yes.found());
  CHECK(check_eq1(ex, *yes.allocation).holds);
  CHECK(exact_po(ex, *yes.allocation));
  REQUIRE(yes.certificate);
  CHECK(yes.certificate->po == true);
  for (ItemId o : {6, 7, 8}) CHECK(yes.allocation->owner(o) == 1);
  CHECK_THROWS_AS(solve_trivalued_eq1po(fixture("ex_notEQX").instance), NotApplicable);
}

TEST_CASE("EQ1+PO decision agrees with exhaustive search") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::trivalued, 2 + static_cast<int>(seed % 2),
                                                 static_cast<int>(seed % 7), 1, seed});
    const SolverOutcome out = solve_trivalued_eq1po(inst);
    bool exists = false;
    eqtest::each_assignment(inst.num_agents(), inst.num_items(), [&](const std::vector<AgentId>& owners) {
      if (!exists && eqtest::literal_eq1(inst, owners) && eqtest::literal_po(inst, owners)) exists = true;
    });
    CHECK(out.found() == exists);
    if (out.found()) {
      CHECK(eqtest::literal_eq1(inst, eqtest::owners_of(*out.allocation)));
      CHECK(eqtest::literal_po(inst, eqtest::owners_of(*out.allocation)));
    }
  }
}

TEST_CASE("scaled tri-valued instance") {
  const Instance inst(2, {{2, 2, -2, 0}, {0, 2, -2, -2}});
  const SolverOutcome out = solve_trivalued_eq1po(inst);
  REQUIRE(out.found());
  CHECK(check_eq1(inst, *out.allocation).holds);
  CHECK(exact_po(inst, *out.allocation));
}
