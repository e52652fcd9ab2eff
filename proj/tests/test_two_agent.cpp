#include <doctest.h>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/instances.hpp"
#include "eqmanna/objective.hpp"
#include "eqmanna/oracle.hpp"
#include "eqmanna/two_agent.hpp"

using namespace eqmanna;

TEST_CASE("two-agent type-normalized solver") {
  const Instance& ex = fixture("ex_4_2").instance;
  const Allocation a = solve_two_agent_type_normalized(ex);
  CHECK(a.is_complete());
  for (ItemId o : {0, 1, 2}) CHECK(a.owner(o) == 0);
  for (ItemId o : {3, 4, 5}) CHECK(a.owner(o) == 1);
  CHECK(check_eq1(ex, a).holds);

  // No subjective items: plain greedy completion.
  const Instance obj(2, {{3, 1, -2}, {2, 2, -2}});
  const Allocation b = solve_two_agent_type_normalized(obj);
  CHECK(b == complete_allocation(obj, Allocation(obj)).allocation);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::two_agent_type_normalized, 2,
                                                 2 + static_cast<int>(seed % 10), 4, seed});
    CHECK(check_eq1(inst, solve_two_agent_type_normalized(inst)).holds);
  }
  CHECK_THROWS_AS(solve_two_agent_type_normalized(fixture("ex_5_1").instance), NotApplicable);
  CHECK_THROWS_AS(solve_two_agent_type_normalized(fixture("ex_1_1").instance), NotApplicable);
}

TEST_CASE("subjective-only two-agent solver is EQ at g") {
  const Instance inst(2, {{2, -2}, {-2, 2}});
  const Allocation a = solve_two_agent_subjective_eq(inst);
  CHECK(a.bundle(0) == std::vector<ItemId>{0});
  CHECK(a.bundle(1) == std::vector<ItemId>{1});
  CHECK(check_eq(inst, a).holds);

  const Instance empty(2, 0, {});
  CHECK(check_eq(empty, solve_two_agent_subjective_eq(empty)).holds);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance s = generate(GeneratorSpec{Regime::subjective_type_normalized, 2,
                                              2 + static_cast<int>(seed % 6), 3, seed});
    const Allocation out = solve_two_agent_subjective_eq(s);
    const Value g = *classify_valuations(s).good_sum;
    CHECK(out.utility(0) == g);
    CHECK(out.utility(1) == g);
    CHECK(check_eq(s, out).holds);
    CHECK(exact_po(s, out));
  }
  CHECK_THROWS_AS(solve_two_agent_subjective_eq(fixture("ex_4_2").instance), NotApplicable);
}

TEST_CASE("two-agent tri-valued EQ1+PO") {
  const Instance& ex = fixture("ex_4_2").instance;
  const Allocation a = solve_two_agent_trivalued_eq1po(ex);
  for (ItemId o : {6, 7, 8}) CHECK(a.owner(o) == 1);
  CHECK(check_eq1(ex, a).holds);
  CHECK(exact_po(ex, a));

  const Instance chores(2, {{-1, -1, -1}, {-1, -1, -1}});
  const Allocation c = solve_two_agent_trivalued_eq1po(chores);
  CHECK(c.is_complete());
  CHECK(check_eq1(chores, c).holds);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::trivalued_type_normalized, 2,
                                                 1 + static_cast<int>(seed % 7), 1, seed});
    const Allocation out = solve_two_agent_trivalued_eq1po(inst);
    CHECK(check_eq1(inst, out).holds);
    CHECK(exact_po(inst, out));
  }
}

TEST_CASE("identical valuations") {
  const Instance& ex = fixture("ex_notEQX").instance;
  const Allocation a = solve_identical_eq1po(ex);
  CHECK(a == solve_objective_eq1(ex).allocation);
  CHECK(exact_po(ex, a));

  const Instance one(1, {{4, -4}});
  CHECK(solve_identical_eq1po(one).bundle(0) == std::vector<ItemId>{0, 1});

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::identical, 2 + static_cast<int>(seed % 2),
                                                 static_cast<int>(seed % 8), 4, seed});
    const Allocation out = solve_identical_eq1po(inst);
    CHECK(check_eq1(inst, out).holds);
    CHECK(exact_po(inst, out));
  }
  CHECK_THROWS_AS(solve_identical_eq1po(fixture("ex_1_1").instance), NotApplicable);
}

TEST_CASE("every PO allocation of a subjective-only pair is EQ") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance s = generate(GeneratorSpec{Regime::subjective_type_normalized, 2, 2 + static_cast<int>(seed % 5), 3, seed});
    for (std::uint64_t idx : satisfying_indices(s, PropertyPredicate{Property::po}))
      CHECK(check_eq(s, allocation_at(s, idx)).holds);
  }
}
