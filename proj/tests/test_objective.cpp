#include <doctest.h>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/instances.hpp"
#include "eqmanna/objective.hpp"

using namespace eqmanna;

TEST_CASE("greedy reproduces the fixture's reference allocation") {
  const Fixture& f = fixture("ex_notEQX");
  const GreedyResult r = solve_objective_eq1(f.instance);
  CHECK(r.allocation == *f.highlighted);
  CHECK(r.allocation.bundle(0) == std::vector<ItemId>{0, 2, 4, 6});
  CHECK(r.allocation.bundle(1) == std::vector<ItemId>{1, 3, 5});
  CHECK(r.allocation.utility(0) == -2);
  CHECK(r.allocation.utility(1) == 1);
  CHECK(check_eq1(f.instance, r.allocation).holds);
  CHECK_FALSE(check_eqx(f.instance, r.allocation).holds);
  REQUIRE(r.trace.size() == 7);
  CHECK(r.trace[0].phase == Phase::goods);
  CHECK(r.trace[6].phase == Phase::chores);
}

TEST_CASE("greedy edge cases") {
  const Instance goods(3, {{5, 1, 4, 2}, {3, 3, 3, 3}, {0, 9, 1, 1}});
  const GreedyResult g = solve_objective_eq1(goods);
  CHECK(g.allocation.is_complete());
  CHECK(check_eq1(goods, g.allocation).holds);
  for (const auto& s : g.trace) CHECK(s.phase == Phase::goods);

  const Instance one(1, {{3, -1, 0, -7}});
  const GreedyResult s = solve_objective_eq1(one);
  CHECK(s.allocation.bundle(0) == std::vector<ItemId>{0, 1, 2, 3});
  CHECK(s.allocation.utility(0) == -5);

  try {
    solve_objective_eq1(fixture("ex_1_1").instance);
    FAIL("expected NotApplicable");
  } catch (const NotApplicable& e) {
    CHECK(e.flag() == "objective");
    CHECK(std::string(e.what()).find("item 0") != std::string::npos);
  }
}

TEST_CASE("EQ1 after every assignment, monotone phases, replay") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::objective, 2 + static_cast<int>(seed % 4),
                                                 1 + static_cast<int>(seed % 12), 9, seed});
    GreedyOptions opts;
    bool all_eq1 = true;
    bool monotone = true;
    opts.observer = [&](const Allocation& a, const TraceStep& step) {
      all_eq1 = all_eq1 && check_eq1(inst, a).holds;
      if (step.phase == Phase::goods) monotone = monotone && step.utility_after >= step.utility_before;
      else monotone = monotone && step.utility_after <= step.utility_before;
    };
    const GreedyResult r = solve_objective_eq1(inst, opts);
    CHECK(all_eq1);
    CHECK(monotone);
    CHECK(r.allocation.is_complete());
    CHECK(replay(inst, r.trace, Allocation(inst)) == r.allocation);
    // Deterministic across runs.
    CHECK(solve_objective_eq1(inst).allocation == r.allocation);
  }
}

TEST_CASE("seeded tie-breaking still yields EQ1") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::objective, 3, 8, 2, seed});
    GreedyOptions opts;
    opts.tie_seed = seed * 31 + 1;
    const GreedyResult r = solve_objective_eq1(inst, opts);
    CHECK(check_eq1(inst, r.allocation).holds);
  }
}

TEST_CASE("complete_allocation") {
  const Instance& ex = fixture("ex_4_2").instance;
  const Allocation partial = Allocation::from_bundles(ex, {{0, 1, 2}, {3, 4, 5}});
  REQUIRE(check_eq1(ex, partial).holds);
  const GreedyResult r = complete_allocation(ex, partial);
  CHECK(r.allocation.is_complete());
  CHECK(check_eq1(ex, r.allocation).holds);
  CHECK(r.trace.size() == 3);

  const GreedyResult same = complete_allocation(ex, r.allocation);
  CHECK(same.allocation == r.allocation);
  CHECK(same.trace.empty());

  // Empty partial on an objective instance behaves like the greedy solver.
  const Instance& obj = fixture("ex_notEQX").instance;
  CHECK(complete_allocation(obj, Allocation(obj)).allocation == solve_objective_eq1(obj).allocation);

  CHECK_THROWS_AS(complete_allocation(ex, Allocation::from_bundles(ex, {{0, 1}, {3, 4, 5}})), PreconditionViolated);
  const Instance& no = fixture("ex_1_1").instance;
  CHECK_THROWS_AS(complete_allocation(no, Allocation(no)), PreconditionViolated);
  // Not EQ1: agent 0 holds both of its goods, agent 1 nothing it likes, o3 unassigned.
  const Instance uneq(2, {{5, 5, 1}, {1, 1, 1}});
  CHECK_THROWS_AS(complete_allocation(uneq, Allocation::from_bundles(uneq, {{0, 1}, {}})), PreconditionViolated);
}
