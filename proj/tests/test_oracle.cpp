#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/instances.hpp"
#include "eqmanna/oracle.hpp"
#include "support.hpp"

using namespace eqmanna;

namespace {

std::vector<Value> sorted_utilities(const Allocation& a) {
  std::vector<Value> u(a.utilities().begin(), a.utilities().end());
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

TEST_CASE("allocation counts and enumeration order") {
  CHECK(allocation_count(fixture("ex_1_1").instance) == 4);
  CHECK(allocation_count(Instance(1, {{1, 2, 3}})) == 1);
  CHECK(allocation_count(Instance(3, 0, {}, "")) == 1);
  const Instance three(3, {{1, 2}, {3, 4}, {5, 6}});
  CHECK(allocation_count(three) == 9);

  std::vector<std::vector<AgentId>> seen;
  enumerate_allocations(three, [&](const Allocation& a) { seen.push_back(eqtest::owners_of(a)); });
  REQUIRE(seen.size() == 9);
  CHECK(seen[0] == std::vector<AgentId>{0, 0});
  CHECK(seen[1] == std::vector<AgentId>{1, 0});
  CHECK(seen[5] == std::vector<AgentId>{2, 1});
  for (std::uint64_t k = 0; k < 9; ++k) CHECK(eqtest::owners_of(allocation_at(three, k)) == seen[k]);
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

  CHECK_THROWS_AS(enumerate_allocations(three, [](const Allocation&) {}, 8), CeilingExceeded);
}

TEST_CASE("non-existence fixtures") {
  const ExistsResult r11 = exists_with(fixture("ex_1_1").instance, {Property::eq1});
  CHECK_FALSE(r11.witness.has_value());
  CHECK(r11.scanned == 4);

  const Instance& ex42 = fixture("ex_4_2").instance;
  const std::vector<ItemId> subjective{0, 1, 2};
  const ExistsResult r42 = exists_with(ex42.restricted_to(subjective), {Property::eq1});
  CHECK_FALSE(r42.witness.has_value());
  CHECK(r42.scanned == 8);

  CHECK_FALSE(exists_with(fixture("ex_5_1").instance, {Property::eq1, Property::po}).witness);
  CHECK_FALSE(exists_with(fixture("ex_3agent_binary").instance, {Property::eq1, Property::po}).witness);
  CHECK_FALSE(optimize_within(fixture("ex_1_1").instance, {Property::eqx}, WelfareKind::utilitarian));
}

TEST_CASE("witnesses are the first hit and pass their checks") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::arbitrary, 2 + static_cast<int>(seed % 2),
                                                 1 + static_cast<int>(seed % 6), 3, seed});
    for (const char* text : {"eq1", "eqx", "ef1+po", "eq1po", "eqx-nz"}) {
      const PropertyPredicate p = PropertyPredicate::parse(text);
      OracleOptions serial;
      serial.execution = Execution::serial;
      const ExistsResult a = exists_with(inst, p, serial);
      const ExistsResult b = exists_with(inst, p);
      CHECK(a.scanned == b.scanned);
      CHECK(a.witness == b.witness);
      const auto hits = satisfying_indices(inst, p, serial);
      CHECK(hits == satisfying_indices(inst, p));
      if (!a.witness) {
        CHECK(hits.empty());
        CHECK(a.scanned == static_cast<std::uint64_t>(allocation_count(inst)));
        continue;
      }
      REQUIRE_FALSE(hits.empty());
      CHECK(a.scanned == hits.front() + 1);
      CHECK(p.holds_without_po(inst, *a.witness));
      if (p.has(Property::po)) CHECK(exact_po(inst, *a.witness));
    }
  }
}

TEST_CASE("exact PO") {
  const Instance ident(2, {{2, -1, 3}, {2, -1, 3}});
  enumerate_allocations(ident, [&](const Allocation& a) { CHECK(exact_po(ident, a)); });

  const Instance tri(2, {{1, -1}, {0, -1}});
  CHECK_FALSE(exact_po(tri, Allocation::from_owners(tri, {1, 0})));
  CHECK(exact_po(tri, Allocation::from_owners(tri, {0, 0})));

  const Instance& one = fixture("single_agent").instance;
  CHECK(exact_po(one, Allocation::from_owners(one, {0, 0, 0, 0})));

  CHECK_THROWS_AS(exact_po(tri, Allocation(tri)), PreconditionViolated);

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::arbitrary, 2 + static_cast<int>(seed % 2),
                                                 static_cast<int>(seed % 5), 2, seed});
    enumerate_allocations(inst, [&](const Allocation& a) {
      CHECK(exact_po(inst, a) == eqtest::literal_po(inst, eqtest::owners_of(a)));
    });
  }
}

TEST_CASE("non-wasteful allocations of tri-valued instances are PO") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::trivalued, 2 + static_cast<int>(seed % 2),
                                                 static_cast<int>(seed % 6), 1, seed});
    enumerate_allocations(inst, [&](const Allocation& a) {
      if (check_po_nonwasteful(inst, a)) CHECK(exact_po(inst, a));
    });
  }
}

TEST_CASE("Pareto frontier") {
  auto front = pareto_frontier(fixture("ex_leximin").instance);
  // Achievable: (0,-5), (-5,0), (10,-3), (-15,-2).
  std::sort(front.begin(), front.end());
  CHECK(front == std::vector<std::vector<Value>>{{-5, 0}, {10, -3}});
  const auto f11 = pareto_frontier(fixture("ex_1_1").instance);
  CHECK(f11 == std::vector<std::vector<Value>>{{0, 2}});
}

TEST_CASE("optimize within a predicate") {
  const Instance& one = fixture("single_agent").instance;
  const auto best = optimize_within(one, {Property::complete}, WelfareKind::utilitarian);
  REQUIRE(best);
  CHECK(best->value.scalar == 4);

  const Instance inst(2, {{3, -1}, {1, 2}});
  const auto nw = optimize_within(inst, {}, WelfareKind::nash);
  REQUIRE(nw);
  CHECK(nw->value.nash->to_string() == "(2, 6)");
  const auto ew = optimize_within(inst, {}, WelfareKind::egalitarian);
  REQUIRE(ew);
  CHECK(ew->value.scalar == 2);
  // Only (-1,0)-type allocations exist: NW is undefined everywhere.
  CHECK_FALSE(optimize_within(Instance(2, {{-1}, {-1}}), {}, WelfareKind::nash));
}

TEST_CASE("EQ and PO together imply EF") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::trivalued, 2 + static_cast<int>(seed % 2),
                                                 static_cast<int>(seed % 7), 1, seed});
    const PropertyPredicate p{Property::eq, Property::po};
    for (std::uint64_t k : satisfying_indices(inst, p)) CHECK(check_ef(inst, allocation_at(inst, k)).holds);
  }
}

TEST_CASE("leximin and leximin++") {
  const Instance& ex = fixture("ex_leximin").instance;
  const Allocation lp = leximin_pp(ex);
  CHECK(std::vector<Value>(lp.utilities().begin(), lp.utilities().end()) == std::vector<Value>{10, -3});
  CHECK_FALSE(check_eq1(ex, lp).holds);

  const Instance& t2 = fixture("table2_leximin").instance;
  const Allocation a = leximin_pp(t2);
  CHECK(sorted_utilities(a) == std::vector<Value>{1, 1, 1, 1, 1, 3});
  CHECK_FALSE(check_eq1(t2, a).holds);
  CHECK(sorted_utilities(leximin(t2)) == std::vector<Value>{1, 1, 1, 1, 1, 3});

  const Instance single(2, {{5}, {5}});
  const Allocation s = leximin_pp(single);
  CHECK(sorted_utilities(s) == std::vector<Value>{0, 5});

  const auto key = leximin_pp_key(std::vector<Value>{2, 1}, std::vector<int>{1, 3});
  CHECK(key == std::vector<std::pair<Value, int>>{{1, 3}, {2, 1}});

  // Leximin++ prefers the poorest agent to hold more items at equal utility.
  const Instance zeros(2, {{1, 0}, {1, 0}});
  const Allocation z = leximin_pp(zeros);
  CHECK(z.bundle_size(z.utility(0) == 0 ? 0 : 1) == 1);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = generate(GeneratorSpec{Regime::arbitrary, 2 + static_cast<int>(seed % 2),
                                                 1 + static_cast<int>(seed % 5), 3, seed});
    std::vector<Value> best;
    enumerate_allocations(inst, [&](const Allocation& b) {
      const auto u = sorted_utilities(b);
      if (best.empty() || best < u) best = u;
    });
    CHECK(sorted_utilities(leximin(inst)) == best);
  }
}

TEST_CASE("predicate parsing") {
  const PropertyPredicate p = PropertyPredicate::parse("eq1po");
  CHECK(p.has(Property::eq1));
  CHECK(p.has(Property::po));
  CHECK_FALSE(p.has(Property::eq));
  CHECK(PropertyPredicate::parse("ef1,efx").has(Property::efx));
  CHECK(PropertyPredicate::parse("eqx-nz").has(Property::eqx_nonzero));
  CHECK_FALSE(PropertyPredicate::parse("eqx-nz").has(Property::eqx));
  CHECK(PropertyPredicate::parse("EQ1+PO").to_string() == p.to_string());
  CHECK_THROWS_AS(PropertyPredicate::parse("fair"), PreconditionViolated);
}

TEST_CASE("ceiling") {
  OracleOptions small;
  small.ceiling = 100;
  try {
    exists_with(fixture("ex_notEQX").instance, {Property::eqx}, small);
    FAIL("expected CeilingExceeded");
  } catch (const CeilingExceeded& e) {
    CHECK(e.required() == 128);
    CHECK(e.ceiling() == 100);
  }
  CHECK_THROWS_AS(leximin_pp(fixture("table2_leximin").instance, small), CeilingExceeded);

  CHECK(default_ceiling() == (std::uint64_t{1} << 24));
  ::setenv("EQMANNA_CEILING", "1000", 1);
  CHECK(default_ceiling() == 1000);
  ::setenv("EQMANNA_CEILING", "junk", 1);
  CHECK(default_ceiling() == (std::uint64_t{1} << 24));
  ::unsetenv("EQMANNA_CEILING");
}
