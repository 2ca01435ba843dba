#include <gtest/gtest.h>

#include <set>

#include "carshare/feasibility.hpp"
#include "carshare/priority.hpp"
#include "fixtures.hpp"
#include "micro.hpp"

using namespace carshare;
using carshare::testing::make;
using carshare::testing::micro_instance;

namespace {

PriorityDag dag_of(int n, std::vector<PriorityArc> arcs) {
  PriorityDag d;
  d.n = n;
  d.arcs = std::move(arcs);
  std::sort(d.arcs.begin(), d.arcs.end());
  return d;
}

// Reference closure by repeated relaxation.
std::set<std::pair<int, int>> closure(const PriorityDag& d) {
  std::set<std::pair<int, int>> r;
  for (const auto& a : d.arcs) r.insert({a.from, a.to});
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [a, b] : std::set(r))
      for (const auto& [c, e] : std::set(r))
        if (b == c && r.insert({a, e}).second) grew = true;
  }
  return r;
}

}  // namespace

TEST(Priority, WorkSchedule) {
  EXPECT_EQ(work_schedule(make(1, Station::A, 100, 130, 400, 440)), 340);
  Customer degenerate = make(1, Station::A, 50, 50, 50, 50);
  EXPECT_EQ(work_schedule(degenerate), 0);
  const Instance f5 = carshare::testing::interlocked();
  EXPECT_EQ(work_schedule(f5.customer(3)), 56 - 4);
}

TEST(Priority, Dominates) {
  const Customer c = make(1, Station::A, 0, 100, 200, 300);
  const Customer inner = make(2, Station::A, 10, 90, 210, 290);
  EXPECT_TRUE(dominates(c, inner));
  EXPECT_FALSE(dominates(inner, c));
  const Customer twin = make(3, Station::A, 0, 100, 200, 300);
  EXPECT_TRUE(dominates(c, twin));
  EXPECT_TRUE(dominates(twin, c));
  const Customer other_way = make(4, Station::B, 10, 90, 210, 290);
  EXPECT_FALSE(dominates(c, other_way));
}

TEST(Priority, TwinsKeepArcTowardLowerId) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  inst.customers = {make(1, Station::A, 0, 100, 200, 300), make(2, Station::A, 0, 100, 200, 300)};
  const PriorityDag d = build_dag(inst);
  ASSERT_EQ(d.arcs.size(), 1u);
  EXPECT_EQ(d.arcs[0].from, 2);
  EXPECT_EQ(d.arcs[0].to, 1);
}

TEST(Priority, NestedChain) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  for (int i = 0; i < 5; ++i) inst.customers.push_back(make(i + 1, Station::A, 10 * i, 100, 200, 300 - 10 * i));
  const PriorityResult r = priority_constraints(inst);
  EXPECT_EQ(r.dag.arcs.size(), 10u);
  EXPECT_EQ(r.reduced.arcs.size(), 4u);
  EXPECT_EQ(r.forest.arcs.size(), 4u);
  // widest customer satisfied only if the next narrower one is
  EXPECT_EQ(r.reduced.arcs[0], (PriorityArc{1, 2}));
}

TEST(Priority, NoSameDirectionPairs) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  inst.customers = {make(1, Station::A, 0, 100, 200, 300), make(2, Station::B, 10, 90, 210, 290)};
  EXPECT_TRUE(build_dag(inst).arcs.empty());
}

TEST(Priority, DagMatchesPairwisePredicate) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = micro_instance(seed, 4, 10);
    const PriorityDag d = build_dag(inst);
    std::set<std::pair<int, int>> got;
    for (const auto& a : d.arcs) got.insert({a.from, a.to});
    std::set<std::pair<int, int>> want;
    for (const Customer& a : inst.customers)
      for (const Customer& b : inst.customers) {
        if (a.id == b.id || !dominates(a, b)) continue;
        if (dominates(b, a) && a.id < b.id) continue;  // twin: keep arc toward the lower id
        want.insert({a.id, b.id});
      }
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

TEST(Priority, ReductionTextbook) {
  const PriorityDag d = dag_of(3, {{1, 2}, {2, 3}, {1, 3}});
  EXPECT_EQ(transitive_reduction(d).arcs, (std::vector<PriorityArc>{{1, 2}, {2, 3}}));
  const PriorityDag reduced = dag_of(3, {{1, 2}, {2, 3}});
  EXPECT_EQ(transitive_reduction(reduced), reduced);
  EXPECT_THROW(transitive_reduction(dag_of(2, {{1, 2}, {2, 1}})), std::invalid_argument);
}

TEST(Priority, FiveNodeDiamond) {
  // c1 -> {c2..c5}, c2 -> {c4,c5}, c3 -> {c4,c5}, c4 -> c5
  const PriorityDag d = dag_of(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
  const PriorityDag r = transitive_reduction(d);
  EXPECT_EQ(r.arcs, (std::vector<PriorityArc>{{1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}}));
  EXPECT_EQ(closure(r), closure(d));
}

TEST(Priority, ReductionPreservesReachability) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rng.uniform(2, 50));
    std::vector<PriorityArc> arcs;
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        if (rng.uniform(0, 9) == 0) arcs.push_back({a, b});
    const PriorityDag d = dag_of(n, arcs);
    const PriorityDag r = transitive_reduction(d);
    EXPECT_EQ(closure(r), closure(d));
    // minimal: no arc is implied by the others
    for (std::size_t i = 0; i < r.arcs.size(); ++i) {
      PriorityDag without = r;
      without.arcs.erase(without.arcs.begin() + static_cast<std::ptrdiff_t>(i));
      EXPECT_NE(closure(without), closure(d));
    }
  }
}

TEST(Priority, ForestKeepsShortestParent) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  // node 4 has parents with work schedules 340, 200, 500
  inst.customers = {make(1, Station::A, 0, 10, 330, 340), make(2, Station::A, 0, 10, 190, 200),
                    make(3, Station::A, 0, 10, 490, 500), make(4, Station::A, 5, 10, 100, 150)};
  const PriorityDag d = dag_of(4, {{1, 4}, {2, 4}, {3, 4}});
  const PriorityDag f = arborescence_forest(d, inst);
  EXPECT_EQ(f.arcs, (std::vector<PriorityArc>{{2, 4}}));
  EXPECT_EQ(arborescence_forest(f, inst), f);
}

TEST(Priority, ForestProperties) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PriorityResult r = priority_constraints(generate_st(150, seed));
    const auto in = r.forest.in_degree();
    for (int x : in) EXPECT_LE(x, 1);
    for (const auto& a : r.forest.arcs)
      EXPECT_TRUE(std::binary_search(r.reduced.arcs.begin(), r.reduced.arcs.end(), a));
    const PriorityStats s = r.stats();
    EXPECT_LE(s.forest_arcs, s.reduced_arcs);
    EXPECT_LE(s.reduced_arcs, s.dominance_arcs);
  }
}

TEST(Priority, ExchangeProperty) {
  // replacing a dominating customer by a dominated one keeps feasibility
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60 && checked < 300; ++seed) {
    const Instance inst = micro_instance(seed, 6, 12);
    const int n = inst.size();
    for (const auto& a : build_dag(inst).arcs) {
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (!(mask >> (a.from - 1) & 1u) || (mask >> (a.to - 1) & 1u)) continue;
        std::vector<CustomerId> s, t;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1u) s.push_back(i + 1);
        if (!is_feasible_set(inst, s)) continue;
        for (CustomerId c : s) t.push_back(c == a.from ? a.to : c);
        ASSERT_TRUE(is_feasible_set(inst, t)) << "seed " << seed;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
}
