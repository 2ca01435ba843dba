#include <gtest/gtest.h>

#include <algorithm>

#include "carshare/network.hpp"
#include "carshare/oracle.hpp"
#include "fixtures.hpp"
#include "micro.hpp"

using namespace carshare;
using carshare::testing::four_trips;
using carshare::testing::make;

TEST(Network, FourTripsCounts) {
  const Network net = build_network(four_trips());
  EXPECT_EQ(net.vertex_count(), 14);
  EXPECT_EQ(net.arc_count(), 22);
  EXPECT_EQ(net.arc_count(ArcKind::demand), 8);
  EXPECT_EQ(net.arc_count(ArcKind::connecting), 12);
  EXPECT_EQ(net.arc_count(ArcKind::source), 2);
}

TEST(Network, Capacities) {
  const Network net = build_network(four_trips(3, 5));
  for (const Arc& a : net.arcs) {
    switch (a.kind) {
      case ArcKind::demand: EXPECT_EQ(a.capacity, 1); break;
      case ArcKind::connecting: EXPECT_EQ(a.capacity, 8); break;
      case ArcKind::source: {
        const Station s = net.vertices[static_cast<std::size_t>(a.head)].station;
        EXPECT_EQ(a.capacity, s == Station::A ? 3 : 5);
        break;
      }
    }
  }
}

TEST(Network, EmptyInstance) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  const Network net = build_network(inst);
  EXPECT_EQ(net.vertex_count(), 2);
  EXPECT_EQ(net.arc_count(), 0);
}

TEST(Network, SingleCustomer) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  inst.customers = {make(1, Station::A, 10, 20, 30, 40)};
  const Network net = build_network(inst);
  EXPECT_EQ(net.vertex_count(), 6);
  EXPECT_EQ(net.arc_count(), 8);
  EXPECT_EQ(net.arc_count(ArcKind::demand), 2);
  EXPECT_EQ(net.arc_count(ArcKind::source), 2);
  EXPECT_EQ(net.arc_count(ArcKind::connecting), 4);
}

TEST(Network, VertexLookup) {
  const Instance inst = four_trips();
  const Network net = build_network(inst);
  const int a1 = net.vertex_for(Station::A, 2);
  bool found = false;
  for (const Arc& a : net.arcs)
    if (a.kind == ArcKind::source && a.head == a1) found = true;
  EXPECT_TRUE(found);
  EXPECT_THROW(net.vertex_for(Station::A, 3), std::out_of_range);
  // customers 2 and 3 both leave A at minute 2
  int tails = 0;
  for (const Arc& a : net.arcs)
    if (a.kind == ArcKind::demand && a.tail == a1) ++tails;
  EXPECT_EQ(tails, 2);
  EXPECT_EQ(net.vertex_for(Station::A, 2), net.vertex_for(Station::A, 2));
}

TEST(Network, CanonicalVertexOrder) {
  const Network net = build_network(four_trips());
  EXPECT_EQ(net.source, 0);
  EXPECT_EQ(net.sink, net.vertex_count() - 1);
  // minute 8 occurs at both stations: A first
  EXPECT_LT(net.vertex_for(Station::A, 8), net.vertex_for(Station::B, 8));
  int last = -1;
  for (std::size_t v = 1; v + 1 < net.vertices.size(); ++v) {
    EXPECT_GE(net.vertices[v].time, last);
    last = net.vertices[v].time;
  }
}

TEST(Network, TopologicalOrderRespectsTime) {
  const Network net = build_network(carshare::testing::micro_instance(5, 10, 10));
  const auto order = net.topological_order();
  EXPECT_EQ(static_cast<int>(order.size()), net.vertex_count());
  std::vector<int> pos(net.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  for (const Arc& a : net.arcs) EXPECT_LT(pos[static_cast<std::size_t>(a.tail)], pos[static_cast<std::size_t>(a.head)]);
}

TEST(Network, Deterministic) {
  const Instance inst = generate_st(60, 2);
  EXPECT_EQ(build_network(inst).dump(), build_network(inst).dump());
}

TEST(Network, DumpFormat) {
  Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  inst.customers = {make(1, Station::A, 10, 20, 30, 40)};
  const std::string d = build_network(inst).dump();
  EXPECT_NE(d.find("demand"), std::string::npos);
  EXPECT_NE(d.find("source"), std::string::npos);
  EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 8);
}

TEST(Network, FlowAgreesWithOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = carshare::testing::micro_instance(seed, 4, 9);
    const Network net = build_network(inst);
    EXPECT_EQ(brute_force_optimum(net).value, brute_force_optimum(inst).value) << "seed " << seed;
  }
}
