#include "carshare/oracle.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace carshare {

namespace {

void guard(int n) {
  if (n > kOracleMaxCustomers)
    throw OracleError("oracle limited to " + std::to_string(kOracleMaxCustomers) + " customers, got " +
                      std::to_string(n));
}

OracleResult enumerate(int n, const std::function<bool(std::span<const CustomerId>)>& feasible) {
  guard(n);
  std::vector<CustomerId> pick;
  for (int k = n; k >= 0; --k) {
    pick.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
      if (feasible(pick)) return {k, Solution::from_ids(pick)};
      // next combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j) - 1] + 1;
    }
  }
  return {0, {}};
}

}  // namespace

bool simulate_feasible(const Instance& inst, std::span<const CustomerId> customers) {
  // (station, time, order, delta): order 0 = drop-off, 1 = pickup
  std::vector<std::tuple<int, int, int, int>> events;
  for (CustomerId id : customers) {
    const Customer& c = inst.customer(id);
    for (const Demand* d : {&c.outbound, &c.ret}) {
      events.emplace_back(static_cast<int>(d->origin), d->start, 1, -1);
      events.emplace_back(static_cast<int>(d->destination()), d->end, 0, +1);
    }
  }
  std::sort(events.begin(), events.end());
  int cars[2] = {inst.fleet_a, inst.fleet_b};
  for (const auto& [s, t, order, delta] : events) {
    cars[s] += delta;
    if (cars[s] < 0) return false;
  }
  return true;
}

OracleResult brute_force_optimum(const Instance& inst) {
  return enumerate(inst.size(), [&](std::span<const CustomerId> s) { return simulate_feasible(inst, s); });
}

OracleResult brute_force_optimum(const Network& net) {
  std::vector<char> sel(static_cast<std::size_t>(net.customer_count) + 1, 0);
  return enumerate(net.customer_count, [&](std::span<const CustomerId> s) {
    std::fill(sel.begin(), sel.end(), 0);
    for (CustomerId c : s) sel[static_cast<std::size_t>(c)] = 1;
    return admits_flow(net, sel);
  });
}

}  // namespace carshare
