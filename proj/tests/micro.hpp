#pragma once

// Small instances for exhaustive cross-checks: a benchmark generator's output
// squeezed onto a 200-minute day, which creates many ties between times.

#include <cstdint>

#include "carshare/instance.hpp"
#include "carshare/rng.hpp"

namespace carshare::testing {

inline constexpr int kMicroHorizon = 200;

inline Instance micro_instance(std::uint64_t seed, int min_n = 4, int max_n = 12) {
  SplitMix64 rng(seed ^ 0x5eedf00dULL);
  const int n = static_cast<int>(rng.uniform(min_n, max_n));
  const auto group = static_cast<Group>(seed % 3);
  Instance inst = generate(group, n, seed);
  auto squeeze = [](int t) { return t * kMicroHorizon / 1440; };
  for (Customer& c : inst.customers)
    for (Demand* d : {&c.outbound, &c.ret}) {
      d->start = squeeze(d->start);
      d->end = squeeze(d->end);
    }
  inst.horizon = kMicroHorizon;
  inst.provenance.reset();
  inst.fleet_a = static_cast<int>(rng.uniform(1, 3));
  inst.fleet_b = static_cast<int>(rng.uniform(1, 3));
  return inst;
}

}  // namespace carshare::testing
