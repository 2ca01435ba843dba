#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "carshare/instance.hpp"

namespace carshare::testing {

inline Customer make(CustomerId id, Station home, int o_start, int o_end, int r_start, int r_end) {
  return {id, {home, o_start, o_end}, {other(home), r_start, r_end}};
}

// Four customers, six time points per station. A: 2 8 11 17 23 29,
// B: 5 8 14 17 20 26. Customer 1 lives at B, the others at A.
inline Instance four_trips(int fleet_a = 2, int fleet_b = 2) {
  Instance inst;
  inst.fleet_a = fleet_a;
  inst.fleet_b = fleet_b;
  inst.customers = {
      make(1, Station::B, 8, 11, 17, 26),
      make(2, Station::A, 2, 5, 26, 29),
      make(3, Station::A, 2, 5, 17, 23),
      make(4, Station::A, 8, 14, 20, 23),
  };
  return inst;
}

// One car per station; all four customers fit together but no three do.
// A: 4 21 38 56, B: 6 23 40 58.
inline Instance interlocked() {
  Instance inst;
  inst.fleet_a = 1;
  inst.fleet_b = 1;
  inst.customers = {
      make(1, Station::B, 6, 38, 56, 58),
      make(2, Station::A, 21, 23, 40, 56),
      make(3, Station::A, 4, 6, 23, 56),
      make(4, Station::B, 6, 21, 38, 40),
  };
  return inst;
}

/// Plain arrays replayed from scratch: the reference the segment trees are
/// checked against.
class NaiveDisplacement {
 public:
  explicit NaiveDisplacement(const Instance& inst)
      : inst_(inst), ta_(inst.time_points(Station::A)), tb_(inst.time_points(Station::B)),
        in_(static_cast<std::size_t>(inst.size()) + 1, 0) {}

  bool contains(CustomerId c) const { return in_[static_cast<std::size_t>(c)] != 0; }
  void toggle(CustomerId c) { in_[static_cast<std::size_t>(c)] ^= 1; }

  std::vector<std::int64_t> cells(Station s) const {
    const auto& times = s == Station::A ? ta_ : tb_;
    std::vector<std::int64_t> v(times.size(), 0);
    if (!v.empty()) v[0] = inst_.fleet(s);
    auto at = [&](int t) {
      return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
    };
    for (const Customer& c : inst_.customers) {
      if (!contains(c.id)) continue;
      for (const Demand* d : {&c.outbound, &c.ret}) {
        if (d->origin == s) --v[at(d->start)];
        if (d->destination() == s) ++v[at(d->end)];
      }
    }
    return v;
  }

  bool feasible() const {
    for (Station s : {Station::A, Station::B}) {
      std::int64_t run = 0;
      for (auto x : cells(s))
        if ((run += x) < 0) return false;
    }
    return true;
  }

  bool feasible_with_toggled(CustomerId c) {
    toggle(c);
    const bool ok = feasible();
    toggle(c);
    return ok;
  }

 private:
  const Instance& inst_;
  std::vector<int> ta_, tb_;
  std::vector<char> in_;
};

}  // namespace carshare::testing
