#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "carshare/instance.hpp"
#include "carshare/prefix_tree.hpp"

namespace carshare {

/// Closed index interval [lo, hi] into a station's time-point array; empty
/// when lo > hi.
struct IndexRange {
  Station station = Station::A;
  int lo = 0;
  int hi = -1;
  bool empty() const { return lo > hi; }
  bool covers(Station s, int a, int b) const { return station == s && lo <= a && b <= hi; }
};

/// Where a customer touches the two displacement vectors.
struct CustomerFootprint {
  Station home = Station::A;  // outbound origin
  int depart_home = 0;        // index of outbound start at home
  int return_home = 0;        // index of return end at home
  int arrive_away = 0;        // index of outbound end at the other station
  int depart_away = 0;        // index of return start at the other station

  /// Points with one car fewer while the customer is satisfied.
  IndexRange busy() const { return {home, depart_home, return_home - 1}; }
  /// Points with one car more while the customer is satisfied.
  IndexRange parked() const { return {other(home), arrive_away, depart_away - 1}; }
};

/// Where the prefix sums of one station go negative.
struct StationDeficit {
  std::int64_t min = 0;
  int first = -1;  // -1 when none
  int last = -1;
  bool any() const { return first >= 0; }
};

/// Per-station incremental displacement vectors, each backed by a prefix
/// segment tree. Cell 0 starts at the fleet size; satisfying a customer
/// subtracts one at each departure and adds one at each arrival, so the set is
/// feasible exactly when every prefix sum of both stations is non-negative.
///
/// The index may hold an infeasible set (callers building exchange moves do
/// this on purpose); `feasible()` reports the state.
class DisplacementIndex {
 public:
  DisplacementIndex() = default;
  explicit DisplacementIndex(const Instance& inst);

  int customer_count() const { return static_cast<int>(members_.size()) - 1; }
  int value() const { return value_; }
  bool contains(CustomerId c) const { return members_[static_cast<std::size_t>(c)] != 0; }
  Solution solution() const;
  std::span<const char> membership() const { return members_; }

  bool feasible() const;

  /// Whether adding `c` leaves every prefix sum non-negative. Does not
  /// modify the index. Throws std::logic_error if `c` is already present.
  bool can_insert(CustomerId c) const;
  /// Whether dropping `c` leaves every prefix sum non-negative. Throws
  /// std::logic_error if `c` is absent.
  bool can_remove(CustomerId c) const;

  /// Throws std::logic_error on membership violations, and when the result
  /// would be infeasible unless `allow_infeasible` is set.
  void insert(CustomerId c, bool allow_infeasible = false);
  void remove(CustomerId c, bool allow_infeasible = false);

  /// Cell values of a station's displacement vector.
  std::vector<std::int64_t> cells(Station s) const;
  const PrefixMinTree<>& tree(Station s) const { return trees_[static_cast<std::size_t>(s)]; }
  const CustomerFootprint& footprint(CustomerId c) const { return (*footprints_)[static_cast<std::size_t>(c)]; }

  StationDeficit deficit(Station s) const;

  /// Hash of both vectors and the membership; used to assert purity of queries.
  std::uint64_t state_hash() const;

 private:
  void apply(CustomerId c, int sign);
  bool range_ok(Station s, IndexRange skip, std::int64_t need_inside, std::int64_t need_outside) const;

  std::shared_ptr<const std::vector<CustomerFootprint>> footprints_;
  std::array<PrefixMinTree<>, 2> trees_;
  std::vector<char> members_;  // indexed by customer id, slot 0 unused
  int value_ = 0;
};

/// From-scratch check: do the prefix sums stay non-negative when all of
/// `customers` are satisfied?
bool is_feasible_set(const Instance& inst, std::span<const CustomerId> customers);
bool is_feasible_set(const Instance& inst, const Solution& s);

}  // namespace carshare
