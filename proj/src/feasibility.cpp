#include "carshare/feasibility.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "carshare/rng.hpp"

namespace carshare {

namespace {

int index_of(const std::vector<int>& times, int t) {
  return static_cast<int>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

std::vector<CustomerFootprint> footprints_of(const Instance& inst, const std::vector<int>& ta,
                                             const std::vector<int>& tb) {
  std::vector<CustomerFootprint> out(static_cast<std::size_t>(inst.size()) + 1);
  for (const Customer& c : inst.customers) {
    const Station h = c.home();
    const auto& home = h == Station::A ? ta : tb;
    const auto& away = h == Station::A ? tb : ta;
    auto& f = out[static_cast<std::size_t>(c.id)];
    f.home = h;
    f.depart_home = index_of(home, c.outbound.start);
    f.return_home = index_of(home, c.ret.end);
    f.arrive_away = index_of(away, c.outbound.end);
    f.depart_away = index_of(away, c.ret.start);
  }
  return out;
}

std::vector<std::int64_t> initial_cells(std::size_t n, int fleet) {
  std::vector<std::int64_t> v(n, 0);
  if (n > 0) v[0] = fleet;
  return v;
}

[[noreturn]] void membership_error(const char* what, CustomerId c) {
  throw std::logic_error(std::string(what) + ": customer " + std::to_string(c));
}

}  // namespace

DisplacementIndex::DisplacementIndex(const Instance& inst) {
  const auto ta = inst.time_points(Station::A);
  const auto tb = inst.time_points(Station::B);
  footprints_ = std::make_shared<const std::vector<CustomerFootprint>>(footprints_of(inst, ta, tb));
  // with no customers there are no time points and nothing can be violated
  trees_[0].assign(initial_cells(ta.size(), inst.fleet_a));
  trees_[1].assign(initial_cells(tb.size(), inst.fleet_b));
  members_.assign(static_cast<std::size_t>(inst.size()) + 1, 0);
}

Solution DisplacementIndex::solution() const {
  Solution s;
  for (std::size_t c = 1; c < members_.size(); ++c)
    if (members_[c]) s.satisfied.push_back(static_cast<CustomerId>(c));
  return s;
}

bool DisplacementIndex::feasible() const {
  for (const auto& t : trees_)
    if (t.size() > 0 && t.min_prefix() < 0) return false;
  return true;
}

// Every prefix inside `skip` must be >= need_inside and every prefix outside
// it >= need_outside.
bool DisplacementIndex::range_ok(Station s, IndexRange skip, std::int64_t need_inside,
                                 std::int64_t need_outside) const {
  const auto& t = tree(s);
  if (t.size() == 0) return true;
  const int last = static_cast<int>(t.size()) - 1;
  if (skip.empty()) return t.min_prefix() >= need_outside;
  if (t.min_prefix(static_cast<std::size_t>(skip.lo), static_cast<std::size_t>(skip.hi)) < need_inside) return false;
  if (skip.lo > 0 && t.min_prefix(0, static_cast<std::size_t>(skip.lo - 1)) < need_outside) return false;
  if (skip.hi < last && t.min_prefix(static_cast<std::size_t>(skip.hi + 1), static_cast<std::size_t>(last)) < need_outside)
    return false;
  return true;
}

bool DisplacementIndex::can_insert(CustomerId c) const {
  if (contains(c)) membership_error("already satisfied", c);
  const auto& f = footprint(c);
  const IndexRange busy = f.busy();
  if (feasible()) {
    // the away station only gains cars, so only the busy window matters
    return tree(busy.station).min_prefix(static_cast<std::size_t>(busy.lo), static_cast<std::size_t>(busy.hi)) >= 1;
  }
  const IndexRange parked = f.parked();
  return range_ok(busy.station, busy, 1, 0) && range_ok(parked.station, parked, -1, 0);
}

bool DisplacementIndex::can_remove(CustomerId c) const {
  if (!contains(c)) membership_error("not satisfied", c);
  const auto& f = footprint(c);
  const IndexRange parked = f.parked();
  if (feasible()) {
    if (parked.empty()) return true;
    return tree(parked.station).min_prefix(static_cast<std::size_t>(parked.lo), static_cast<std::size_t>(parked.hi)) >= 1;
  }
  const IndexRange busy = f.busy();
  return range_ok(busy.station, busy, -1, 0) && range_ok(parked.station, parked, 1, 0);
}

void DisplacementIndex::apply(CustomerId c, int sign) {
  const auto& f = footprint(c);
  auto& home = trees_[static_cast<std::size_t>(f.home)];
  auto& away = trees_[static_cast<std::size_t>(other(f.home))];
  home.add(static_cast<std::size_t>(f.depart_home), -sign);
  home.add(static_cast<std::size_t>(f.return_home), sign);
  away.add(static_cast<std::size_t>(f.arrive_away), sign);
  away.add(static_cast<std::size_t>(f.depart_away), -sign);
}

void DisplacementIndex::insert(CustomerId c, bool allow_infeasible) {
  if (!allow_infeasible && !can_insert(c)) membership_error("insertion would be infeasible", c);
  if (contains(c)) membership_error("already satisfied", c);
  apply(c, 1);
  members_[static_cast<std::size_t>(c)] = 1;
  ++value_;
}

void DisplacementIndex::remove(CustomerId c, bool allow_infeasible) {
  if (!allow_infeasible && !can_remove(c)) membership_error("removal would be infeasible", c);
  if (!contains(c)) membership_error("not satisfied", c);
  apply(c, -1);
  members_[static_cast<std::size_t>(c)] = 0;
  --value_;
}

std::vector<std::int64_t> DisplacementIndex::cells(Station s) const {
  const auto& t = tree(s);
  std::vector<std::int64_t> out(t.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = t.value(i);
  return out;
}

StationDeficit DisplacementIndex::deficit(Station s) const {
  const auto& t = tree(s);
  StationDeficit d;
  if (t.size() == 0) return d;
  d.min = t.min_prefix();
  if (d.min >= 0) return d;
  d.first = static_cast<int>(t.first_below(0));
  d.last = static_cast<int>(t.last_below(0));
  return d;
}

std::uint64_t DisplacementIndex::state_hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto feed = [&h](std::uint64_t x) { h = mix64(h ^ x) + 0x632be59bd9b4e019ULL; };
  for (const auto& t : trees_) {
    feed(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) feed(static_cast<std::uint64_t>(t.value(i)));
  }
  for (char m : members_) feed(static_cast<std::uint64_t>(m));
  feed(static_cast<std::uint64_t>(value_));
  return h;
}

bool is_feasible_set(const Instance& inst, std::span<const CustomerId> customers) {
  const auto ta = inst.time_points(Station::A);
  const auto tb = inst.time_points(Station::B);
  std::vector<std::int64_t> a = initial_cells(ta.size(), inst.fleet_a);
  std::vector<std::int64_t> b = initial_cells(tb.size(), inst.fleet_b);
  auto cell = [&](Station s, int t) -> std::int64_t& {
    return s == Station::A ? a[static_cast<std::size_t>(index_of(ta, t))] : b[static_cast<std::size_t>(index_of(tb, t))];
  };
  for (CustomerId id : customers) {
    const Customer& c = inst.customer(id);
    for (const Demand* d : {&c.outbound, &c.ret}) {
      --cell(d->origin, d->start);
      ++cell(d->destination(), d->end);
    }
  }
  for (const auto* v : {&a, &b}) {
    std::int64_t run = 0;
    for (std::int64_t x : *v) {
      run += x;
      if (run < 0) return false;
    }
  }
  return true;
}

bool is_feasible_set(const Instance& inst, const Solution& s) { return is_feasible_set(inst, s.satisfied); }

}  // namespace carshare
