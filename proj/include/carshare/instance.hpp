#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace carshare {

enum class Station : std::uint8_t { A = 0, B = 1 };

constexpr Station other(Station s) { return s == Station::A ? Station::B : Station::A; }
constexpr char station_char(Station s) { return s == Station::A ? 'A' : 'B'; }

using CustomerId = int;

/// A single timed trip between the two stations. Times are integer minutes.
struct Demand {
  Station origin = Station::A;
  int start = 0;
  int end = 0;

  Station destination() const { return other(origin); }
  int duration() const { return end - start; }
  friend bool operator==(const Demand&, const Demand&) = default;
};

/// An ordered pair of opposite-direction demands: the outbound trip and the
/// return trip. A customer counts only when both are served.
struct Customer {
  CustomerId id = 0;
  Demand outbound;
  Demand ret;

  Station home() const { return outbound.origin; }
  friend bool operator==(const Customer&, const Customer&) = default;
};

enum class Group : std::uint8_t { st, ft, fc };

std::string to_string(Group g);
Group parse_group(const std::string& s);

/// Generator manifest carried along so a written instance says where it came from.
struct Provenance {
  std::uint64_t seed = 0;
  Group group = Group::st;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Instance {
  std::vector<Customer> customers;  // ids 1..n in order
  int fleet_a = 0;
  int fleet_b = 0;
  int horizon = 1440;
  std::optional<Provenance> provenance;

  int size() const { return static_cast<int>(customers.size()); }
  int fleet(Station s) const { return s == Station::A ? fleet_a : fleet_b; }
  const Customer& customer(CustomerId id) const { return customers.at(static_cast<std::size_t>(id - 1)); }

  /// Sorted distinct time points observed at a station (T_A / T_B).
  std::vector<int> time_points(Station s) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// A set of customers claimed to be simultaneously satisfiable. Feasibility is
/// checked elsewhere; this only carries the ids.
struct Solution {
  std::vector<CustomerId> satisfied;  // sorted ascending

  int value() const { return static_cast<int>(satisfied.size()); }
  bool contains(CustomerId id) const;
  static Solution from_ids(std::vector<CustomerId> ids);
  friend bool operator==(const Solution&, const Solution&) = default;
};

struct Violation {
  CustomerId customer = 0;  // 0 for instance-level problems
  std::string what;
};

std::vector<Violation> validate(const Instance& inst);

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InstanceError listing the first violation if the instance is malformed.
void require_valid(const Instance& inst);

// Benchmark generators. All draws come from one SplitMix64 stream seeded with
// `seed`; per customer: durations (then working time for fc), t1, t2, and the
// direction coin. Every station starts with 10 cars.
Instance generate_st(int n, std::uint64_t seed);
Instance generate_ft(int n, std::uint64_t seed);
Instance generate_fc(int n, std::uint64_t seed);
Instance generate(Group g, int n, std::uint64_t seed);

// Canonical text format:
//   carshare v1 n=<n> mA=<int> mB=<int> horizon=<int>
//   # seed=<u64> group=<st|ft|fc>        (optional manifest comment)
//   <id> <AB|BA> <o_start> <o_end> <r_start> <r_end>
Instance parse_instance(std::istream& in, const std::string& source = "<stream>");
void write_instance(const Instance& inst, std::ostream& out);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace carshare
