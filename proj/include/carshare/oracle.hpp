#pragma once

#include <span>
#include <stdexcept>

#include "carshare/instance.hpp"
#include "carshare/network.hpp"

namespace carshare {

constexpr int kOracleMaxCustomers = 24;

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleResult {
  int value = 0;
  Solution witness;
};

/// Replays every pickup and drop-off in time order, counting cars per
/// station; drop-offs at an instant precede pickups at the same instant.
bool simulate_feasible(const Instance& inst, std::span<const CustomerId> customers);

/// Exact optimum by enumerating subsets by decreasing size, each size in
/// lexicographic order; the first feasible subset is the witness. Throws
/// OracleError when n exceeds kOracleMaxCustomers.
OracleResult brute_force_optimum(const Instance& inst);

/// Same enumeration, but a subset counts as feasible when the network admits
/// a flow through exactly its demand arcs. Works on reduced networks.
OracleResult brute_force_optimum(const Network& net);

}  // namespace carshare
