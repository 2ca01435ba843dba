#pragma once

#include <cstdint>
#include <vector>

#include "carshare/deadline.hpp"
#include "carshare/feasibility.hpp"
#include "carshare/model.hpp"

namespace carshare {

enum class SolveStatus : std::uint8_t { optimal, time_limit };
const char* to_string(SolveStatus s);

struct BnbOptions {
  double time_limit = 600.0;
  bool primal_heuristics = true;  // rounding, diving and local search
  long node_limit = -1;
  std::uint64_t seed = 0;
};

struct SolveReport {
  Solution incumbent;
  double ub = 0.0;  // floored bound on the optimum
  int lb = 0;       // incumbent value
  double gap_pct = 0.0;
  double root_bound = 0.0;  // unfloored root relaxation value
  long nodes = 0;
  long lp_iterations = 0;
  double elapsed = 0.0;
  SolveStatus status = SolveStatus::optimal;

  int value() const { return lb; }
};

/// 100 * (ub - lb) / ub; 0 when ub is 0.
double relative_gap(double ub, double lb);

/// Branch and bound over the LP relaxation of `model`, whose customer ids
/// must match `inst`. Branches on the customer column closest to 1/2 (ties to
/// the longer work schedule, then the lower id), dives depth-first until the
/// first incumbent, then takes the best bound.
SolveReport solve_exact(const Model& model, const Instance& inst, const BnbOptions& opt = {});

/// Adds customers to `index` by decreasing value (ties to the lower id)
/// whenever the result stays feasible. Customers valued at 1 are first tried
/// as one block, since a feasible set need not be reachable one insertion at
/// a time. `value_by_customer` is indexed by customer id.
Solution round_heuristic(const std::vector<double>& value_by_customer, DisplacementIndex& index);

}  // namespace carshare
