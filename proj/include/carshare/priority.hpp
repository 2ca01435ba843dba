#pragma once

#include <utility>
#include <vector>

#include "carshare/instance.hpp"

namespace carshare {

/// Arc `from -> to` says `from` may be satisfied only if `to` is.
struct PriorityArc {
  CustomerId from = 0;
  CustomerId to = 0;
  friend auto operator<=>(const PriorityArc&, const PriorityArc&) = default;
};

/// Directed acyclic graph over customer ids 1..n. Arcs are kept sorted.
struct PriorityDag {
  int n = 0;
  std::vector<PriorityArc> arcs;

  std::vector<std::vector<CustomerId>> successors() const;
  std::vector<int> in_degree() const;
  /// Pairs (u, v), u != v, with a directed path u ~> v.
  std::vector<std::pair<CustomerId, CustomerId>> reachable_pairs() const;
  friend bool operator==(const PriorityDag&, const PriorityDag&) = default;
};

/// Return end minus outbound start.
int work_schedule(const Customer& c);

/// Whether `inner` nests inside `outer`: same home station, departs no
/// earlier, reaches the far station no later, leaves it no earlier and comes
/// home no later. Then any feasible set holding `outer` stays feasible with
/// `inner` in its place.
bool dominates(const Customer& outer, const Customer& inner);

/// One arc per dominating pair; for mutually dominating customers only the arc
/// toward the lower id is kept.
PriorityDag build_dag(const Instance& inst);

/// Removes every arc implied by a longer path. Throws std::invalid_argument on
/// a cyclic input.
PriorityDag transitive_reduction(const PriorityDag& dag);

/// Keeps, per node, only the incoming arc whose tail has the smallest work
/// schedule (ties to the lower id).
PriorityDag arborescence_forest(const PriorityDag& dag, const Instance& inst);

struct PriorityStats {
  int dominance_arcs = 0;
  int reduced_arcs = 0;
  int forest_arcs = 0;
};

struct PriorityResult {
  PriorityDag dag;
  PriorityDag reduced;
  PriorityDag forest;
  PriorityStats stats() const;
};

/// build_dag, then transitive_reduction, then arborescence_forest.
PriorityResult priority_constraints(const Instance& inst);

}  // namespace carshare
