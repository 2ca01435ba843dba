#pragma once

#include <stdexcept>
#include <vector>

#include "carshare/network.hpp"

namespace carshare {

enum class ReductionKind : std::uint8_t { contraction, merge, removal };

/// One applied reduction. Ids refer to the (stable) ids of the network the
/// trace was recorded on.
struct ReductionStep {
  ReductionKind kind = ReductionKind::contraction;
  int arc = -1;           // contraction: the connecting arc; removal: surviving fused arc
  CustomerId customer = 0;  // merge
  int vertex = -1;        // contraction: vertex folded away; removal: removed vertex
  int into = -1;          // contraction: surviving vertex
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  bool empty() const { return steps.empty(); }
};

class ReductionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Single operations. Each validates its precondition and throws ReductionError
// with the reason when it does not hold.

/// Fuses the endpoints of connecting arc (x,y) when x has out-degree 1 or y
/// has in-degree 1. The fused vertex keeps x's id.
Network contract_arc(const Network& net, int arc);

/// Replaces a customer's outbound and return arcs with one arc when the
/// outbound ends where the return starts.
Network merge_demand_arcs(const Network& net, CustomerId customer);

/// Deletes a vertex with in-degree and out-degree 1, fusing its two arcs into
/// one with the smaller capacity and the union of owners.
Network remove_vertex(const Network& net, int vertex);

struct MinimizeResult {
  Network network;  // same ids as the input; dead entries marked
  ReductionTrace trace;
};

/// Applies contractions to exhaustion, then merges, then removals, looping to
/// a fixed point where no operation applies.
MinimizeResult minimize(const Network& net);

/// Re-applies a trace with the single-operation functions.
Network replay(const Network& net, const ReductionTrace& trace);

/// True when no reduction operation applies.
bool is_minimal(const Network& net);

}  // namespace carshare
