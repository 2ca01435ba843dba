#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carshare/instance.hpp"

namespace carshare {

enum class VertexKind : std::uint8_t { source, sink, station };
enum class ArcKind : std::uint8_t { demand, connecting, source };
enum class Leg : std::uint8_t { outbound, ret };

const char* to_string(ArcKind k);

struct Vertex {
  VertexKind kind = VertexKind::station;
  Station station = Station::A;
  int time = 0;  // earliest time point folded into this vertex
  bool alive = true;
};

struct ArcOwner {
  CustomerId customer = 0;
  Leg leg = Leg::outbound;
  friend bool operator==(const ArcOwner&, const ArcOwner&) = default;
};

struct Arc {
  int tail = 0;
  int head = 0;
  std::int64_t capacity = 0;
  ArcKind kind = ArcKind::connecting;
  std::vector<ArcOwner> owners;  // empty unless kind == demand
  bool alive = true;
};

/// Time-expanded flow network of an instance. Vertex and arc ids are stable:
/// reductions mark entries dead instead of renumbering, so ids recorded in a
/// reduction trace stay meaningful. Use compacted() for a dense copy.
struct Network {
  std::vector<Vertex> vertices;
  std::vector<Arc> arcs;
  int source = 0;
  int sink = 0;
  int fleet_a = 0;
  int fleet_b = 0;
  int customer_count = 0;
  // Station time point -> vertex id, before any reduction. Entries follow
  // contractions through `forward`.
  std::vector<int> time_vertex_a;
  std::vector<int> time_vertex_b;
  std::vector<int> times_a;
  std::vector<int> times_b;
  std::vector<int> forward;  // vertex -> vertex it was fused into, -1 if removed, itself if alive

  std::int64_t unbounded() const { return static_cast<std::int64_t>(fleet_a) + fleet_b; }

  int vertex_count() const;
  int arc_count() const;
  int arc_count(ArcKind k) const;

  /// Vertex currently representing (station, time). Throws std::out_of_range
  /// for a time point that does not occur in the instance or whose vertex was
  /// removed.
  int vertex_for(Station s, int time) const;

  std::vector<std::vector<int>> out_arcs() const;  // alive arcs per vertex
  std::vector<std::vector<int>> in_arcs() const;
  std::vector<int> out_degree() const;
  std::vector<int> in_degree() const;

  /// Alive vertices in a topological order; throws if a cycle exists.
  std::vector<int> topological_order() const;

  /// Dense copy with dead vertices and arcs dropped. `old_to_new` (optional)
  /// receives the vertex renumbering, -1 for dead vertices.
  Network compacted(std::vector<int>* old_to_new = nullptr) const;

  /// One line per alive arc: `kind tail head cap owner`.
  std::string dump() const;
};

Network build_network(const Instance& inst);

/// Whether an integral flow exists that sends exactly one unit through every
/// demand arc owned by a selected customer and nothing through the others.
/// `selected` is indexed by customer id (index 0 unused).
bool admits_flow(const Network& net, std::span<const char> selected);

}  // namespace carshare
