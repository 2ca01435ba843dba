#include "carshare/priority.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace carshare {

namespace {

using Row = std::vector<std::uint64_t>;

std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + 64) / 64; }

bool test_bit(const Row& r, int i) { return (r[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U; }
void set_bit(Row& r, int i) { r[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
void or_into(Row& dst, const Row& src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] |= src[k];
}

std::vector<CustomerId> topo_order(const PriorityDag& dag, const std::vector<std::vector<CustomerId>>& succ) {
  std::vector<int> indeg = dag.in_degree();
  std::vector<CustomerId> order, stack;
  for (CustomerId v = 1; v <= dag.n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  while (!stack.empty()) {
    const CustomerId u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (CustomerId w : succ[static_cast<std::size_t>(u)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
  }
  if (static_cast<int>(order.size()) != dag.n) throw std::invalid_argument("priority graph has a cycle");
  return order;
}

// reach[u] = nodes reachable from u by a path of length >= 1
std::vector<Row> closure(const PriorityDag& dag, const std::vector<std::vector<CustomerId>>& succ,
                         const std::vector<CustomerId>& order) {
  std::vector<Row> reach(static_cast<std::size_t>(dag.n) + 1, Row(words_for(dag.n), 0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Row& r = reach[static_cast<std::size_t>(*it)];
    for (CustomerId w : succ[static_cast<std::size_t>(*it)]) {
      set_bit(r, w);
      or_into(r, reach[static_cast<std::size_t>(w)]);
    }
  }
  return reach;
}

}  // namespace

std::vector<std::vector<CustomerId>> PriorityDag::successors() const {
  std::vector<std::vector<CustomerId>> s(static_cast<std::size_t>(n) + 1);
  for (const auto& a : arcs) s[static_cast<std::size_t>(a.from)].push_back(a.to);
  return s;
}

std::vector<int> PriorityDag::in_degree() const {
  std::vector<int> d(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& a : arcs) ++d[static_cast<std::size_t>(a.to)];
  return d;
}

std::vector<std::pair<CustomerId, CustomerId>> PriorityDag::reachable_pairs() const {
  const auto succ = successors();
  const auto reach = closure(*this, succ, topo_order(*this, succ));
  std::vector<std::pair<CustomerId, CustomerId>> out;
  for (CustomerId u = 1; u <= n; ++u)
    for (CustomerId v = 1; v <= n; ++v)
      if (test_bit(reach[static_cast<std::size_t>(u)], v)) out.emplace_back(u, v);
  return out;
}

int work_schedule(const Customer& c) { return c.ret.end - c.outbound.start; }

bool dominates(const Customer& outer, const Customer& inner) {
  if (outer.home() != inner.home()) return false;
  return outer.outbound.start <= inner.outbound.start && inner.outbound.end <= outer.outbound.end &&
         outer.ret.start <= inner.ret.start && inner.ret.end <= outer.ret.end;
}

PriorityDag build_dag(const Instance& inst) {
  PriorityDag dag;
  dag.n = inst.size();
  // split by home station; dominance never crosses it
  std::vector<const Customer*> by_home[2];
  for (const auto& c : inst.customers) by_home[static_cast<int>(c.home())].push_back(&c);
  for (const auto& group : by_home) {
    for (const Customer* c : group) {
      for (const Customer* d : group) {
        if (c == d || !dominates(*c, *d)) continue;
        if (dominates(*d, *c) && d->id > c->id) continue;  // identical times: keep arc toward lower id
        dag.arcs.push_back({c->id, d->id});
      }
    }
  }
  std::sort(dag.arcs.begin(), dag.arcs.end());
  return dag;
}

PriorityDag transitive_reduction(const PriorityDag& dag) {
  auto succ = dag.successors();
  const auto order = topo_order(dag, succ);
  std::vector<int> pos(static_cast<std::size_t>(dag.n) + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  const auto reach = closure(dag, succ, order);

  PriorityDag out;
  out.n = dag.n;
  Row seen(words_for(dag.n), 0);
  for (CustomerId u = 1; u <= dag.n; ++u) {
    auto& s = succ[static_cast<std::size_t>(u)];
    // a successor can only be reached through successors earlier in topological order
    std::sort(s.begin(), s.end(), [&](CustomerId a, CustomerId b) {
      return pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)];
    });
    std::fill(seen.begin(), seen.end(), 0);
    for (CustomerId w : s) {
      if (test_bit(seen, w)) continue;
      out.arcs.push_back({u, w});
      or_into(seen, reach[static_cast<std::size_t>(w)]);
    }
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  return out;
}

PriorityDag arborescence_forest(const PriorityDag& dag, const Instance& inst) {
  std::vector<CustomerId> parent(static_cast<std::size_t>(dag.n) + 1, 0);
  for (const auto& a : dag.arcs) {
    CustomerId& p = parent[static_cast<std::size_t>(a.to)];
    if (p == 0) {
      p = a.from;
      continue;
    }
    const int wa = work_schedule(inst.customer(a.from));
    const int wp = work_schedule(inst.customer(p));
    if (wa < wp || (wa == wp && a.from < p)) p = a.from;
  }
  PriorityDag out;
  out.n = dag.n;
  for (CustomerId v = 1; v <= dag.n; ++v)
    if (parent[static_cast<std::size_t>(v)] != 0) out.arcs.push_back({parent[static_cast<std::size_t>(v)], v});
  std::sort(out.arcs.begin(), out.arcs.end());
  return out;
}

PriorityStats PriorityResult::stats() const {
  return {static_cast<int>(dag.arcs.size()), static_cast<int>(reduced.arcs.size()),
          static_cast<int>(forest.arcs.size())};
}

PriorityResult priority_constraints(const Instance& inst) {
  PriorityResult r;
  r.dag = build_dag(inst);
  r.reduced = transitive_reduction(r.dag);
  r.forest = arborescence_forest(r.reduced, inst);
  return r;
}

}  // namespace carshare
