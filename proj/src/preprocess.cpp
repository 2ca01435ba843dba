#include "carshare/preprocess.hpp"

#include <algorithm>
#include <string>

namespace carshare {

namespace {

bool is_terminal(const Network& net, int v) { return v == net.source || v == net.sink; }

// In-place reducer with maintained adjacency and degree counts.
class Reducer {
 public:
  explicit Reducer(Network& net) : net_(net) {
    const auto nv = net.vertices.size();
    out_.resize(nv);
    in_.resize(nv);
    outdeg_.assign(nv, 0);
    indeg_.assign(nv, 0);
    for (std::size_t e = 0; e < net.arcs.size(); ++e) {
      const Arc& a = net.arcs[e];
      if (!a.alive) continue;
      out_[static_cast<std::size_t>(a.tail)].push_back(static_cast<int>(e));
      in_[static_cast<std::size_t>(a.head)].push_back(static_cast<int>(e));
      ++outdeg_[static_cast<std::size_t>(a.tail)];
      ++indeg_[static_cast<std::size_t>(a.head)];
    }
  }

  const char* why_not_contract(int e) const {
    if (e < 0 || e >= static_cast<int>(net_.arcs.size()) || !arc(e).alive) return "no such arc";
    const Arc& a = arc(e);
    if (a.kind != ArcKind::connecting) return "not a connecting arc";
    if (is_terminal(net_, a.tail) || is_terminal(net_, a.head)) return "arc touches the source or sink";
    if (outdeg(a.tail) != 1 && indeg(a.head) != 1) return "tail out-degree and head in-degree both exceed 1";
    return nullptr;
  }

  void contract(int e, ReductionTrace* trace) {
    Arc& a = arc(e);
    const int x = a.tail;
    const int y = a.head;
    kill_arc(e);
    for (int f : out_[static_cast<std::size_t>(y)]) {
      if (!arc(f).alive) continue;
      arc(f).tail = x;
      out_[static_cast<std::size_t>(x)].push_back(f);
      ++outdeg_[static_cast<std::size_t>(x)];
    }
    for (int f : in_[static_cast<std::size_t>(y)]) {
      if (!arc(f).alive) continue;
      arc(f).head = x;
      in_[static_cast<std::size_t>(x)].push_back(f);
      ++indeg_[static_cast<std::size_t>(x)];
    }
    out_[static_cast<std::size_t>(y)].clear();
    in_[static_cast<std::size_t>(y)].clear();
    outdeg_[static_cast<std::size_t>(y)] = 0;
    indeg_[static_cast<std::size_t>(y)] = 0;
    auto& vx = net_.vertices[static_cast<std::size_t>(x)];
    vx.time = std::min(vx.time, net_.vertices[static_cast<std::size_t>(y)].time);
    net_.vertices[static_cast<std::size_t>(y)].alive = false;
    net_.forward[static_cast<std::size_t>(y)] = x;
    if (trace) trace->steps.push_back({ReductionKind::contraction, e, 0, y, x});
  }

  // arcs carrying the customer's outbound and return legs
  std::pair<int, int> legs_of(CustomerId c) const {
    int o = -1, r = -1;
    for (std::size_t e = 0; e < net_.arcs.size(); ++e) {
      const Arc& a = net_.arcs[e];
      if (!a.alive || a.kind != ArcKind::demand) continue;
      for (const auto& own : a.owners) {
        if (own.customer != c) continue;
        (own.leg == Leg::outbound ? o : r) = static_cast<int>(e);
      }
    }
    return {o, r};
  }

  const char* why_not_merge(int o, int r) const {
    if (o < 0 || r < 0) return "customer has no separate demand arcs";
    if (o == r) return "legs already share one arc";
    if (arc(o).head != arc(r).tail) return "outbound end differs from return start";
    return nullptr;
  }

  void merge(CustomerId c, int o, int r, ReductionTrace* trace) {
    Arc merged;
    merged.tail = arc(o).tail;
    merged.head = arc(r).head;
    merged.capacity = std::min(arc(o).capacity, arc(r).capacity);
    merged.kind = ArcKind::demand;
    merged.owners = arc(o).owners;
    merged.owners.insert(merged.owners.end(), arc(r).owners.begin(), arc(r).owners.end());
    kill_arc(o);
    kill_arc(r);
    const int id = static_cast<int>(net_.arcs.size());
    net_.arcs.push_back(std::move(merged));
    const Arc& m = net_.arcs.back();
    out_[static_cast<std::size_t>(m.tail)].push_back(id);
    in_[static_cast<std::size_t>(m.head)].push_back(id);
    ++outdeg_[static_cast<std::size_t>(m.tail)];
    ++indeg_[static_cast<std::size_t>(m.head)];
    if (trace) trace->steps.push_back({ReductionKind::merge, id, c, -1, -1});
  }

  const char* why_not_remove(int v) const {
    if (v < 0 || v >= static_cast<int>(net_.vertices.size()) || !net_.vertices[static_cast<std::size_t>(v)].alive)
      return "no such vertex";
    if (is_terminal(net_, v)) return "source and sink are never removed";
    if (indeg(v) != 1 || outdeg(v) != 1) return "vertex is not expendable (in/out-degree must both be 1)";
    return nullptr;
  }

  void remove(int v, ReductionTrace* trace) {
    int e_in = first_alive(in_[static_cast<std::size_t>(v)]);
    int e_out = first_alive(out_[static_cast<std::size_t>(v)]);
    Arc& a = arc(e_in);
    const Arc& b = arc(e_out);
    const int w = b.head;
    a.capacity = std::min(a.capacity, b.capacity);
    if (a.kind == ArcKind::demand || b.kind == ArcKind::demand)
      a.kind = ArcKind::demand;
    else if (a.kind == ArcKind::source || b.kind == ArcKind::source)
      a.kind = ArcKind::source;
    a.owners.insert(a.owners.end(), b.owners.begin(), b.owners.end());
    kill_arc(e_out);
    // move e_in's head from v to w
    --indeg_[static_cast<std::size_t>(v)];
    a.head = w;
    in_[static_cast<std::size_t>(w)].push_back(e_in);
    ++indeg_[static_cast<std::size_t>(w)];
    in_[static_cast<std::size_t>(v)].clear();
    out_[static_cast<std::size_t>(v)].clear();
    net_.vertices[static_cast<std::size_t>(v)].alive = false;
    net_.forward[static_cast<std::size_t>(v)] = -1;
    if (trace) trace->steps.push_back({ReductionKind::removal, e_in, 0, v, -1});
  }

  int outdeg(int v) const { return outdeg_[static_cast<std::size_t>(v)]; }
  int indeg(int v) const { return indeg_[static_cast<std::size_t>(v)]; }

  // Each sweep applies every currently applicable operation of one kind in id
  // order; returns how many were applied.
  int sweep_contractions(ReductionTrace* trace) {
    int applied = 0;
    for (std::size_t e = 0; e < net_.arcs.size(); ++e)
      if (!why_not_contract(static_cast<int>(e))) {
        contract(static_cast<int>(e), trace);
        ++applied;
      }
    return applied;
  }

  int sweep_merges(ReductionTrace* trace) {
    // locate legs once; merged arcs do not create new merge opportunities for
    // other customers
    std::vector<int> o(static_cast<std::size_t>(net_.customer_count + 1), -1);
    std::vector<int> r(o.size(), -1);
    for (std::size_t e = 0; e < net_.arcs.size(); ++e) {
      const Arc& a = net_.arcs[e];
      if (!a.alive || a.kind != ArcKind::demand) continue;
      for (const auto& own : a.owners)
        (own.leg == Leg::outbound ? o : r)[static_cast<std::size_t>(own.customer)] = static_cast<int>(e);
    }
    int applied = 0;
    for (CustomerId c = 1; c <= net_.customer_count; ++c) {
      int oc = o[static_cast<std::size_t>(c)];
      int rc = r[static_cast<std::size_t>(c)];
      if (oc < 0 || rc < 0 || !arc(oc).alive || !arc(rc).alive) continue;
      if (why_not_merge(oc, rc)) continue;
      merge(c, oc, rc, trace);
      // arcs of other customers sharing these arcs now live on the merged arc
      const int m = static_cast<int>(net_.arcs.size()) - 1;
      for (const auto& own : net_.arcs.back().owners)
        (own.leg == Leg::outbound ? o : r)[static_cast<std::size_t>(own.customer)] = m;
      ++applied;
    }
    return applied;
  }

  int sweep_removals(ReductionTrace* trace) {
    int applied = 0;
    for (std::size_t v = 0; v < net_.vertices.size(); ++v)
      if (!why_not_remove(static_cast<int>(v))) {
        remove(static_cast<int>(v), trace);
        ++applied;
      }
    return applied;
  }

 private:
  Arc& arc(int e) { return net_.arcs[static_cast<std::size_t>(e)]; }
  const Arc& arc(int e) const { return net_.arcs[static_cast<std::size_t>(e)]; }

  void kill_arc(int e) {
    Arc& a = arc(e);
    a.alive = false;
    --outdeg_[static_cast<std::size_t>(a.tail)];
    --indeg_[static_cast<std::size_t>(a.head)];
  }

  int first_alive(const std::vector<int>& ids) const {
    for (int e : ids)
      if (arc(e).alive) return e;
    return -1;
  }

  Network& net_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<int> outdeg_;
  std::vector<int> indeg_;
};

}  // namespace

Network contract_arc(const Network& net, int arc) {
  Network out = net;
  Reducer r(out);
  if (const char* why = r.why_not_contract(arc)) throw ReductionError(std::string("cannot contract: ") + why);
  r.contract(arc, nullptr);
  return out;
}

Network merge_demand_arcs(const Network& net, CustomerId customer) {
  Network out = net;
  Reducer r(out);
  auto [o, ret] = r.legs_of(customer);
  if (const char* why = r.why_not_merge(o, ret)) throw ReductionError(std::string("cannot merge: ") + why);
  r.merge(customer, o, ret, nullptr);
  return out;
}

Network remove_vertex(const Network& net, int vertex) {
  Network out = net;
  Reducer r(out);
  if (const char* why = r.why_not_remove(vertex)) throw ReductionError(std::string("cannot remove: ") + why);
  r.remove(vertex, nullptr);
  return out;
}

MinimizeResult minimize(const Network& net) {
  MinimizeResult res{net, {}};
  Reducer r(res.network);
  for (;;) {
    int changed = 0;
    while (int k = r.sweep_contractions(&res.trace)) changed += k;
    changed += r.sweep_merges(&res.trace);
    changed += r.sweep_removals(&res.trace);
    if (changed == 0) break;
  }
  return res;
}

Network replay(const Network& net, const ReductionTrace& trace) {
  Network cur = net;
  for (const auto& s : trace.steps) {
    switch (s.kind) {
      case ReductionKind::contraction: cur = contract_arc(cur, s.arc); break;
      case ReductionKind::merge: cur = merge_demand_arcs(cur, s.customer); break;
      case ReductionKind::removal: cur = remove_vertex(cur, s.vertex); break;
    }
  }
  return cur;
}

bool is_minimal(const Network& net) {
  Network copy = net;
  Reducer r(copy);
  for (std::size_t e = 0; e < net.arcs.size(); ++e)
    if (!r.why_not_contract(static_cast<int>(e))) return false;
  for (std::size_t v = 0; v < net.vertices.size(); ++v)
    if (!r.why_not_remove(static_cast<int>(v))) return false;
  for (CustomerId c = 1; c <= net.customer_count; ++c) {
    auto [o, ret] = r.legs_of(c);
    if (!r.why_not_merge(o, ret)) return false;
  }
  return true;
}

}  // namespace carshare
