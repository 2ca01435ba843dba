#include "carshare/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace carshare {

const char* to_string(ArcKind k) {
  switch (k) {
    case ArcKind::demand: return "demand";
    case ArcKind::connecting: return "connecting";
    case ArcKind::source: return "source";
  }
  return "?";
}

int Network::vertex_count() const {
  return static_cast<int>(std::count_if(vertices.begin(), vertices.end(), [](const Vertex& v) { return v.alive; }));
}

int Network::arc_count() const {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(), [](const Arc& a) { return a.alive; }));
}

int Network::arc_count(ArcKind k) const {
  return static_cast<int>(
      std::count_if(arcs.begin(), arcs.end(), [k](const Arc& a) { return a.alive && a.kind == k; }));
}

int Network::vertex_for(Station s, int time) const {
  const auto& times = s == Station::A ? times_a : times_b;
  const auto& ids = s == Station::A ? time_vertex_a : time_vertex_b;
  auto it = std::lower_bound(times.begin(), times.end(), time);
  if (it == times.end() || *it != time)
    throw std::out_of_range(std::string("no time point ") + std::to_string(time) + " at station " + station_char(s));
  int v = ids[static_cast<std::size_t>(it - times.begin())];
  while (v >= 0 && forward[static_cast<std::size_t>(v)] != v) v = forward[static_cast<std::size_t>(v)];
  if (v < 0) throw std::out_of_range("time point " + std::to_string(time) + " was reduced away");
  return v;
}

std::vector<std::vector<int>> Network::out_arcs() const {
  std::vector<std::vector<int>> out(vertices.size());
  for (std::size_t e = 0; e < arcs.size(); ++e)
    if (arcs[e].alive) out[static_cast<std::size_t>(arcs[e].tail)].push_back(static_cast<int>(e));
  return out;
}

std::vector<std::vector<int>> Network::in_arcs() const {
  std::vector<std::vector<int>> in(vertices.size());
  for (std::size_t e = 0; e < arcs.size(); ++e)
    if (arcs[e].alive) in[static_cast<std::size_t>(arcs[e].head)].push_back(static_cast<int>(e));
  return in;
}

std::vector<int> Network::out_degree() const {
  std::vector<int> d(vertices.size(), 0);
  for (const auto& a : arcs)
    if (a.alive) ++d[static_cast<std::size_t>(a.tail)];
  return d;
}

std::vector<int> Network::in_degree() const {
  std::vector<int> d(vertices.size(), 0);
  for (const auto& a : arcs)
    if (a.alive) ++d[static_cast<std::size_t>(a.head)];
  return d;
}

std::vector<int> Network::topological_order() const {
  auto indeg = in_degree();
  auto out = out_arcs();
  std::vector<int> order;
  std::queue<int> ready;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (vertices[v].alive && indeg[v] == 0) ready.push(static_cast<int>(v));
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    order.push_back(v);
    for (int e : out[static_cast<std::size_t>(v)]) {
      int h = arcs[static_cast<std::size_t>(e)].head;
      if (--indeg[static_cast<std::size_t>(h)] == 0) ready.push(h);
    }
  }
  if (static_cast<int>(order.size()) != vertex_count()) throw std::logic_error("network has a cycle");
  return order;
}

Network Network::compacted(std::vector<int>* old_to_new) const {
  std::vector<int> map(vertices.size(), -1);
  Network out;
  out.fleet_a = fleet_a;
  out.fleet_b = fleet_b;
  out.customer_count = customer_count;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (!vertices[v].alive) continue;
    map[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(vertices[v]);
  }
  out.source = map[static_cast<std::size_t>(source)];
  out.sink = map[static_cast<std::size_t>(sink)];
  for (const auto& a : arcs) {
    if (!a.alive) continue;
    Arc b = a;
    b.tail = map[static_cast<std::size_t>(a.tail)];
    b.head = map[static_cast<std::size_t>(a.head)];
    out.arcs.push_back(std::move(b));
  }
  auto remap = [&](const std::vector<int>& ids) {
    std::vector<int> r(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int v = ids[i];
      while (v >= 0 && forward[static_cast<std::size_t>(v)] != v) v = forward[static_cast<std::size_t>(v)];
      r[i] = v < 0 ? -1 : map[static_cast<std::size_t>(v)];
    }
    return r;
  };
  out.times_a = times_a;
  out.times_b = times_b;
  out.time_vertex_a = remap(time_vertex_a);
  out.time_vertex_b = remap(time_vertex_b);
  out.forward.resize(out.vertices.size());
  for (std::size_t v = 0; v < out.forward.size(); ++v) out.forward[v] = static_cast<int>(v);
  // removed time points keep a dangling entry; point them at a sentinel
  // vertex id that forwards to "removed"
  for (auto* ids : {&out.time_vertex_a, &out.time_vertex_b}) {
    for (int& v : *ids) {
      if (v < 0) {
        v = static_cast<int>(out.forward.size());
        out.forward.push_back(-1);
      }
    }
  }
  if (old_to_new) *old_to_new = std::move(map);
  return out;
}

std::string Network::dump() const {
  std::ostringstream os;
  for (const auto& a : arcs) {
    if (!a.alive) continue;
    os << to_string(a.kind) << ' ' << a.tail << ' ' << a.head << ' ' << a.capacity << ' ';
    if (a.owners.empty()) {
      os << '-';
    } else {
      for (std::size_t i = 0; i < a.owners.size(); ++i) {
        if (i) os << ',';
        os << (a.owners[i].leg == Leg::outbound ? 'o' : 'r') << a.owners[i].customer;
      }
    }
    os << '\n';
  }
  return os.str();
}

Network build_network(const Instance& inst) {
  require_valid(inst);
  Network net;
  net.fleet_a = inst.fleet_a;
  net.fleet_b = inst.fleet_b;
  net.customer_count = inst.size();
  net.times_a = inst.time_points(Station::A);
  net.times_b = inst.time_points(Station::B);
  net.time_vertex_a.assign(net.times_a.size(), -1);
  net.time_vertex_b.assign(net.times_b.size(), -1);

  // s, then station time points merged by (time, A before B), then t
  net.vertices.push_back(Vertex{VertexKind::source, Station::A, -1, true});
  std::size_t ia = 0, ib = 0;
  while (ia < net.times_a.size() || ib < net.times_b.size()) {
    bool take_a = ib == net.times_b.size() || (ia < net.times_a.size() && net.times_a[ia] <= net.times_b[ib]);
    int id = static_cast<int>(net.vertices.size());
    if (take_a) {
      net.vertices.push_back(Vertex{VertexKind::station, Station::A, net.times_a[ia], true});
      net.time_vertex_a[ia++] = id;
    } else {
      net.vertices.push_back(Vertex{VertexKind::station, Station::B, net.times_b[ib], true});
      net.time_vertex_b[ib++] = id;
    }
  }
  net.sink = static_cast<int>(net.vertices.size());
  net.vertices.push_back(Vertex{VertexKind::sink, Station::A, inst.horizon + 1, true});
  net.forward.resize(net.vertices.size());
  for (std::size_t v = 0; v < net.forward.size(); ++v) net.forward[v] = static_cast<int>(v);

  const std::int64_t inf = net.unbounded();
  // source arcs
  if (!net.time_vertex_a.empty())
    net.arcs.push_back(Arc{net.source, net.time_vertex_a.front(), inst.fleet_a, ArcKind::source, {}, true});
  if (!net.time_vertex_b.empty())
    net.arcs.push_back(Arc{net.source, net.time_vertex_b.front(), inst.fleet_b, ArcKind::source, {}, true});
  // connecting arcs along each station, then last point -> t
  for (const auto* ids : {&net.time_vertex_a, &net.time_vertex_b}) {
    for (std::size_t i = 0; i + 1 < ids->size(); ++i)
      net.arcs.push_back(Arc{(*ids)[i], (*ids)[i + 1], inf, ArcKind::connecting, {}, true});
    if (!ids->empty()) net.arcs.push_back(Arc{ids->back(), net.sink, inf, ArcKind::connecting, {}, true});
  }
  // demand arcs
  for (const auto& c : inst.customers) {
    for (Leg leg : {Leg::outbound, Leg::ret}) {
      const Demand& d = leg == Leg::outbound ? c.outbound : c.ret;
      int tail = net.vertex_for(d.origin, d.start);
      int head = net.vertex_for(d.destination(), d.end);
      net.arcs.push_back(Arc{tail, head, 1, ArcKind::demand, {ArcOwner{c.id, leg}}, true});
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// flow feasibility with fixed demand-arc flows (Dinic on the lower-bound
// reduction)

namespace {

class Dinic {
 public:
  explicit Dinic(int n) : adj_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)),
                          it_(static_cast<std::size_t>(n)) {}

  void add_edge(int u, int v, std::int64_t cap) {
    adj_[static_cast<std::size_t>(u)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    adj_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0});
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

 private:
  struct Edge {
    int to;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e : adj_[static_cast<std::size_t>(u)]) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
          level_[static_cast<std::size_t>(ed.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(ed.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t f) {
    if (u == t) return f;
    auto& i = it_[static_cast<std::size_t>(u)];
    const auto& a = adj_[static_cast<std::size_t>(u)];
    for (; i < a.size(); ++i) {
      int e = a[i];
      Edge& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.cap <= 0 || level_[static_cast<std::size_t>(ed.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      if (std::int64_t got = dfs(ed.to, t, std::min(f, ed.cap)); got > 0) {
        ed.cap -= got;
        edges_[static_cast<std::size_t>(e ^ 1)].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace

bool admits_flow(const Network& net, std::span<const char> selected) {
  const int nv = static_cast<int>(net.vertices.size());
  std::vector<std::int64_t> excess(static_cast<std::size_t>(nv), 0);
  const int super_s = nv;
  const int super_t = nv + 1;
  Dinic flow(nv + 2);
  for (const auto& a : net.arcs) {
    if (!a.alive) continue;
    if (a.kind != ArcKind::demand) {
      flow.add_edge(a.tail, a.head, a.capacity);
      continue;
    }
    int chosen = 0;
    for (const auto& o : a.owners) chosen += selected[static_cast<std::size_t>(o.customer)] ? 1 : 0;
    if (chosen != 0 && chosen != static_cast<int>(a.owners.size())) return false;
    std::int64_t f = chosen ? 1 : 0;
    if (f > a.capacity) return false;
    excess[static_cast<std::size_t>(a.head)] += f;
    excess[static_cast<std::size_t>(a.tail)] -= f;
  }
  flow.add_edge(net.sink, net.source, std::numeric_limits<std::int64_t>::max() / 4);
  std::int64_t need = 0;
  for (int v = 0; v < nv; ++v) {
    std::int64_t x = excess[static_cast<std::size_t>(v)];
    if (x > 0) {
      flow.add_edge(super_s, v, x);
      need += x;
    } else if (x < 0) {
      flow.add_edge(v, super_t, -x);
    }
  }
  return flow.max_flow(super_s, super_t) == need;
}

}  // namespace carshare
