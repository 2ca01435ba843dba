#include "carshare/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "carshare/bnb.hpp"

namespace carshare {

namespace {

constexpr double kHalf = 0.5 - 1e-9;

struct Split {
  std::vector<CustomerId> members;
  std::vector<CustomerId> outsiders;
};

Split split(const DisplacementIndex& idx) {
  Split s;
  for (CustomerId c = 1; c <= idx.customer_count(); ++c) (idx.contains(c) ? s.members : s.outsiders).push_back(c);
  return s;
}

// Negative region left by a single change on one station, or none. `usable`
// is false when some prefix drops below -1, which no single partner can repair.
struct Gap {
  bool any = false;
  bool usable = true;
  Station station = Station::A;
  int first = -1;
  int last = -1;
};

Gap gap_of(const DisplacementIndex& idx) {
  Gap g;
  for (Station s : {Station::A, Station::B}) {
    const StationDeficit d = idx.deficit(s);
    if (!d.any()) continue;
    if (g.any || d.min < -1) {
      g.usable = false;
      return g;
    }
    g = {true, true, s, d.first, d.last};
  }
  return g;
}

bool covers(const IndexRange& r, const Gap& g) { return r.covers(g.station, g.first, g.last); }

void visit_single_insert(DisplacementIndex& idx, const Split& sp, const std::function<bool(const Move&)>& visit) {
  for (CustomerId b : sp.outsiders)
    if (idx.can_insert(b) && !visit({{}, {b}})) return;
}

void visit_single_remove(DisplacementIndex& idx, const Split& sp, const std::function<bool(const Move&)>& visit) {
  for (CustomerId a : sp.members)
    if (idx.can_remove(a) && !visit({{a}, {}})) return;
}

// Minimal pairs: each customer alone breaks feasibility on its own side and
// the partner repairs it. A lone insertion only lowers its home station over
// the busy window; the partner must be parked there over the whole negative
// region. A lone removal only lowers the far station over the parked window;
// the partner's busy window, freed by its removal, must cover it.
bool visit_minimal_pairs(DisplacementIndex& idx, const std::vector<CustomerId>& pool, bool inserting,
                         const std::function<bool(const Move&)>& visit) {
  std::vector<CustomerId> cand;
  std::vector<Gap> gaps;
  for (CustomerId c : pool) {
    if (inserting ? idx.can_insert(c) : idx.can_remove(c)) continue;
    if (inserting)
      idx.insert(c, true);
    else
      idx.remove(c, true);
    Gap g = gap_of(idx);
    if (inserting)
      idx.remove(c, true);
    else
      idx.insert(c, true);
    if (!g.usable || !g.any) continue;
    cand.push_back(c);
    gaps.push_back(g);
  }
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const auto& fi = idx.footprint(cand[i]);
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      const auto& fj = idx.footprint(cand[j]);
      if (fi.home == fj.home) continue;
      const bool ok = inserting ? covers(fj.parked(), gaps[i]) && covers(fi.parked(), gaps[j])
                                : covers(fj.busy(), gaps[i]) && covers(fi.busy(), gaps[j]);
      if (!ok) continue;
      Move m;
      (inserting ? m.in : m.out) = {cand[i], cand[j]};
      if (!visit(m)) return false;
    }
  }
  return true;
}

// Every unordered pair {b, c} from `pool` whose joint insertion makes the
// current (possibly infeasible) state feasible. `prefix` is prepended to the
// removal side of each reported move.
bool visit_feasible_pairs(DisplacementIndex& idx, const std::vector<CustomerId>& pool, CustomerId removed,
                          const std::function<bool(const Move&)>& visit) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const CustomerId b = pool[i];
    idx.insert(b, true);
    const Gap g = gap_of(idx);
    bool keep_going = true;
    if (g.usable) {
      for (std::size_t j = i + 1; j < pool.size() && keep_going; ++j) {
        const CustomerId c = pool[j];
        if (g.any && !covers(idx.footprint(c).parked(), g)) continue;
        if (!idx.can_insert(c)) continue;
        Move m;
        if (removed) m.out = {removed};
        m.in = {b, c};
        keep_going = visit(m);
      }
    }
    idx.remove(b, true);
    if (!keep_going) return false;
  }
  return true;
}

bool feasible_after(DisplacementIndex& idx, const std::vector<CustomerId>& out, const std::vector<CustomerId>& in) {
  for (CustomerId c : out) idx.remove(c, true);
  for (CustomerId c : in) idx.insert(c, true);
  const bool ok = idx.feasible();
  for (CustomerId c : in) idx.remove(c, true);
  for (CustomerId c : out) idx.insert(c, true);
  return ok;
}

// Triples with no feasible singleton or pair inside them.
bool minimal_triple(DisplacementIndex& idx, const std::vector<CustomerId>& t, bool inserting) {
  auto feasible = [&](const std::vector<CustomerId>& s) {
    return inserting ? feasible_after(idx, {}, s) : feasible_after(idx, s, {});
  };
  if (!feasible(t)) return false;
  for (int i = 0; i < 3; ++i) {
    if (feasible({t[static_cast<std::size_t>(i)]})) return false;
    if (feasible({t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)]})) return false;
  }
  return true;
}

bool visit_minimal_triples(DisplacementIndex& idx, const std::vector<CustomerId>& pool, bool inserting,
                           const std::function<bool(const Move&)>& visit) {
  std::vector<CustomerId> cand;
  for (CustomerId c : pool)
    if (!(inserting ? idx.can_insert(c) : idx.can_remove(c))) cand.push_back(c);
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      for (std::size_t k = j + 1; k < cand.size(); ++k) {
        std::vector<CustomerId> t{cand[i], cand[j], cand[k]};
        if (!minimal_triple(idx, t, inserting)) continue;
        Move m;
        (inserting ? m.in : m.out) = t;
        if (!visit(m)) return false;
      }
  return true;
}

std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

std::optional<Move> sample_triple(DisplacementIndex& idx, const std::vector<CustomerId>& pool, bool inserting,
                                  SplitMix64& rng) {
  std::vector<CustomerId> cand;
  for (CustomerId c : pool)
    if (!(inserting ? idx.can_insert(c) : idx.can_remove(c))) cand.push_back(c);
  const auto cap = static_cast<std::uint64_t>(50) * static_cast<std::uint64_t>(std::max(1, idx.customer_count()));
  if (choose3(cand.size()) <= cap) {
    std::optional<Move> pick;
    std::uint64_t seen = 0;
    visit_minimal_triples(idx, cand, inserting, [&](const Move& m) {
      if (rng.uniform(0, static_cast<std::int64_t>(seen++)) == 0) pick = m;
      return true;
    });
    return pick;
  }
  const auto n = static_cast<std::int64_t>(cand.size());
  for (std::uint64_t attempt = 0; attempt < cap; ++attempt) {
    const auto i = rng.uniform(0, n - 1);
    const auto j = rng.uniform(0, n - 1);
    const auto k = rng.uniform(0, n - 1);
    if (i == j || j == k || i == k) continue;
    std::vector<CustomerId> t{cand[static_cast<std::size_t>(i)], cand[static_cast<std::size_t>(j)],
                              cand[static_cast<std::size_t>(k)]};
    std::sort(t.begin(), t.end());
    if (!minimal_triple(idx, t, inserting)) continue;
    Move m;
    (inserting ? m.in : m.out) = t;
    return m;
  }
  return std::nullopt;
}

}  // namespace

void for_each_neighbor(DisplacementIndex& idx, int k, const std::function<bool(const Move&)>& visit) {
  if (!idx.feasible()) throw std::logic_error("neighborhoods are defined on feasible solutions");
  const Split sp = split(idx);
  switch (k) {
    case 1: visit_single_insert(idx, sp, visit); return;
    case 2: visit_minimal_pairs(idx, sp.outsiders, true, visit); return;
    case 3: visit_minimal_triples(idx, sp.outsiders, true, visit); return;
    case 4: visit_single_remove(idx, sp, visit); return;
    case 5: visit_minimal_pairs(idx, sp.members, false, visit); return;
    case 6: visit_minimal_triples(idx, sp.members, false, visit); return;
    case 7:
      for (CustomerId a : sp.members) {
        idx.remove(a, true);
        const Gap g = gap_of(idx);
        bool go = true;
        if (g.usable) {
          for (CustomerId b : sp.outsiders) {
            if (g.any && !covers(idx.footprint(b).parked(), g)) continue;
            if (idx.can_insert(b) && !(go = visit({{a}, {b}}))) break;
          }
        }
        idx.insert(a, true);
        if (!go) return;
      }
      return;
    case 8:
      for (CustomerId a : sp.members) {
        idx.remove(a, true);
        // a lone removal can push a prefix to -1 at most; two insertions can
        // repair that, so no pruning on the removal itself
        const bool go = visit_feasible_pairs(idx, sp.outsiders, a, visit);
        idx.insert(a, true);
        if (!go) return;
      }
      return;
    default: throw std::invalid_argument("neighborhood index must be 1..8");
  }
}

std::vector<Move> enumerate_neighbors(DisplacementIndex& idx, int k) {
  std::vector<Move> out;
  for_each_neighbor(idx, k, [&](const Move& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::optional<Move> random_neighbor(DisplacementIndex& idx, int k, SplitMix64& rng, NeighborMode mode) {
  if (mode == NeighborMode::sample && (k == 3 || k == 6)) {
    if (!idx.feasible()) throw std::logic_error("neighborhoods are defined on feasible solutions");
    const Split sp = split(idx);
    return sample_triple(idx, k == 3 ? sp.outsiders : sp.members, k == 3, rng);
  }
  std::optional<Move> pick;
  std::uint64_t seen = 0;
  for_each_neighbor(idx, k, [&](const Move& m) {
    if (rng.uniform(0, static_cast<std::int64_t>(seen++)) == 0) pick = m;
    return true;
  });
  return pick;
}

bool has_neighbor(DisplacementIndex& idx, int k, SplitMix64& rng) {
  if (k == 3 || k == 6) return random_neighbor(idx, k, rng).has_value();
  bool found = false;
  for_each_neighbor(idx, k, [&](const Move&) {
    found = true;
    return false;
  });
  return found;
}

std::optional<Move> neighbor_increase(DisplacementIndex& idx, int k, SplitMix64& rng, NeighborMode mode) {
  if (k < 1 || k > 3) throw std::invalid_argument("increase size must be 1..3");
  return random_neighbor(idx, k, rng, mode);
}

std::optional<Move> neighbor_decrease(DisplacementIndex& idx, int k, SplitMix64& rng, NeighborMode mode) {
  if (k < 1 || k > 3) throw std::invalid_argument("decrease size must be 1..3");
  return random_neighbor(idx, k + 3, rng, mode);
}

std::optional<Move> neighbor_exchange(DisplacementIndex& idx, int take, SplitMix64& rng, NeighborMode mode) {
  if (take < 1 || take > 2) throw std::invalid_argument("exchange takes 1 or 2 customers");
  return random_neighbor(idx, take + 6, rng, mode);
}

void apply_move(DisplacementIndex& idx, const Move& m) {
  for (CustomerId c : m.out) idx.remove(c, true);
  for (CustomerId c : m.in) idx.insert(c, true);
  if (idx.feasible()) return;
  for (CustomerId c : m.in) idx.remove(c, true);
  for (CustomerId c : m.out) idx.insert(c, true);
  throw std::logic_error("move leads to an infeasible solution");
}

LocalSearchResult local_search(DisplacementIndex& idx, SplitMix64& rng, const Deadline& deadline) {
  LocalSearchResult res;
  for (;;) {
    for (;;) {
      if (deadline.expired()) {
        res.interrupted = true;
        return res;
      }
      auto m = random_neighbor(idx, 2, rng);
      if (!m) break;
      apply_move(idx, *m);
      ++res.moves;
    }
    if (deadline.expired()) {
      res.interrupted = true;
      return res;
    }
    auto m = random_neighbor(idx, 1, rng);
    if (!m) m = random_neighbor(idx, 8, rng);
    if (!m) return res;
    apply_move(idx, *m);
    ++res.moves;
  }
}

std::uint64_t fingerprint_toggle(std::uint64_t fp, CustomerId c) { return fp ^ mix64(static_cast<std::uint64_t>(c)); }

std::uint64_t fingerprint(const Solution& s) {
  std::uint64_t fp = 0;
  for (CustomerId c : s.satisfied) fp = fingerprint_toggle(fp, c);
  return fp;
}

std::size_t TabuList::capacity_for(double tenure, int n) {
  if (tenure <= 0 || n <= 0) return 0;
  return static_cast<std::size_t>(std::floor(tenure * n + 1e-9));
}

bool TabuList::contains(std::uint64_t fp) const { return count_.find(fp) != count_.end(); }

void TabuList::push(std::uint64_t fp) {
  if (capacity_ == 0) return;
  if (queue_.size() == capacity_) {
    auto it = count_.find(queue_.front());
    if (--it->second == 0) count_.erase(it);
    queue_.pop_front();
  }
  queue_.push_back(fp);
  ++count_[fp];
}

// ---------------------------------------------------------------------------
// construction

GraspConstructor::GraspConstructor(const Instance& inst, const Model& model, const Deadline& deadline)
    : inst_(inst), model_(model), lp_(model) {
  if (model.customer_count != inst.size()) throw std::invalid_argument("model and instance sizes differ");
  const LpStatus st = lp_.solve(deadline);
  ++lp_solves_;
  if (st == LpStatus::optimal) {
    root_solved_ = true;
    root_bound_ = lp_.objective();
    root_basis_ = lp_.basis();
    root_x_ = lp_.primal();
  }
}

Solution GraspConstructor::construct(double alpha, SplitMix64& rng, const Deadline& deadline, bool* interrupted) {
  const int n = inst_.size();
  auto col = [&](CustomerId c) { return model_.column(c); };
  if (interrupted) *interrupted = false;

  // fallback when the deadline cuts the construction short
  auto finish_greedy = [&](const std::vector<double>& x) {
    if (interrupted) *interrupted = true;
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    for (CustomerId c = 1; c <= n; ++c) v[static_cast<std::size_t>(c)] = x.empty() ? 0.0 : x[static_cast<std::size_t>(col(c))];
    DisplacementIndex idx(inst_);
    return round_heuristic(v, idx);
  };
  if (!root_solved_) {
    if (lp_.solve(deadline) != LpStatus::optimal) return finish_greedy({});
    ++lp_solves_;
    root_solved_ = true;
    root_bound_ = lp_.objective();
    root_basis_ = lp_.basis();
    root_x_ = lp_.primal();
  }

  std::vector<char> in_cl(static_cast<std::size_t>(n) + 1, 0);
  std::vector<CustomerId> cl;
  for (CustomerId c = 1; c <= n; ++c)
    if (root_x_[static_cast<std::size_t>(col(c))] >= kHalf) {
      in_cl[static_cast<std::size_t>(c)] = 1;
      cl.push_back(c);
    }

  lp_.reset_bounds();
  lp_.set_basis(root_basis_);
  std::vector<double> current = root_x_;
  struct Eval {
    CustomerId c;
    double value;
    std::vector<double> x;
  };
  std::vector<Eval> evals;
  while (!is_feasible_set(inst_, cl)) {
    // customers outside CL stay at zero for the rest of the construction
    for (CustomerId c = 1; c <= n; ++c)
      if (!in_cl[static_cast<std::size_t>(c)]) lp_.set_bounds(col(c), 0, 0);
    evals.clear();
    const LpBasis start = lp_.basis();
    for (CustomerId c : cl) {
      lp_.set_bounds(col(c), 0, 0);
      const LpStatus st = lp_.solve(deadline);
      ++lp_solves_;
      lp_.set_bounds(col(c), model_.vars[static_cast<std::size_t>(col(c))].lb,
                     model_.vars[static_cast<std::size_t>(col(c))].ub);
      if (st == LpStatus::time_limit) return finish_greedy(current);
      if (st != LpStatus::optimal) continue;
      evals.push_back({c, lp_.objective(), lp_.primal()});
    }
    if (evals.empty()) return finish_greedy(current);
    double lo = evals.front().value, hi = lo;
    for (const auto& e : evals) {
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
    }
    const double threshold = lo + alpha * (hi - lo) - 1e-9;
    std::vector<std::size_t> rcl;
    for (std::size_t i = 0; i < evals.size(); ++i)
      if (evals[i].value >= threshold) rcl.push_back(i);
    const Eval& chosen = evals[rcl[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(rcl.size()) - 1))]];
    current = chosen.x;
    in_cl[static_cast<std::size_t>(chosen.c)] = 0;
    std::vector<CustomerId> next;
    for (CustomerId c : cl) {
      if (!in_cl[static_cast<std::size_t>(c)]) continue;
      if (current[static_cast<std::size_t>(col(c))] < kHalf) {
        in_cl[static_cast<std::size_t>(c)] = 0;
        continue;
      }
      next.push_back(c);
    }
    cl = std::move(next);
    lp_.set_basis(start);
  }
  return Solution::from_ids(cl);
}

Solution grasp_construct(const Instance& inst, const Model& model, double alpha, SplitMix64& rng) {
  GraspConstructor g(inst, model);
  return g.construct(alpha, rng);
}

// ---------------------------------------------------------------------------
// metaheuristics

namespace {

DisplacementIndex index_of(const Instance& inst, const Solution& s) {
  DisplacementIndex idx(inst);
  for (CustomerId c : s.satisfied) idx.insert(c, true);
  if (!idx.feasible()) throw std::logic_error("construction returned an infeasible set");
  return idx;
}

bool reached(const HeuristicOptions& opt, const Instance& inst, int value) {
  return value >= inst.size() || (opt.target >= 0 && value >= opt.target);
}

double bound_of(const GraspConstructor& g, const Instance& inst) {
  return g.root_solved() ? std::floor(g.root_bound() + 1e-6) : inst.size();
}

bool out_of_iterations(const HeuristicOptions& opt, long it) { return opt.max_iterations >= 0 && it >= opt.max_iterations; }

}  // namespace

HeuristicReport grasp(const Instance& inst, const Model& model, const HeuristicOptions& opt) {
  Stopwatch clock;
  const Deadline deadline = Deadline::after(opt.time_limit);
  SplitMix64 rng(opt.seed);
  HeuristicReport rep;
  rep.method = "grasp";
  GraspConstructor builder(inst, model, deadline);
  bool first = true;
  while (!deadline.expired() && !out_of_iterations(opt, rep.iterations)) {
    bool cut = false;
    Solution s = builder.construct(opt.alpha, rng, deadline, &cut);
    if (first) {
      rep.construction_value = s.value();
      rep.best = s;
      first = false;
    }
    DisplacementIndex idx = index_of(inst, s);
    const LocalSearchResult ls = local_search(idx, rng, deadline);
    ++rep.iterations;
    if (idx.value() > rep.best.value()) {
      rep.best = idx.solution();
      ++rep.improvements;
    }
    if (cut || ls.interrupted) rep.interrupted = true;
    if (reached(opt, inst, rep.best.value())) break;
  }
  rep.bound = bound_of(builder, inst);
  rep.elapsed = clock.seconds();
  return rep;
}

HeuristicReport vns(const Instance& inst, const Model& model, const HeuristicOptions& opt) {
  Stopwatch clock;
  const Deadline deadline = Deadline::after(opt.time_limit);
  SplitMix64 rng(opt.seed);
  HeuristicReport rep;
  rep.method = "vns";
  GraspConstructor builder(inst, model, deadline);
  bool cut = false;
  rep.best = builder.construct(1.0, rng, deadline, &cut);
  rep.construction_value = rep.best.value();
  rep.interrupted = cut;
  DisplacementIndex cur = index_of(inst, rep.best);
  static constexpr int kOrder[] = {7, 4, 5, 6};
  while (!deadline.expired() && !out_of_iterations(opt, rep.iterations) && !reached(opt, inst, cur.value())) {
    std::size_t next = 0;  // position in kOrder; restarts on improvement
    bool shaken = false;
    while (next < std::size(kOrder) && !deadline.expired() && !out_of_iterations(opt, rep.iterations)) {
      const int k = kOrder[next];
      ++rep.iterations;
      auto shake = random_neighbor(cur, k, rng);
      if (!shake) {
        ++next;
        continue;
      }
      shaken = true;
      DisplacementIndex trial = cur;
      apply_move(trial, *shake);
      const LocalSearchResult ls = local_search(trial, rng, deadline);
      if (ls.interrupted) rep.interrupted = true;
      if (trial.value() > cur.value()) {
        cur = std::move(trial);
        ++rep.improvements;
        next = 0;
        if (reached(opt, inst, cur.value())) break;
      } else {
        ++next;
      }
    }
    if (!shaken) break;  // no shake applies, so the state can never change
  }
  rep.best = cur.solution();
  rep.bound = bound_of(builder, inst);
  rep.elapsed = clock.seconds();
  return rep;
}

HeuristicReport tabu_search(const Instance& inst, const Model& model, const HeuristicOptions& opt) {
  Stopwatch clock;
  const Deadline deadline = Deadline::after(opt.time_limit);
  SplitMix64 rng(opt.seed);
  HeuristicReport rep;
  rep.method = "ts";
  GraspConstructor builder(inst, model, deadline);
  bool cut = false;
  rep.best = builder.construct(1.0, rng, deadline, &cut);
  rep.construction_value = rep.best.value();
  rep.interrupted = cut;
  DisplacementIndex cur = index_of(inst, rep.best);
  std::uint64_t fp = fingerprint(rep.best);
  TabuList tabu(TabuList::capacity_for(opt.tenure, inst.size()));
  static constexpr int kHoods[] = {1, 2, 3, 4, 7, 8};
  constexpr int kCount = static_cast<int>(std::size(kHoods));
  while (!deadline.expired() && !out_of_iterations(opt, rep.iterations) && !reached(opt, inst, rep.best.value())) {
    ++rep.iterations;
    const int start = static_cast<int>(rng.uniform(0, kCount - 1));
    std::optional<Move> m;
    for (int i = 0; i < kCount && !m; ++i) m = random_neighbor(cur, kHoods[(start + i) % kCount], rng);
    if (!m) break;  // every neighborhood is empty
    std::uint64_t next_fp = fp;
    for (CustomerId c : m->out) next_fp = fingerprint_toggle(next_fp, c);
    for (CustomerId c : m->in) next_fp = fingerprint_toggle(next_fp, c);
    const int next_value = cur.value() + m->delta();
    if (!tabu.contains(next_fp)) {
      apply_move(cur, *m);
      fp = next_fp;
      tabu.push(fp);
      if (next_value > rep.best.value()) {
        rep.best = cur.solution();
        ++rep.improvements;
      }
    } else if (next_value > rep.best.value()) {
      DisplacementIndex better = cur;
      apply_move(better, *m);
      rep.best = better.solution();
      ++rep.improvements;
    }
  }
  rep.bound = bound_of(builder, inst);
  rep.elapsed = clock.seconds();
  return rep;
}

}  // namespace carshare
