#include "carshare/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "carshare/heuristics.hpp"
#include "carshare/lp.hpp"
#include "carshare/priority.hpp"

namespace carshare {

const char* to_string(SolveStatus s) { return s == SolveStatus::optimal ? "optimal" : "time-limit"; }

double relative_gap(double ub, double lb) {
  if (ub <= 0) return 0.0;
  return std::max(0.0, 100.0 * (ub - lb) / ub);
}

Solution round_heuristic(const std::vector<double>& value_by_customer, DisplacementIndex& index) {
  const int n = index.customer_count();
  if (static_cast<int>(value_by_customer.size()) < n + 1) throw std::invalid_argument("one value per customer id expected");
  std::vector<CustomerId> order;
  std::vector<CustomerId> block;
  for (CustomerId c = 1; c <= n; ++c) {
    if (index.contains(c)) continue;
    order.push_back(c);
    if (value_by_customer[static_cast<std::size_t>(c)] >= 1 - 1e-6) block.push_back(c);
  }
  if (index.feasible() && !block.empty()) {
    for (CustomerId c : block) index.insert(c, true);
    if (!index.feasible())
      for (CustomerId c : block) index.remove(c, true);
  }
  std::stable_sort(order.begin(), order.end(), [&](CustomerId a, CustomerId b) {
    return value_by_customer[static_cast<std::size_t>(a)] > value_by_customer[static_cast<std::size_t>(b)];
  });
  if (index.feasible())
    for (CustomerId c : order)
      if (!index.contains(c) && index.can_insert(c)) index.insert(c);
  return index.solution();
}

namespace {

constexpr double kIntTol = 1e-6;

double floor_bound(double z) { return std::floor(z + 1e-6); }

struct Fix {
  int col;
  std::uint8_t up;
};

struct Node {
  std::vector<Fix> fixes;
  std::shared_ptr<const LpBasis> basis;
  double bound;  // floored bound inherited from the parent
  long order;
};

struct WorseBound {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound < b->bound;
    return a->order < b->order;  // deeper (later) nodes first on ties
  }
};

class Search {
 public:
  Search(const Model& model, const Instance& inst, const BnbOptions& opt)
      : model_(model), inst_(inst), opt_(opt), lp_(model), rng_(opt.seed), deadline_(Deadline::after(opt.time_limit)) {
    n_ = inst.size();
    schedule_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const Customer& c : inst.customers) schedule_[static_cast<std::size_t>(c.id)] = work_schedule(c);
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
      base_lb_.push_back(model.vars[j].lb);
      base_ub_.push_back(model.vars[j].ub);
    }
  }

  SolveReport run() {
    SolveReport rep;
    const LpStatus st = lp_.solve(deadline_);
    if (st == LpStatus::infeasible) throw std::logic_error("relaxation infeasible; the empty set always is feasible");
    if (st != LpStatus::optimal) {
      // not even the root finished; report the trivial bound
      rep.ub = n_;
      rep.lb = 0;
      rep.gap_pct = relative_gap(rep.ub, 0);
      rep.status = SolveStatus::time_limit;
      rep.lp_iterations = lp_.iterations();
      rep.elapsed = clock_.seconds();
      return rep;
    }
    rep.root_bound = lp_.objective();
    double root = floor_bound(rep.root_bound);
    offer_from_lp();
    if (opt_.primal_heuristics && !done(root)) root_heuristics(root);
    fix_by_reduced_cost(root_fixes_, rep.root_bound);
    base_lb_ = effective(root_fixes_, true);
    base_ub_ = effective(root_fixes_, false);

    open_.push(std::make_shared<Node>(Node{{}, std::make_shared<const LpBasis>(lp_.basis()), root, order_++}));
    bool timed_out = false;
    std::shared_ptr<Node> next;
    while (next || !open_.empty()) {
      if (deadline_.expired() || (opt_.node_limit >= 0 && nodes_ >= opt_.node_limit)) {
        timed_out = true;
        if (next) open_.push(next);
        break;
      }
      std::shared_ptr<Node> node = next;
      next.reset();
      if (!node) {
        node = open_.top();
        open_.pop();
      }
      if (node->bound <= best_value()) continue;
      auto [a, b] = process(*node, timed_out);
      if (timed_out) {
        open_.push(node);
        break;
      }
      // plunge into the up child, queue the other
      if (a) next = a;
      if (b) open_.push(b);
    }

    double ub = best_value();
    if (timed_out) {
      while (!open_.empty()) {
        ub = std::max(ub, open_.top()->bound);
        open_.pop();
      }
    }
    rep.incumbent = best_;
    rep.lb = best_value();
    rep.ub = std::max(ub, static_cast<double>(rep.lb));
    rep.gap_pct = relative_gap(rep.ub, rep.lb);
    rep.status = timed_out && rep.ub > rep.lb ? SolveStatus::time_limit : SolveStatus::optimal;
    rep.nodes = nodes_;
    rep.lp_iterations = lp_.iterations();
    rep.elapsed = clock_.seconds();
    return rep;
  }

 private:
  int best_value() const { return best_.value(); }
  bool done(double bound) const { return bound <= best_value(); }

  std::vector<double> effective(const std::vector<Fix>& fixes, bool lower) const {
    std::vector<double> v;
    for (std::size_t j = 0; j < model_.vars.size(); ++j) v.push_back(lower ? model_.vars[j].lb : model_.vars[j].ub);
    for (const Fix& f : fixes) v[static_cast<std::size_t>(f.col)] = f.up;
    return v;
  }

  void load(const std::vector<Fix>& fixes) {
    for (std::size_t j = 0; j < base_lb_.size(); ++j) {
      const int c = static_cast<int>(j);
      if (lp_.lower(c) != base_lb_[j] || lp_.upper(c) != base_ub_[j]) lp_.set_bounds(c, base_lb_[j], base_ub_[j]);
    }
    for (const Fix& f : fixes) lp_.set_bounds(f.col, f.up, f.up);
  }

  std::vector<double> customer_values() const {
    std::vector<double> v(static_cast<std::size_t>(n_) + 1, 0.0);
    for (CustomerId c = 1; c <= n_; ++c) v[static_cast<std::size_t>(c)] = lp_.value(model_.column(c));
    return v;
  }

  void offer(const Solution& s) {
    if (s.value() <= best_value()) return;
    if (!is_feasible_set(inst_, s)) throw std::logic_error("heuristic produced an infeasible set");
    best_ = s;
  }

  // Rounding of the current LP point; cheap enough for every node.
  void offer_from_lp() {
    if (!opt_.primal_heuristics) return;
    DisplacementIndex idx(inst_);
    offer(round_heuristic(customer_values(), idx));
  }

  void polish(DisplacementIndex& idx) {
    local_search(idx, rng_, deadline_);
    offer(idx.solution());
  }

  // Fractional diving: repeatedly fix the largest fractional customer to 1,
  // backing off to 0 when that makes the relaxation infeasible.
  void dive(double root, bool by_schedule) {
    LpSolver saved = lp_;
    std::vector<char> fixed(static_cast<std::size_t>(n_) + 1, 0);
    for (int step = 0; step < 4 * n_ && !deadline_.expired(); ++step) {
      if (floor_bound(lp_.objective()) <= best_value()) break;
      CustomerId pick = 0;
      double best_score = -1;
      for (CustomerId c = 1; c <= n_; ++c) {
        const double x = lp_.value(model_.column(c));
        if (x <= kIntTol || x >= 1 - kIntTol || fixed[static_cast<std::size_t>(c)]) continue;
        const double score = by_schedule ? x - 1e-4 * schedule_[static_cast<std::size_t>(c)] : x;
        if (score > best_score) {
          best_score = score;
          pick = c;
        }
      }
      if (!pick) break;
      fixed[static_cast<std::size_t>(pick)] = 1;
      const int col = model_.column(pick);
      lp_.set_bounds(col, 1, 1);
      LpStatus st = lp_.solve(deadline_);
      if (st == LpStatus::infeasible) {
        lp_.set_bounds(col, 0, 0);
        st = lp_.solve(deadline_);
      }
      if (st != LpStatus::optimal) break;
      offer_from_lp();
    }
    if (lp_.status() == LpStatus::optimal) {
      DisplacementIndex idx(inst_);
      round_heuristic(customer_values(), idx);
      polish(idx);
    }
    lp_ = std::move(saved);
    (void)root;
  }

  void root_heuristics(double root) {
    {
      DisplacementIndex idx(inst_);
      round_heuristic(customer_values(), idx);
      polish(idx);
    }
    if (done(root)) return;
    dive(root, false);
    if (done(root)) return;
    dive(root, true);
  }

  // A nonbasic customer column whose reduced cost shows that moving it to the
  // other bound cannot beat the incumbent gets fixed where it is.
  void fix_by_reduced_cost(std::vector<Fix>& fixes, double z) {
    if (best_value() <= 0) return;
    const double need = best_value() + 1 - 1e-6;
    std::vector<char> seen(model_.vars.size(), 0);
    for (const Fix& f : fixes) seen[static_cast<std::size_t>(f.col)] = 1;
    for (CustomerId c = 1; c <= n_; ++c) {
      const int col = model_.column(c);
      if (seen[static_cast<std::size_t>(col)] || lp_.is_basic(col)) continue;
      if (lp_.lower(col) == lp_.upper(col)) continue;
      const double x = lp_.value(col);
      const double rc = lp_.reduced_cost(col);
      if (x <= kIntTol && z + rc < need) fixes.push_back({col, 0});
      else if (x >= 1 - kIntTol && z - rc < need) fixes.push_back({col, 1});
    }
  }

  std::pair<std::shared_ptr<Node>, std::shared_ptr<Node>> process(Node& node, bool& timed_out) {
    load(node.fixes);
    if (node.basis) lp_.set_basis(*node.basis);
    const LpStatus st = lp_.solve(deadline_);
    if (st == LpStatus::time_limit) {
      timed_out = true;
      return {};
    }
    ++nodes_;
    if (st != LpStatus::optimal) return {};  // infeasible subtree
    const double z = lp_.objective();
    const double bound = std::min(node.bound, floor_bound(z));
    offer_from_lp();
    if (bound <= best_value()) return {};

    CustomerId branch = 0;
    double closest = 2;
    bool integral = true;
    for (CustomerId c = 1; c <= n_; ++c) {
      const double x = lp_.value(model_.column(c));
      if (x <= kIntTol || x >= 1 - kIntTol) continue;
      integral = false;
      const double d = std::abs(x - 0.5);
      const auto better = [&] {
        if (d < closest - 1e-12) return true;
        if (d > closest + 1e-12) return false;
        const int sa = schedule_[static_cast<std::size_t>(c)], sb = schedule_[static_cast<std::size_t>(branch)];
        return sa > sb;  // lower id already wins by scan order
      };
      if (better()) {
        closest = d;
        branch = c;
      }
    }
    if (integral) {
      Solution s;
      for (CustomerId c = 1; c <= n_; ++c)
        if (lp_.value(model_.column(c)) >= 1 - kIntTol) s.satisfied.push_back(c);
      if (!is_feasible_set(inst_, s)) throw std::logic_error("integral relaxation point is not a feasible set");
      if (s.value() > best_value()) best_ = s;
      return {};
    }

    std::vector<Fix> fixes = node.fixes;
    fix_by_reduced_cost(fixes, z);
    // bases are only a warm start; past this size the current one is reused
    auto basis = open_.size() < 4000 ? std::make_shared<const LpBasis>(lp_.basis()) : nullptr;
    const int col = model_.column(branch);
    auto up = std::make_shared<Node>(Node{fixes, basis, bound, order_++});
    up->fixes.push_back({col, 1});
    auto down = std::make_shared<Node>(Node{std::move(fixes), basis, bound, order_++});
    down->fixes.push_back({col, 0});
    return {up, down};
  }

  const Model& model_;
  const Instance& inst_;
  BnbOptions opt_;
  LpSolver lp_;
  SplitMix64 rng_;
  Deadline deadline_;
  Stopwatch clock_;
  int n_ = 0;
  std::vector<int> schedule_;
  std::vector<double> base_lb_, base_ub_;
  std::vector<Fix> root_fixes_;
  Solution best_;
  long nodes_ = 0;
  long order_ = 0;
  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, WorseBound> open_;
};

}  // namespace

SolveReport solve_exact(const Model& model, const Instance& inst, const BnbOptions& opt) {
  if (model.customer_count != inst.size()) throw std::invalid_argument("model and instance sizes differ");
  for (CustomerId c = 1; c <= inst.size(); ++c)
    if (model.column(c) < 0) throw std::invalid_argument("model has no column for customer " + std::to_string(c));
  Search s(model, inst, opt);
  return s.run();
}

}  // namespace carshare
