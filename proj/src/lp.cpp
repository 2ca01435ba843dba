#include "carshare/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace carshare {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::time_limit: return "time-limit";
  }
  return "?";
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXd;

// Column replaced at basis row r; holds the entering column in terms of the
// previous basis.
struct Eta {
  int r = 0;
  double pivot = 1.0;
  std::vector<int> idx;
  std::vector<double> val;
};

// The factorization is rebuilt rather than copied when a solver is cloned.
struct LuHolder {
  using Lu = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;
  std::unique_ptr<Lu> lu = std::make_unique<Lu>();
  LuHolder() = default;
  LuHolder(const LuHolder&) : lu(std::make_unique<Lu>()) {}
  LuHolder& operator=(const LuHolder&) {
    lu = std::make_unique<Lu>();
    return *this;
  }
  LuHolder(LuHolder&&) noexcept = default;
  LuHolder& operator=(LuHolder&&) noexcept = default;
};

struct Candidate {
  int j;
  double ratio;
  double alpha;  // |alpha_rj|
};

}  // namespace

struct LpSolver::Impl {
  LpOptions opt;
  int m = 0;  // rows
  int n = 0;  // structural columns

  // constraint matrix, both orientations
  std::vector<int> cstart, cidx;
  std::vector<double> cval;
  std::vector<int> rstart, ridx;
  std::vector<double> rval;

  std::vector<double> lb, ub, model_lb, model_ub, cost;  // size n + m, cost minimized
  std::vector<int> head;                                 // basis row -> variable
  std::vector<int> pos;                                  // variable -> basis row or -1
  std::vector<std::uint8_t> at_ub;
  std::vector<double> x, d;

  std::vector<double> weight;     // dual steepest-edge weights per basis row
  std::vector<double> true_cost;  // cost before perturbation

  LuHolder lu;
  std::vector<Eta> etas;
  bool factored = false;

  LpStatus status = LpStatus::optimal;
  long iters = 0;

  // scratch
  std::vector<double> alpha_row;
  std::vector<int> touched;
  std::vector<Candidate> cands;

  explicit Impl(const Model& model, LpOptions o) : opt(o) {
    m = model.row_count();
    n = model.var_count();
    const int N = n + m;
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    rstart.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 0; i < m; ++i) {
      const auto& r = model.rows[static_cast<std::size_t>(i)];
      rstart[static_cast<std::size_t>(i) + 1] = rstart[static_cast<std::size_t>(i)] + static_cast<int>(r.coefs.size());
      for (const auto& [c, v] : r.coefs) {
        ridx.push_back(c);
        rval.push_back(v);
        ++count[static_cast<std::size_t>(c)];
      }
    }
    cstart.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 0; j < n; ++j) cstart[static_cast<std::size_t>(j) + 1] = cstart[static_cast<std::size_t>(j)] + count[static_cast<std::size_t>(j)];
    cidx.resize(ridx.size());
    cval.resize(ridx.size());
    std::vector<int> fill(cstart.begin(), cstart.end() - 1);
    for (int i = 0; i < m; ++i)
      for (int k = rstart[static_cast<std::size_t>(i)]; k < rstart[static_cast<std::size_t>(i) + 1]; ++k) {
        const int c = ridx[static_cast<std::size_t>(k)];
        const int at = fill[static_cast<std::size_t>(c)]++;
        cidx[static_cast<std::size_t>(at)] = i;
        cval[static_cast<std::size_t>(at)] = rval[static_cast<std::size_t>(k)];
      }

    lb.assign(static_cast<std::size_t>(N), 0.0);
    ub.assign(static_cast<std::size_t>(N), 0.0);
    cost.assign(static_cast<std::size_t>(N), 0.0);
    for (int j = 0; j < n; ++j) {
      const auto& v = model.vars[static_cast<std::size_t>(j)];
      if (!std::isfinite(v.lb) || !std::isfinite(v.ub))
        throw std::invalid_argument("column " + v.name + " is not boxed");
      lb[static_cast<std::size_t>(j)] = v.lb;
      ub[static_cast<std::size_t>(j)] = v.ub;
      cost[static_cast<std::size_t>(j)] = -v.obj;
    }
    // logical r_i = row activity, boxed by the sense and the implied minimum
    for (int i = 0; i < m; ++i) {
      const auto& r = model.rows[static_cast<std::size_t>(i)];
      const auto k = static_cast<std::size_t>(n + i);
      ub[k] = r.rhs;
      if (r.sense == Sense::eq) {
        lb[k] = r.rhs;
      } else {
        double lo = 0;
        for (const auto& [c, v] : r.coefs)
          lo += v > 0 ? v * lb[static_cast<std::size_t>(c)] : v * ub[static_cast<std::size_t>(c)];
        lb[k] = std::min(lo, r.rhs);
      }
    }
    model_lb = lb;
    model_ub = ub;

    head.resize(static_cast<std::size_t>(m));
    pos.assign(static_cast<std::size_t>(N), -1);
    for (int i = 0; i < m; ++i) {
      head[static_cast<std::size_t>(i)] = n + i;
      pos[static_cast<std::size_t>(n + i)] = i;
    }
    at_ub.assign(static_cast<std::size_t>(N), 0);
    x.assign(static_cast<std::size_t>(N), 0.0);
    d = cost;
    for (int j = 0; j < n; ++j) at_ub[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(j)] < 0;
    alpha_row.assign(static_cast<std::size_t>(N), 0.0);
    weight.assign(static_cast<std::size_t>(m), 1.0);
    true_cost = cost;
  }

  // ---- linear algebra -----------------------------------------------------

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j >= n) {
      f(j - n, -1.0);
      return;
    }
    for (int k = cstart[static_cast<std::size_t>(j)]; k < cstart[static_cast<std::size_t>(j) + 1]; ++k)
      f(cidx[static_cast<std::size_t>(k)], cval[static_cast<std::size_t>(k)]);
  }

  bool factorize() {
    etas.clear();
    factored = false;
    if (m == 0) {
      factored = true;
      return true;
    }
    std::vector<Eigen::Triplet<double, int>> trip;
    for (int r = 0; r < m; ++r)
      for_column(head[static_cast<std::size_t>(r)], [&](int i, double v) { trip.emplace_back(i, r, v); });
    SpMat B(m, m);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    lu.lu->analyzePattern(B);
    lu.lu->factorize(B);
    factored = lu.lu->info() == Eigen::Success;
    return factored;
  }

  void slack_basis() {
    std::fill(weight.begin(), weight.end(), 1.0);
    for (int j : head) pos[static_cast<std::size_t>(j)] = -1;
    for (int i = 0; i < m; ++i) {
      head[static_cast<std::size_t>(i)] = n + i;
      pos[static_cast<std::size_t>(n + i)] = i;
    }
  }

  void refactor() {
    if (!factorize()) {
      slack_basis();
      if (!factorize()) throw std::runtime_error("lp: slack basis factorization failed");
    }
  }

  // B z = a
  Vec ftran(Vec a) const {
    Vec z = lu.lu->solve(a);
    for (const auto& e : etas) {
      const double zr = z[e.r] / e.pivot;
      for (std::size_t k = 0; k < e.idx.size(); ++k) z[e.idx[k]] -= e.val[k] * zr;
      z[e.r] = zr;
    }
    return z;
  }

  // B^T y = a
  Vec btran(Vec a) const {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = a[it->r];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * a[it->idx[k]];
      a[it->r] = s / it->pivot;
    }
    return lu.lu->transpose().solve(a);
  }

  Vec column(int j) const {
    Vec a = Vec::Zero(m);
    for_column(j, [&](int i, double v) { a[i] += v; });
    return a;
  }

  // ---- state --------------------------------------------------------------

  double bound_value(int j) const {
    return at_ub[static_cast<std::size_t>(j)] ? ub[static_cast<std::size_t>(j)] : lb[static_cast<std::size_t>(j)];
  }

  void compute_duals() {
    if (m == 0) {
      d = cost;
      return;
    }
    Vec cb(m);
    for (int r = 0; r < m; ++r) cb[r] = cost[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])];
    const Vec y = btran(cb);
    for (int j = 0; j < n + m; ++j) {
      if (pos[static_cast<std::size_t>(j)] >= 0) {
        d[static_cast<std::size_t>(j)] = 0;
        continue;
      }
      double s = cost[static_cast<std::size_t>(j)];
      for_column(j, [&](int i, double v) { s -= y[i] * v; });
      d[static_cast<std::size_t>(j)] = s;
    }
  }

  // Nonbasic columns go to the bound their reduced cost prefers; near-zero
  // reduced costs keep their side.
  void place_nonbasics() {
    for (int j = 0; j < n + m; ++j) {
      const auto k = static_cast<std::size_t>(j);
      if (pos[k] >= 0) continue;
      if (d[k] > opt.dual_tol)
        at_ub[k] = 0;
      else if (d[k] < -opt.dual_tol)
        at_ub[k] = 1;
      x[k] = bound_value(j);
    }
  }

  void compute_basics() {
    if (m == 0) return;
    Vec v = Vec::Zero(m);
    for (int j = 0; j < n + m; ++j) {
      if (pos[static_cast<std::size_t>(j)] >= 0) continue;
      const double xj = x[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      for_column(j, [&](int i, double a) { v[i] += a * xj; });
    }
    const Vec xb = ftran(-v);
    for (int r = 0; r < m; ++r) x[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])] = xb[r];
  }

  double infeasibility(int j) const {
    const auto k = static_cast<std::size_t>(j);
    if (x[k] < lb[k] - opt.primal_tol) return lb[k] - x[k];
    if (x[k] > ub[k] + opt.primal_tol) return x[k] - ub[k];
    return 0.0;
  }

  // ---- the dual simplex ---------------------------------------------------

  // Small random cost shifts in the direction each nonbasic column already
  // prefers; breaks the heavy dual degeneracy of the flow rows. Removed
  // before optimality is declared.
  void perturb() {
    std::uint64_t state = 0x2545f4914f6cdd1dULL;
    for (int j = 0; j < n + m; ++j) {
      const auto k = static_cast<std::size_t>(j);
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      const double u = static_cast<double>(state >> 11) * 0x1.0p-53;
      const double delta = 1e-6 * (1.0 + std::abs(true_cost[k])) * (1.0 + u);
      if (lb[k] == ub[k]) {
        cost[k] = true_cost[k];
      } else if (pos[k] >= 0) {
        cost[k] = true_cost[k] + (u < 0.5 ? delta : -delta);
      } else {
        cost[k] = true_cost[k] + (at_ub[k] ? -delta : delta);
      }
    }
  }

  LpStatus run(const Deadline& deadline) {
    LpStatus st = iterate(deadline);
    if (cost != true_cost) {
      cost = true_cost;
      compute_duals();
      if (st == LpStatus::optimal) {
        fix_dual_infeasibilities();
        st = iterate(deadline, false);
      }
    }
    return st;
  }

  LpStatus iterate(const Deadline& deadline, bool allow_perturb = true) {
    if (!factored) refactor();
    if (allow_perturb && m > 0) perturb();
    compute_duals();
    place_nonbasics();
    compute_basics();
    int streak = 0;
    bool bland = false;
    long local = 0;
    for (;;) {
      if ((local & 31) == 31 && deadline.expired()) return LpStatus::time_limit;
      if (local >= opt.iteration_limit) return LpStatus::iteration_limit;

      // leaving row
      int r = -1;
      double worst = 0.0;
      for (int i = 0; i < m; ++i) {
        const int j = head[static_cast<std::size_t>(i)];
        const double inf = infeasibility(j);
        if (inf <= 0.0) continue;
        if (bland) {
          if (r < 0 || j < head[static_cast<std::size_t>(r)]) r = i;
        } else if (inf * inf > worst * weight[static_cast<std::size_t>(i)]) {
          worst = inf * inf / weight[static_cast<std::size_t>(i)];
          r = i;
        }
      }
      if (r < 0) {
        if (fix_dual_infeasibilities()) continue;
        return LpStatus::optimal;
      }

      const int p = head[static_cast<std::size_t>(r)];
      const auto pk = static_cast<std::size_t>(p);
      const bool to_upper = x[pk] > ub[pk];
      const double s = to_upper ? 1.0 : -1.0;

      // pivot row alpha_r = e_r^T B^-1 [A -I]
      Vec er = Vec::Zero(m);
      er[r] = 1.0;
      const Vec rho = btran(er);
      compute_alpha_row(rho);

      cands.clear();
      for (int j : touched) {
        const auto k = static_cast<std::size_t>(j);
        if (pos[k] >= 0 || lb[k] == ub[k]) continue;
        const double a = s * alpha_row[k];
        if (!at_ub[k] && a > opt.pivot_tol)
          cands.push_back({j, std::max(d[k], 0.0) / a, a});
        else if (at_ub[k] && a < -opt.pivot_tol)
          cands.push_back({j, std::max(-d[k], 0.0) / -a, -a});
      }
      if (cands.empty()) {
        clear_alpha_row();
        return LpStatus::infeasible;
      }

      std::vector<int> flips;
      int q = choose_entering(bland, std::abs(x[pk] - (to_upper ? ub[pk] : lb[pk])), flips);
      const auto qk = static_cast<std::size_t>(q);
      const double alpha_rq = alpha_row[qk];
      const double theta = d[qk] / alpha_rq;

      Vec aq = ftran(column(q));
      if (!etas.empty() && std::abs(aq[r] - alpha_rq) > 1e-7 * (1.0 + std::abs(alpha_rq))) {
        // row and column disagree: refresh the factorization and retry
        clear_alpha_row();
        refactor();
        compute_duals();
        place_nonbasics();
        compute_basics();
        ++local;
        continue;
      }

      update_weights(r, rho, aq);

      // bound flips passed by the long step
      if (!flips.empty()) {
        Vec delta = Vec::Zero(m);
        for (int j : flips) {
          const auto k = static_cast<std::size_t>(j);
          const double before = x[k];
          at_ub[k] = !at_ub[k];
          x[k] = bound_value(j);
          const double step = x[k] - before;
          for_column(j, [&](int i, double a) { delta[i] += a * step; });
        }
        const Vec dxb = ftran(delta);
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(head[static_cast<std::size_t>(i)])] -= dxb[i];
      }

      // primal step: p reaches its violated bound, q enters
      const double target = to_upper ? ub[pk] : lb[pk];
      const double t = (x[pk] - target) / aq[r];
      for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(head[static_cast<std::size_t>(i)])] -= t * aq[i];
      x[qk] += t;
      x[pk] = target;

      // dual step
      for (int j : touched) {
        const auto k = static_cast<std::size_t>(j);
        if (pos[k] < 0) d[k] -= theta * alpha_row[k];
      }
      d[qk] = 0.0;
      d[pk] = -theta;
      clear_alpha_row();

      // basis change
      head[static_cast<std::size_t>(r)] = q;
      pos[qk] = r;
      pos[pk] = -1;
      at_ub[pk] = to_upper;
      Eta e;
      e.r = r;
      e.pivot = aq[r];
      for (int i = 0; i < m; ++i)
        if (i != r && aq[i] != 0.0) {
          e.idx.push_back(i);
          e.val.push_back(aq[i]);
        }
      etas.push_back(std::move(e));

      ++iters;
      ++local;
      if (std::abs(theta) < 1e-12) {
        if (++streak > opt.degenerate_streak) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      if (static_cast<int>(etas.size()) >= opt.refactor_every) {
        refactor();
        compute_duals();
        place_nonbasics();
        compute_basics();
      }
    }
  }

  // Dual steepest-edge update for a pivot on row r with column aq = B^-1 a_q
  // and rho = B^-T e_r, both relative to the outgoing basis.
  void update_weights(int r, const Vec& rho, const Vec& aq) {
    const double wr = rho.squaredNorm();
    const Vec tau = ftran(rho);
    const double piv = aq[r];
    for (int i = 0; i < m; ++i) {
      if (i == r || aq[i] == 0.0) continue;
      const double ratio = aq[i] / piv;
      auto& w = weight[static_cast<std::size_t>(i)];
      w = std::max(w - 2.0 * ratio * tau[i] + ratio * ratio * wr, ratio * ratio + 1e-12);
    }
    weight[static_cast<std::size_t>(r)] = std::max(wr / (piv * piv), 1e-12);
  }

  void compute_alpha_row(const Vec& rho) {
    touched.clear();
    for (int i = 0; i < m; ++i) {
      const double ri = rho[i];
      if (ri == 0.0) continue;
      for (int k = rstart[static_cast<std::size_t>(i)]; k < rstart[static_cast<std::size_t>(i) + 1]; ++k) {
        const int j = ridx[static_cast<std::size_t>(k)];
        auto& slot = alpha_row[static_cast<std::size_t>(j)];
        if (slot == 0.0) touched.push_back(j);
        slot += ri * rval[static_cast<std::size_t>(k)];
        if (slot == 0.0) slot = 1e-300;  // keep it marked as touched
      }
      const int lj = n + i;
      alpha_row[static_cast<std::size_t>(lj)] = -ri;
      touched.push_back(lj);
    }
  }

  void clear_alpha_row() {
    for (int j : touched) alpha_row[static_cast<std::size_t>(j)] = 0.0;
    touched.clear();
  }

  // Bound-flipping ratio test. Breakpoints are passed while the dual slope
  // stays positive; passed columns flip to their opposite bound.
  int choose_entering(bool bland, double slope, std::vector<int>& flips) {
    if (bland) {
      const Candidate* best = nullptr;
      for (const auto& c : cands)
        if (!best || c.ratio < best->ratio - 1e-12 || (c.ratio <= best->ratio + 1e-12 && c.j < best->j)) best = &c;
      return best->j;
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.ratio < b.ratio || (a.ratio == b.ratio && a.j < b.j);
    });
    std::size_t k = 0;
    for (; k + 1 < cands.size(); ++k) {
      const auto jk = static_cast<std::size_t>(cands[k].j);
      const double drop = cands[k].alpha * (ub[jk] - lb[jk]);
      if (slope - drop <= 0.0) break;
      slope -= drop;
    }
    // among near-ties at the stopping ratio prefer the largest pivot
    std::size_t best = k;
    for (std::size_t i = k + 1; i < cands.size() && cands[i].ratio <= cands[k].ratio + 1e-9; ++i)
      if (cands[i].alpha > cands[best].alpha) best = i;
    for (std::size_t i = 0; i < k; ++i) flips.push_back(cands[i].j);
    return cands[best].j;
  }

  // With all columns boxed a wrong-signed reduced cost is repaired by moving
  // the column to its other bound. Returns whether anything moved.
  bool fix_dual_infeasibilities() {
    bool moved = false;
    for (int j = 0; j < n + m; ++j) {
      const auto k = static_cast<std::size_t>(j);
      if (pos[k] >= 0 || lb[k] == ub[k]) continue;
      if ((!at_ub[k] && d[k] < -opt.dual_tol) || (at_ub[k] && d[k] > opt.dual_tol)) {
        at_ub[k] = !at_ub[k];
        x[k] = bound_value(j);
        moved = true;
      }
    }
    if (moved) compute_basics();
    return moved;
  }

  void snap() {
    for (int j = 0; j < n + m; ++j) {
      const auto k = static_cast<std::size_t>(j);
      if (std::abs(x[k] - lb[k]) <= opt.snap_tol) x[k] = lb[k];
      if (std::abs(x[k] - ub[k]) <= opt.snap_tol) x[k] = ub[k];
    }
  }

  double objective() const {
    double z = 0;
    for (int j = 0; j < n; ++j) z -= cost[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    return z;
  }
};

LpSolver::LpSolver(const Model& model, LpOptions opt) : impl_(std::make_unique<Impl>(model, opt)) {}
LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

LpSolver::LpSolver(const LpSolver& other) : impl_(std::make_unique<Impl>(*other.impl_)) {
  impl_->factored = false;  // the factorization object is rebuilt lazily
}

LpSolver& LpSolver::operator=(const LpSolver& other) {
  if (this != &other) {
    impl_ = std::make_unique<Impl>(*other.impl_);
    impl_->factored = false;
  }
  return *this;
}

int LpSolver::cols() const { return impl_->n; }
int LpSolver::rows() const { return impl_->m; }

void LpSolver::set_bounds(int col, double lb, double ub) {
  if (col < 0 || col >= impl_->n) throw std::out_of_range("lp column out of range");
  if (lb > ub) throw std::invalid_argument("lp bounds cross");
  impl_->lb[static_cast<std::size_t>(col)] = lb;
  impl_->ub[static_cast<std::size_t>(col)] = ub;
}

double LpSolver::lower(int col) const { return impl_->lb[static_cast<std::size_t>(col)]; }
double LpSolver::upper(int col) const { return impl_->ub[static_cast<std::size_t>(col)]; }

void LpSolver::reset_bounds() {
  impl_->lb = impl_->model_lb;
  impl_->ub = impl_->model_ub;
}

LpStatus LpSolver::solve(const Deadline& deadline) {
  impl_->status = impl_->run(deadline);
  if (impl_->status == LpStatus::optimal) impl_->snap();
  return impl_->status;
}

LpStatus LpSolver::status() const { return impl_->status; }
double LpSolver::objective() const { return impl_->objective(); }
double LpSolver::value(int col) const { return impl_->x[static_cast<std::size_t>(col)]; }

std::vector<double> LpSolver::primal() const {
  return {impl_->x.begin(), impl_->x.begin() + impl_->n};
}

double LpSolver::reduced_cost(int col) const {
  if (impl_->pos[static_cast<std::size_t>(col)] >= 0) return 0.0;
  return -impl_->d[static_cast<std::size_t>(col)];
}

bool LpSolver::is_basic(int col) const { return impl_->pos[static_cast<std::size_t>(col)] >= 0; }

LpBasis LpSolver::basis() const { return {impl_->head, impl_->at_ub}; }

void LpSolver::set_basis(const LpBasis& b) {
  auto& s = *impl_;
  if (b.head.size() != static_cast<std::size_t>(s.m) || b.at_upper.size() != s.at_ub.size())
    throw std::invalid_argument("basis does not match the model");
  std::fill(s.pos.begin(), s.pos.end(), -1);
  s.head = b.head;
  for (int r = 0; r < s.m; ++r) s.pos[static_cast<std::size_t>(s.head[static_cast<std::size_t>(r)])] = r;
  s.at_ub = b.at_upper;
  std::fill(s.weight.begin(), s.weight.end(), 1.0);
  s.factored = false;
}

long LpSolver::iterations() const { return impl_->iters; }

double LpSolver::max_row_violation() const {
  const auto& s = *impl_;
  double worst = 0;
  for (int i = 0; i < s.m; ++i) {
    double act = 0;
    for (int k = s.rstart[static_cast<std::size_t>(i)]; k < s.rstart[static_cast<std::size_t>(i) + 1]; ++k)
      act += s.rval[static_cast<std::size_t>(k)] * s.x[static_cast<std::size_t>(s.ridx[static_cast<std::size_t>(k)])];
    const auto li = static_cast<std::size_t>(s.n + i);
    worst = std::max({worst, s.lb[li] - act, act - s.ub[li]});
  }
  return worst;
}

double LpSolver::max_bound_violation() const {
  const auto& s = *impl_;
  double worst = 0;
  for (int j = 0; j < s.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    worst = std::max({worst, s.lb[k] - s.x[k], s.x[k] - s.ub[k]});
  }
  return worst;
}

LpSolution solve_relaxation(const Model& model, const std::vector<std::pair<CustomerId, int>>& fixings, LpOptions opt) {
  LpSolver lp(model, opt);
  for (const auto& [c, v] : fixings) {
    if (c < 1 || c > model.customer_count || model.column(c) < 0)
      throw std::invalid_argument("fixing references unknown customer " + std::to_string(c));
    if (v != 0 && v != 1) throw std::invalid_argument("fixings must be 0 or 1");
    lp.set_bounds(model.column(c), v, v);
  }
  LpSolution s;
  s.status = lp.solve();
  s.objective = lp.objective();
  s.x = lp.primal();
  s.iterations = lp.iterations();
  return s;
}

}  // namespace carshare
