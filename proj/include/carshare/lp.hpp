#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "carshare/deadline.hpp"
#include "carshare/model.hpp"

namespace carshare {

enum class LpStatus : std::uint8_t { optimal, infeasible, iteration_limit, time_limit };
const char* to_string(LpStatus s);

struct LpOptions {
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  double pivot_tol = 1e-9;
  double snap_tol = 1e-9;
  int refactor_every = 100;
  long iteration_limit = 5'000'000;  // per solve
  int degenerate_streak = 50;  // consecutive zero steps before switching to Bland's rule
};

/// Basis of the solver's internal standard form (structural columns followed
/// by one logical per row). Opaque outside the solver.
struct LpBasis {
  std::vector<int> head;
  std::vector<std::uint8_t> at_upper;
  bool empty() const { return head.empty() && at_upper.empty(); }
};

/// Bounded dual simplex for the relaxation of a Model. Every structural column
/// is boxed and each row gets a boxed logical, so any basis can be made dual
/// feasible by moving nonbasic columns to the bound matching their reduced
/// cost. That makes re-solves after bound changes (fixings, branching) start
/// from the previous basis without a phase one.
class LpSolver {
 public:
  explicit LpSolver(const Model& model, LpOptions opt = {});
  ~LpSolver();
  LpSolver(const LpSolver& other);
  LpSolver& operator=(const LpSolver& other);
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  int cols() const;
  int rows() const;

  void set_bounds(int col, double lb, double ub);
  double lower(int col) const;
  double upper(int col) const;
  /// Restores every column to the model bounds.
  void reset_bounds();

  LpStatus solve(const Deadline& deadline = Deadline::never());
  LpStatus status() const;

  /// Objective in the model's (maximization) sense.
  double objective() const;
  double value(int col) const;
  std::vector<double> primal() const;
  /// Objective change per unit increase of a nonbasic column (max sense).
  double reduced_cost(int col) const;
  bool is_basic(int col) const;

  LpBasis basis() const;
  void set_basis(const LpBasis& b);

  long iterations() const;
  /// Residuals of the current point, for checks.
  double max_row_violation() const;
  double max_bound_violation() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  long iterations = 0;
};

/// One-shot relaxation with customer columns clamped to the given values.
LpSolution solve_relaxation(const Model& model, const std::vector<std::pair<CustomerId, int>>& fixings = {},
                            LpOptions opt = {});

}  // namespace carshare
