#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "carshare/deadline.hpp"
#include "carshare/feasibility.hpp"
#include "carshare/lp.hpp"
#include "carshare/model.hpp"
#include "carshare/rng.hpp"

namespace carshare {

/// A neighbor expressed as the customers leaving and entering the solution.
struct Move {
  std::vector<CustomerId> out;
  std::vector<CustomerId> in;
  int delta() const { return static_cast<int>(in.size()) - static_cast<int>(out.size()); }
  friend bool operator==(const Move&, const Move&) = default;
};

enum class NeighborMode : std::uint8_t { sample, exhaust };

// Neighborhoods, numbered 1..8:
//   1 add one, 2 add two, 3 add three, 4 drop one, 5 drop two, 6 drop three,
//   7 swap one for one, 8 swap one for two.
// 2, 3, 5 and 6 are minimal: no smaller part of the move is feasible alone.
// All take a feasible index and leave it as they found it.

/// Calls `visit` for every neighbor in N_k until it returns false. N3 and N6
/// enumerate all triples, so only use them this way on small instances.
void for_each_neighbor(DisplacementIndex& idx, int k, const std::function<bool(const Move&)>& visit);
std::vector<Move> enumerate_neighbors(DisplacementIndex& idx, int k);
bool has_neighbor(DisplacementIndex& idx, int k, SplitMix64& rng);

/// Uniform draw from N_k. For N3 and N6 in sample mode, tuples are drawn by
/// rejection with at most 50n attempts, unless the tuple space is that small,
/// in which case it is enumerated.
std::optional<Move> random_neighbor(DisplacementIndex& idx, int k, SplitMix64& rng,
                                    NeighborMode mode = NeighborMode::sample);

std::optional<Move> neighbor_increase(DisplacementIndex& idx, int k, SplitMix64& rng,
                                      NeighborMode mode = NeighborMode::sample);
std::optional<Move> neighbor_decrease(DisplacementIndex& idx, int k, SplitMix64& rng,
                                      NeighborMode mode = NeighborMode::sample);
std::optional<Move> neighbor_exchange(DisplacementIndex& idx, int take, SplitMix64& rng,
                                      NeighborMode mode = NeighborMode::sample);

/// Applies a move; throws std::logic_error (leaving the index unchanged) if the
/// result is infeasible.
void apply_move(DisplacementIndex& idx, const Move& m);

struct LocalSearchResult {
  int moves = 0;
  bool interrupted = false;
};

/// Exhausts N2, then makes one N1 move, or one N8 move if N1 is empty;
/// repeats until N1, N2 and N8 are all empty or the deadline passes.
LocalSearchResult local_search(DisplacementIndex& idx, SplitMix64& rng, const Deadline& deadline = Deadline::never());

/// Order-independent hash of a customer set.
std::uint64_t fingerprint(const Solution& s);
std::uint64_t fingerprint_toggle(std::uint64_t fp, CustomerId c);

/// FIFO of solution fingerprints with capacity floor(tenure * n).
class TabuList {
 public:
  explicit TabuList(std::size_t capacity) : capacity_(capacity) {}
  static std::size_t capacity_for(double tenure, int n);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return queue_.size(); }
  bool contains(std::uint64_t fp) const;
  void push(std::uint64_t fp);

 private:
  std::size_t capacity_;
  std::deque<std::uint64_t> queue_;
  std::unordered_map<std::uint64_t, int> count_;
};

struct HeuristicOptions {
  double alpha = 0.8;
  double tenure = 0.046;
  double time_limit = 600.0;
  std::uint64_t seed = 0;
  long max_iterations = -1;  // -1: until the time limit
  int target = -1;           // stop once this value is reached (e.g. a proven bound)
};

struct HeuristicReport {
  std::string method;
  Solution best;
  int construction_value = 0;
  double bound = 0.0;  // floored root relaxation value, n if it was not solved
  long iterations = 0;
  long improvements = 0;
  double elapsed = 0.0;
  bool interrupted = false;
};

/// Greedy randomized construction driven by the LP relaxation of `model`.
/// Starts from the customers at >= 1/2; while they are not jointly feasible,
/// evaluates the relaxation with each candidate dropped, removes one drawn
/// from those whose value is within alpha of the best, then removes every
/// customer that relaxation puts below 1/2. The root relaxation is solved
/// once and reused across calls.
class GraspConstructor {
 public:
  GraspConstructor(const Instance& inst, const Model& model, const Deadline& deadline = Deadline::never());
  Solution construct(double alpha, SplitMix64& rng, const Deadline& deadline = Deadline::never(),
                     bool* interrupted = nullptr);
  double root_bound() const { return root_bound_; }
  bool root_solved() const { return root_solved_; }
  long lp_solves() const { return lp_solves_; }

 private:
  const Instance& inst_;
  const Model& model_;
  LpSolver lp_;
  LpBasis root_basis_;
  std::vector<double> root_x_;
  double root_bound_ = 0.0;
  bool root_solved_ = false;
  long lp_solves_ = 0;
};

Solution grasp_construct(const Instance& inst, const Model& model, double alpha, SplitMix64& rng);

HeuristicReport grasp(const Instance& inst, const Model& model, const HeuristicOptions& opt);
HeuristicReport vns(const Instance& inst, const Model& model, const HeuristicOptions& opt);
HeuristicReport tabu_search(const Instance& inst, const Model& model, const HeuristicOptions& opt);

}  // namespace carshare
