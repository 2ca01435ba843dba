#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace carshare {

/// Segment tree over an integer array answering prefix sums and minimum
/// prefix sums over an index range, with point updates.
///
/// Each node stores the sum of its leaves and the minimum running sum inside
/// it. Queries descend once from the root; `reads()` counts the nodes whose
/// aggregates a query consumed, which is at most 2*ceil(log2 n) + 2.
template <typename T = std::int64_t>
class PrefixMinTree {
 public:
  static constexpr T kNone = std::numeric_limits<T>::max() / 4;

  PrefixMinTree() = default;

  explicit PrefixMinTree(const std::vector<T>& values) { assign(values); }

  void assign(const std::vector<T>& values) {
    n_ = values.size();
    size_ = 1;
    levels_ = 0;
    while (size_ < n_) {
      size_ <<= 1;
      ++levels_;
    }
    sum_.assign(2 * size_, T{0});
    min_.assign(2 * size_, kNone);
    for (std::size_t i = 0; i < n_; ++i) {
      sum_[size_ + i] = values[i];
      min_[size_ + i] = values[i];
    }
    for (std::size_t v = size_ - 1; v >= 1; --v) pull(v);
  }

  std::size_t size() const { return n_; }
  int levels() const { return levels_; }

  T value(std::size_t i) const { return sum_[size_ + i]; }

  void add(std::size_t i, T delta) { set(i, value(i) + delta); }

  void set(std::size_t i, T x) {
    assert(i < n_);
    std::size_t v = size_ + i;
    sum_[v] = x;
    min_[v] = x;
    for (v >>= 1; v >= 1; v >>= 1) pull(v);
  }

  /// Sum of elements [0, i].
  T prefix(std::size_t i) const {
    assert(i < n_);
    ++queries_;
    T acc = 0;
    std::size_t v = 1, lo = 0, span = size_;
    while (span > 1) {
      span >>= 1;
      if (i >= lo + span) {
        acc += sum_[2 * v];
        touch();
        v = 2 * v + 1;
        lo += span;
      } else {
        v = 2 * v;
      }
    }
    touch();
    return acc + sum_[v];
  }

  /// min over k in [l, r] of prefix(k).
  T min_prefix(std::size_t l, std::size_t r) const {
    assert(l <= r && r < n_);
    ++queries_;
    return descend(1, 0, size_ - 1, l, r, 0).min;
  }

  /// Minimum prefix sum over the whole array (kNone when empty).
  T min_prefix() const {
    if (n_ == 0) return kNone;
    ++queries_;
    touch();
    return min_[1];
  }

  T total() const { return n_ == 0 ? T{0} : sum_[1]; }

  /// Smallest index whose prefix sum is below `bound`, or npos.
  std::size_t first_below(T bound) const {
    if (n_ == 0 || min_[1] >= bound) return npos;
    std::size_t v = 1;
    T acc = 0;
    while (v < size_) {
      if (acc + min_[2 * v] < bound) {
        v = 2 * v;
      } else {
        acc += sum_[2 * v];
        v = 2 * v + 1;
      }
    }
    return v - size_;
  }

  /// Largest index whose prefix sum is below `bound`, or npos.
  std::size_t last_below(T bound) const {
    if (n_ == 0 || min_[1] >= bound) return npos;
    std::size_t v = 1;
    T acc = 0;
    while (v < size_) {
      const T right_acc = acc + sum_[2 * v];
      if (min_[2 * v + 1] != kNone && right_acc + min_[2 * v + 1] < bound) {
        acc = right_acc;
        v = 2 * v + 1;
      } else {
        v = 2 * v;
      }
    }
    return v - size_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // instrumentation
  std::uint64_t reads() const { return reads_; }
  std::uint64_t queries() const { return queries_; }
  void reset_counters() const {
    reads_ = 0;
    queries_ = 0;
  }

  friend bool operator==(const PrefixMinTree& a, const PrefixMinTree& b) {
    return a.n_ == b.n_ && a.sum_ == b.sum_;
  }

 private:
  struct Part {
    T min;
    T sum;  // sum of the whole node range, valid only when `full_sum`
  };

  void pull(std::size_t v) {
    sum_[v] = sum_[2 * v] + sum_[2 * v + 1];
    const T right = min_[2 * v + 1] == kNone ? kNone : sum_[2 * v] + min_[2 * v + 1];
    min_[v] = std::min(min_[2 * v], right);
  }

  void touch() const { ++reads_; }

  // Node v covers [nl, nr] and intersects [l, r]; acc is the sum of all leaves
  // left of nl. Returns the minimum prefix inside [l, r] and the node's total
  // sum. The sum is only consumed by the caller when the node lies entirely
  // at or before r, in which case every leaf in it has been accounted for.
  Part descend(std::size_t v, std::size_t nl, std::size_t nr, std::size_t l, std::size_t r, T acc) const {
    if (l <= nl && nr <= r) {
      touch();
      return {min_[v] == kNone ? kNone : acc + min_[v], sum_[v]};
    }
    const std::size_t mid = nl + (nr - nl) / 2;
    T best = kNone;
    T left_sum;
    if (l <= mid) {
      Part p = descend(2 * v, nl, mid, l, r, acc);
      best = p.min;
      left_sum = p.sum;
    } else {
      touch();  // left child lies entirely before l
      left_sum = sum_[2 * v];
    }
    T right_sum = 0;
    if (r > mid) {
      Part p = descend(2 * v + 1, mid + 1, nr, l, r, acc + left_sum);
      best = std::min(best, p.min);
      right_sum = p.sum;
    }
    return {best, left_sum + right_sum};
  }

  std::size_t n_ = 0;
  std::size_t size_ = 1;
  int levels_ = 0;
  std::vector<T> sum_;
  std::vector<T> min_;
  mutable std::uint64_t reads_ = 0;
  mutable std::uint64_t queries_ = 0;
};

}  // namespace carshare
