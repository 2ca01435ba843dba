#pragma once

#include <chrono>

namespace carshare {

/// Wall-clock budget shared by the solvers; cheap to copy and poll.
class Deadline {
 public:
  using clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(clock::time_point::max()); }
  static Deadline after(double seconds) {
    if (seconds <= 0) return Deadline(clock::now());
    if (seconds > 1e8) return never();
    return Deadline(clock::now() + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(seconds)));
  }

  bool expired() const { return at_ != clock::time_point::max() && clock::now() >= at_; }
  bool unlimited() const { return at_ == clock::time_point::max(); }
  double remaining() const {
    if (unlimited()) return 1e300;
    return std::chrono::duration<double>(at_ - clock::now()).count();
  }
  /// The earlier of this deadline and one `seconds` from now.
  Deadline capped(double seconds) const {
    Deadline d = after(seconds);
    return d.at_ < at_ ? d : *this;
  }

 private:
  explicit Deadline(clock::time_point at) : at_(at) {}
  clock::time_point at_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace carshare
