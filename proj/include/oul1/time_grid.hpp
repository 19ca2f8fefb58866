#pragma once

#include <stdexcept>

#include "oul1/types.hpp"

namespace oul1 {

/// Uniform grid t_i = i*T/n, i = 0..n, on the observation window [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, Index steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
  }

  double horizon() const { return horizon_; }
  Index steps() const { return steps_; }
  Index size() const { return steps_ + 1; }
  double dt() const { return horizon_ / static_cast<double>(steps_); }
  double point(Index i) const { return static_cast<double>(i) * horizon_ / static_cast<double>(steps_); }

  Vector points() const {
    Vector t(size());
    for (Index i = 0; i < size(); ++i) t[i] = point(i);
    return t;
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.horizon_ == b.horizon_ && a.steps_ == b.steps_;
  }
  friend bool operator!=(const TimeGrid& a, const TimeGrid& b) { return !(a == b); }

 private:
  double horizon_;
  Index steps_;
};

}  // namespace oul1
