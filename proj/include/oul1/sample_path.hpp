#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "oul1/time_grid.hpp"
#include "oul1/types.hpp"

namespace oul1 {

/// Values of a scalar process on a TimeGrid. The grid travels with the values
/// so integrators and estimators can reject mismatched inputs.
struct SamplePath {
  TimeGrid grid;
  Vector values;

  SamplePath(TimeGrid g, Vector v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("SamplePath: value count does not match grid size");
  }

  double sup_abs() const { return values.cwiseAbs().maxCoeff(); }
  double sup() const { return values.maxCoeff(); }
};

inline void require_same_grid(const SamplePath& a, const SamplePath& b, const char* what) {
  if (a.grid != b.grid) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

/// Restrict a path to every `factor`-th grid point (factor must divide the step count).
inline SamplePath subsample(const SamplePath& path, Index factor) {
  if (factor < 1 || path.grid.steps() % factor != 0)
    throw std::invalid_argument("subsample: factor must divide the step count");
  const Index coarse_steps = path.grid.steps() / factor;
  Vector v(coarse_steps + 1);
  for (Index i = 0; i <= coarse_steps; ++i) v[i] = path.values[i * factor];
  return SamplePath(TimeGrid(path.grid.horizon(), coarse_steps), std::move(v));
}

}  // namespace oul1
