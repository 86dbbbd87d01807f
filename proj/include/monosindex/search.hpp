#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "monosindex/model.hpp"

namespace monosindex {

using Objective = std::function<double(const Vector&)>;

struct SearchOptions {
  std::size_t max_evals = 5000;
  double initial_step = 0.1;
  /// Stop once the simplex diameter (Nelder-Mead) or the pattern step
  /// (Hooke-Jeeves) falls below this.
  double tolerance = 1e-8;
  std::uint64_t seed = 0;

  void validate(std::size_t dim) const;
};

struct SearchResult {
  Vector argmin;
  double value = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Derivative-free simplex search (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). The initial simplex is start plus initial_step along each
/// axis. Never returns a point worse than start. NaN values are treated as
/// +infinity, so discontinuous or partially undefined objectives are fine.
SearchResult nelder_mead(const Objective& objective, const Vector& start,
                         const SearchOptions& opts = {});

/// Pattern search: coordinate-wise exploratory moves of the current step,
/// pattern moves along successful directions, step halving on failure.
SearchResult hooke_jeeves(const Objective& objective, const Vector& start,
                          const SearchOptions& opts = {});

/// `count` i.i.d. standard normal d-vectors, each scaled to unit length.
std::vector<Vector> random_unit_starts(std::size_t d, std::size_t count,
                                       std::uint64_t seed);

}  // namespace monosindex
