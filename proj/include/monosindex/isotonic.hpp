#pragma once

#include <span>
#include <vector>

#include "monosindex/model.hpp"

namespace monosindex {

/// Weighted isotonic (nondecreasing) least squares by pool-adjacent-violators.
/// Runs in linear time. Throws InvalidArgument on mismatched lengths or a
/// nonpositive weight.
std::vector<double> pava(std::span<const double> values,
                         std::span<const double> weights);

/// Unit-weight overload.
std::vector<double> pava(std::span<const double> values);

/// Nondecreasing right-continuous step function.
///
/// levels[0] applies below taus[0], levels[j] on [taus[j-1], taus[j]), and
/// levels.back() from taus.back() on. Outside the data range the function is
/// constant.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> taus, std::vector<double> levels);

  double operator()(double u) const;

  const std::vector<double>& taus() const { return taus_; }
  const std::vector<double>& levels() const { return levels_; }
  std::size_t jump_count() const { return taus_.size(); }
  double jump_size(std::size_t j) const { return levels_[j + 1] - levels_[j]; }
  /// Sum of all jump sizes.
  double total_variation() const;

 private:
  std::vector<double> taus_;
  std::vector<double> levels_;
};

inline double eval_step(const StepFunction& f, double u) { return f(u); }

/// Isotonic fit on an already projected sample. `fitted` is in sorted
/// (projection) order.
struct MonotoneFit {
  StepFunction link;
  std::vector<double> fitted;
};

/// Exact ties in the projection are pooled with summed weights before PAVA.
MonotoneFit fit_monotone_projection(const IndexProjection& projection);

/// The profile least squares link estimate for direction alpha.
StepFunction fit_monotone_ls(const Sample& sample, const Vector& alpha);

}  // namespace monosindex
