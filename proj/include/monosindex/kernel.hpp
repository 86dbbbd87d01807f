#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "monosindex/isotonic.hpp"

namespace monosindex {

/// Triweight kernel (35/32)(1 - u^2)^3 on [-1, 1], zero elsewhere.
double kernel_eval(double u);

/// h = constant * data_range * n^(-1/7).
struct BandwidthRule {
  double constant = 0.5;
  static constexpr double exponent = -1.0 / 7.0;
};

double default_bandwidth(std::size_t n, double data_range,
                         const BandwidthRule& rule = {});

/// Kernel-smoothed derivative of a monotone step function:
/// (1/h) sum_j K((u - tau_j) / h) * jump_j. Nonnegative for nondecreasing
/// steps; depends only on the jumps.
double derivative_estimate(const StepFunction& step, double u, double h);

/// derivative_estimate at each point of `us` (any order).
std::vector<double> derivative_estimates(const StepFunction& step,
                                         std::span<const double> us, double h);

}  // namespace monosindex
