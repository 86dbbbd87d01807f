#include "monosindex/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "monosindex/errors.hpp"

namespace monosindex {

double kernel_eval(double u) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  const double v = 1.0 - u * u;
  return 35.0 / 32.0 * v * v * v;
}

double default_bandwidth(std::size_t n, double data_range, const BandwidthRule& rule) {
  if (n < 1) throw InvalidArgument("default_bandwidth: n must be positive");
  if (!(data_range > 0.0)) throw InvalidArgument("default_bandwidth: data_range must be positive");
  if (!(rule.constant > 0.0)) throw InvalidArgument("default_bandwidth: constant must be positive");
  return rule.constant * data_range *
         std::pow(static_cast<double>(n), BandwidthRule::exponent);
}

double derivative_estimate(const StepFunction& step, double u, double h) {
  if (!(h > 0.0)) throw InvalidArgument("derivative_estimate: h must be positive");
  const auto& taus = step.taus();
  // Only jumps within (u - h, u + h) contribute.
  auto first = std::upper_bound(taus.begin(), taus.end(), u - h);
  double sum = 0.0;
  for (auto it = first; it != taus.end() && *it < u + h; ++it) {
    const auto j = static_cast<std::size_t>(it - taus.begin());
    sum += kernel_eval((u - *it) / h) * step.jump_size(j);
  }
  return sum / h;
}

std::vector<double> derivative_estimates(const StepFunction& step,
                                         std::span<const double> us, double h) {
  std::vector<double> out(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) out[i] = derivative_estimate(step, us[i], h);
  return out;
}

}  // namespace monosindex
