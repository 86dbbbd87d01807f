#pragma once

#include <span>
#include <vector>

namespace monosindex {

/// Natural cubic smoothing spline in value / second-derivative form.
///
/// The spline is cubic between consecutive knots, has zero second derivative
/// at both boundary knots, and is extended linearly beyond them.
class SplineFit {
 public:
  SplineFit() = default;
  SplineFit(std::vector<double> knots, std::vector<double> values,
            std::vector<double> gamma, std::vector<double> weights, double mu);

  const std::vector<double>& knots() const { return knots_; }
  /// Fitted values g_i at the knots.
  const std::vector<double>& values() const { return values_; }
  /// Second derivatives at the knots; first and last are zero.
  const std::vector<double>& gamma() const { return gamma_; }
  const std::vector<double>& weights() const { return weights_; }
  double mu() const { return mu_; }

  double operator()(double u) const;
  double derivative(double u) const;
  /// Integral of the squared second derivative over the knot range.
  double roughness() const;

 private:
  std::size_t interval(double u) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> gamma_;
  std::vector<double> weights_;
  double mu_ = 0.0;
};

/// Minimizes sum_i w_i (y_i - f(t_i))^2 + mu * int f''^2 with the Reinsch
/// scheme: one pentadiagonal solve for the interior second derivatives, O(m).
///
/// ts must be strictly increasing with at least two entries; mu > 0.
SplineFit fit_smoothing_spline(std::span<const double> ts,
                               std::span<const double> ys,
                               std::span<const double> weights, double mu);

inline double eval_spline(const SplineFit& fit, double u) { return fit(u); }
inline double eval_spline_derivative(const SplineFit& fit, double u) {
  return fit.derivative(u);
}
inline double roughness(const SplineFit& fit) { return fit.roughness(); }

}  // namespace monosindex
