#include "monosindex/spline.hpp"

#include <algorithm>
#include <cmath>

#include "monosindex/errors.hpp"

namespace monosindex {

SplineFit::SplineFit(std::vector<double> knots, std::vector<double> values,
                     std::vector<double> gamma, std::vector<double> weights,
                     double mu)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      gamma_(std::move(gamma)),
      weights_(std::move(weights)),
      mu_(mu) {
  const std::size_t m = knots_.size();
  if (m < 2 || values_.size() != m || gamma_.size() != m || weights_.size() != m) {
    throw InvalidArgument("SplineFit: inconsistent lengths");
  }
}

std::size_t SplineFit::interval(double u) const {
  // Index i with knots[i] <= u < knots[i+1], clamped to [0, m-2].
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
      it - knots_.begin() - 1, 0));
  return std::min(i, knots_.size() - 2);
}

double SplineFit::operator()(double u) const {
  if (u <= knots_.front()) {
    return values_.front() + (u - knots_.front()) * derivative(knots_.front());
  }
  if (u >= knots_.back()) {
    return values_.back() + (u - knots_.back()) * derivative(knots_.back());
  }
  const std::size_t i = interval(u);
  const double h = knots_[i + 1] - knots_[i];
  const double s = u - knots_[i];
  const double b = (values_[i + 1] - values_[i]) / h -
                   h * (2.0 * gamma_[i] + gamma_[i + 1]) / 6.0;
  const double c = 0.5 * gamma_[i];
  const double d = (gamma_[i + 1] - gamma_[i]) / (6.0 * h);
  return values_[i] + s * (b + s * (c + s * d));
}

double SplineFit::derivative(double u) const {
  const std::size_t i = interval(u);
  const double h = knots_[i + 1] - knots_[i];
  const double s = std::clamp(u, knots_.front(), knots_.back()) - knots_[i];
  const double b = (values_[i + 1] - values_[i]) / h -
                   h * (2.0 * gamma_[i] + gamma_[i + 1]) / 6.0;
  const double c = 0.5 * gamma_[i];
  const double d = (gamma_[i + 1] - gamma_[i]) / (6.0 * h);
  return b + s * (2.0 * c + 3.0 * d * s);
}

double SplineFit::roughness() const {
  // f'' is linear on each interval: int (g_i + (g_{i+1}-g_i) s/h)^2 ds.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double h = knots_[i + 1] - knots_[i];
    const double a = gamma_[i];
    const double b = gamma_[i + 1];
    total += h * (a * a + a * b + b * b) / 3.0;
  }
  return total;
}

SplineFit fit_smoothing_spline(std::span<const double> ts,
                               std::span<const double> ys,
                               std::span<const double> weights, double mu) {
  const std::size_t m = ts.size();
  if (m < 2) throw InvalidArgument("fit_smoothing_spline: need at least 2 knots");
  if (ys.size() != m || weights.size() != m) {
    throw InvalidArgument("fit_smoothing_spline: length mismatch");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("fit_smoothing_spline: mu must be positive");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weights[i] > 0.0)) {
      throw InvalidArgument("fit_smoothing_spline: weights must be positive");
    }
    if (i > 0 && !(ts[i] > ts[i - 1])) {
      throw InvalidArgument("fit_smoothing_spline: knots must increase strictly");
    }
  }

  std::vector<double> g(ys.begin(), ys.end());
  std::vector<double> gamma(m, 0.0);
  std::vector<double> w(weights.begin(), weights.end());
  if (m == 2) {
    return SplineFit({ts.begin(), ts.end()}, std::move(g), std::move(gamma),
                     std::move(w), mu);
  }

  const std::size_t k = m - 2;
  std::vector<double> h(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) h[i] = ts[i + 1] - ts[i];

  // Column j of Q touches rows j, j+1, j+2.
  std::vector<double> q0(k), q1(k), q2(k);
  for (std::size_t j = 0; j < k; ++j) {
    q0[j] = 1.0 / h[j];
    q2[j] = 1.0 / h[j + 1];
    q1[j] = -q0[j] - q2[j];
  }

  // Bands of R + mu Q' W^-1 Q: diagonal, first and second superdiagonal.
  std::vector<double> diag(k), off1(k, 0.0), off2(k, 0.0), rhs(k);
  for (std::size_t j = 0; j < k; ++j) {
    diag[j] = (h[j] + h[j + 1]) / 3.0 +
              mu * (q0[j] * q0[j] / w[j] + q1[j] * q1[j] / w[j + 1] +
                    q2[j] * q2[j] / w[j + 2]);
    if (j + 1 < k) {
      off1[j] = h[j + 1] / 6.0 +
                mu * (q1[j] * q0[j + 1] / w[j + 1] + q2[j] * q1[j + 1] / w[j + 2]);
    }
    if (j + 2 < k) off2[j] = mu * q2[j] * q0[j + 2] / w[j + 2];
    rhs[j] = q0[j] * ys[j] + q1[j] * ys[j + 1] + q2[j] * ys[j + 2];
  }

  // Banded LDL' factorization; l1/l2 are the first/second subdiagonals of L.
  std::vector<double> dd(k), l1(k, 0.0), l2(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double dj = diag[j];
    if (j >= 1) dj -= l1[j - 1] * l1[j - 1] * dd[j - 1];
    if (j >= 2) dj -= l2[j - 2] * l2[j - 2] * dd[j - 2];
    if (!(dj > 0.0)) throw NumericalFailure("fit_smoothing_spline: band system not positive definite");
    dd[j] = dj;
    double b = off1[j];
    if (j >= 1) b -= l2[j - 1] * l1[j - 1] * dd[j - 1];
    l1[j] = b / dj;
    l2[j] = off2[j] / dj;
  }
  std::vector<double> z(k);
  for (std::size_t j = 0; j < k; ++j) {
    double v = rhs[j];
    if (j >= 1) v -= l1[j - 1] * z[j - 1];
    if (j >= 2) v -= l2[j - 2] * z[j - 2];
    z[j] = v;
  }
  std::vector<double> interior(k);
  for (std::size_t jj = k; jj-- > 0;) {
    double v = z[jj] / dd[jj];
    if (jj + 1 < k) v -= l1[jj] * interior[jj + 1];
    if (jj + 2 < k) v -= l2[jj] * interior[jj + 2];
    interior[jj] = v;
  }

  // g = y - mu W^-1 Q gamma.
  std::vector<double> qgamma(m, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    qgamma[j] += q0[j] * interior[j];
    qgamma[j + 1] += q1[j] * interior[j];
    qgamma[j + 2] += q2[j] * interior[j];
  }
  for (std::size_t i = 0; i < m; ++i) g[i] = ys[i] - mu * qgamma[i] / w[i];
  for (std::size_t j = 0; j < k; ++j) gamma[j + 1] = interior[j];

  return SplineFit({ts.begin(), ts.end()}, std::move(g), std::move(gamma),
                   std::move(w), mu);
}

}  // namespace monosindex
