#include "monosindex/score.hpp"

#include <cmath>
#include <limits>
#include <span>

#include "monosindex/errors.hpp"
#include "monosindex/isotonic.hpp"
#include "monosindex/kernel.hpp"
#include "monosindex/spline.hpp"

namespace monosindex {

namespace {

void require_unit(const Vector& alpha, const char* who) {
  if (!alpha.allFinite() || std::abs(alpha.norm() - 1.0) > 1e-8) {
    throw InvalidArgument(std::string(who) + ": alpha must have unit norm");
  }
}

// (1/n) (I - aa') sum_k residual_k * weight_k * x_{order[k]}.
ScoreValue finish(const Sample& sample, const Vector& alpha,
                  const std::vector<std::size_t>& order,
                  std::span<const double> weighted_residuals) {
  Vector sum = Vector::Zero(alpha.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (weighted_residuals[k] == 0.0) continue;
    sum += weighted_residuals[k] *
           sample.xs().row(static_cast<Eigen::Index>(order[k])).transpose();
  }
  sum /= static_cast<double>(sample.size());
  ScoreValue out;
  out.vector = project_orthogonal(alpha, sum);
  out.norm = out.vector.norm();
  return out;
}

}  // namespace

Vector project_orthogonal(const Vector& alpha, const Vector& v) {
  require_unit(alpha, "project_orthogonal");
  if (v.size() != alpha.size()) throw InvalidArgument("project_orthogonal: size mismatch");
  Vector out = v - alpha.dot(v) * alpha;
  // A second pass removes the rounding residue along alpha.
  out -= alpha.dot(out) * alpha;
  return out;
}

ScoreValue sse_score(const Sample& sample, const Vector& alpha) {
  require_unit(alpha, "sse_score");
  const IndexProjection proj = project_sample(sample, alpha);
  const MonotoneFit fit = fit_monotone_projection(proj);
  std::vector<double> r(proj.ts.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = fit.fitted[k] - proj.ys_ordered[k];
  return finish(sample, alpha, proj.order, r);
}

ScoreValue ese_score(const Sample& sample, const Vector& alpha, double h) {
  require_unit(alpha, "ese_score");
  if (!(h > 0.0)) throw InvalidArgument("ese_score: bandwidth must be positive");
  const IndexProjection proj = project_sample(sample, alpha);
  const MonotoneFit fit = fit_monotone_projection(proj);
  const std::vector<double> slope = derivative_estimates(fit.link, proj.ts, h);
  std::vector<double> r(proj.ts.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    r[k] = (fit.fitted[k] - proj.ys_ordered[k]) * slope[k];
  }
  return finish(sample, alpha, proj.order, r);
}

ScoreValue plse_score(const Sample& sample, const Vector& alpha, double mu) {
  require_unit(alpha, "plse_score");
  if (!(mu > 0.0)) throw InvalidArgument("plse_score: mu must be positive");
  const IndexProjection proj = project_sample(sample, alpha);
  const TiedGroups groups = merge_ties(proj.ts, proj.ys_ordered, kSplineTieTolerance);
  std::vector<double> r(proj.ts.size(), 0.0);
  if (groups.ts.size() >= 2) {
    const SplineFit spline = fit_smoothing_spline(groups.ts, groups.ys, groups.weights, mu);
    std::vector<double> slope(groups.ts.size());
    for (std::size_t g = 0; g < slope.size(); ++g) slope[g] = spline.derivative(groups.ts[g]);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const std::size_t g = groups.group_of[k];
      r[k] = (spline.values()[g] - proj.ys_ordered[k]) * slope[g];
    }
  }
  return finish(sample, alpha, proj.order, r);
}

std::function<double(const Vector&)> score_norm_objective(ScoreKind kind,
                                                          const Sample& sample,
                                                          ScoreParams params) {
  if (kind == ScoreKind::ese && !(params.bandwidth > 0.0)) {
    throw InvalidArgument("score_norm_objective: ese needs a positive bandwidth");
  }
  if (kind == ScoreKind::plse && !(params.mu > 0.0)) {
    throw InvalidArgument("score_norm_objective: plse needs a positive mu");
  }
  return [kind, sample, params](const Vector& alpha) {
    const double norm = alpha.norm();
    if (!std::isfinite(norm) || norm < 1e-8) return std::numeric_limits<double>::infinity();
    const Vector unit = alpha / norm;
    try {
      switch (kind) {
        case ScoreKind::sse: return sse_score(sample, unit).norm;
        case ScoreKind::ese: return ese_score(sample, unit, params.bandwidth).norm;
        case ScoreKind::plse: return plse_score(sample, unit, params.mu).norm;
      }
    } catch (const NumericalFailure&) {
    }
    return std::numeric_limits<double>::infinity();
  };
}

}  // namespace monosindex
