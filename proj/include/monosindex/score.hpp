#pragma once

#include <functional>

#include "monosindex/model.hpp"

namespace monosindex {

enum class ScoreKind { sse, ese, plse };

/// A projected score vector; orthogonal to the direction it was evaluated at.
struct ScoreValue {
  Vector vector;
  double norm = 0.0;
};

/// v - (alpha' v) alpha. alpha must have unit norm within 1e-8.
Vector project_orthogonal(const Vector& alpha, const Vector& v);

/// (1/n) (I - aa') sum_i {psi_hat(a'x_i) - y_i} x_i with the isotonic link fit.
ScoreValue sse_score(const Sample& sample, const Vector& alpha);

/// As sse_score with each summand weighted by the kernel derivative estimate of
/// the isotonic fit at a'x_i, bandwidth h.
ScoreValue ese_score(const Sample& sample, const Vector& alpha, double h);

/// (1/n) (I - aa') sum_i {f(a'x_i) - y_i} f'(a'x_i) x_i with f the natural
/// cubic smoothing spline of penalty mu through the projected sample.
ScoreValue plse_score(const Sample& sample, const Vector& alpha, double mu);

/// Tuning for score_norm_objective; only the field the kind needs is read.
struct ScoreParams {
  double bandwidth = 0.0;  // ese
  double mu = 0.1;         // plse
};

/// alpha -> |score(alpha / |alpha|)|. Returns +infinity for (near) zero or
/// non-finite alpha, and where the link fit is numerically singular. The
/// sample is copied into the returned callable.
std::function<double(const Vector&)> score_norm_objective(ScoreKind kind,
                                                          const Sample& sample,
                                                          ScoreParams params);

/// Knots closer than this fraction of the projected range are merged before
/// spline fitting. Gaps of order 1e-9 * range already make the band system
/// lose positive definiteness in double precision at mu = 0.1.
inline constexpr double kSplineTieTolerance = 1e-6;

}  // namespace monosindex
