#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "monosindex/isotonic.hpp"
#include "monosindex/kernel.hpp"
#include "monosindex/model.hpp"
#include "monosindex/search.hpp"
#include "monosindex/spline.hpp"

namespace monosindex {

enum class Estimator { lse, sse, ese, plse, linear, mre };

/// Canonical order used for reports: lse, sse, ese, plse, linear, mre.
const std::vector<Estimator>& all_estimators();
std::string to_string(Estimator e);
/// Throws InvalidArgument for unknown names.
Estimator estimator_from_string(const std::string& name);

/// psi(u) = intercept + slope * u for u = alpha_hat' x.
struct LinearLink {
  double intercept = 0.0;
  double slope = 0.0;
};

using LinkFit = std::variant<std::monostate, StepFunction, SplineFit, LinearLink>;

struct EstimateResult {
  Vector alpha_hat;  // unit norm
  LinkFit link;
  /// Objective at alpha_hat: mean squared residual (lse, linear), score norm
  /// (sse, ese, plse), rank correlation (mre, maximized).
  double criterion = 0.0;
  std::size_t evals = 0;
  Vector start_used;
  bool converged = true;
};

struct LinearSolveDiagnostics {
  Vector raw_alpha;
  double condition_estimate = 0.0;
};

struct LinearEstimate {
  EstimateResult result;
  LinearSolveDiagnostics diagnostics;
};

/// Profile least squares criterion (1/n) sum {y_i - psi_hat_alpha(alpha'x_i)}^2.
/// Only the ordering of alpha'x matters, so it is invariant under alpha -> c alpha, c > 0.
double lse_criterion(const Sample& sample, const Vector& alpha);

/// Fraction of pairs i < j that are concordant in (alpha'x, y); ties count as
/// discordant. O(n log n) through merge-sort inversion counting.
double mre_objective(const Sample& sample, const Vector& alpha);

/// Multi-start profile LSE: Nelder-Mead from n_starts random unit vectors on
/// the unconstrained criterion; each argmin is normalized, the best one wins.
EstimateResult estimate_lse(const Sample& sample, std::size_t n_starts,
                            std::uint64_t seed, const SearchOptions& opts = {});

/// Simple score estimator: minimizes the SSE score norm from `start`.
EstimateResult estimate_sse(const Sample& sample, const Vector& start,
                            const SearchOptions& opts = {});

/// Efficient score estimator. The bandwidth is fixed once from the projected
/// range at `start` using `rule`.
EstimateResult estimate_ese(const Sample& sample, const Vector& start,
                            const BandwidthRule& rule = {},
                            const SearchOptions& opts = {});

/// Penalized least squares estimator via Hooke-Jeeves on the spline score norm.
EstimateResult estimate_plse(const Sample& sample, const Vector& start,
                             double mu = 0.1, const SearchOptions& opts = {});

/// Linear least squares direction; throws NumericalFailure when the sample
/// covariance of the covariates is singular (condition above 1e12).
LinearEstimate estimate_linear(const Sample& sample);

/// Han's maximum rank correlation estimator by Nelder-Mead on the negated
/// rank objective.
EstimateResult estimate_mre(const Sample& sample, const Vector& start,
                            const SearchOptions& opts = {});

struct PipelineConfig {
  std::set<Estimator> estimators{all_estimators().begin(), all_estimators().end()};
  std::size_t n_starts = 20;
  std::uint64_t seed = 0;
  double mu = 0.1;
  BandwidthRule bandwidth{};
  SearchOptions lse_search{};
  /// Used for sse, ese and mre.
  SearchOptions score_search{};
  SearchOptions plse_search{};
};

/// Per-estimator results; an estimator that threw is listed in `failures`
/// with its message instead.
struct PipelineOutcome {
  std::map<Estimator, EstimateResult> results;
  std::map<Estimator, std::string> failures;
  std::map<Estimator, std::exception_ptr> errors;
};

/// As warm_start_pipeline but never throws for a single estimator's failure.
/// If the LSE start fails, every estimator that needs it is listed as failed.
PipelineOutcome warm_start_pipeline_checked(const Sample& sample,
                                            const PipelineConfig& config);

/// Runs the requested estimators. LSE is computed whenever a search-based
/// estimator is requested and its result seeds SSE, ESE, PLSE and MRE. The
/// map holds only the requested estimators. Rethrows the first failure.
std::map<Estimator, EstimateResult> warm_start_pipeline(const Sample& sample,
                                                        const PipelineConfig& config);

}  // namespace monosindex
