#include "monosindex/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "monosindex/errors.hpp"
#include "monosindex/score.hpp"

namespace monosindex {

namespace {

constexpr double kZeroNorm = 1e-8;

void require_unit_start(const Sample& sample, const Vector& start, const char* who) {
  if (start.size() != static_cast<Eigen::Index>(sample.dim())) {
    throw InvalidArgument(std::string(who) + ": start has wrong dimension");
  }
  if (!start.allFinite() || std::abs(start.norm() - 1.0) > 1e-8) {
    throw InvalidArgument(std::string(who) + ": start must be a unit vector");
  }
}

Vector normalized(const Vector& v) {
  const double norm = v.norm();
  if (!(norm >= kZeroNorm) || !std::isfinite(norm)) {
    throw NumericalFailure("search ended at a (near) zero direction");
  }
  return v / norm;
}

// Number of pairs a < b with v[a] < v[b], by merge sort. Sorts v in place.
std::uint64_t count_ascending_pairs(std::vector<double>& v, std::vector<double>& buf,
                                    std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = count_ascending_pairs(v, buf, lo, mid) +
                        count_ascending_pairs(v, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[i] < v[j]) {
      buf[k++] = v[i++];
    } else {
      // Every left element before i is strictly below v[j].
      count += i - lo;
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) {
    count += mid - lo;
    buf[k++] = v[j++];
  }
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

}  // namespace

const std::vector<Estimator>& all_estimators() {
  static const std::vector<Estimator> all{Estimator::lse,  Estimator::sse,
                                          Estimator::ese,  Estimator::plse,
                                          Estimator::linear, Estimator::mre};
  return all;
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::lse: return "lse";
    case Estimator::sse: return "sse";
    case Estimator::ese: return "ese";
    case Estimator::plse: return "plse";
    case Estimator::linear: return "linear";
    case Estimator::mre: return "mre";
  }
  return "unknown";
}

Estimator estimator_from_string(const std::string& name) {
  for (Estimator e : all_estimators()) {
    if (to_string(e) == name) return e;
  }
  throw InvalidArgument("unknown estimator '" + name + "'");
}

double lse_criterion(const Sample& sample, const Vector& alpha) {
  const IndexProjection proj = project_sample(sample, alpha);
  const MonotoneFit fit = fit_monotone_projection(proj);
  double sum = 0.0;
  for (std::size_t k = 0; k < fit.fitted.size(); ++k) {
    const double r = proj.ys_ordered[k] - fit.fitted[k];
    sum += r * r;
  }
  return sum / static_cast<double>(sample.size());
}

double mre_objective(const Sample& sample, const Vector& alpha) {
  if (alpha.size() != static_cast<Eigen::Index>(sample.dim()) || alpha.squaredNorm() == 0.0) {
    throw InvalidArgument("mre_objective: alpha must be nonzero with matching dimension");
  }
  const std::size_t n = sample.size();
  const Vector t = sample.xs() * alpha;
  const Vector& y = sample.ys();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Within a tie in t, descending y leaves no ascending pair to count.
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    if (t(ia) != t(ib)) return t(ia) < t(ib);
    if (y(ia) != y(ib)) return y(ia) > y(ib);
    return a < b;
  });
  std::vector<double> ordered(n);
  for (std::size_t k = 0; k < n; ++k) ordered[k] = y(static_cast<Eigen::Index>(idx[k]));
  std::vector<double> buf(n);
  const std::uint64_t concordant = count_ascending_pairs(ordered, buf, 0, n);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(concordant) / pairs;
}

EstimateResult estimate_lse(const Sample& sample, std::size_t n_starts,
                            std::uint64_t seed, const SearchOptions& opts) {
  if (n_starts < 1) throw InvalidArgument("estimate_lse: n_starts must be >= 1");
  const Objective objective = [&sample](const Vector& alpha) {
    const double norm = alpha.norm();
    if (!std::isfinite(norm) || norm < kZeroNorm) {
      return std::numeric_limits<double>::infinity();
    }
    return lse_criterion(sample, alpha);
  };

  EstimateResult best;
  best.criterion = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  for (const Vector& start : random_unit_starts(sample.dim(), n_starts, seed)) {
    const SearchResult r = nelder_mead(objective, start, opts);
    evals += r.evals;
    if (r.value < best.criterion) {
      best.alpha_hat = normalized(r.argmin);
      best.criterion = r.value;
      best.start_used = start;
      best.converged = r.converged;
    }
  }
  best.evals = evals;
  best.link = fit_monotone_ls(sample, best.alpha_hat);
  return best;
}

EstimateResult estimate_sse(const Sample& sample, const Vector& start,
                            const SearchOptions& opts) {
  require_unit_start(sample, start, "estimate_sse");
  const auto objective = score_norm_objective(ScoreKind::sse, sample, {});
  const SearchResult r = nelder_mead(objective, start, opts);
  EstimateResult out;
  out.alpha_hat = normalized(r.argmin);
  out.criterion = r.value;
  out.evals = r.evals;
  out.start_used = start;
  out.converged = r.converged;
  out.link = fit_monotone_ls(sample, out.alpha_hat);
  return out;
}

EstimateResult estimate_ese(const Sample& sample, const Vector& start,
                            const BandwidthRule& rule, const SearchOptions& opts) {
  require_unit_start(sample, start, "estimate_ese");
  const IndexProjection proj = project_sample(sample, start);
  const double range = proj.ts.back() - proj.ts.front();
  ScoreParams params;
  params.bandwidth = default_bandwidth(sample.size(), range, rule);
  const auto objective = score_norm_objective(ScoreKind::ese, sample, params);
  const SearchResult r = nelder_mead(objective, start, opts);
  EstimateResult out;
  out.alpha_hat = normalized(r.argmin);
  out.criterion = r.value;
  out.evals = r.evals;
  out.start_used = start;
  out.converged = r.converged;
  out.link = fit_monotone_ls(sample, out.alpha_hat);
  return out;
}

EstimateResult estimate_plse(const Sample& sample, const Vector& start, double mu,
                             const SearchOptions& opts) {
  require_unit_start(sample, start, "estimate_plse");
  if (!(mu > 0.0)) throw InvalidArgument("estimate_plse: mu must be positive");
  ScoreParams params;
  params.mu = mu;
  const auto objective = score_norm_objective(ScoreKind::plse, sample, params);
  const SearchResult r = hooke_jeeves(objective, start, opts);
  EstimateResult out;
  out.alpha_hat = normalized(r.argmin);
  out.criterion = r.value;
  out.evals = r.evals;
  out.start_used = start;
  out.converged = r.converged;

  const IndexProjection proj = project_sample(sample, out.alpha_hat);
  const TiedGroups groups = merge_ties(proj.ts, proj.ys_ordered, kSplineTieTolerance);
  if (groups.ts.size() >= 2) {
    out.link = fit_smoothing_spline(groups.ts, groups.ys, groups.weights, mu);
  }
  return out;
}

LinearEstimate estimate_linear(const Sample& sample) {
  const Matrix& xs = sample.xs();
  const auto n = static_cast<double>(sample.size());
  const Vector mean = xs.colwise().mean().transpose();
  const Matrix centered = xs.rowwise() - mean.transpose();
  const Matrix s = centered.transpose() * centered / n;
  const Vector rhs = centered.transpose() * sample.ys() / n;

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= 1e12)) {
    throw NumericalFailure(
        "estimate_linear: covariate covariance matrix is singular or nearly so "
        "(condition estimate " + std::to_string(condition) +
        "); check for constant or collinear covariate columns");
  }
  const Vector raw = s.ldlt().solve(rhs);
  const double norm = raw.norm();
  if (!(norm > 0.0) || !raw.allFinite()) {
    throw NumericalFailure("estimate_linear: responses are uncorrelated with the covariates");
  }

  LinearEstimate out;
  out.diagnostics.raw_alpha = raw;
  out.diagnostics.condition_estimate = condition;
  EstimateResult& r = out.result;
  r.alpha_hat = raw / norm;
  const double ybar = sample.ys().mean();
  const Vector residual = (sample.ys().array() - ybar).matrix() - centered * raw;
  r.criterion = residual.squaredNorm() / n;
  r.link = LinearLink{ybar - raw.dot(mean), norm};
  r.start_used = Vector();
  return out;
}

EstimateResult estimate_mre(const Sample& sample, const Vector& start,
                            const SearchOptions& opts) {
  require_unit_start(sample, start, "estimate_mre");
  const Objective objective = [&sample](const Vector& alpha) {
    const double norm = alpha.norm();
    if (!std::isfinite(norm) || norm < kZeroNorm) {
      return std::numeric_limits<double>::infinity();
    }
    return -mre_objective(sample, alpha);
  };
  const SearchResult r = nelder_mead(objective, start, opts);
  EstimateResult out;
  out.alpha_hat = normalized(r.argmin);
  out.criterion = -r.value;
  out.evals = r.evals;
  out.start_used = start;
  out.converged = r.converged;
  return out;
}

PipelineOutcome warm_start_pipeline_checked(const Sample& sample,
                                            const PipelineConfig& config) {
  const auto wants = [&](Estimator e) { return config.estimators.count(e) > 0; };
  PipelineOutcome out;
  const auto attempt = [&](Estimator e, const auto& run) {
    try {
      out.results[e] = run();
    } catch (const std::exception& ex) {
      out.failures[e] = ex.what();
      out.errors[e] = std::current_exception();
    }
  };

  const std::vector<Estimator> warm{Estimator::sse, Estimator::ese, Estimator::plse,
                                    Estimator::mre};
  const bool needs_lse =
      wants(Estimator::lse) ||
      std::any_of(warm.begin(), warm.end(), [&](Estimator e) { return wants(e); });
  if (needs_lse) {
    std::optional<EstimateResult> lse;
    try {
      lse = estimate_lse(sample, config.n_starts, config.seed, config.lse_search);
    } catch (const std::exception& ex) {
      for (Estimator e : all_estimators()) {
        if (e != Estimator::linear && wants(e)) {
          out.failures[e] = std::string("LSE start failed: ") + ex.what();
          out.errors[e] = std::current_exception();
        }
      }
    }
    if (lse) {
      const Vector start = lse->alpha_hat;
      if (wants(Estimator::lse)) out.results[Estimator::lse] = *lse;
      if (wants(Estimator::sse)) {
        attempt(Estimator::sse, [&] { return estimate_sse(sample, start, config.score_search); });
      }
      if (wants(Estimator::ese)) {
        attempt(Estimator::ese, [&] {
          return estimate_ese(sample, start, config.bandwidth, config.score_search);
        });
      }
      if (wants(Estimator::plse)) {
        attempt(Estimator::plse,
                [&] { return estimate_plse(sample, start, config.mu, config.plse_search); });
      }
      if (wants(Estimator::mre)) {
        attempt(Estimator::mre, [&] { return estimate_mre(sample, start, config.score_search); });
      }
    }
  }
  if (wants(Estimator::linear)) {
    attempt(Estimator::linear, [&] { return estimate_linear(sample).result; });
  }
  return out;
}

std::map<Estimator, EstimateResult> warm_start_pipeline(const Sample& sample,
                                                        const PipelineConfig& config) {
  PipelineOutcome outcome = warm_start_pipeline_checked(sample, config);
  if (!outcome.errors.empty()) std::rethrow_exception(outcome.errors.begin()->second);
  return std::move(outcome.results);
}

}  // namespace monosindex
