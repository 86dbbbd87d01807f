#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "monosindex/estimators.hpp"
#include "monosindex/model.hpp"

namespace monosindex {

struct SimConfig {
  ModelSpec spec = ModelSpec::cubic_normal(3);
  std::size_t n = 200;
  std::size_t reps = 100;
  std::set<Estimator> estimators{all_estimators().begin(), all_estimators().end()};
  std::uint64_t seed = 0;
  /// Search settings and tuning; `estimators` and `seed` inside are replaced
  /// per replication.
  PipelineConfig pipeline{};
  std::size_t workers = 1;

  void validate() const;
};

/// Seed of replication `rep` (1-based): mix_seed(seed, rep).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep);

struct RepOutcome {
  std::size_t rep = 0;
  Estimator estimator = Estimator::lse;
  bool ok = false;
  Vector alpha;
  double criterion = 0.0;
  std::string error;
};

/// One row per (replication, estimator), ordered by replication and then by
/// the canonical estimator order.
struct ReplicationTable {
  std::vector<RepOutcome> rows;
};

/// Replication k draws its sample and LSE starts from replication_seed(seed, k)
/// and runs warm_start_pipeline_checked. A failed or non-converged search is
/// recorded in its row. The table does not depend on `workers`.
ReplicationTable run_replications(const SimConfig& config);

struct BoxplotStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double lower_whisker = 0.0;  // smallest value >= q1 - 1.5 IQR
  double upper_whisker = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;  // ascending
};

/// Quartiles by linear interpolation between order statistics.
BoxplotStats boxplot_stats(std::vector<double> values);

struct EstimatorSummary {
  std::size_t successes = 0;
  std::size_t failures = 0;
  Vector mean;
  /// n times the sample covariance (denominator successes - 1).
  Matrix scaled_cov;
  /// sqrt(n/d) |alpha_hat - alpha0| per successful replication, in rep order.
  std::vector<double> scaled_errors;
  BoxplotStats errors_box;
};

struct SimulationSummary {
  std::size_t n = 0;
  std::map<Estimator, EstimatorSummary> estimators;
  double wall_seconds = 0.0;
};

/// Throws InvalidArgument if an estimator present in the table has fewer than
/// two successful replications.
SimulationSummary summarize(const ReplicationTable& table, const Vector& alpha0,
                            std::size_t n);

}  // namespace monosindex
