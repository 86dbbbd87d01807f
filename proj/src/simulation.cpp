#include "monosindex/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "monosindex/errors.hpp"

namespace monosindex {

void SimConfig::validate() const {
  spec.validate();
  if (reps < 1) throw InvalidArgument("simulation: reps must be >= 1");
  if (n < spec.dim() + 1) throw InvalidArgument("simulation: n must be >= d + 1");
  if (estimators.empty()) throw InvalidArgument("simulation: no estimators selected");
  if (workers < 1) throw InvalidArgument("simulation: workers must be >= 1");
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep) {
  return mix_seed(seed, static_cast<std::uint64_t>(rep));
}

namespace {

std::vector<RepOutcome> run_one(const SimConfig& config, std::size_t rep) {
  const std::uint64_t rep_seed = replication_seed(config.seed, rep);
  PipelineConfig pipeline = config.pipeline;
  pipeline.estimators = config.estimators;
  pipeline.seed = rep_seed;

  std::vector<RepOutcome> rows;
  PipelineOutcome outcome;
  std::string sample_error;
  try {
    const Sample sample = generate_sample(config.spec, config.n, rep_seed);
    outcome = warm_start_pipeline_checked(sample, pipeline);
  } catch (const std::exception& ex) {
    sample_error = ex.what();
  }

  for (Estimator e : all_estimators()) {
    if (!config.estimators.count(e)) continue;
    RepOutcome row;
    row.rep = rep;
    row.estimator = e;
    if (!sample_error.empty()) {
      row.error = sample_error;
    } else if (auto it = outcome.results.find(e); it != outcome.results.end()) {
      row.alpha = it->second.alpha_hat;
      row.criterion = it->second.criterion;
      row.ok = it->second.converged;
      if (!row.ok) row.error = "search did not converge within max_evals";
    } else {
      row.error = outcome.failures.count(e) ? outcome.failures.at(e) : "no result";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ReplicationTable run_replications(const SimConfig& config) {
  config.validate();
  std::vector<std::vector<RepOutcome>> per_rep(config.reps);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < config.reps; i = next++) {
      per_rep[i] = run_one(config, i + 1);
    }
  };

  const std::size_t threads = std::min(config.workers, config.reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ReplicationTable table;
  for (auto& rows : per_rep) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  return table;
}

BoxplotStats boxplot_stats(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("boxplot_stats: empty input");
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  BoxplotStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.lower_whisker = s.max;
  s.upper_whisker = s.min;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      s.lower_whisker = std::min(s.lower_whisker, v);
      s.upper_whisker = std::max(s.upper_whisker, v);
    }
  }
  return s;
}

SimulationSummary summarize(const ReplicationTable& table, const Vector& alpha0,
                            std::size_t n) {
  if (n < 1) throw InvalidArgument("summarize: n must be positive");
  const auto d = alpha0.size();
  SimulationSummary out;
  out.n = n;

  std::map<Estimator, std::vector<const RepOutcome*>> good;
  for (const RepOutcome& row : table.rows) {
    EstimatorSummary& s = out.estimators[row.estimator];
    if (row.ok) {
      if (row.alpha.size() != d) throw InvalidArgument("summarize: alpha has wrong dimension");
      good[row.estimator].push_back(&row);
    } else {
      ++s.failures;
    }
  }

  // Rows are reduced in (rep, estimator) order so the result does not depend
  // on the order rows were appended in.
  for (auto& [estimator, rows] : good) {
    std::sort(rows.begin(), rows.end(),
              [](const RepOutcome* a, const RepOutcome* b) { return a->rep < b->rep; });
  }

  for (auto& [estimator, s] : out.estimators) {
    const auto& rows = good[estimator];
    if (rows.size() < 2) {
      throw InvalidArgument("summarize: " + to_string(estimator) +
                            " has fewer than 2 successful replications");
    }
    s.successes = rows.size();
    s.mean = Vector::Zero(d);
    for (const RepOutcome* r : rows) s.mean += r->alpha;
    s.mean /= static_cast<double>(rows.size());
    s.scaled_cov = Matrix::Zero(d, d);
    for (const RepOutcome* r : rows) {
      const Vector dev = r->alpha - s.mean;
      s.scaled_cov += dev * dev.transpose();
    }
    s.scaled_cov *= static_cast<double>(n) / static_cast<double>(rows.size() - 1);
    const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(d));
    for (const RepOutcome* r : rows) s.scaled_errors.push_back(scale * (r->alpha - alpha0).norm());
    s.errors_box = boxplot_stats(s.scaled_errors);
  }
  return out;
}

}  // namespace monosindex
