#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "monosindex/asymptotics.hpp"
#include "monosindex/estimators.hpp"
#include "monosindex/simulation.hpp"

namespace monosindex::cli {

/// Numbers in every report are rounded to 12 significant digits, so the JSON
/// and CSV forms carry identical values.
nlohmann::json fit_json(Estimator estimator, const Sample& sample, const EstimateResult& r);
void write_fit_csv(std::ostream& out, Estimator estimator, const Sample& sample,
                   const EstimateResult& r);

/// rep,estimator,alpha_1..alpha_d,criterion for every successful row.
void write_estimates_csv(std::ostream& out, const ReplicationTable& table, std::size_t d);
/// rep,estimator,scaled_error for every successful row.
void write_scaled_errors_csv(std::ostream& out, const ReplicationTable& table,
                             const Vector& alpha0, std::size_t n);

struct SimulationInfo {
  std::string model;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

nlohmann::json summary_json(const SimulationInfo& info, const SimulationSummary& summary);
void write_summary_csv(std::ostream& out, const SimulationSummary& summary, std::size_t d);

nlohmann::json asymptotics_json(const std::string& model, const std::string& estimator,
                                const std::string& variant, const AsymptoticCovariance& a);
void write_asymptotics_csv(std::ostream& out, const AsymptoticCovariance& a);

}  // namespace monosindex::cli
