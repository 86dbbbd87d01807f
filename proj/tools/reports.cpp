#include "reports.hpp"

#include <cmath>
#include <ostream>
#include <variant>

#include "monosindex/dataset.hpp"

namespace monosindex::cli {

namespace {

using nlohmann::json;

json num(double v) { return round_to_reported(v); }

json vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json mat(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec(m.row(i).transpose()));
  return out;
}

struct LinkSummary {
  std::string type;
  std::size_t size = 0;  // jumps or knots
};

LinkSummary link_summary(const LinkFit& link) {
  if (const auto* s = std::get_if<StepFunction>(&link)) return {"step", s->jump_count()};
  if (const auto* s = std::get_if<SplineFit>(&link)) return {"spline", s->knots().size()};
  if (std::holds_alternative<LinearLink>(link)) return {"linear", 2};
  return {"none", 0};
}

void alpha_header(std::ostream& out, std::size_t d) {
  for (std::size_t j = 1; j <= d; ++j) out << ",alpha_" << j;
}

}  // namespace

json fit_json(Estimator estimator, const Sample& sample, const EstimateResult& r) {
  const LinkSummary link = link_summary(r.link);
  json out;
  out["estimator"] = to_string(estimator);
  out["n"] = sample.size();
  out["d"] = sample.dim();
  out["alpha"] = vec(r.alpha_hat);
  out["criterion"] = num(r.criterion);
  out["evals"] = r.evals;
  out["converged"] = r.converged;
  out["link"] = {{"type", link.type}, {"size", link.size}};
  if (const auto* lin = std::get_if<LinearLink>(&r.link)) {
    out["link"]["intercept"] = num(lin->intercept);
    out["link"]["slope"] = num(lin->slope);
  }
  return out;
}

void write_fit_csv(std::ostream& out, Estimator estimator, const Sample& sample,
                   const EstimateResult& r) {
  const LinkSummary link = link_summary(r.link);
  out << "estimator,n,d";
  alpha_header(out, sample.dim());
  out << ",criterion,evals,converged,link_type,link_size\n";
  out << to_string(estimator) << ',' << sample.size() << ',' << sample.dim();
  for (Eigen::Index i = 0; i < r.alpha_hat.size(); ++i) out << ',' << format_number(r.alpha_hat(i));
  out << ',' << format_number(r.criterion) << ',' << r.evals << ','
      << (r.converged ? "true" : "false") << ',' << link.type << ',' << link.size << '\n';
}

void write_estimates_csv(std::ostream& out, const ReplicationTable& table, std::size_t d) {
  out << "rep,estimator";
  alpha_header(out, d);
  out << ",criterion\n";
  for (const RepOutcome& row : table.rows) {
    if (!row.ok) continue;
    out << row.rep << ',' << to_string(row.estimator);
    for (Eigen::Index i = 0; i < row.alpha.size(); ++i) out << ',' << format_number(row.alpha(i));
    out << ',' << format_number(row.criterion) << '\n';
  }
}

void write_scaled_errors_csv(std::ostream& out, const ReplicationTable& table,
                             const Vector& alpha0, std::size_t n) {
  const double scale =
      std::sqrt(static_cast<double>(n) / static_cast<double>(alpha0.size()));
  out << "rep,estimator,scaled_error\n";
  for (const RepOutcome& row : table.rows) {
    if (!row.ok) continue;
    out << row.rep << ',' << to_string(row.estimator) << ','
        << format_number(scale * (row.alpha - alpha0).norm()) << '\n';
  }
}

json summary_json(const SimulationInfo& info, const SimulationSummary& summary) {
  json out;
  out["model"] = info.model;
  out["n"] = info.n;
  out["d"] = info.d;
  out["reps"] = info.reps;
  out["seed"] = info.seed;
  json estimators = json::object();
  for (Estimator e : all_estimators()) {
    const auto it = summary.estimators.find(e);
    if (it == summary.estimators.end()) continue;
    const EstimatorSummary& s = it->second;
    const BoxplotStats& b = s.errors_box;
    json outliers = json::array();
    for (double v : b.outliers) outliers.push_back(num(v));
    estimators[to_string(e)] = {
        {"successes", s.successes},
        {"failures", s.failures},
        {"mean", vec(s.mean)},
        {"scaled_cov", mat(s.scaled_cov)},
        {"scaled_error_box",
         {{"min", num(b.min)},
          {"q1", num(b.q1)},
          {"median", num(b.median)},
          {"q3", num(b.q3)},
          {"max", num(b.max)},
          {"lower_whisker", num(b.lower_whisker)},
          {"upper_whisker", num(b.upper_whisker)},
          {"outliers", outliers}}},
    };
  }
  out["estimators"] = estimators;
  return out;
}

void write_summary_csv(std::ostream& out, const SimulationSummary& summary, std::size_t d) {
  out << "estimator,successes,failures";
  for (std::size_t j = 1; j <= d; ++j) out << ",mean_" << j;
  for (std::size_t i = 1; i <= d; ++i) {
    for (std::size_t j = i; j <= d; ++j) out << ",sigma_" << i << j;
  }
  out << ",err_min,err_q1,err_median,err_q3,err_max,err_lower_whisker,err_upper_whisker,"
         "err_outliers\n";
  for (Estimator e : all_estimators()) {
    const auto it = summary.estimators.find(e);
    if (it == summary.estimators.end()) continue;
    const EstimatorSummary& s = it->second;
    out << to_string(e) << ',' << s.successes << ',' << s.failures;
    for (Eigen::Index j = 0; j < s.mean.size(); ++j) out << ',' << format_number(s.mean(j));
    for (Eigen::Index i = 0; i < s.scaled_cov.rows(); ++i) {
      for (Eigen::Index j = i; j < s.scaled_cov.cols(); ++j) {
        out << ',' << format_number(s.scaled_cov(i, j));
      }
    }
    const BoxplotStats& b = s.errors_box;
    for (double v : {b.min, b.q1, b.median, b.q3, b.max, b.lower_whisker, b.upper_whisker}) {
      out << ',' << format_number(v);
    }
    out << ',' << b.outliers.size() << '\n';
  }
}

json asymptotics_json(const std::string& model, const std::string& estimator,
                      const std::string& variant, const AsymptoticCovariance& a) {
  json out;
  out["model"] = model;
  out["estimator"] = estimator;
  if (!variant.empty()) out["variant"] = variant;
  out["covariance"] = mat(a.covariance);
  if (a.c) out["c"] = num(*a.c);
  return out;
}

void write_asymptotics_csv(std::ostream& out, const AsymptoticCovariance& a) {
  out << "quantity,row,col,value\n";
  for (Eigen::Index i = 0; i < a.covariance.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.covariance.cols(); ++j) {
      out << "covariance," << (i + 1) << ',' << (j + 1) << ','
          << format_number(a.covariance(i, j)) << '\n';
    }
  }
  if (a.c) out << "c,,," << format_number(*a.c) << '\n';
}

}  // namespace monosindex::cli
