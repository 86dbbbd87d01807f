#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "monosindex/rng.hpp"

namespace monosindex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n covariate rows in d dimensions with one response per row.
///
/// Invariants (checked on construction): n >= 2, d >= 2, matching row counts,
/// all entries finite.
class Sample {
 public:
  Sample(Matrix xs, Vector ys);

  const Matrix& xs() const { return xs_; }
  const Vector& ys() const { return ys_; }
  std::size_t size() const { return static_cast<std::size_t>(ys_.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(xs_.cols()); }

 private:
  Matrix xs_;
  Vector ys_;
};

/// A link function psi_0 together with its derivative.
struct Link {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static Link cubic();
  static Link identity();
  /// "cubic" or "identity".
  static Link from_name(const std::string& name);
};

/// Distribution of the covariate vector. The standard normal law is flagged so
/// that callers can use its closed-form conditional moments.
struct CovariateLaw {
  std::string name;
  std::function<void(Rng&, std::span<double>)> draw;
  bool is_standard_normal = false;

  static CovariateLaw standard_normal();
  static CovariateLaw custom(std::string name,
                             std::function<void(Rng&, std::span<double>)> draw);
};

/// Y = link(alpha0' X) + noise_sd * N(0, 1), X drawn from `covariates`.
struct ModelSpec {
  Vector alpha0;
  Link link = Link::cubic();
  double noise_sd = 1.0;
  CovariateLaw covariates = CovariateLaw::standard_normal();

  /// Throws InvalidArgument unless |alpha0| = 1 within 1e-12 and noise_sd >= 0.
  void validate() const;
  std::size_t dim() const { return static_cast<std::size_t>(alpha0.size()); }

  /// Cubic link, alpha0 = (1, ..., 1) / sqrt(d), i.i.d. N(0,1) covariates,
  /// unit noise.
  static ModelSpec cubic_normal(std::size_t d = 3);
};

/// Draws n observations. Covariates and noise come from separate substreams
/// of `seed`, so the sample depends only on (spec, n, seed).
Sample generate_sample(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

/// E{(alpha0' X)^3 | alpha' X = u} for the three-dimensional cubic model with
/// alpha0 = (1,1,1)/sqrt(3) and standard normal covariates.
double psi_alpha_oracle(const Vector& alpha, double u);

/// Sample projected on a direction and sorted by the projected value.
struct IndexProjection {
  std::vector<std::size_t> order;  // order[k] = original row of the k-th smallest
  std::vector<double> ts;          // sorted alpha' x
  std::vector<double> ys_ordered;
};

/// Ties in alpha' x keep the original row order.
IndexProjection project_sample(const Sample& sample, const Vector& alpha);

/// Runs of (nearly) equal projected values collapsed to one point each.
struct TiedGroups {
  std::vector<double> ts;       // strictly increasing
  std::vector<double> ys;       // weighted mean response of the group
  std::vector<double> weights;  // multiplicity
  std::vector<std::size_t> group_of;  // sorted position -> group index
};

/// Groups consecutive sorted values whose gap is at most rel_tol * range.
/// rel_tol = 0 merges exact duplicates only.
TiedGroups merge_ties(std::span<const double> ts, std::span<const double> ys,
                      double rel_tol);

}  // namespace monosindex
