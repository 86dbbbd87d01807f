#include "monosindex/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "monosindex/errors.hpp"

namespace monosindex {

Sample::Sample(Matrix xs, Vector ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.rows() != ys_.size()) {
    throw InvalidArgument("sample: covariate rows (" + std::to_string(xs_.rows()) +
                          ") differ from response count (" +
                          std::to_string(ys_.size()) + ")");
  }
  if (ys_.size() < 2) throw InvalidArgument("sample: need at least 2 observations");
  if (xs_.cols() < 2) throw InvalidArgument("sample: need at least 2 covariates");
  if (!xs_.allFinite() || !ys_.allFinite()) {
    throw InvalidArgument("sample: non-finite entry");
  }
}

Link Link::cubic() {
  return {"cubic", [](double u) { return u * u * u; },
          [](double u) { return 3.0 * u * u; }};
}

Link Link::identity() {
  return {"identity", [](double u) { return u; }, [](double) { return 1.0; }};
}

Link Link::from_name(const std::string& name) {
  if (name == "cubic") return cubic();
  if (name == "identity") return identity();
  throw InvalidArgument("unknown link '" + name + "'");
}

CovariateLaw CovariateLaw::standard_normal() {
  CovariateLaw law;
  law.name = "standard-normal";
  law.is_standard_normal = true;
  law.draw = [](Rng& rng, std::span<double> x) {
    std::normal_distribution<double> normal;
    for (double& v : x) v = normal(rng);
  };
  return law;
}

CovariateLaw CovariateLaw::custom(std::string name,
                                  std::function<void(Rng&, std::span<double>)> draw) {
  CovariateLaw law;
  law.name = std::move(name);
  law.draw = std::move(draw);
  return law;
}

void ModelSpec::validate() const {
  if (alpha0.size() < 2) throw InvalidArgument("model: alpha0 needs dimension >= 2");
  if (std::abs(alpha0.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("model: alpha0 must have unit norm");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw InvalidArgument("model: noise_sd must be finite and nonnegative");
  }
  if (!link.value) throw InvalidArgument("model: link has no value function");
  if (!covariates.draw) throw InvalidArgument("model: covariate law has no sampler");
}

ModelSpec ModelSpec::cubic_normal(std::size_t d) {
  if (d < 2) throw InvalidArgument("model: d must be >= 2");
  ModelSpec spec;
  spec.alpha0 = Vector::Constant(static_cast<Eigen::Index>(d),
                                 1.0 / std::sqrt(static_cast<double>(d)));
  return spec;
}

Sample generate_sample(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n < 2) throw InvalidArgument("generate_sample: n must be >= 2");
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto rows = static_cast<Eigen::Index>(n);

  // Row-major scratch so each row is one contiguous draw.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> xs(rows, d);
  Rng cov_rng = make_stream(seed, Stream::covariates);
  for (Eigen::Index i = 0; i < rows; ++i) {
    spec.covariates.draw(cov_rng, std::span<double>(xs.row(i).data(),
                                                    static_cast<std::size_t>(d)));
  }

  Rng noise_rng = make_stream(seed, Stream::noise);
  std::normal_distribution<double> normal;
  Vector ys(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double index = xs.row(i).dot(spec.alpha0.transpose());
    const double eps = normal(noise_rng);
    ys(i) = spec.link.value(index) + spec.noise_sd * eps;
  }
  return Sample(Matrix(xs), std::move(ys));
}

double psi_alpha_oracle(const Vector& alpha, double u) {
  if (alpha.size() != 3) {
    throw InvalidArgument("psi_alpha_oracle: closed form only exists for d = 3");
  }
  const double sum = alpha.sum();
  const double sum_sq = alpha.squaredNorm();
  if (std::abs(sum_sq - 1.0) > 1e-8) {
    throw InvalidArgument("psi_alpha_oracle: alpha must have unit norm");
  }
  const double cross = alpha(0) * alpha(1) + alpha(0) * alpha(2) + alpha(1) * alpha(2);
  const double numerator =
      sum * u * (6.0 * sum_sq * (sum_sq - cross) + sum * sum * u * u);
  return numerator / (3.0 * std::sqrt(3.0) * sum_sq * sum_sq * sum_sq);
}

IndexProjection project_sample(const Sample& sample, const Vector& alpha) {
  if (alpha.size() != static_cast<Eigen::Index>(sample.dim())) {
    throw InvalidArgument("project_sample: alpha has wrong dimension");
  }
  if (!alpha.allFinite() || alpha.squaredNorm() == 0.0) {
    throw InvalidArgument("project_sample: alpha must be finite and nonzero");
  }
  const std::size_t n = sample.size();
  const Vector projected = sample.xs() * alpha;

  IndexProjection out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return projected(static_cast<Eigen::Index>(a)) <
                            projected(static_cast<Eigen::Index>(b));
                   });
  out.ts.resize(n);
  out.ys_ordered.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = static_cast<Eigen::Index>(out.order[k]);
    out.ts[k] = projected(row);
    out.ys_ordered[k] = sample.ys()(row);
  }
  return out;
}

TiedGroups merge_ties(std::span<const double> ts, std::span<const double> ys,
                      double rel_tol) {
  if (ts.size() != ys.size() || ts.empty()) {
    throw InvalidArgument("merge_ties: need equal, nonempty inputs");
  }
  const double gap = rel_tol * (ts.back() - ts.front());
  TiedGroups g;
  g.group_of.resize(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (g.ts.empty() || ts[k] - g.ts.back() > gap) {
      g.ts.push_back(ts[k]);
      g.ys.push_back(ys[k]);
      g.weights.push_back(1.0);
    } else {
      // Keep the group's location at its first member; running weighted mean.
      double& w = g.weights.back();
      g.ys.back() += (ys[k] - g.ys.back()) / (w + 1.0);
      w += 1.0;
    }
    g.group_of[k] = g.ts.size() - 1;
  }
  return g;
}

}  // namespace monosindex
