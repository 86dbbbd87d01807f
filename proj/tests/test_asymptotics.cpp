#include <cmath>
#include <random>

#include "doctest.h"
#include "monosindex/asymptotics.hpp"
#include "monosindex/errors.hpp"

using namespace monosindex;

namespace {

Matrix perp(const Vector& a) {
  return Matrix::Identity(a.size(), a.size()) - a * a.transpose();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool psd(const Matrix& m, double tol = 1e-12) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff() >= -tol;
}

// Same law as the standard normal one, but without the flag, so the binned
// general route is taken.
ModelSpec unflagged_normal() {
  ModelSpec spec = ModelSpec::cubic_normal(3);
  spec.covariates = CovariateLaw::custom("normal", [](Rng& rng, std::span<double> x) {
    std::normal_distribution<double> normal;
    for (double& v : x) v = normal(rng);
  });
  return spec;
}

}  // namespace

TEST_CASE("moore-penrose pseudo-inverse") {
  const Vector a0 = ModelSpec::cubic_normal(3).alpha0;
  CHECK(max_abs(moore_penrose_psd(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)) <= 1e-14);
  CHECK(max_abs(moore_penrose_psd(a0 * a0.transpose()) - a0 * a0.transpose()) <= 1e-14);
  CHECK(max_abs(moore_penrose_psd(3.0 * perp(a0)) - perp(a0) / 3.0) <= 1e-14);

  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 1 + trial % 6;
    const Eigen::Index rank = 1 + trial % d;
    Matrix b(d, rank);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < rank; ++j) b(i, j) = normal(rng);
    const Matrix m = b * b.transpose();
    const Matrix p = moore_penrose_psd(m);
    CHECK(max_abs(m * p * m - m) <= 1e-8 * std::max(1.0, max_abs(m)));
    CHECK(max_abs(p * m * p - p) <= 1e-8 * std::max(1.0, max_abs(p)));
    CHECK(max_abs((m * p).transpose() - m * p) <= 1e-8);
    CHECK(max_abs((p * m).transpose() - p * m) <= 1e-8);
  }

  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(moore_penrose_psd(asym), InvalidArgument);
  CHECK_THROWS_AS(moore_penrose_psd(Matrix::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("standard normal conditional moments") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const ModelMoments m = standard_normal_moments(spec);
  CHECK((m.conditional_mean(1.7) - 1.7 * spec.alpha0).norm() <= 1e-15);
  CHECK(max_abs(m.conditional_cov(0.3) - perp(spec.alpha0)) <= 1e-15);
  CHECK(m.link_derivative(2.0) == 12.0);
}

TEST_CASE("sse target") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const AsymptoticCovariance a = asymptotic_cov_sse(spec, kDefaultMcSamples, 1);
  const Matrix p = perp(spec.alpha0);
  CHECK(max_abs(a.bread - 3.0 * p) <= 0.03);
  CHECK(max_abs(a.meat - p) <= 1e-12);
  CHECK(max_abs(a.covariance - p * (1.0 / 9.0)) <= 0.002);
  CHECK(a.covariance(0, 0) == doctest::Approx(2.0 / 27.0).epsilon(0.02));
  CHECK(a.covariance(0, 1) == doctest::Approx(-1.0 / 27.0).epsilon(0.02));
  CHECK(max_abs(a.covariance - a.covariance.transpose()) <= 1e-12);
  CHECK(psd(a.covariance));
  CHECK((a.covariance * spec.alpha0).norm() <= 1e-10);
  CHECK_FALSE(a.c.has_value());
}

TEST_CASE("ese target") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const AsymptoticCovariance a = asymptotic_cov_ese(spec, kDefaultMcSamples, 2);
  const Matrix p = perp(spec.alpha0);
  CHECK(max_abs(a.bread - 27.0 * p) <= 0.5);
  CHECK(max_abs(a.meat - 27.0 * p) <= 0.5);
  CHECK(a.covariance(0, 0) == doctest::Approx(2.0 / 81.0).epsilon(0.02));
  CHECK(a.covariance(1, 2) == doctest::Approx(-1.0 / 81.0).epsilon(0.02));
  CHECK(psd(a.covariance));
  CHECK((a.covariance * spec.alpha0).norm() <= 1e-10);
}

TEST_CASE("linear targets") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const AsymptoticCovariance sandwich =
      asymptotic_cov_linear(spec, kDefaultMcSamples, 3, LinearVariant::sandwich);
  REQUIRE(sandwich.c.has_value());
  CHECK(std::abs(*sandwich.c - 3.0) <= 0.02);
  CHECK(std::abs(sandwich.covariance(0, 0) - 14.0 / 27.0) <= 0.01);
  CHECK(std::abs(sandwich.covariance(0, 2) + 7.0 / 27.0) <= 0.01);
  CHECK((sandwich.covariance * spec.alpha0).norm() <= 1e-10);
  CHECK(psd(sandwich.covariance));

  const AsymptoticCovariance literal =
      asymptotic_cov_linear(spec, kDefaultMcSamples, 3, LinearVariant::paper_formula);
  CHECK(std::abs(literal.covariance(0, 0) - 32.0 / 27.0) <= 0.03);
  CHECK(*literal.c == *sandwich.c);

  CHECK(linear_variant_from_string("sandwich") == LinearVariant::sandwich);
  CHECK(to_string(LinearVariant::paper_formula) == "paper_formula");
  CHECK_THROWS_AS(linear_variant_from_string("ols"), InvalidArgument);
}

TEST_CASE("noiseless model has a degenerate score limit") {
  ModelSpec spec = ModelSpec::cubic_normal(3);
  spec.noise_sd = 0.0;
  CHECK(max_abs(asymptotic_cov_sse(spec, 10000, 1).covariance) == 0.0);
  CHECK(max_abs(asymptotic_cov_ese(spec, 10000, 1).covariance) == 0.0);
}

TEST_CASE("general covariate route agrees with the exact route") {
  const ModelSpec spec = unflagged_normal();
  const AsymptoticCovariance sse = asymptotic_cov_sse(spec, 400000, 4);
  CHECK(std::abs(sse.covariance(0, 0) - 2.0 / 27.0) <= 0.005);
  CHECK(std::abs(sse.covariance(0, 1) + 1.0 / 27.0) <= 0.005);
  const AsymptoticCovariance ese = asymptotic_cov_ese(spec, 400000, 4);
  CHECK(std::abs(ese.covariance(0, 0) - 2.0 / 81.0) <= 0.003);
  const AsymptoticCovariance lin =
      asymptotic_cov_linear(spec, 400000, 4, LinearVariant::sandwich);
  CHECK(std::abs(*lin.c - 3.0) <= 0.1);
  CHECK(std::abs(lin.covariance(0, 0) - 14.0 / 27.0) <= 0.05);
}

TEST_CASE("monte carlo error shrinks like one over root mc") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const auto spread = [&](std::size_t mc) {
    double s = 0.0;
    double s2 = 0.0;
    constexpr int seeds = 60;
    for (int seed = 1; seed <= seeds; ++seed) {
      const double v = asymptotic_cov_sse(spec, mc, static_cast<std::uint64_t>(seed)).covariance(0, 0);
      s += v;
      s2 += v * v;
    }
    const double mean = s / seeds;
    return std::sqrt((s2 / seeds - mean * mean) * seeds / (seeds - 1));
  };
  const double ratio = spread(40000) / spread(20000);
  CHECK(ratio > 0.5);
  CHECK(ratio < 0.9);
}

TEST_CASE("determinism and failures") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  CHECK(asymptotic_cov_sse(spec, 5000, 9).covariance == asymptotic_cov_sse(spec, 5000, 9).covariance);
  CHECK(asymptotic_cov_sse(spec, 5000, 9).covariance != asymptotic_cov_sse(spec, 5000, 10).covariance);

  ModelSpec flat = spec;
  flat.link = Link{"flat", [](double) { return 0.0; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(asymptotic_cov_sse(flat, 1000, 1), NumericalFailure);

  ModelSpec decreasing = spec;
  decreasing.link = Link{"neg", [](double u) { return -u; }, [](double) { return -1.0; }};
  CHECK_THROWS_AS(asymptotic_cov_linear(decreasing, 1000, 1, LinearVariant::sandwich),
                  NumericalFailure);

  ModelSpec no_derivative = spec;
  no_derivative.link.derivative = nullptr;
  CHECK_THROWS_AS(asymptotic_cov_ese(no_derivative, 1000, 1), InvalidArgument);
  CHECK_THROWS_AS(asymptotic_cov_sse(spec, 1, 1), InvalidArgument);
}
