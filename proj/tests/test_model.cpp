#include <cmath>
#include <numeric>

#include "doctest.h"
#include "monosindex/errors.hpp"
#include "monosindex/model.hpp"
#include "oracles.hpp"

using namespace monosindex;

namespace {

Sample two_by_two() {
  Matrix xs(2, 2);
  xs << 1, 0, 0, 1;
  return Sample(xs, Vector::Zero(2));
}

}  // namespace

TEST_CASE("sample rejects malformed input") {
  CHECK_THROWS_AS(Sample(Matrix::Zero(3, 2), Vector::Zero(2)), InvalidArgument);
  CHECK_THROWS_AS(Sample(Matrix::Zero(1, 2), Vector::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(Sample(Matrix::Zero(3, 1), Vector::Zero(3)), InvalidArgument);
  Matrix xs = Matrix::Zero(3, 2);
  xs(1, 1) = std::nan("");
  CHECK_THROWS_AS(Sample(xs, Vector::Zero(3)), InvalidArgument);
}

TEST_CASE("model spec validation") {
  ModelSpec spec = ModelSpec::cubic_normal(3);
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.alpha0.norm() == doctest::Approx(1.0).epsilon(1e-15));
  spec.alpha0 *= 1.001;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  CHECK_THROWS_AS(generate_sample(spec, 10, 1), InvalidArgument);

  ModelSpec noisy = ModelSpec::cubic_normal(3);
  noisy.noise_sd = -1.0;
  CHECK_THROWS_AS(noisy.validate(), InvalidArgument);
  CHECK_THROWS_AS(generate_sample(ModelSpec::cubic_normal(3), 1, 1), InvalidArgument);
  CHECK_THROWS_AS(Link::from_name("quartic"), InvalidArgument);
}

TEST_CASE("noiseless identity link reproduces the index") {
  ModelSpec spec = ModelSpec::cubic_normal(4);
  spec.link = Link::identity();
  spec.noise_sd = 0.0;
  const Sample s = generate_sample(spec, 50, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    CHECK(s.ys()(row) == doctest::Approx(s.xs().row(row).dot(spec.alpha0)).epsilon(1e-14));
  }
}

TEST_CASE("cubic model response variance is near 16") {
  // Var(Z^3) + 1 = 15 + 1. A single n = 200 sample is too noisy for a tight
  // check, so pool 200 samples.
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  double sum = 0.0;
  double sum2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Sample s = generate_sample(spec, 200, seed);
    sum += s.ys().sum();
    sum2 += s.ys().squaredNorm();
    count += s.size();
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum2 / static_cast<double>(count) - mean * mean;
  CHECK(var == doctest::Approx(16.0).epsilon(0.03));
}

TEST_CASE("generate_sample is deterministic per seed") {
  const ModelSpec spec = ModelSpec::cubic_normal(3);
  const Sample a = generate_sample(spec, 100, 11);
  const Sample b = generate_sample(spec, 100, 11);
  const Sample c = generate_sample(spec, 100, 12);
  CHECK(a.xs() == b.xs());
  CHECK(a.ys() == b.ys());
  CHECK(a.xs() != c.xs());
  // The first n rows do not depend on how many rows are drawn after them.
  const Sample longer = generate_sample(spec, 150, 11);
  CHECK(longer.xs().topRows(100) == a.xs());
}

TEST_CASE("psi oracle") {
  const Vector alpha0 = ModelSpec::cubic_normal(3).alpha0;
  SUBCASE("collapses to u^3 at alpha0") {
    for (int k = 0; k < 100; ++k) {
      const double u = -3.0 + 6.0 * k / 99.0;
      CHECK(std::abs(psi_alpha_oracle(alpha0, u) - u * u * u) <= 1e-12);
    }
  }
  SUBCASE("odd in u") {
    Vector alpha(3);
    alpha << 0.2, -0.5, 0.7;
    alpha.normalize();
    CHECK(psi_alpha_oracle(alpha, 0.0) == doctest::Approx(0.0));
    CHECK(psi_alpha_oracle(alpha, 1.3) == doctest::Approx(-psi_alpha_oracle(alpha, -1.3)));
  }
  SUBCASE("matches conditional Monte Carlo") {
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    const double closed = psi_alpha_oracle(e1, 1.0);
    CHECK(closed == doctest::Approx(7.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-12));
    const oracle::McEstimate mc = oracle::conditional_cubic_given_x1(1.0, 400000, 5);
    CHECK(std::abs(closed - mc.mean) <= 3.0 * mc.se);
  }
  SUBCASE("rejects other dimensions and non-unit directions") {
    CHECK_THROWS_AS(psi_alpha_oracle(Vector::Ones(2).normalized(), 1.0), InvalidArgument);
    CHECK_THROWS_AS(psi_alpha_oracle(Vector::Ones(3), 1.0), InvalidArgument);
  }
}

TEST_CASE("project_sample") {
  SUBCASE("sorts and records the permutation") {
    Vector alpha(2);
    alpha << 1, 0;
    const IndexProjection p = project_sample(two_by_two(), alpha);
    CHECK(p.ts == std::vector<double>{0.0, 1.0});
    CHECK(p.order == std::vector<std::size_t>{1, 0});
  }
  SUBCASE("ties keep the original row order") {
    const IndexProjection p = project_sample(two_by_two(), Vector::Ones(2).normalized());
    CHECK(p.order == std::vector<std::size_t>{0, 1});
    CHECK(p.ts[0] == p.ts[1]);
  }
  SUBCASE("positive scaling keeps the order") {
    const Sample s = generate_sample(ModelSpec::cubic_normal(3), 200, 4);
    Vector alpha(3);
    alpha << 0.3, -1.1, 0.4;
    for (double c : {1e-3, 0.5, 2.0, 1e4}) {
      CHECK(project_sample(s, c * alpha).order == project_sample(s, alpha).order);
    }
  }
  SUBCASE("rejects zero or mismatched directions") {
    CHECK_THROWS_AS(project_sample(two_by_two(), Vector::Zero(2)), InvalidArgument);
    CHECK_THROWS_AS(project_sample(two_by_two(), Vector::Ones(3)), InvalidArgument);
  }
}

TEST_CASE("merge_ties") {
  const std::vector<double> ts{0.0, 0.0, 1.0, 1.0 + 1e-9, 2.0};
  const std::vector<double> ys{1.0, 3.0, 4.0, 6.0, 5.0};
  SUBCASE("exact duplicates only") {
    const TiedGroups g = merge_ties(ts, ys, 0.0);
    CHECK(g.ts.size() == 4);
    CHECK(g.ys[0] == doctest::Approx(2.0));
    CHECK(g.weights[0] == 2.0);
    CHECK(g.group_of == std::vector<std::size_t>{0, 0, 1, 2, 3});
  }
  SUBCASE("relative tolerance") {
    const TiedGroups g = merge_ties(ts, ys, 1e-6);
    CHECK(g.ts.size() == 3);
    CHECK(g.ys[1] == doctest::Approx(5.0));
    CHECK(g.weights[1] == 2.0);
    // Weighted means preserve the response total.
    double total = 0.0;
    for (std::size_t k = 0; k < g.ts.size(); ++k) total += g.ys[k] * g.weights[k];
    CHECK(total == doctest::Approx(std::accumulate(ys.begin(), ys.end(), 0.0)));
  }
}

TEST_CASE("rng substreams") {
  CHECK(mix_seed(1, 1) != mix_seed(1, 2));
  CHECK(mix_seed(1, 1) != mix_seed(2, 1));
  Rng a = make_stream(9, Stream::noise);
  Rng b = make_stream(9, Stream::noise);
  Rng c = make_stream(9, Stream::covariates);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
}
