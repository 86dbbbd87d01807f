#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "monosindex/errors.hpp"
#include "monosindex/spline.hpp"
#include "oracles.hpp"

using namespace monosindex;

namespace {

struct Instance {
  std::vector<double> t, y, w;
};

Instance random_instance(std::mt19937_64& rng, std::size_t m, bool unit_weights = false) {
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  std::normal_distribution<double> noise;
  Instance in;
  double t = noise(rng);
  for (std::size_t i = 0; i < m; ++i) {
    in.t.push_back(t);
    in.y.push_back(std::sin(t) + 0.3 * noise(rng));
    in.w.push_back(unit_weights ? 1.0 : weight(rng));
    t += gap(rng);
  }
  return in;
}

double weighted_rss(const Instance& in, const SplineFit& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < in.t.size(); ++i) {
    s += in.w[i] * (in.y[i] - f.values()[i]) * (in.y[i] - f.values()[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("two knots give the interpolating line") {
  const std::vector<double> t{1.0, 3.0}, y{2.0, 6.0}, w{1.0, 1.0};
  const SplineFit f = fit_smoothing_spline(t, y, w, 0.7);
  CHECK(f.values()[0] == doctest::Approx(2.0));
  CHECK(f.values()[1] == doctest::Approx(6.0));
  CHECK(f.gamma() == std::vector<double>{0.0, 0.0});
  CHECK(eval_spline(f, 2.0) == doctest::Approx(4.0));
  for (double u : {-10.0, 1.0, 1.5, 3.0, 42.0}) {
    CHECK(eval_spline_derivative(f, u) == doctest::Approx(2.0));
  }
  CHECK(eval_spline(f, 5.0) == doctest::Approx(10.0));
  CHECK(roughness(f) == 0.0);
}

TEST_CASE("spline input validation") {
  const std::vector<double> y{1, 2, 3}, w{1, 1, 1};
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 1, 1}, y, w, 0.1), InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 2, 1}, y, w, 0.1), InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 1, 2}, y, w, 0.0), InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 1, 2}, y, w, -1.0), InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0}, std::vector<double>{1},
                                       std::vector<double>{1}, 0.1),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 1, 2}, y,
                                       std::vector<double>{1, 0, 1}, 0.1),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_smoothing_spline(std::vector<double>{0, 1}, y, w, 0.1), InvalidArgument);
}

TEST_CASE("limits in the penalty") {
  std::mt19937_64 rng(17);
  const Instance in = random_instance(rng, 20, true);
  SUBCASE("huge penalty gives the least squares line") {
    const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, 1e9);
    const auto [a, b] = oracle::ols_line(in.t, in.y);
    for (std::size_t i = 0; i < in.t.size(); ++i) {
      CHECK(std::abs(f.values()[i] - (a + b * in.t[i])) <= 1e-4);
    }
  }
  SUBCASE("tiny penalty interpolates") {
    const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, 1e-9);
    for (std::size_t i = 0; i < in.t.size(); ++i) {
      CHECK(std::abs(f.values()[i] - in.y[i]) <= 1e-5);
    }
  }
}

TEST_CASE("banded solve matches the dense normal equations") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 3 + static_cast<std::size_t>(trial % 10);
    const Instance in = random_instance(rng, m);
    const double mu = std::pow(10.0, -2.0 + 3.0 * (trial % 7) / 6.0);
    const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, mu);
    const oracle::DenseSpline ref = oracle::spline_dense(in.t, in.y, in.w, mu);
    for (std::size_t i = 0; i < m; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      REQUIRE(std::abs(f.values()[i] - ref.g(k)) <= 1e-8);
      REQUIRE(std::abs(f.gamma()[i] - ref.gamma(k)) <= 1e-8);
    }
  }
}

TEST_CASE("evaluation") {
  std::mt19937_64 rng(5);
  const Instance in = random_instance(rng, 12);
  const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, 0.3);
  const std::function<double(double)> value = [&](double u) { return f(u); };

  SUBCASE("knot values and natural boundary") {
    for (std::size_t i = 0; i < in.t.size(); ++i) CHECK(f(in.t[i]) == doctest::Approx(f.values()[i]));
    CHECK(f.gamma().front() == 0.0);
    CHECK(f.gamma().back() == 0.0);
  }
  SUBCASE("derivative matches finite differences away from knots") {
    for (std::size_t i = 0; i + 1 < in.t.size(); ++i) {
      for (double frac : {0.13, 0.5, 0.87}) {
        const double u = in.t[i] + frac * (in.t[i + 1] - in.t[i]);
        const double fd = oracle::central_difference(value, u);
        const double exact = f.derivative(u);
        CHECK(std::abs(fd - exact) <= 1e-4 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  SUBCASE("first derivative is continuous at knots") {
    for (std::size_t i = 1; i + 1 < in.t.size(); ++i) {
      CHECK(f.derivative(in.t[i] - 1e-9) == doctest::Approx(f.derivative(in.t[i] + 1e-9)).epsilon(1e-6));
    }
  }
  SUBCASE("linear extension beyond the knots") {
    const double tm = in.t.back();
    const double slope = f.derivative(tm);
    CHECK(f(tm + 2.0) == doctest::Approx(f.values().back() + 2.0 * slope));
    CHECK(f.derivative(tm + 5.0) == doctest::Approx(slope));
    const double t1 = in.t.front();
    CHECK(f(t1 - 1.5) == doctest::Approx(f.values().front() - 1.5 * f.derivative(t1)));
    CHECK(f.derivative(t1 - 7.0) == doctest::Approx(f.derivative(t1)));
  }
  SUBCASE("roughness equals the integral of the squared second derivative") {
    const std::function<double(double)> second = [&](double u) {
      return oracle::central_difference([&](double v) { return f.derivative(v); }, u, 1e-6);
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < in.t.size(); ++i) {
      integral += oracle::simpson([&](double u) { return second(u) * second(u); },
                                  in.t[i] + 1e-6, in.t[i + 1] - 1e-6, 200);
    }
    CHECK(f.roughness() == doctest::Approx(integral).epsilon(1e-4));
  }
}

TEST_CASE("residual orthogonality to linear functions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance in = random_instance(rng, 3 + static_cast<std::size_t>(trial % 30));
    const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, 0.5);
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t i = 0; i < in.t.size(); ++i) {
      const double r = in.w[i] * (in.y[i] - f.values()[i]);
      s0 += r;
      s1 += in.t[i] * r;
    }
    CHECK(std::abs(s0) <= 1e-8);
    CHECK(std::abs(s1) <= 1e-8);
  }
}

TEST_CASE("fit criteria are monotone in the penalty") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = random_instance(rng, 25);
    double prev_rss = -1.0;
    double prev_rough = INFINITY;
    for (double mu : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
      const SplineFit f = fit_smoothing_spline(in.t, in.y, in.w, mu);
      const double rss = weighted_rss(in, f);
      CHECK(f.roughness() >= 0.0);
      CHECK(rss >= prev_rss - 1e-12);
      CHECK(f.roughness() <= prev_rough + 1e-12);
      prev_rss = rss;
      prev_rough = f.roughness();
    }
  }
}
