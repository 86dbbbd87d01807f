#include <cmath>
#include <limits>

#include "doctest.h"
#include "monosindex/errors.hpp"
#include "monosindex/search.hpp"

using namespace monosindex;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double quadratic(const Vector& v) { return (v - vec2(1.0, 2.0)).squaredNorm(); }

double rosenbrock(const Vector& v) {
  const double a = 1.0 - v(0);
  const double b = v(1) - v(0) * v(0);
  return a * a + 100.0 * b * b;
}

// Piecewise constant bowl: no useful gradient anywhere.
double terraced(const Vector& v) { return std::floor(20.0 * (v - vec2(0.3, -0.2)).norm()); }

using Searcher = SearchResult (*)(const Objective&, const Vector&, const SearchOptions&);

}  // namespace

TEST_CASE("nelder-mead examples") {
  SUBCASE("quadratic") {
    const SearchResult r = nelder_mead(quadratic, vec2(0, 0));
    CHECK(r.converged);
    CHECK((r.argmin - vec2(1, 2)).norm() < 1e-4);
    CHECK(r.value == quadratic(r.argmin));
  }
  SUBCASE("start at the minimum") {
    const SearchResult r = nelder_mead(quadratic, vec2(1, 2));
    CHECK(r.converged);
    CHECK(r.value <= 0.0);
  }
  SUBCASE("rosenbrock") {
    SearchOptions opts;
    opts.max_evals = 2000;
    const SearchResult r = nelder_mead(rosenbrock, vec2(-1.2, 1.0), opts);
    CHECK(r.value < 1e-4);
    CHECK(r.evals <= 2000 + 2);
  }
}

TEST_CASE("hooke-jeeves examples") {
  SUBCASE("quadratic") {
    const SearchResult r = hooke_jeeves(quadratic, vec2(-3, 5));
    CHECK(r.converged);
    CHECK((r.argmin - vec2(1, 2)).norm() < 1e-6);
    CHECK(r.value == quadratic(r.argmin));
  }
  SUBCASE("constant objective returns the start") {
    const Vector start = vec2(0.4, -0.7);
    const SearchResult r = hooke_jeeves([](const Vector&) { return 3.0; }, start);
    CHECK(r.argmin == start);
    CHECK(r.value == 3.0);
    CHECK(r.converged);
  }
}

TEST_CASE("search contracts") {
  for (Searcher search : {static_cast<Searcher>(nelder_mead), static_cast<Searcher>(hooke_jeeves)}) {
    SUBCASE("never worse than the start, deterministic") {
      for (const Objective& f : {Objective(quadratic), Objective(rosenbrock), Objective(terraced)}) {
        const Vector start = vec2(-0.8, 1.3);
        const SearchResult a = search(f, start, {});
        const SearchResult b = search(f, start, {});
        CHECK(a.value <= f(start));
        CHECK(a.value == f(a.argmin));
        CHECK(a.argmin == b.argmin);
        CHECK(a.evals == b.evals);
      }
    }
    SUBCASE("best value is nonincreasing in the evaluation budget") {
      double previous = std::numeric_limits<double>::infinity();
      for (std::size_t budget = 3; budget <= 300; budget += 7) {
        SearchOptions opts;
        opts.max_evals = budget;
        const SearchResult r = search(rosenbrock, vec2(-1.2, 1.0), opts);
        CHECK(r.value <= previous);
        previous = r.value;
      }
    }
    SUBCASE("NaN and infinity are treated as very bad") {
      const Objective holey = [](const Vector& v) {
        if (v(0) > 0.5) return std::numeric_limits<double>::quiet_NaN();
        if (v(1) < -0.5) return std::numeric_limits<double>::infinity();
        return quadratic(v);
      };
      const SearchResult r = search(holey, vec2(0, 0), {});
      CHECK(std::isfinite(r.value));
      CHECK(r.argmin(0) <= 0.5);
      CHECK(r.value <= quadratic(vec2(0, 0)));
    }
    SUBCASE("rejects bad inputs") {
      CHECK_THROWS_AS(search(quadratic, vec2(NAN, 0), {}), InvalidArgument);
      CHECK_THROWS_AS(search([](const Vector&) { return INFINITY; }, vec2(0, 0), {}),
                      InvalidArgument);
      SearchOptions bad;
      bad.max_evals = 2;
      CHECK_THROWS_AS(search(quadratic, vec2(0, 0), bad), InvalidArgument);
      bad = SearchOptions{};
      bad.tolerance = 0.0;
      CHECK_THROWS_AS(search(quadratic, vec2(0, 0), bad), InvalidArgument);
      bad = SearchOptions{};
      bad.initial_step = -1.0;
      CHECK_THROWS_AS(search(quadratic, vec2(0, 0), bad), InvalidArgument);
    }
  }
}

TEST_CASE("random unit starts") {
  const auto a = random_unit_starts(3, 10000, 77);
  const auto b = random_unit_starts(3, 10000, 77);
  const auto c = random_unit_starts(3, 10, 78);
  REQUIRE(a.size() == 10000);
  CHECK(a == b);
  CHECK(c[0] != a[0]);
  Vector mean = Vector::Zero(3);
  for (const Vector& v : a) {
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    mean += v;
  }
  mean /= 10000.0;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
  // Prefix stability: asking for fewer starts gives the leading ones.
  const auto head = random_unit_starts(3, 5, 77);
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(head[i] == a[i]);
  CHECK_THROWS_AS(random_unit_starts(3, 0, 1), InvalidArgument);
}
