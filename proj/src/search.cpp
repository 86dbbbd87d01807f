#include "monosindex/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "monosindex/errors.hpp"

namespace monosindex {

namespace {

// Counts calls and maps NaN to +inf.
class CountingObjective {
 public:
  explicit CountingObjective(const Objective& f) : f_(f) {}

  double operator()(const Vector& x) {
    ++evals_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }
  std::size_t evals() const { return evals_; }

 private:
  const Objective& f_;
  std::size_t evals_ = 0;
};

double start_value(CountingObjective& f, const Vector& start, const char* who) {
  if (!start.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite start");
  const double v = f(start);
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string(who) + ": objective is not finite at the start");
  }
  return v;
}

}  // namespace

void SearchOptions::validate(std::size_t dim) const {
  if (max_evals < dim + 1) throw InvalidArgument("search: max_evals must be >= d + 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("search: tolerance must be positive");
  if (!(initial_step > 0.0)) throw InvalidArgument("search: initial_step must be positive");
}

SearchResult nelder_mead(const Objective& objective, const Vector& start,
                         const SearchOptions& opts) {
  const auto d = static_cast<std::size_t>(start.size());
  opts.validate(d);
  CountingObjective f(objective);

  std::vector<Vector> x(d + 1, start);
  std::vector<double> fx(d + 1);
  fx[0] = start_value(f, start, "nelder_mead");
  for (std::size_t i = 1; i <= d; ++i) {
    x[i](static_cast<Eigen::Index>(i - 1)) += opts.initial_step;
    fx[i] = f(x[i]);
  }

  std::vector<std::size_t> idx(d + 1);
  bool converged = false;
  while (true) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    {
      std::vector<Vector> xs(d + 1);
      std::vector<double> fs(d + 1);
      for (std::size_t i = 0; i <= d; ++i) {
        xs[i] = std::move(x[idx[i]]);
        fs[i] = fx[idx[i]];
      }
      x = std::move(xs);
      fx = std::move(fs);
    }

    double diameter = 0.0;
    for (std::size_t i = 1; i <= d; ++i) diameter = std::max(diameter, (x[i] - x[0]).norm());
    if (diameter < opts.tolerance) {
      converged = true;
      break;
    }
    if (f.evals() >= opts.max_evals) break;

    Vector centroid = Vector::Zero(start.size());
    for (std::size_t i = 0; i < d; ++i) centroid += x[i];
    centroid /= static_cast<double>(d);

    const Vector& worst = x[d];
    const Vector xr = centroid + (centroid - worst);
    const double fr = f(xr);

    if (fr < fx[0]) {
      const Vector xe = centroid + 2.0 * (centroid - worst);
      const double fe = f(xe);
      if (fe < fr) {
        x[d] = xe;
        fx[d] = fe;
      } else {
        x[d] = xr;
        fx[d] = fr;
      }
      continue;
    }
    if (fr < fx[d - 1]) {
      x[d] = xr;
      fx[d] = fr;
      continue;
    }
    if (fr < fx[d]) {
      const Vector xc = centroid + 0.5 * (xr - centroid);
      const double fc = f(xc);
      if (fc <= fr) {
        x[d] = xc;
        fx[d] = fc;
        continue;
      }
    } else {
      const Vector xc = centroid + 0.5 * (worst - centroid);
      const double fc = f(xc);
      if (fc < fx[d]) {
        x[d] = xc;
        fx[d] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= d; ++i) {
      x[i] = x[0] + 0.5 * (x[i] - x[0]);
      fx[i] = f(x[i]);
    }
  }

  return {x[0], fx[0], f.evals(), converged};
}

SearchResult hooke_jeeves(const Objective& objective, const Vector& start,
                          const SearchOptions& opts) {
  const auto d = static_cast<std::size_t>(start.size());
  opts.validate(d);
  CountingObjective f(objective);

  Vector base = start;
  double fbase = start_value(f, start, "hooke_jeeves");
  double step = opts.initial_step;

  // Coordinate-wise probe around `point`; returns the improved point in place.
  auto explore = [&](Vector& point, double& fpoint) {
    for (std::size_t i = 0; i < d && f.evals() < opts.max_evals; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double original = point(k);
      point(k) = original + step;
      double trial = f(point);
      if (trial < fpoint) {
        fpoint = trial;
        continue;
      }
      if (f.evals() >= opts.max_evals) {
        point(k) = original;
        break;
      }
      point(k) = original - step;
      trial = f(point);
      if (trial < fpoint) {
        fpoint = trial;
        continue;
      }
      point(k) = original;
    }
  };

  while (step >= opts.tolerance && f.evals() < opts.max_evals) {
    Vector trial = base;
    double ftrial = fbase;
    explore(trial, ftrial);
    if (!(ftrial < fbase)) {
      step *= 0.5;
      continue;
    }
    // Pattern moves while they keep paying off.
    while (ftrial < fbase && f.evals() < opts.max_evals) {
      const Vector previous = base;
      base = trial;
      fbase = ftrial;
      Vector pattern = base + (base - previous);
      double fpattern = f(pattern);
      explore(pattern, fpattern);
      if (fpattern < fbase) {
        trial = std::move(pattern);
        ftrial = fpattern;
      } else {
        break;
      }
    }
  }

  return {base, fbase, f.evals(), step < opts.tolerance};
}

std::vector<Vector> random_unit_starts(std::size_t d, std::size_t count,
                                       std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("random_unit_starts: count must be >= 1");
  if (d < 1) throw InvalidArgument("random_unit_starts: d must be >= 1");
  Rng rng = make_stream(seed, Stream::starts);
  std::normal_distribution<double> normal;
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    out.push_back(v / norm);
  }
  return out;
}

}  // namespace monosindex
