#include "monosindex/isotonic.hpp"

#include <algorithm>
#include <cmath>

#include "monosindex/errors.hpp"

namespace monosindex {

std::vector<double> pava(std::span<const double> values,
                         std::span<const double> weights) {
  const std::size_t n = values.size();
  if (weights.size() != n) throw InvalidArgument("pava: length mismatch");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("pava: weights must be positive and finite");
    }
  }

  // Stack of blocks: weighted mean, total weight, one-past-last index.
  std::vector<double> mean;
  std::vector<double> weight;
  std::vector<std::size_t> end;
  mean.reserve(n);
  weight.reserve(n);
  end.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    double m = values[i];
    double w = weights[i];
    while (!mean.empty() && mean.back() >= m) {
      const double wsum = weight.back() + w;
      m = (mean.back() * weight.back() + m * w) / wsum;
      w = wsum;
      mean.pop_back();
      weight.pop_back();
      end.pop_back();
    }
    mean.push_back(m);
    weight.push_back(w);
    end.push_back(i + 1);
  }

  std::vector<double> out(n);
  std::size_t start = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(start),
              out.begin() + static_cast<std::ptrdiff_t>(end[b]), mean[b]);
    start = end[b];
  }
  return out;
}

std::vector<double> pava(std::span<const double> values) {
  const std::vector<double> ones(values.size(), 1.0);
  return pava(values, ones);
}

StepFunction::StepFunction(std::vector<double> taus, std::vector<double> levels)
    : taus_(std::move(taus)), levels_(std::move(levels)) {
  if (levels_.size() != taus_.size() + 1) {
    throw InvalidArgument("StepFunction: need one more level than jumps");
  }
  for (std::size_t j = 1; j < taus_.size(); ++j) {
    if (!(taus_[j] > taus_[j - 1])) {
      throw InvalidArgument("StepFunction: jump locations must increase strictly");
    }
  }
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    if (levels_[j] < levels_[j - 1]) {
      throw InvalidArgument("StepFunction: levels must be nondecreasing");
    }
  }
}

double StepFunction::operator()(double u) const {
  const auto it = std::upper_bound(taus_.begin(), taus_.end(), u);
  return levels_[static_cast<std::size_t>(it - taus_.begin())];
}

double StepFunction::total_variation() const {
  return levels_.empty() ? 0.0 : levels_.back() - levels_.front();
}

MonotoneFit fit_monotone_projection(const IndexProjection& projection) {
  const auto groups = merge_ties(projection.ts, projection.ys_ordered, 0.0);
  const std::vector<double> pooled = pava(groups.ys, groups.weights);

  std::vector<double> taus;
  std::vector<double> levels{pooled.front()};
  for (std::size_t g = 1; g < pooled.size(); ++g) {
    if (pooled[g] > pooled[g - 1]) {
      taus.push_back(groups.ts[g]);
      levels.push_back(pooled[g]);
    }
  }

  MonotoneFit fit{StepFunction(std::move(taus), std::move(levels)), {}};
  fit.fitted.resize(projection.ts.size());
  for (std::size_t k = 0; k < fit.fitted.size(); ++k) {
    fit.fitted[k] = pooled[groups.group_of[k]];
  }
  return fit;
}

StepFunction fit_monotone_ls(const Sample& sample, const Vector& alpha) {
  return fit_monotone_projection(project_sample(sample, alpha)).link;
}

}  // namespace monosindex
