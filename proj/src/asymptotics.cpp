#include "monosindex/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "monosindex/errors.hpp"

namespace monosindex {

namespace {

constexpr std::size_t kChunk = 1 << 16;

struct Draws {
  Matrix xs;  // mc x d
  Vector z;   // alpha0' x
  Vector eps; // noise_sd * N(0,1)
};

// Chunk c of the draws comes from substream (seed, c), so the draws do not
// depend on how the work is split.
Draws draw(const ModelSpec& spec, std::size_t mc, std::uint64_t seed) {
  if (mc < 2) throw InvalidArgument("asymptotics: need at least 2 Monte Carlo samples");
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> xs(
      static_cast<Eigen::Index>(mc), d);
  Vector eps(static_cast<Eigen::Index>(mc));
  const std::uint64_t base = mix_seed(seed, static_cast<std::uint64_t>(Stream::monte_carlo));
  for (std::size_t start = 0, chunk = 0; start < mc; start += kChunk, ++chunk) {
    Rng rng = make_stream(base, chunk);
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(mc, start + kChunk);
    for (std::size_t i = start; i < end; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      spec.covariates.draw(rng, std::span<double>(xs.row(row).data(),
                                                  static_cast<std::size_t>(d)));
      eps(row) = spec.noise_sd * normal(rng);
    }
  }
  Draws out;
  out.xs = xs;
  out.z = out.xs * spec.alpha0;
  out.eps = std::move(eps);
  return out;
}

// Per-draw conditional mean and covariance of X given Z, binned on quantiles of Z.
struct Conditional {
  std::vector<std::size_t> bin_of;
  std::vector<Vector> mean;
  std::vector<Matrix> cov;

  const Vector& mean_at(std::size_t i) const { return mean[bin_of[i]]; }
  const Matrix& cov_at(std::size_t i) const { return cov[bin_of[i]]; }
};

Conditional conditional_moments(const ModelSpec& spec, const Draws& dr) {
  Conditional c;
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto mc = static_cast<std::size_t>(dr.z.size());
  std::vector<std::size_t> idx(mc);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return dr.z(static_cast<Eigen::Index>(a)) < dr.z(static_cast<Eigen::Index>(b));
  });
  const std::size_t bins = std::min(kConditionalBins, mc / 2);
  c.bin_of.resize(mc);
  c.mean.assign(bins, Vector::Zero(d));
  c.cov.assign(bins, Matrix::Zero(d, d));
  std::vector<double> count(bins, 0.0);
  for (std::size_t r = 0; r < mc; ++r) {
    const std::size_t b = r * bins / mc;
    c.bin_of[idx[r]] = b;
    c.mean[b] += dr.xs.row(static_cast<Eigen::Index>(idx[r])).transpose();
    count[b] += 1.0;
  }
  for (std::size_t b = 0; b < bins; ++b) c.mean[b] /= count[b];
  for (std::size_t i = 0; i < mc; ++i) {
    const std::size_t b = c.bin_of[i];
    const Vector r = dr.xs.row(static_cast<Eigen::Index>(i)).transpose() - c.mean[b];
    c.cov[b] += r * r.transpose();
  }
  for (std::size_t b = 0; b < bins; ++b) c.cov[b] /= std::max(count[b] - 1.0, 1.0);
  return c;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

void require_rank(const Matrix& a, std::size_t d, const char* who) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(a));
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (std::abs(eig.eigenvalues()(i)) > 1e-6 * top) ++rank;
  }
  if (top == 0.0 || rank + 1 < d) {
    throw NumericalFailure(std::string(who) + ": information matrix has rank " +
                           std::to_string(top == 0.0 ? 0 : rank) + " < d - 1");
  }
}

// Standard normal covariates: X = alpha0 Z + X_perp with X_perp ~ N(0, I - P)
// independent of Z, and the noise independent of X. Conditioning on Z
// integrates X_perp and the noise out exactly, leaving Monte Carlo averages
// over Z alone.
Vector draw_index(std::size_t mc, std::uint64_t seed) {
  if (mc < 2) throw InvalidArgument("asymptotics: need at least 2 Monte Carlo samples");
  Vector z(static_cast<Eigen::Index>(mc));
  const std::uint64_t base = mix_seed(seed, static_cast<std::uint64_t>(Stream::monte_carlo));
  for (std::size_t start = 0, chunk = 0; start < mc; start += kChunk, ++chunk) {
    Rng rng = make_stream(base, chunk);
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(mc, start + kChunk);
    for (std::size_t i = start; i < end; ++i) z(static_cast<Eigen::Index>(i)) = normal(rng);
  }
  return z;
}

Matrix perp_projector(const Vector& alpha0) {
  return Matrix::Identity(alpha0.size(), alpha0.size()) - alpha0 * alpha0.transpose();
}

// Shared body of the SSE and ESE targets. The information matrix weights the
// conditional covariance by psi0'^power, the noise matrix by psi0'^(2 power - 2).
AsymptoticCovariance score_target(const ModelSpec& spec, std::size_t mc,
                                  std::uint64_t seed, int power, const char* who) {
  spec.validate();
  if (!spec.link.derivative) {
    throw InvalidArgument(std::string(who) + ": link needs a derivative");
  }
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto bread_weight = [&](double z) { return std::pow(spec.link.derivative(z), power); };
  const auto meat_weight = [&](double z) {
    return std::pow(spec.link.derivative(z), 2 * power - 2);
  };

  Matrix a = Matrix::Zero(d, d);
  Matrix sigma = Matrix::Zero(d, d);
  if (spec.covariates.is_standard_normal) {
    const Vector z = draw_index(mc, seed);
    double bread = 0.0;
    double meat = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      bread += bread_weight(z(i));
      meat += meat_weight(z(i));
    }
    const Matrix perp = perp_projector(spec.alpha0);
    a = (bread / static_cast<double>(mc)) * perp;
    sigma = (spec.noise_sd * spec.noise_sd * meat / static_cast<double>(mc)) * perp;
  } else {
    const Draws dr = draw(spec, mc, seed);
    const Conditional cond = conditional_moments(spec, dr);
    // alpha0' X = Z, so Cov(X | Z) vanishes along alpha0. The binned estimate
    // does not, because Z still varies inside a bin; project that part out.
    const Matrix perp = perp_projector(spec.alpha0);
    for (std::size_t i = 0; i < mc; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double z = dr.z(row);
      a += bread_weight(z) * cond.cov_at(i);
      const Vector r = perp * (dr.xs.row(row).transpose() - cond.mean_at(i));
      sigma += (dr.eps(row) * dr.eps(row) * meat_weight(z)) * (r * r.transpose());
    }
    a = perp * a * perp / static_cast<double>(mc);
    sigma /= static_cast<double>(mc);
  }
  a = symmetrize(a);
  sigma = symmetrize(sigma);

  require_rank(a, spec.dim(), who);
  const Matrix pinv = moore_penrose_psd(a);
  return {symmetrize(pinv * sigma * pinv), a, sigma, std::nullopt};
}

double checked_c(double cov_link_z, double var_z) {
  const double c = cov_link_z / var_z;
  if (!(c > 0.0)) {
    throw NumericalFailure("asymptotic_cov_linear: c = " + std::to_string(c) +
                           " is not positive; the link must increase on the data");
  }
  return c;
}

AsymptoticCovariance linear_normal(const ModelSpec& spec, std::size_t mc,
                                   std::uint64_t seed, LinearVariant variant) {
  const Vector z = draw_index(mc, seed);
  const auto n = static_cast<double>(mc);
  Vector link(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) link(i) = spec.link.value(z(i));
  const double zbar = z.mean();
  const double lbar = link.mean();
  const double var_z = (z.array() - zbar).square().sum() / (n - 1.0);
  const double cov_lz = ((link.array() - lbar) * (z.array() - zbar)).sum() / (n - 1.0);
  // Stein's identity Cov(psi0(Z), Z) = E psi0'(Z) for normal Z has far lower
  // variance than the moment ratio.
  double c = 0.0;
  if (spec.link.derivative) {
    double slope = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) slope += spec.link.derivative(z(i));
    c = checked_c(slope / n, 1.0);
  } else {
    c = checked_c(cov_lz, var_z);
  }
  const double noise_var = spec.noise_sd * spec.noise_sd;

  // E[h(Z) X X' | Z] = h(Z) (Z^2 P + I - P), so every second moment splits
  // into a part along alpha0 and a part orthogonal to it.
  double along = 0.0;
  double across = 0.0;
  if (variant == LinearVariant::paper_formula) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double y2 = link(i) * link(i) + noise_var;
      along += y2 * z(i) * z(i);
      across += y2;
    }
    const double eyz = (link.array() * z.array()).mean();
    along = along / n - eyz * eyz;
    across /= n;
  } else {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double g = link(i) - lbar - c * z(i);
      const double r2 = g * g + noise_var;
      along += r2 * z(i) * z(i);
      across += r2;
    }
    along /= n;
    across /= n;
  }

  const auto d = static_cast<Eigen::Index>(spec.dim());
  const Matrix p = spec.alpha0 * spec.alpha0.transpose();
  const Matrix perp = perp_projector(spec.alpha0);
  const Matrix meat = along * p + across * perp;
  return {symmetrize(perp * meat * perp / (c * c)), Matrix::Identity(d, d), meat, c};
}

}  // namespace

Matrix moore_penrose_psd(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("moore_penrose_psd: matrix must be square");
  if (!m.allFinite()) throw InvalidArgument("moore_penrose_psd: non-finite entry");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("moore_penrose_psd: matrix is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(m));
  const Vector& lambda = eig.eigenvalues();
  const double top = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  Vector inv = Vector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) > tol * top) inv(i) = 1.0 / lambda(i);
  }
  const Matrix& v = eig.eigenvectors();
  return symmetrize(v * inv.asDiagonal() * v.transpose());
}

ModelMoments standard_normal_moments(const ModelSpec& spec) {
  spec.validate();
  const Vector alpha0 = spec.alpha0;
  const auto d = alpha0.size();
  const Matrix cov = Matrix::Identity(d, d) - alpha0 * alpha0.transpose();
  ModelMoments m;
  m.conditional_mean = [alpha0](double u) { return Vector(alpha0 * u); };
  m.conditional_cov = [cov](double) { return cov; };
  m.link_derivative = spec.link.derivative;
  return m;
}

AsymptoticCovariance asymptotic_cov_sse(const ModelSpec& spec, std::size_t mc_samples,
                                        std::uint64_t seed) {
  return score_target(spec, mc_samples, seed, 1, "asymptotic_cov_sse");
}

AsymptoticCovariance asymptotic_cov_ese(const ModelSpec& spec, std::size_t mc_samples,
                                        std::uint64_t seed) {
  return score_target(spec, mc_samples, seed, 2, "asymptotic_cov_ese");
}

std::string to_string(LinearVariant v) {
  return v == LinearVariant::paper_formula ? "paper_formula" : "sandwich";
}

LinearVariant linear_variant_from_string(const std::string& name) {
  if (name == "paper_formula") return LinearVariant::paper_formula;
  if (name == "sandwich") return LinearVariant::sandwich;
  throw InvalidArgument("unknown linear variant '" + name + "'");
}

AsymptoticCovariance asymptotic_cov_linear(const ModelSpec& spec, std::size_t mc_samples,
                                           std::uint64_t seed, LinearVariant variant) {
  spec.validate();
  if (spec.covariates.is_standard_normal) return linear_normal(spec, mc_samples, seed, variant);
  const Draws dr = draw(spec, mc_samples, seed);
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto n = static_cast<double>(mc_samples);

  Vector y(dr.z.size());
  Vector link_values(dr.z.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    link_values(i) = spec.link.value(dr.z(i));
    y(i) = link_values(i) + dr.eps(i);
  }

  const Vector mu = dr.xs.colwise().mean().transpose();
  const Matrix centered = dr.xs.rowwise() - mu.transpose();
  const Matrix sigma_x = symmetrize(centered.transpose() * centered / (n - 1.0));

  const double zbar = dr.z.mean();
  const double lbar = link_values.mean();
  const double cov_link_z =
      ((link_values.array() - lbar) * (dr.z.array() - zbar)).sum() / (n - 1.0);
  const double c = checked_c(cov_link_z, spec.alpha0.dot(sigma_x * spec.alpha0));

  Matrix meat = Matrix::Zero(d, d);
  if (variant == LinearVariant::paper_formula) {
    const Matrix weighted = dr.xs.array().colwise() * y.array();
    const Vector eyx = weighted.colwise().mean().transpose();
    meat = weighted.transpose() * weighted / n - eyx * eyx.transpose();
  } else {
    const double ybar = y.mean();
    const Vector resid =
        (y.array() - ybar).matrix() - c * (centered * spec.alpha0);
    const Matrix weighted = centered.array().colwise() * resid.array();
    meat = weighted.transpose() * weighted / n;
  }
  meat = symmetrize(meat);

  const Matrix sigma_inv = sigma_x.ldlt().solve(Matrix::Identity(d, d));
  const Matrix proj = Matrix::Identity(d, d) - spec.alpha0 * spec.alpha0.transpose();
  const Matrix cov = proj * sigma_inv * meat * sigma_inv * proj / (c * c);
  return {symmetrize(cov), sigma_x, meat, c};
}

}  // namespace monosindex
